/** Branching mutation-history tree; undo walks to the parent, selecting any
 * node and mutating from it starts a new branch. */

export interface TreeNode {
  id: string;
  parentId: string | null;
  vertices: string[] | null;   // mutation that produced this node
  children: string[];
}

export class HistoryTree {
  private nodes = new Map<string, TreeNode>();
  private currentId: string | null = null;
  private rootId: string | null = null;

  get current(): string | null {
    return this.currentId;
  }

  get root(): string | null {
    return this.rootId;
  }

  node(id: string): TreeNode {
    const n = this.nodes.get(id);
    if (!n) throw new Error(`unknown history node ${id}`);
    return n;
  }

  has(id: string): boolean {
    return this.nodes.has(id);
  }

  setRoot(id: string): void {
    this.nodes.clear();
    this.nodes.set(id, { id, parentId: null, vertices: null, children: [] });
    this.rootId = id;
    this.currentId = id;
  }

  addChild(parentId: string, id: string, vertices: string[]): void {
    const parent = this.node(parentId);
    if (this.nodes.has(id)) throw new Error(`duplicate history node ${id}`);
    this.nodes.set(id, { id, parentId, vertices, children: [] });
    parent.children.push(id);
    this.currentId = id;
  }

  /** Move to the parent of the current node; returns the new current id. */
  undo(): string | null {
    if (this.currentId === null) return null;
    const parent = this.node(this.currentId).parentId;
    if (parent === null) return null;
    this.currentId = parent;
    return parent;
  }

  canUndo(): boolean {
    return this.currentId !== null && this.node(this.currentId).parentId !== null;
  }

  /** Jump to any existing node (branch exploration). */
  select(id: string): void {
    this.node(id);
    this.currentId = id;
  }

  /** Path from the root to the given (default current) node. */
  pathTo(id?: string): TreeNode[] {
    let cur = id ?? this.currentId;
    const out: TreeNode[] = [];
    while (cur !== null) {
      const n = this.node(cur);
      out.push(n);
      cur = n.parentId;
    }
    return out.reverse();
  }

  /** Depth-first listing for rendering the tree. */
  walk(): { node: TreeNode; depth: number }[] {
    const out: { node: TreeNode; depth: number }[] = [];
    const visit = (id: string, depth: number) => {
      const n = this.node(id);
      out.push({ node: n, depth });
      for (const c of n.children) visit(c, depth + 1);
    };
    if (this.rootId !== null) visit(this.rootId, 0);
    return out;
  }
}
