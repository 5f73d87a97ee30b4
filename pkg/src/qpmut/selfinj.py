"""Modules as exact matrix representations; Nakayama permutations.

Projectives are the left ideals generated by vertex idempotents: with the
"first f, then g" composition convention the module P_k is spanned by the
basis elements ending at k, and algebra elements act by left multiplication.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .fdalg import AlgebraError, FDAlgebra
from .jacobian import UnboundedAtD, fd_algebra
from .linalg import Matrix
from .qpcore import QP, DEFAULT_BOUND


class ModuleError(ValueError):
    pass


class Module:
    """Left module given by one action matrix per algebra basis element."""

    def __init__(self, algebra: FDAlgebra, dim: int, action: List[Matrix], name: str = ""):
        self.algebra = algebra
        self.dim = dim
        self.action = action
        self.name = name

    def vertex_weights(self) -> Tuple[int, ...]:
        """dim e_v M per vertex, in vertex order (ranks of the projections)."""
        out = []
        for v in self.algebra.vertices:
            out.append(self.action[self.algebra.idem[v]].rank())
        return tuple(out)

    def check_representation(self) -> None:
        """Action matrices must realise the structure constants exactly."""
        A = self.algebra
        f = A.field
        for i in range(A.dim):
            for j in range(A.dim):
                left = self.action[i].mul(self.action[j])
                want = Matrix.zeros(f, self.dim, self.dim)
                for k, c in A.product_basis(i, j).items():
                    want = want.add(self.action[k].scaled(c))
                if left != want:
                    raise ModuleError(
                        f"action violates structure constants at pair ({i},{j})"
                    )
        ident = Matrix.zeros(f, self.dim, self.dim)
        for v in A.vertices:
            ident = ident.add(self.action[A.idem[v]])
        if ident != Matrix.identity(f, self.dim):
            raise ModuleError("idempotent actions do not sum to the identity")

    def __repr__(self):
        return f"Module({self.name or 'unnamed'}, dim {self.dim})"


def projective(A: FDAlgebra, k) -> Module:
    """The left module A e_k, on the basis elements with target k."""
    f = A.field
    coords = [b.index for b in A.basis if b.target == k]
    pos = {b: r for r, b in enumerate(coords)}
    action = []
    for i in range(A.dim):
        m = Matrix.zeros(f, len(coords), len(coords))
        for c, j in enumerate(coords):
            for t, coeff in A.product_basis(i, j).items():
                m[pos[t], c] = coeff
        action.append(m)
    return Module(A, len(coords), action, name=f"P({k})")


def injective_dual(A: FDAlgebra, k) -> Module:
    """The K-linear dual of e_k A with its standard left action."""
    f = A.field
    coords = [b.index for b in A.basis if b.source == k]
    pos = {b: r for r, b in enumerate(coords)}
    action = []
    for i in range(A.dim):
        m = Matrix.zeros(f, len(coords), len(coords))
        for col, p in enumerate(coords):
            # (b_i . p^*) = sum_q coeff_of_p_in(q b_i) q^*
            for row, q in enumerate(coords):
                coeff = A.product_basis(q, i).get(p)
                if coeff is not None:
                    m[row, col] = coeff
        action.append(m)
    return Module(A, len(coords), action, name=f"D(e_{k}A)")


def hom_space(M: Module, N: Module) -> List[Matrix]:
    """Basis of the space of module homomorphisms M -> N."""
    if M.algebra is not N.algebra and M.algebra != N.algebra:
        raise ModuleError("modules over different algebras")
    A = M.algebra
    f = A.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    for i in range(A.dim):
        AM, AN = M.action[i], N.action[i]
        # constraint AN . F - F . AM = 0, unknowns F (n x m) row-major
        for r in range(n):
            for c in range(m):
                row = [f.zero] * (n * m)
                for t in range(n):
                    row[t * m + c] = f.add(row[t * m + c], AN[r, t])
                for t in range(m):
                    row[r * m + t] = f.sub(row[r * m + t], AM[t, c])
                rows.append(row)
    kernel = Matrix(f, rows, ncols=n * m).nullspace()
    return [Matrix(f, [vec[r * m:(r + 1) * m] for r in range(n)], ncols=m)
            for vec in kernel]


@dataclass
class IsoResult:
    witness: Optional[Matrix]
    note: str

    def __bool__(self):
        return self.witness is not None


def module_isomorphic(M: Module, N: Module, seed: int = 0, trials: int = 32) -> IsoResult:
    """Search the Hom space for an invertible intertwiner.

    Deterministic: basis elements and their partial sums first, then seeded
    random combinations, then a determinant check along a generic line which
    certifies a "no" on that line.
    """
    if M.dim != N.dim:
        return IsoResult(None, "dimension mismatch")
    if M.vertex_weights() != N.vertex_weights():
        return IsoResult(None, "vertex weight mismatch")
    if M.dim == 0:
        return IsoResult(Matrix.zeros(M.algebra.field, 0, 0), "zero module")
    basis = hom_space(M, N)
    if not basis:
        return IsoResult(None, "hom space is zero")
    f = M.algebra.field
    h = len(basis)

    def is_witness(mat: Matrix) -> bool:
        return mat.is_invertible()

    for mat in basis:
        if is_witness(mat):
            return IsoResult(mat, "basis element invertible")
    running = basis[0]
    for mat in basis[1:]:
        running = running.add(mat)
        if is_witness(running):
            return IsoResult(running, "partial sum invertible")

    if getattr(f, "characteristic", 0) and h <= 3 and f.characteristic ** h <= 4096:
        # exhaustive over small GF(p) coordinate boxes
        from itertools import product as iproduct
        for coords in iproduct(range(f.characteristic), repeat=h):
            if not any(coords):
                continue
            mat = Matrix.zeros(f, M.dim, M.dim)
            for c, b in zip(coords, basis):
                if c:
                    mat = mat.add(b.scaled(f.coerce(c)))
            if is_witness(mat):
                return IsoResult(mat, "exhaustive search")
        return IsoResult(None, "certified: exhaustive over GF(p) coordinates")

    rng = random.Random(seed)
    for _ in range(trials):
        mat = Matrix.zeros(f, M.dim, M.dim)
        for b in basis:
            mat = mat.add(b.scaled(f.coerce(rng.randint(-4, 4))))
        if is_witness(mat):
            return IsoResult(mat, "seeded random combination")

    # determinant along a generic line F0 + t F1, evaluated at dim+1 points
    f0 = Matrix.zeros(f, M.dim, M.dim)
    f1 = Matrix.zeros(f, M.dim, M.dim)
    for i, b in enumerate(basis):
        f0 = f0.add(b.scaled(f.coerce(rng.randint(1, 7))))
        f1 = f1.add(b.scaled(f.coerce(rng.randint(1, 7))))
    for t in range(M.dim + 1):
        mat = f0.add(f1.scaled(f.coerce(t)))
        if is_witness(mat):
            return IsoResult(mat, "line sample invertible")
    return IsoResult(None, "certified: determinant vanishes on a generic line")


@dataclass
class NakayamaPermutation:
    mapping: Dict[object, object]
    witnesses: Dict[object, Matrix]

    def cycles(self, vertex_order: Optional[List] = None) -> List[Tuple]:
        order = vertex_order or sorted(self.mapping, key=repr)
        pos = {v: i for i, v in enumerate(order)}
        seen = set()
        out = []
        for v in order:
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = self.mapping[v]
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = self.mapping[w]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self, vertex_order: Optional[List] = None) -> str:
        return "".join(
            "(" + " ".join(str(x) for x in cyc) + ")"
            for cyc in self.cycles(vertex_order)
        )

    def orbits(self, vertex_order: Optional[List] = None) -> List[Tuple]:
        return [tuple(sorted(c, key=lambda v: (vertex_order or list(self.mapping)).index(v)))
                for c in self.cycles(vertex_order)]


@dataclass
class NotSelfinjective:
    vertex: object
    note: str

    def __bool__(self):
        return False


def nakayama_permutation(A: FDAlgebra, seed: int = 0):
    """Match each dual D(e_k A) with the unique projective A e_j."""
    projectives = {v: projective(A, v) for v in A.vertices}
    weights = {v: projectives[v].vertex_weights() for v in A.vertices}
    mapping: Dict[object, object] = {}
    witnesses: Dict[object, Matrix] = {}
    for k in A.vertices:
        dual = injective_dual(A, k)
        dw = dual.vertex_weights()
        found = None
        for j in A.vertices:
            if projectives[j].dim != dual.dim or weights[j] != dw:
                continue
            res = module_isomorphic(projectives[j], dual, seed=seed)
            if res:
                found = (j, res.witness)
                break
        if found is None:
            return NotSelfinjective(k, f"no projective matches D(e_{k}A)")
        mapping[k] = found[0]
        witnesses[k] = found[1]
    if sorted(map(repr, mapping.values())) != sorted(map(repr, mapping.keys())):
        raise AlgebraError("Nakayama matching is not a bijection")
    return NakayamaPermutation(mapping, witnesses)


@dataclass
class SelfinjectiveVerdict:
    selfinjective: bool
    reason: str
    dim: Optional[int] = None
    nakayama: Optional[NakayamaPermutation] = None
    algebra: Optional[FDAlgebra] = None

    def __bool__(self):
        return self.selfinjective


def is_selfinjective(qp: QP, bound: int = DEFAULT_BOUND, seed: int = 0) -> SelfinjectiveVerdict:
    A = fd_algebra(qp, bound)
    if isinstance(A, UnboundedAtD):
        return SelfinjectiveVerdict(False, f"finite-dimensionality not certified at bound {bound}")
    sigma = nakayama_permutation(A, seed=seed)
    if isinstance(sigma, NotSelfinjective):
        return SelfinjectiveVerdict(False, sigma.note, dim=A.dim, algebra=A)
    return SelfinjectiveVerdict(True, "finite dimensional with Nakayama permutation",
                                dim=A.dim, nakayama=sigma, algebra=A)


def sigma_orbits(A: FDAlgebra, seed: int = 0) -> List[Tuple]:
    sigma = nakayama_permutation(A, seed=seed)
    if isinstance(sigma, NotSelfinjective):
        raise AlgebraError("algebra is not selfinjective; no sigma orbits")
    return [tuple(sorted(c, key=lambda v: A.vertices.index(v)))
            for c in sigma.cycles(list(A.vertices))]
