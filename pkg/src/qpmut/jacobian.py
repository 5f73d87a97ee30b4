"""Jacobian algebras via truncated noncommutative Groebner completion.

The rewriting order is degree-first, then left-to-right lexicographic in
arrow input order.  Completion processes all overlap words of degree up to
the bound; a rule whose head exceeds the bound can never apply below it, so
the system is confluent on the degrees we certify.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .fdalg import BasisElem, FDAlgebra
from .pathalg import Element, Path, Potential, Quiver, cyclic_derivative
from .qpcore import QP, DEFAULT_BOUND


class CompletionError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    head: Path
    tail: Tuple[Tuple[Path, object], ...]   # strictly smaller order than head


class RewriteSystem:
    def __init__(self, quiver: Quiver, field, rules: Sequence[Rule], bound: int):
        self.quiver = quiver
        self.field = field
        self.rules = tuple(rules)
        self.bound = bound

    def max_head_degree(self) -> int:
        return max((r.head.length for r in self.rules), default=0)

    def _find(self, word: Tuple[str, ...]):
        for pos in range(len(word)):
            for rule in self.rules:
                h = rule.head.arrows
                if word[pos:pos + len(h)] == h:
                    return rule, pos
        return None

    def reducible(self, p: Path) -> bool:
        return self._find(p.arrows) is not None

    def suffix_reducible(self, p: Path) -> bool:
        """True iff some head ends exactly at the last letter of p."""
        w = p.arrows
        for rule in self.rules:
            h = rule.head.arrows
            if len(h) <= len(w) and w[len(w) - len(h):] == h:
                return True
        return False

    def normal_form_terms(self, terms: Dict[Path, object]) -> Dict[Path, object]:
        f = self.field
        Q = self.quiver
        key = Q.order_key
        work = dict(terms)
        out: Dict[Path, object] = {}
        while work:
            p = max(work, key=key)
            c = work.pop(p)
            if f.is_zero(c):
                continue
            m = self._find(p.arrows)
            if m is None:
                s = f.add(out.get(p, f.zero), c)
                if f.is_zero(s):
                    out.pop(p, None)
                else:
                    out[p] = s
                continue
            rule, pos = m
            h = rule.head.arrows
            pre = p.arrows[:pos]
            post = p.arrows[pos + len(h):]
            for t, tc in rule.tail:
                mid = Q.compose(Q.path(pre, source=p.source), t)
                q = Q.compose(mid, Q.path(post, source=t.target))
                s = f.add(work.get(q, f.zero), f.mul(c, tc))
                if f.is_zero(s):
                    work.pop(q, None)
                else:
                    work[q] = s
        return out

    def normal_form(self, x: Element) -> Element:
        return Element(self.quiver, self.field,
                       self.normal_form_terms(dict(x.terms)))


def jacobian_relations(qp: QP) -> List[Element]:
    """Cyclic derivatives of the potential, zeros omitted."""
    out = []
    for a in qp.quiver.arrows:
        d = cyclic_derivative(a.name, qp.potential)
        if not d.is_zero():
            out.append(d)
    return out


def _to_rule(quiver: Quiver, field, terms: Dict[Path, object]) -> Rule:
    key = quiver.order_key
    head = max(terms, key=key)
    c = terms[head]
    tail = tuple(sorted(
        ((p, field.neg(field.div(v, c))) for p, v in terms.items() if p != head),
        key=lambda it: key(it[0]),
    ))
    return Rule(head, tail)


def _rule_terms(field, rule: Rule) -> Dict[Path, object]:
    terms = {rule.head: field.one}
    for p, c in rule.tail:
        terms[p] = field.neg(c)
    return terms


def _contains(word: Tuple[str, ...], sub: Tuple[str, ...]) -> bool:
    n, m = len(word), len(sub)
    return any(word[i:i + m] == sub for i in range(n - m + 1))


def complete_rewrite(rels: Sequence[Element], bound: int,
                     quiver: Optional[Quiver] = None, field=None,
                     max_rules: int = 10000) -> RewriteSystem:
    """Interreduced system, confluent on degrees up to the bound."""
    if rels:
        quiver = rels[0].quiver
        field = rels[0].field
    if quiver is None or field is None:
        raise CompletionError("empty relation list needs an explicit quiver/field")
    for r in rels:
        if not r.in_radical():
            raise CompletionError("relations must lie in the radical")
    Q, f = quiver, field
    rs = RewriteSystem(Q, f, [], bound)
    agenda = deque(dict(r.terms) for r in rels if not r.is_zero())
    spairs = deque()

    def queue_overlaps(r1: Rule, r2: Rule):
        w1, w2 = r1.head.arrows, r2.head.arrows
        for s in range(1, min(len(w1), len(w2))):
            if w1[len(w1) - s:] == w2[:s]:
                if len(w1) + len(w2) - s <= bound:
                    spairs.append((r1, r2, s))

    processed = 0
    while agenda or spairs:
        processed += 1
        if processed > max_rules:
            raise CompletionError(f"completion exceeded {max_rules} steps")
        if agenda:
            terms = agenda.popleft()
        else:
            r1, r2, s = spairs.popleft()
            w1, w2 = r1.head.arrows, r2.head.arrows
            suffix = Q.path(w2[s:], source=r1.head.target) if len(w2) > s else Q.trivial(r1.head.target)
            prefix = Q.path(w1[:len(w1) - s], source=r1.head.source) if len(w1) > s else Q.trivial(r1.head.source)
            terms = {}
            for t, c in r1.tail:
                q = Q.compose(t, suffix)
                terms[q] = f.add(terms.get(q, f.zero), c)
            for t, c in r2.tail:
                q = Q.compose(prefix, t)
                terms[q] = f.sub(terms.get(q, f.zero), c)
            terms = {p: c for p, c in terms.items() if not f.is_zero(c)}
        h = rs.normal_form_terms(terms)
        if not h:
            continue
        rule = _to_rule(Q, f, h)
        if rule.head.length > bound:
            # heads above the bound never rewrite bounded monomials
            continue
        keep = []
        for r in rs.rules:
            if _contains(r.head.arrows, rule.head.arrows):
                agenda.append(_rule_terms(f, r))
            else:
                keep.append(r)
        keep.append(rule)
        rs = RewriteSystem(Q, f, keep, bound)
        for r in rs.rules:
            queue_overlaps(rule, r)
            if r is not rule:
                queue_overlaps(r, rule)

    # final interreduction: re-normalise every tail against the full system
    changed = True
    while changed:
        changed = False
        final: List[Rule] = []
        for i, r in enumerate(rs.rules):
            others = RewriteSystem(Q, f, rs.rules[:i] + rs.rules[i + 1:], bound)
            terms = others.normal_form_terms(_rule_terms(f, r))
            if not terms:
                changed = True
                continue
            nr = _to_rule(Q, f, terms)
            if nr != r:
                changed = True
            final.append(nr)
        rs = RewriteSystem(Q, f, final, bound)
    ordered = sorted(rs.rules, key=lambda r: Q.order_key(r.head))
    return RewriteSystem(Q, f, ordered, bound)


@dataclass
class UnboundedAtD:
    """Inconclusive verdict: no certifying empty layer below the bound."""

    bound: int
    layer_sizes: List[int]


def fd_algebra(qp: QP, bound: int = DEFAULT_BOUND):
    """Normal-form basis of the Jacobian algebra, or UnboundedAtD.

    Finite-dimensionality is certified by an empty degree layer with enough
    headroom below the bound; otherwise the verdict is inconclusive.
    """
    Q, f = qp.quiver, qp.field
    rels = jacobian_relations(qp)
    rs = complete_rewrite(rels, bound, quiver=Q, field=f)
    maxhead = rs.max_head_degree()

    layers: List[List[Path]] = [[Q.trivial(v) for v in Q.vertices]]
    sizes = [len(layers[0])]
    d = 0
    while True:
        d += 1
        nxt: List[Path] = []
        for p in layers[-1]:
            for a in Q.arrows_from(p.target):
                q = Q.compose(p, Q.path([a.name]))
                if not rs.suffix_reducible(q):
                    nxt.append(q)
        if not nxt:
            if d <= bound - maxhead:
                break
            return UnboundedAtD(bound, sizes)
        if d >= bound:
            return UnboundedAtD(bound, sizes + [len(nxt)])
        layers.append(nxt)
        sizes.append(len(nxt))

    basis_paths: List[Path] = [p for layer in layers for p in layer]
    index = {p: i for i, p in enumerate(basis_paths)}
    basis = [BasisElem(i, p.source, p.target, p) for i, p in enumerate(basis_paths)]
    idem = {v: index[Q.trivial(v)] for v in Q.vertices}
    mult: Dict[Tuple[int, int], Dict[int, object]] = {}
    for i, p in enumerate(basis_paths):
        for j, q in enumerate(basis_paths):
            pq = Q.compose(p, q)
            if pq is None:
                continue
            nf = rs.normal_form_terms({pq: f.one})
            if not nf:
                continue
            mult[(i, j)] = {index[t]: c for t, c in nf.items()}
    alg = FDAlgebra(f, Q.vertices, basis, idem, mult,
                    provenance=f"jacobian(bound={bound})")
    alg.rewrite_system = rs
    alg.quiver = Q
    alg.path_index = index
    return alg
