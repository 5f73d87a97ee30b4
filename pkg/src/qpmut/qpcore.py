"""Quivers with potential: mutability, pre-mutation, reduction, mutation.

The mutation convention: at a vertex k, incoming arrows a are replaced by
a*: k -> s(a), outgoing arrows b by b*: e(b) -> k, composites [ab] are added,
and the new potential is [W] + sum [ab] b* a*.  Mutation proper is the
reduced part of the pre-mutation: the degree-2 piece is split off by an
exact change of arrow basis followed by iterated unitriangular substitutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .pathalg import (
    Arrow,
    Element,
    PathAlgebraError,
    Path,
    Potential,
    Quiver,
    substitute,
)

DEFAULT_BOUND = 16
DEFAULT_CAP = 64


class MutationError(ValueError):
    pass


class QP:
    """A quiver with potential over an exact field, plus a mutation log."""

    def __init__(self, quiver: Quiver, potential: Potential, field,
                 provenance: Tuple = ()):
        if potential.quiver != quiver:
            raise MutationError("potential defined over a different quiver")
        if potential.field != field:
            raise MutationError("potential field mismatch")
        if not quiver.is_connected():
            raise MutationError("quiver must be connected")
        self.quiver = quiver
        self.potential = potential
        self.field = field
        self.provenance = tuple(provenance)

    def is_reduced(self) -> bool:
        return self.potential.is_reduced()

    def __eq__(self, other):
        return (
            isinstance(other, QP)
            and self.quiver == other.quiver
            and self.potential == other.potential
            and self.field == other.field
            and self.provenance == other.provenance
        )

    def __repr__(self):
        return (
            f"QP({len(self.quiver.vertices)} vertices, "
            f"{len(self.quiver.arrows)} arrows, "
            f"{len(self.potential.terms)} potential terms)"
        )


@dataclass(frozen=True)
class Violation:
    kind: str          # "two-cycle" or "internal-arrow"
    detail: Tuple

    def message(self) -> str:
        if self.kind == "two-cycle":
            return f"vertex {self.detail[0]!r} lies on a 2-cycle ({self.detail[1]}, {self.detail[2]})"
        return f"arrow {self.detail[0]!r} joins vertices {self.detail[1]!r}, {self.detail[2]!r} inside I"


@dataclass
class ViolationReport:
    violations: List[Violation]

    def messages(self) -> List[str]:
        return [v.message() for v in self.violations]


@dataclass(frozen=True)
class VertexPlan:
    vertex: object
    incoming: Tuple[str, ...]
    outgoing: Tuple[str, ...]
    star_names: Dict[str, str]
    composite_names: Dict[Tuple[str, str], str]


@dataclass(frozen=True)
class MutationPlan:
    vertices: Tuple
    plans: Tuple[VertexPlan, ...]


@dataclass
class TrivialSummary:
    """What the reduction did: deleted arrow pairs and substitution log."""

    deleted_pairs: List[Tuple[str, str]] = dc_field(default_factory=list)
    substitutions: List[str] = dc_field(default_factory=list)
    rounds: int = 0

    def is_empty(self) -> bool:
        return not self.deleted_pairs and not self.substitutions


def _fresh_name(taken: set, candidate: str) -> str:
    name = candidate
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def check_mutability(qp: QP, vertices: Sequence):
    """Conditions: no chosen vertex on a 2-cycle, no arrows inside I."""
    I = list(vertices)
    for v in I:
        if not qp.quiver.has_vertex(v):
            raise MutationError(f"unknown vertex label {v!r}")
    if len(set(I)) != len(I):
        raise MutationError("repeated vertex in mutation set")
    violations: List[Violation] = []
    iset = set(I)
    pairs = {}
    for a in qp.quiver.arrows:
        key = (a.target, a.source)
        if key in pairs and (a.source in iset or a.target in iset):
            v = a.source if a.source in iset else a.target
            violations.append(Violation("two-cycle", (v, pairs[key], a.name)))
        pairs.setdefault((a.source, a.target), a.name)
    for a in qp.quiver.arrows:
        if a.source in iset and a.target in iset:
            violations.append(Violation("internal-arrow", (a.name, a.source, a.target)))
    if violations:
        return ViolationReport(violations)
    taken = {a.name for a in qp.quiver.arrows}
    plans = []
    order = {v: qp.quiver.vertex_order(v) for v in I}
    for v in sorted(I, key=order.get):
        incoming = tuple(a.name for a in qp.quiver.arrows_into(v))
        outgoing = tuple(a.name for a in qp.quiver.arrows_from(v))
        stars = {}
        for name in incoming + outgoing:
            stars[name] = _fresh_name(taken, name + "*")
        composites = {}
        for a in incoming:
            for b in outgoing:
                composites[(a, b)] = _fresh_name(taken, f"[{a}{b}]")
        plans.append(VertexPlan(v, incoming, outgoing, stars, composites))
    return MutationPlan(tuple(sorted(I, key=order.get)), tuple(plans))


def _require_plan(qp: QP, vertices: Sequence) -> MutationPlan:
    plan = check_mutability(qp, vertices)
    if isinstance(plan, ViolationReport):
        raise MutationError(
            "mutation preconditions violated: " + "; ".join(plan.messages())
        )
    return plan


def premutate(qp: QP, k, plan: Optional[VertexPlan] = None) -> QP:
    """Pre-mutation at a single vertex not lying on a 2-cycle."""
    if plan is None:
        full = _require_plan(qp, [k])
        plan = full.plans[0]
    Q = qp.quiver
    f = qp.field
    incoming = plan.incoming
    outgoing = plan.outgoing
    in_set = set(incoming)

    surviving = [a for a in Q.arrows if a.name not in in_set and a.name not in set(outgoing)]
    new_arrows: List[Arrow] = list(surviving)
    for a in incoming:
        for b in outgoing:
            arr_a, arr_b = Q.arrow(a), Q.arrow(b)
            new_arrows.append(Arrow(plan.composite_names[(a, b)], arr_a.source, arr_b.target))
    for a in incoming:
        arr = Q.arrow(a)
        new_arrows.append(Arrow(plan.star_names[a], k, arr.source))
    for b in outgoing:
        arr = Q.arrow(b)
        new_arrows.append(Arrow(plan.star_names[b], arr.target, k))
    newQ = Quiver(Q.vertices, new_arrows)

    terms = []
    for cyc, c in qp.potential.terms.items():
        word = list(cyc.arrows)
        d = len(word)
        starts = [i for i in range(d) if Q.arrow(word[i]).target == k]
        if not starts:
            terms.append((newQ.path(word), c))
            continue
        seconds = {(i + 1) % d for i in starts}
        j0 = min(j for j in range(d) if j not in seconds)
        rot = word[j0:] + word[:j0]
        start_pos = {(i - j0) % d for i in starts}
        out_word: List[str] = []
        j = 0
        while j < d:
            if j in start_pos:
                out_word.append(plan.composite_names[(rot[j], rot[j + 1])])
                j += 2
            else:
                out_word.append(rot[j])
                j += 1
        terms.append((newQ.path(out_word), c))
    for a in incoming:
        for b in outgoing:
            cycle = newQ.path([
                plan.composite_names[(a, b)],
                plan.star_names[b],
                plan.star_names[a],
            ])
            terms.append((cycle, f.one))
    newW = Potential(newQ, f, terms, qp.potential.truncated)
    return QP(newQ, newW, f, qp.provenance + (("premutate", (k,)),))


def _degree2_items(W: Potential):
    return [(p, c) for p, c in W.terms.items() if p.length == 2]


def split_reduce(qp: QP, bound: int = DEFAULT_BOUND, cap: int = DEFAULT_CAP
                 ) -> Tuple[QP, TrivialSummary]:
    """Split off the trivial part: returns the reduced QP and a summary.

    Exact when the Jacobian algebra is finite dimensional with Loewy length
    below the bound; a loud error is raised if the substitution rounds do not
    stabilise within the cap.
    """
    summary = TrivialSummary()
    W = qp.potential
    if not _degree2_items(W):
        return qp, summary
    Q = W.quiver
    f = qp.field

    def one_arrow(name: str) -> Element:
        return Element(Q, f, {Q.path([name]): f.one})

    # Stage 1: Gauss-Jordan the degree-2 pairing into disjoint coefficient-1
    # pairs, tracking every change of basis as a substitution on W.
    pairs: List[Tuple[str, str]] = []
    while True:
        pair_cycles = {Q.canonical_rotation(Q.path([x, y])) for x, y in pairs}
        residual = [(p, c) for p, c in _degree2_items(W) if p not in pair_cycles]
        if not residual:
            break
        residual.sort(key=lambda pc: Q.order_key(pc[0]))
        pivot_cycle, pivot_coeff = residual[0]
        x0, y0 = pivot_cycle.arrows
        # scale the pivot to coefficient 1
        if pivot_coeff != f.one:
            sub = {y0: one_arrow(y0).scale(f.inv(pivot_coeff))}
            W = substitute(W, sub, bound)
            summary.substitutions.append(f"scale {y0} by 1/{f.fmt(pivot_coeff)}")
        # clear the pivot row (other partners of x0)
        while True:
            others = [
                (p, c) for p, c in _degree2_items(W)
                if x0 in p.arrows and p.arrows != (x0, y0) and p.arrows != (y0, x0)
            ]
            if not others:
                break
            p, c = min(others, key=lambda pc: Q.order_key(pc[0]))
            yp = p.arrows[1] if p.arrows[0] == x0 else p.arrows[0]
            sub = {y0: one_arrow(y0).sub(one_arrow(yp).scale(c))}
            W = substitute(W, sub, bound)
            summary.substitutions.append(f"{y0} -> {y0} - ({f.fmt(c)}){yp}")
        # clear the pivot column (other partners of y0)
        while True:
            others = [
                (p, c) for p, c in _degree2_items(W)
                if y0 in p.arrows and p.arrows != (x0, y0) and p.arrows != (y0, x0)
            ]
            if not others:
                break
            p, c = min(others, key=lambda pc: Q.order_key(pc[0]))
            xp = p.arrows[1] if p.arrows[0] == y0 else p.arrows[0]
            sub = {x0: one_arrow(x0).sub(one_arrow(xp).scale(c))}
            W = substitute(W, sub, bound)
            summary.substitutions.append(f"{x0} -> {x0} - ({f.fmt(c)}){xp}")
        pairs.append((x0, y0))

    # Stage 2: push occurrences of paired arrows out of the non-trivial part,
    # lowest degree first; every round strictly raises that degree.
    rounds = 0
    while True:
        rounds += 1
        if rounds > cap:
            raise MutationError(
                f"reduction did not stabilise within {cap} substitution rounds"
            )
        progress = False
        for x, y in pairs:
            pair_cycle = Q.canonical_rotation(Q.path([x, y]))
            impurities = [
                (p, c) for p, c in W.terms.items()
                if p != pair_cycle and (x in p.arrows or y in p.arrows)
            ]
            if not impurities:
                continue
            progress = True
            d = min(p.length for p, _ in impurities)
            if d < 3:
                raise MutationError("degenerate degree-2 pairing after splitting")
            alpha: Dict[Path, object] = {}
            beta: Dict[Path, object] = {}
            for p, c in impurities:
                if p.length != d:
                    continue
                word = p.arrows
                if x in word:
                    i = word.index(x)
                    rest = word[i + 1:] + word[:i]
                    tail = Q.path(rest)
                    beta[tail] = f.add(beta.get(tail, f.zero), c)
                else:
                    j = word.index(y)
                    rest = word[j + 1:] + word[:j]
                    tail = Q.path(rest)
                    alpha[tail] = f.add(alpha.get(tail, f.zero), c)
            sub: Dict[str, Element] = {}
            if beta:
                sub[y] = one_arrow(y).sub(Element(Q, f, beta))
            if alpha:
                sub[x] = one_arrow(x).sub(Element(Q, f, alpha))
            W = substitute(W, sub, bound)
            summary.substitutions.append(
                f"eliminate degree-{d} occurrences of ({x},{y})"
            )
        if not progress:
            break
    summary.rounds = rounds
    summary.deleted_pairs = list(pairs)

    # Stage 3: delete the paired arrows and the trivial terms.
    deleted = {name for pair in pairs for name in pair}
    pair_cycles = {Q.canonical_rotation(Q.path([x, y])) for x, y in pairs}
    for p, c in W.terms.items():
        if p in pair_cycles:
            continue
        if any(n in deleted for n in p.arrows):
            raise MutationError("internal error: residual term uses a deleted arrow")
    newQ = Quiver(Q.vertices, [a for a in Q.arrows if a.name not in deleted])
    new_terms = [
        (newQ.path(p.arrows), c) for p, c in W.terms.items() if p not in pair_cycles
    ]
    newW = Potential(newQ, f, new_terms, W.truncated)
    return QP(newQ, newW, f, qp.provenance), summary


def mutate(qp: QP, vertices: Sequence, bound: int = DEFAULT_BOUND,
           cap: int = DEFAULT_CAP) -> QP:
    """QP mutation at a set of vertices satisfying the two conditions.

    Pre-mutations at distinct admissible vertices touch disjoint arrows, so
    they are composed in canonical vertex order; the result is independent
    of the order the caller lists the vertices in.
    """
    plan = _require_plan(qp, vertices)
    cur = qp
    by_vertex = {p.vertex: p for p in plan.plans}
    for v in plan.vertices:
        cur = premutate(cur, v, by_vertex[v])
    red, _summary = split_reduce(cur, bound, cap)
    provenance = qp.provenance + (("mutate", plan.vertices),)
    return QP(red.quiver, red.potential, red.field, provenance)


def opposite(qp: QP) -> QP:
    """Reverse all arrows and all potential cycles; an exact involution."""
    newQ = qp.quiver.opposite()
    terms = [
        (newQ.path(tuple(reversed(p.arrows))), c)
        for p, c in qp.potential.terms.items()
    ]
    newW = Potential(newQ, qp.field, terms, qp.potential.truncated)
    return QP(newQ, newW, qp.field, qp.provenance)
