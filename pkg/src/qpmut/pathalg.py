"""Quivers, paths, truncated path-algebra elements, and derivative operators.

Composition convention: the product ``p * q`` means "first p, then q", so it
is defined when ``p.target == q.source``.  All scalar arithmetic is exact and
goes through a field object from :mod:`qpmut.fields`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class PathAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: object
    target: object


@dataclass(frozen=True)
class Path:
    """A (possibly trivial) path; arrows listed in composition order."""

    source: object
    target: object
    arrows: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def is_cycle(self) -> bool:
        return self.source == self.target

    def __repr__(self):
        if self.is_trivial:
            return f"e_{self.source}"
        return "".join(self.arrows)


class Quiver:
    """Finite directed multigraph without loops, with stable input order.

    The arrow input order drives the term order and the canonical rotation
    of cycles, so it is part of the data.
    """

    def __init__(self, vertices: Sequence, arrows: Iterable):
        self.vertices: Tuple = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise PathAlgebraError("duplicate vertex labels")
        arr: List[Arrow] = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            arr.append(a)
        self.arrows: Tuple[Arrow, ...] = tuple(arr)
        self._by_name: Dict[str, Arrow] = {}
        self._order: Dict[str, int] = {}
        vset = set(self.vertices)
        for i, a in enumerate(self.arrows):
            if a.name in self._by_name:
                raise PathAlgebraError(f"duplicate arrow id {a.name!r}")
            if a.source not in vset or a.target not in vset:
                raise PathAlgebraError(f"arrow {a.name!r} has unknown endpoint")
            if a.source == a.target:
                raise PathAlgebraError(f"arrow {a.name!r} is a loop")
            self._by_name[a.name] = a
            self._order[a.name] = i
        self._out: Dict[object, List[Arrow]] = {v: [] for v in self.vertices}
        self._in: Dict[object, List[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)
        self._vertex_order = {v: i for i, v in enumerate(self.vertices)}

    # -- lookups ---------------------------------------------------------

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise PathAlgebraError(f"unknown arrow id {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def arrow_order(self, name: str) -> int:
        return self._order[name]

    def vertex_order(self, v) -> int:
        try:
            return self._vertex_order[v]
        except KeyError:
            raise PathAlgebraError(f"unknown vertex label {v!r}") from None

    def has_vertex(self, v) -> bool:
        return v in self._vertex_order

    def arrows_from(self, v) -> List[Arrow]:
        return list(self._out[v])

    def arrows_into(self, v) -> List[Arrow]:
        return list(self._in[v])

    # -- paths -----------------------------------------------------------

    def trivial(self, v) -> Path:
        self.vertex_order(v)
        return Path(v, v, ())

    def path(self, names: Sequence[str], source=None) -> Path:
        if not names:
            if source is None:
                raise PathAlgebraError("trivial path needs a source vertex")
            return self.trivial(source)
        arrows = [self.arrow(n) for n in names]
        for x, y in zip(arrows, arrows[1:]):
            if x.target != y.source:
                raise PathAlgebraError(
                    f"arrows {x.name!r},{y.name!r} do not compose"
                )
        return Path(arrows[0].source, arrows[-1].target, tuple(names))

    def compose(self, p: Path, q: Path) -> Optional[Path]:
        """Concatenation "first p, then q"; None encodes the zero product."""
        if p.target != q.source:
            return None
        if p.is_trivial:
            return q
        if q.is_trivial:
            return p
        return Path(p.source, q.target, p.arrows + q.arrows)

    def order_key(self, p: Path):
        """Degree-first, then left-to-right lex in arrow input order."""
        return (p.length, tuple(self._order[n] for n in p.arrows))

    def canonical_rotation(self, p: Path) -> Path:
        """Lexicographically minimal rotation of a cycle."""
        if not p.is_cycle:
            raise PathAlgebraError("canonical rotation needs a cycle")
        if p.length <= 1:
            return p
        word = p.arrows
        idx = [self._order[n] for n in word]
        best = 0
        for k in range(1, len(word)):
            if idx[k:] + idx[:k] < idx[best:] + idx[:best]:
                best = k
        if best == 0:
            return p
        rotated = word[best:] + word[:best]
        src = self.arrow(rotated[0]).source
        return Path(src, src, rotated)

    # -- global shape ----------------------------------------------------

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        nbrs: Dict[object, set] = {v: set() for v in self.vertices}
        for a in self.arrows:
            nbrs[a.source].add(a.target)
            nbrs[a.target].add(a.source)
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def two_cycle_vertices(self) -> set:
        """Vertices lying on a 2-cycle of the quiver."""
        pairs = {(a.source, a.target) for a in self.arrows}
        out = set()
        for (u, v) in pairs:
            if (v, u) in pairs:
                out.add(u)
                out.add(v)
        return out

    def opposite(self) -> "Quiver":
        return Quiver(
            self.vertices,
            [Arrow(a.name, a.target, a.source) for a in self.arrows],
        )

    def arrow_matrix(self) -> List[List[int]]:
        """Arrow multiplicity matrix, entry [i][j] = #arrows v_i -> v_j."""
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for a in self.arrows:
            m[self._vertex_order[a.source]][self._vertex_order[a.target]] += 1
        return m

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def compose_paths(quiver: Quiver, p: Path, q: Path) -> Optional[Path]:
    """Module-level alias for :meth:`Quiver.compose`."""
    return quiver.compose(p, q)


class Element:
    """Finite K-linear combination of paths, optionally degree-truncated.

    ``bound=None`` means no truncation; with a bound, product terms beyond
    the bound are discarded and the element is flagged ``truncated``.
    """

    __slots__ = ("quiver", "field", "terms", "bound", "truncated")

    def __init__(self, quiver: Quiver, field, terms=None, bound: Optional[int] = None,
                 truncated: bool = False):
        self.quiver = quiver
        self.field = field
        self.bound = bound
        self.truncated = truncated
        clean: Dict[Path, object] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for p, c in items:
                c = field.coerce(c)
                if field.is_zero(c):
                    continue
                if bound is not None and p.length > bound:
                    self.truncated = True
                    continue
                if p in clean:
                    s = field.add(clean[p], c)
                    if field.is_zero(s):
                        del clean[p]
                    else:
                        clean[p] = s
                else:
                    clean[p] = c
        self.terms = clean

    @classmethod
    def zero(cls, quiver, field, bound=None) -> "Element":
        return cls(quiver, field, {}, bound)

    @classmethod
    def from_path(cls, quiver, field, path: Path, coeff=None, bound=None) -> "Element":
        c = field.one if coeff is None else coeff
        return cls(quiver, field, {path: c}, bound)

    def is_zero(self) -> bool:
        return not self.terms

    def in_radical(self) -> bool:
        return all(not p.is_trivial for p in self.terms)

    def max_degree(self) -> int:
        return max((p.length for p in self.terms), default=0)

    def min_degree(self) -> int:
        return min((p.length for p in self.terms), default=0)

    def support(self) -> List[Path]:
        return sorted(self.terms, key=self.quiver.order_key)

    def coeff(self, p: Path):
        return self.terms.get(p, self.field.zero)

    def _like(self, terms, truncated=False) -> "Element":
        return Element(self.quiver, self.field, terms, self.bound,
                       self.truncated or truncated)

    def add(self, other: "Element") -> "Element":
        merged = dict(self.terms)
        f = self.field
        for p, c in other.terms.items():
            s = f.add(merged.get(p, f.zero), c)
            if f.is_zero(s):
                merged.pop(p, None)
            else:
                merged[p] = s
        return self._like(merged, other.truncated)

    def neg(self) -> "Element":
        f = self.field
        return self._like({p: f.neg(c) for p, c in self.terms.items()})

    def sub(self, other: "Element") -> "Element":
        return self.add(other.neg())

    def scale(self, c) -> "Element":
        f = self.field
        c = f.coerce(c)
        if f.is_zero(c):
            return self._like({})
        return self._like({p: f.mul(c, x) for p, x in self.terms.items()})

    def mul(self, other: "Element") -> "Element":
        f = self.field
        out: Dict[Path, object] = {}
        truncated = self.truncated or other.truncated
        for p, cp in self.terms.items():
            for q, cq in other.terms.items():
                pq = self.quiver.compose(p, q)
                if pq is None:
                    continue
                if self.bound is not None and pq.length > self.bound:
                    truncated = True
                    continue
                s = f.add(out.get(pq, f.zero), f.mul(cp, cq))
                if f.is_zero(s):
                    out.pop(pq, None)
                else:
                    out[pq] = s
        return Element(self.quiver, self.field, out, self.bound, truncated)

    def truncate(self, bound: int) -> "Element":
        dropped = any(p.length > bound for p in self.terms)
        kept = {p: c for p, c in self.terms.items() if p.length <= bound}
        return Element(self.quiver, self.field, kept, bound,
                       self.truncated or dropped)

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p in self.support():
            bits.append(f"{self.field.fmt(self.terms[p])}*{p!r}")
        return " + ".join(bits)


class Potential:
    """Linear combination of cycles of length >= 2 in canonical rotation."""

    __slots__ = ("quiver", "field", "terms", "truncated")

    def __init__(self, quiver: Quiver, field, terms=None, truncated: bool = False):
        self.quiver = quiver
        self.field = field
        self.truncated = truncated
        clean: Dict[Path, object] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for p, c in items:
                c = field.coerce(c)
                if field.is_zero(c):
                    continue
                if not p.is_cycle:
                    raise PathAlgebraError(f"potential term {p!r} is not a cycle")
                if p.length < 2:
                    raise PathAlgebraError(f"potential term {p!r} has length < 2")
                canon = quiver.canonical_rotation(p)
                s = field.add(clean.get(canon, field.zero), c)
                if field.is_zero(s):
                    clean.pop(canon, None)
                else:
                    clean[canon] = s
        self.terms = clean

    @classmethod
    def zero(cls, quiver, field) -> "Potential":
        return cls(quiver, field, {})

    @classmethod
    def from_cycles(cls, quiver, field, cycles: Iterable[Tuple[Sequence[str], object]]) -> "Potential":
        terms = [(quiver.path(list(names)), c) for names, c in cycles]
        return cls(quiver, field, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> List[Path]:
        return sorted(self.terms, key=self.quiver.order_key)

    def coeff(self, cycle: Path):
        return self.terms.get(self.quiver.canonical_rotation(cycle), self.field.zero)

    def max_degree(self) -> int:
        return max((p.length for p in self.terms), default=0)

    def degree_part(self, d: int) -> "Potential":
        return Potential(self.quiver, self.field,
                         {p: c for p, c in self.terms.items() if p.length == d})

    def min_degree(self) -> int:
        return min((p.length for p in self.terms), default=0)

    def is_reduced(self) -> bool:
        return all(p.length >= 3 for p in self.terms)

    def arrows_used(self) -> set:
        used = set()
        for p in self.terms:
            used.update(p.arrows)
        return used

    def add(self, other: "Potential") -> "Potential":
        merged = dict(self.terms)
        f = self.field
        for p, c in other.terms.items():
            s = f.add(merged.get(p, f.zero), c)
            if f.is_zero(s):
                merged.pop(p, None)
            else:
                merged[p] = s
        return Potential(self.quiver, self.field, merged,
                         self.truncated or other.truncated)

    def scale(self, c) -> "Potential":
        f = self.field
        return Potential(self.quiver, f,
                         {p: f.mul(f.coerce(c), x) for p, x in self.terms.items()},
                         self.truncated)

    def as_element(self, bound=None) -> Element:
        return Element(self.quiver, self.field, dict(self.terms), bound)

    def __eq__(self, other):
        return (
            isinstance(other, Potential)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"{self.field.fmt(self.terms[p])}*{p!r}" for p in self.support()
        )


# -- derivative operators -------------------------------------------------

def cyclic_derivative(arrow_name: str, W: Potential) -> Element:
    """Sum over occurrences of the arrow of the rotated remainder path."""
    Q = W.quiver
    Q.arrow(arrow_name)
    f = W.field
    terms: Dict[Path, object] = {}
    for cyc, c in W.terms.items():
        word = cyc.arrows
        d = len(word)
        for i, name in enumerate(word):
            if name != arrow_name:
                continue
            rest = word[i + 1:] + word[:i]
            a = Q.arrow(arrow_name)
            p = Q.path(rest, source=a.target) if rest else Q.trivial(a.target)
            s = f.add(terms.get(p, f.zero), c)
            if f.is_zero(s):
                terms.pop(p, None)
            else:
                terms[p] = s
    return Element(Q, f, terms)


def pair_derivative(a_name: str, b_name: str, W: Potential) -> Element:
    """Strip cyclically-adjacent occurrences "a then b" from each cycle."""
    Q = W.quiver
    a = Q.arrow(a_name)
    Q.arrow(b_name)
    f = W.field
    terms: Dict[Path, object] = {}
    for cyc, c in W.terms.items():
        word = cyc.arrows
        d = len(word)
        for i in range(d):
            if word[i] != a_name or word[(i + 1) % d] != b_name:
                continue
            rest = tuple(word[(i + 1 + k) % d] for k in range(1, d - 1))
            src = Q.arrow(b_name).target
            p = Q.path(rest, source=src) if rest else Q.trivial(src)
            s = f.add(terms.get(p, f.zero), c)
            if f.is_zero(s):
                terms.pop(p, None)
            else:
                terms[p] = s
    return Element(Q, f, terms)


def right_derivative(arrow_name: str, x: Element) -> Element:
    """Strip a trailing arrow; kills terms not ending in it."""
    Q = x.quiver
    Q.arrow(arrow_name)
    if not x.in_radical():
        raise PathAlgebraError("right derivative needs a radical element")
    f = x.field
    terms: Dict[Path, object] = {}
    for p, c in x.terms.items():
        if p.arrows[-1] != arrow_name:
            continue
        rest = p.arrows[:-1]
        q = Q.path(rest, source=p.source) if rest else Q.trivial(p.source)
        s = f.add(terms.get(q, f.zero), c)
        if f.is_zero(s):
            terms.pop(q, None)
        else:
            terms[q] = s
    return Element(Q, f, terms, x.bound, x.truncated)


def substitute(W: Potential, s: Dict[str, Element], bound: int) -> Potential:
    """Expand each cycle multilinearly under arrow substitutions.

    Arrows absent from ``s`` map to themselves; every image must be an
    element whose terms all run parallel to the substituted arrow.
    """
    Q = W.quiver
    f = W.field
    for name, img in s.items():
        a = Q.arrow(name)
        if img.field != f:
            raise PathAlgebraError("substitution field mismatch")
        for p in img.terms:
            if p.source != a.source or p.target != a.target:
                raise PathAlgebraError(
                    f"substitution for {name!r} has a term {p!r} with wrong endpoints"
                )
    out: Dict[Path, object] = {}
    truncated = W.truncated
    for cyc, c in W.terms.items():
        partial: Dict[Path, object] = {Q.trivial(cyc.source): c}
        for name in cyc.arrows:
            img = s.get(name)
            nxt: Dict[Path, object] = {}
            if img is None:
                items = [(Q.path((name,)), f.one)]
            else:
                items = list(img.terms.items())
                truncated = truncated or img.truncated
            for p, cp in partial.items():
                for q, cq in items:
                    pq = Q.compose(p, q)
                    if pq is None:
                        continue
                    if pq.length > bound:
                        truncated = True
                        continue
                    v = f.add(nxt.get(pq, f.zero), f.mul(cp, cq))
                    if f.is_zero(v):
                        nxt.pop(pq, None)
                    else:
                        nxt[pq] = v
            partial = nxt
            if not partial:
                break
        for p, cp in partial.items():
            if p.length < 2:
                # cancelled down to a point; cannot happen for valid images
                raise PathAlgebraError("substitution produced a cycle shorter than 2")
            canon = Q.canonical_rotation(p)
            v = f.add(out.get(canon, f.zero), cp)
            if f.is_zero(v):
                out.pop(canon, None)
            else:
                out[canon] = v
    return Potential(Q, f, out, truncated)
