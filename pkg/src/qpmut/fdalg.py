"""Finite-dimensional basic algebras presented by structure constants.

The same container serves Jacobian algebras (basis = normal-form paths) and
endomorphism algebras of silting complexes (basis = homotopy classes); both
are basic with one idempotent per "vertex".  Elements are sparse coordinate
dicts ``{basis index: scalar}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Subspace
from .pathalg import Arrow, Quiver


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class BasisElem:
    index: int
    source: object
    target: object
    label: object


class FDAlgebra:
    def __init__(self, field, vertices: Sequence, basis: Sequence[BasisElem],
                 idem: Dict[object, int], mult: Dict[Tuple[int, int], Dict[int, object]],
                 provenance: str = ""):
        self.field = field
        self.vertices = tuple(vertices)
        self.basis = tuple(basis)
        self.idem = dict(idem)
        self.mult = mult
        self.provenance = provenance
        self._blocks: Dict[Tuple[object, object], List[int]] = {}
        for b in self.basis:
            self._blocks.setdefault((b.source, b.target), []).append(b.index)
        self._radical: Optional[List[List]] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def block(self, u, v) -> List[int]:
        return list(self._blocks.get((u, v), []))

    def unit(self) -> Dict[int, object]:
        return {i: self.field.one for i in self.idem.values()}

    def idem_vector(self, v) -> Dict[int, object]:
        return {self.idem[v]: self.field.one}

    # -- multiplication ----------------------------------------------------

    def product_basis(self, i: int, j: int) -> Dict[int, object]:
        return self.mult.get((i, j), {})

    def product(self, x: Dict[int, object], y: Dict[int, object]) -> Dict[int, object]:
        f = self.field
        out: Dict[int, object] = {}
        for i, ci in x.items():
            if f.is_zero(ci):
                continue
            for j, cj in y.items():
                c = f.mul(ci, cj)
                if f.is_zero(c):
                    continue
                for k, ck in self.mult.get((i, j), {}).items():
                    s = f.add(out.get(k, f.zero), f.mul(c, ck))
                    if f.is_zero(s):
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def add(self, x, y):
        f = self.field
        out = dict(x)
        for k, c in y.items():
            s = f.add(out.get(k, f.zero), c)
            if f.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return out

    def scale(self, c, x):
        f = self.field
        c = f.coerce(c)
        if f.is_zero(c):
            return {}
        return {k: f.mul(c, v) for k, v in x.items()}

    def to_vector(self, x: Dict[int, object]) -> List:
        f = self.field
        v = [f.zero] * self.dim
        for k, c in x.items():
            v[k] = c
        return v

    def from_vector(self, vec: Sequence) -> Dict[int, object]:
        f = self.field
        return {i: c for i, c in enumerate(vec) if not f.is_zero(c)}

    # -- sanity checks -----------------------------------------------------

    def check_idempotents(self) -> None:
        f = self.field
        for u in self.vertices:
            for v in self.vertices:
                ei, ej = self.idem[u], self.idem[v]
                prod = self.product_basis(ei, ej)
                want = {ei: f.one} if u == v else {}
                if prod != want:
                    raise AlgebraError(f"idempotents at {u!r},{v!r} not orthogonal")
        total = {}
        for v in self.vertices:
            total = self.add(total, self.idem_vector(v))
        for b in self.basis:
            x = {b.index: f.one}
            if self.product(total, x) != x or self.product(x, total) != x:
                raise AlgebraError("idempotents do not sum to the identity")

    def check_associativity(self, exhaustive_dim: int = 64, samples: int = 10000,
                            seed: int = 0) -> None:
        f = self.field
        n = self.dim
        def check(i, j, k):
            left = self.product(self.product_basis(i, j), {k: f.one})
            right = self.product({i: f.one}, self.product_basis(j, k))
            if left != right:
                raise AlgebraError(f"associativity fails on basis triple ({i},{j},{k})")
        if n <= exhaustive_dim:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        check(i, j, k)
        else:
            rng = random.Random(seed)
            for _ in range(samples):
                check(rng.randrange(n), rng.randrange(n), rng.randrange(n))

    # -- Cartan matrix -------------------------------------------------------

    def cartan_matrix(self) -> List[List[int]]:
        """Entry (i, j) counts basis elements running from vertex j to vertex i."""
        n = len(self.vertices)
        pos = {v: i for i, v in enumerate(self.vertices)}
        m = [[0] * n for _ in range(n)]
        for b in self.basis:
            m[pos[b.target]][pos[b.source]] += 1
        return m

    # -- radical machinery ---------------------------------------------------

    def _left_mult_matrix_on(self, x: Dict[int, object], indices: List[int]):
        """Matrix of y -> x*y on the span of the given basis indices."""
        f = self.field
        pos = {b: r for r, b in enumerate(indices)}
        cols = []
        for j in indices:
            prod = self.product(x, {j: f.one})
            col = [f.zero] * len(indices)
            for k, c in prod.items():
                if k not in pos:
                    raise AlgebraError("corner not multiplicatively closed")
                col[pos[k]] = c
            cols.append(col)
        return [[cols[j][i] for j in range(len(indices))] for i in range(len(indices))]

    def _corner_scalar(self, x: Dict[int, object], indices: List[int]):
        """The unique scalar c with x - c*1 nilpotent in a local corner."""
        f = self.field
        n = len(indices)
        L = self._left_mult_matrix_on(x, indices)
        if f.characteristic == 0 or f.characteristic > n:
            tr = f.zero
            for i in range(n):
                tr = f.add(tr, L[i][i])
            return f.div(tr, f.coerce(n))
        # char p <= n: locate the single eigenvalue via the minimal polynomial
        m = _min_poly(f, L)
        lam = _single_root_gfp(f, m)
        if lam is None:
            raise AlgebraError("corner element has no scalar part: corner not local")
        return lam

    def _corner_is_nilpotent(self, x: Dict[int, object], indices: List[int]) -> bool:
        power = dict(x)
        for _ in range(len(indices)):
            if not power:
                return True
            power = self.product(power, x)
        return not power

    def corner_radical(self, v) -> List[Dict[int, object]]:
        """Radical of the local corner algebra at a vertex, as sparse vectors."""
        f = self.field
        indices = self.block(v, v)
        e = self.idem[v]
        out = []
        for i in indices:
            if i == e:
                continue
            x = {i: f.one}
            lam = self._corner_scalar(x, indices)
            rad = self.add(x, self.scale(f.neg(lam), {e: f.one}))
            if not self._corner_is_nilpotent(rad, indices):
                raise AlgebraError(
                    f"corner at {v!r} is not local: {i} has no nilpotent part"
                )
            if rad:
                out.append(rad)
        return out

    def radical_generators(self) -> List[Dict[int, object]]:
        """Spanning set of the Jacobson radical (block-homogeneous vectors)."""
        if self._radical is not None:
            return self._radical
        f = self.field
        gens: List[Dict[int, object]] = []
        for (u, v), idxs in sorted(
            self._blocks.items(),
            key=lambda kv: (self.vertices.index(kv[0][0]), self.vertices.index(kv[0][1])),
        ):
            if u != v:
                gens.extend({i: f.one} for i in idxs)
        for v in self.vertices:
            gens.extend(self.corner_radical(v))
        self._radical = gens
        return gens

    def radical_subspace(self) -> Subspace:
        return Subspace.from_vectors(
            self.field, self.dim, [self.to_vector(g) for g in self.radical_generators()]
        )

    def radical_power_generators(self, m: int) -> List[Dict[int, object]]:
        gens = self.radical_generators()
        if m <= 0:
            return [ {b.index: self.field.one} for b in self.basis ]
        cur = gens
        for _ in range(m - 1):
            nxt = []
            for g in gens:
                for h in cur:
                    p = self.product(g, h)
                    if p:
                        nxt.append(p)
            cur = nxt
            if not cur:
                break
        return cur

    def radical_layers(self) -> List[int]:
        """Dimensions of J^m / J^{m+1}, starting at m = 0."""
        dims = [self.dim]
        m = 1
        while True:
            d = Subspace.from_vectors(
                self.field, self.dim,
                [self.to_vector(g) for g in self.radical_power_generators(m)],
            ).dim
            dims.append(d)
            if d == 0:
                break
            m += 1
            if m > self.dim + 1:
                raise AlgebraError("radical is not nilpotent")
        return [a - b for a, b in zip(dims, dims[1:])]

    def loewy_length(self) -> int:
        return len(self.radical_layers())

    def gabriel_quiver(self) -> Quiver:
        """Quiver with dim of the (i -> j) block of J/J^2 arrows i -> j."""
        rad = self.radical_generators()
        sq: List[Dict[int, object]] = []
        for g in rad:
            for h in rad:
                p = self.product(g, h)
                if p:
                    sq.append(p)
        def block_of(vec: Dict[int, object]) -> Tuple[object, object]:
            b = self.basis[next(iter(vec))]
            return (b.source, b.target)
        arrows: List[Arrow] = []
        for u in self.vertices:
            for v in self.vertices:
                j_vecs = [g for g in rad if block_of(g) == (u, v)]
                if not j_vecs:
                    continue
                j2_vecs = [g for g in sq if block_of(g) == (u, v)]
                j2 = Subspace.from_vectors(self.field, self.dim,
                                           [self.to_vector(g) for g in j2_vecs])
                j1 = Subspace.from_vectors(self.field, self.dim,
                                           [self.to_vector(g) for g in j_vecs + j2_vecs])
                count = j1.dim - j2.dim
                for n in range(count):
                    arrows.append(Arrow(f"({u}>{v}).{n}", u, v))
        return Quiver(self.vertices, arrows)


def _min_poly(field, L: List[List]) -> List:
    """Minimal polynomial (monic, ascending coefficients) of a matrix."""
    from .linalg import Matrix, Subspace as Sp
    n = len(L)
    M = Matrix(field, L)
    # Krylov on the full matrix viewed as a vector of length n*n
    def flat(A: Matrix) -> List:
        return [A.rows[i][j] for i in range(n) for j in range(n)]
    powers = [Matrix.identity(field, n)]
    span = Sp(field, n * n)
    span.add(flat(powers[0]))
    while True:
        nxt = powers[-1].mul(M)
        if not span.add(flat(nxt)):
            break
        powers.append(nxt)
    k = len(powers)
    target = powers[-1].mul(M)
    cols = Matrix(field, [[flat(p)[r] for p in powers] for r in range(n * n)])
    sol = cols.solve(flat(target))
    if sol is None:
        raise AlgebraError("minimal polynomial solve failed")
    # t^k - sum sol_i t^i
    coeffs = [field.neg(c) for c in sol] + [field.one]
    return coeffs


def _poly_trim(field, p: List) -> List:
    while p and field.is_zero(p[-1]):
        p.pop()
    return p


def _poly_mod(field, a: List, b: List) -> List:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = field.inv(lb)
    while len(a) - 1 >= db and a:
        c = field.mul(a[-1], inv)
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = field.sub(a[shift + i], field.mul(c, bc))
        _poly_trim(field, a)
        if not a:
            break
    return a


def _poly_gcd(field, a: List, b: List) -> List:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(field, a, b)
    if a:
        inv = field.inv(a[-1])
        a = [field.mul(inv, c) for c in a]
    return a


def _single_root_gfp(field, m: List):
    """Root of m(t) = (t - lam)^k over GF(p), via gcd with t^p - t."""
    p = field.characteristic
    # t^p mod m by square-and-multiply
    def mulmod(f1, f2):
        out = [field.zero] * (len(f1) + len(f2) - 1)
        for i, c1 in enumerate(f1):
            if field.is_zero(c1):
                continue
            for j, c2 in enumerate(f2):
                out[i + j] = field.add(out[i + j], field.mul(c1, c2))
        return _poly_mod(field, _poly_trim(field, out), m)
    if len(m) == 2:
        return field.neg(field.div(m[0], m[1]))
    result = [field.one]
    base = _poly_mod(field, [field.zero, field.one], m)
    e = p
    while e:
        if e & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        e >>= 1
    # result = t^p mod m; subtract t
    tp_minus_t = list(result)
    while len(tp_minus_t) < 2:
        tp_minus_t.append(field.zero)
    tp_minus_t[1] = field.sub(tp_minus_t[1], field.one)
    g = _poly_gcd(field, m, _poly_trim(field, tp_minus_t))
    if len(g) != 2:
        return None
    return field.neg(field.div(g[0], g[1]))
