"""Dense exact linear algebra over the scalar fields.

Matrices are stored as lists of rows of field scalars.  Everything is
deterministic: pivots are chosen first-nonzero in column order, so echelon
forms (and hence all derived bases and sections) are stable across runs.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple


class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows: Sequence[Sequence], ncols: Optional[int] = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged matrix")
        else:
            self.ncols = 0 if ncols is None else ncols

    @classmethod
    def zeros(cls, field, m: int, n: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * n for _ in range(m)], ncols=n)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows, ncols=self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.rows[i][j] = value

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field})"

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(x) for row in self.rows for x in row)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            ncols=self.nrows,
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        f = self.field
        out = Matrix.zeros(f, self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if f.is_zero(a):
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    b = rk[j]
                    if not f.is_zero(b):
                        oi[j] = f.add(oi[j], f.mul(a, b))
        return out

    def add(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in matrix sum")
        f = self.field
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
            ncols=self.ncols,
        )

    def scaled(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, x) for x in r] for r in self.rows], ncols=self.ncols)

    def neg(self) -> "Matrix":
        return self.scaled(self.field.neg(self.field.one))

    def sub(self, other: "Matrix") -> "Matrix":
        return self.add(other.neg())

    def apply(self, vec: Sequence) -> List:
        """Matrix times column vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        f = self.field
        out = []
        for row in self.rows:
            s = f.zero
            for a, x in zip(row, vec):
                if not (f.is_zero(a) or f.is_zero(x)):
                    s = f.add(s, f.mul(a, x))
            out.append(s)
        return out

    def rref(self) -> Tuple["Matrix", List[int]]:
        """Reduced row echelon form and its pivot columns."""
        f = self.field
        m = [list(r) for r in self.rows]
        pivots: List[int] = []
        r = 0
        for c in range(self.ncols):
            pr = None
            for i in range(r, len(m)):
                if not f.is_zero(m[i][c]):
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.mul(inv, x) for x in m[r]]
            for i in range(len(m)):
                if i != r and not f.is_zero(m[i][c]):
                    factor = m[i][c]
                    m[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == len(m):
                break
        return Matrix(f, m, ncols=self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> List[List]:
        """Basis of {x : A x = 0}, one column vector per free column."""
        f = self.field
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.rows[r][fc])
            basis.append(v)
        return basis

    def solve(self, b: Sequence) -> Optional[List]:
        """One solution of A x = b, or None if inconsistent."""
        if len(b) != self.nrows:
            raise ValueError("rhs length mismatch")
        f = self.field
        aug = Matrix(f, [list(r) + [bv] for r, bv in zip(self.rows, b)], ncols=self.ncols + 1)
        if not self.nrows:
            return [f.zero] * self.ncols if all(f.is_zero(x) for x in b) else None
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [f.zero] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = red.rows[r][self.ncols]
        return x

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of non-square matrix")
        f = self.field
        n = self.nrows
        aug = Matrix(
            f,
            [list(self.rows[i]) + list(Matrix.identity(f, n).rows[i]) for i in range(n)],
            ncols=2 * n,
        )
        red, pivots = aug.rref()
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(f, [r[n:] for r in red.rows], ncols=n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def vec_add(field, u: Sequence, v: Sequence) -> List:
    return [field.add(a, b) for a, b in zip(u, v)]

def vec_sub(field, u: Sequence, v: Sequence) -> List:
    return [field.sub(a, b) for a, b in zip(u, v)]

def vec_scale(field, c, v: Sequence) -> List:
    return [field.mul(c, a) for a in v]

def vec_is_zero(field, v: Sequence) -> bool:
    return all(field.is_zero(a) for a in v)


class Subspace:
    """Row space kept in reduced echelon form; deterministic sections.

    Supports membership tests, remainder reduction, and choosing an echelon
    complement of a subspace inside a larger one (the fixed section used for
    homotopy-quotient coordinates).
    """

    def __init__(self, field, ambient_dim: int):
        self.field = field
        self.n = ambient_dim
        self.rows: List[List] = []
        self.pivots: List[int] = []

    @classmethod
    def from_vectors(cls, field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        s = cls(field, ambient_dim)
        for v in vectors:
            s.add(v)
        return s

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence) -> List:
        """Remainder of vec modulo the subspace (zero iff vec is a member)."""
        f = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not f.is_zero(c):
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec: Sequence) -> bool:
        return vec_is_zero(self.field, self.reduce(vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def add(self, vec: Sequence) -> bool:
        """Insert vec; returns True iff it enlarged the span."""
        f = self.field
        v = self.reduce(vec)
        for p in range(self.n):
            if not f.is_zero(v[p]):
                inv = f.inv(v[p])
                v = [f.mul(inv, a) for a in v]
                # re-reduce existing rows by the new one
                for i, row in enumerate(self.rows):
                    c = row[p]
                    if not f.is_zero(c):
                        self.rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(row, v)]
                at = 0
                while at < len(self.pivots) and self.pivots[at] < p:
                    at += 1
                self.rows.insert(at, v)
                self.pivots.insert(at, p)
                return True
        return False

    def coords(self, vec: Sequence) -> Optional[List]:
        """Coordinates of vec in the echelon basis, or None if outside."""
        f = self.field
        v = list(vec)
        out = []
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            out.append(c)
            if not f.is_zero(c):
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        if not vec_is_zero(f, v):
            return None
        return out

    def basis(self) -> List[List]:
        return [list(r) for r in self.rows]

    def complement_in(self, vectors: Iterable[Sequence]) -> List[List]:
        """Echelon complement of self inside span(self, vectors).

        Returns reduced representatives, in first-seen order; together with
        self they span self + span(vectors).
        """
        work = Subspace(self.field, self.n)
        for r in self.rows:
            work.add(r)
        out = []
        for v in vectors:
            red = work.reduce(v)
            if not vec_is_zero(self.field, red):
                out.append(red)
                work.add(red)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.n == other.n
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.n})"
