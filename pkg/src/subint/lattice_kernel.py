"""Exact integer linear algebra: normal forms, lattice membership and
nonnegative integer solving.

Everything here works on Python ints, so there is no overflow to worry
about.  Matrices are small immutable values; the heavy lifting is done on
plain lists of lists internally.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

Vector = tuple[int, ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"IntMatrix: expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        cols = [list(c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise ValueError("column length does not match row count")
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], cols=len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, cols=other.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.to_rows(), rows=self.cols)


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns ``(h, u)`` with ``h = m @ u`` and ``u`` unimodular.  ``h`` is lower
    triangular in the echelon sense: each nonzero column has a positive pivot
    strictly below the previous column's pivot, entries left of a pivot lie in
    ``[0, pivot)``, and all zero columns come last.
    """
    d, k = m.rows, m.cols
    cols = [list(c) for c in m.columns()]
    u = [[int(i == j) for i in range(k)] for j in range(k)]  # u[j] is column j

    def combine(j1, j2, a, b, c, e):
        # (col j1, col j2) <- (a*c1 + b*c2, c*c1 + e*c2)
        c1, c2 = cols[j1], cols[j2]
        cols[j1] = [a * x + b * y for x, y in zip(c1, c2)]
        cols[j2] = [c * x + e * y for x, y in zip(c1, c2)]
        u1, u2 = u[j1], u[j2]
        u[j1] = [a * x + b * y for x, y in zip(u1, u2)]
        u[j2] = [c * x + e * y for x, y in zip(u1, u2)]

    piv = 0
    for i in range(d):
        if piv >= k:
            break
        for j in range(piv + 1, k):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[piv][i]
            x, y, g = xgcd(a, b)
            # unimodular: det [[x, -b/g], [y, a/g]] = (x*a + y*b)/g = 1
            combine(piv, j, x, y, -b // g, a // g)
        p = cols[piv][i]
        if p == 0:
            continue
        if p < 0:
            cols[piv] = [-x for x in cols[piv]]
            u[piv] = [-x for x in u[piv]]
            p = -p
        for j in range(piv):
            q = cols[j][i] // p
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[piv])]
                u[j] = [x - q * y for x, y in zip(u[j], u[piv])]
        piv += 1
    h = IntMatrix.from_columns(cols, rows=d)
    return h, IntMatrix.from_columns(u, rows=k)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(s, u, v)`` with ``s = u @ m @ v`` diagonal, nonnegative and
    each diagonal entry dividing the next."""
    r, c = m.rows, m.cols
    a = m.to_rows()
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_comb(i1, i2, p, q, s, t):
        for mat in (a, u):
            r1, r2 = mat[i1], mat[i2]
            mat[i1] = [p * x + q * y for x, y in zip(r1, r2)]
            mat[i2] = [s * x + t * y for x, y in zip(r1, r2)]

    def col_comb(j1, j2, p, q, s, t):
        for mat in (a, v):
            for row in mat:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = p * x + q * y, s * x + t * y

    for t in range(min(r, c)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, r) for j in range(t, c) if a[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            if pi != t:
                row_comb(t, pi, 0, 1, 1, 0)
            if pj != t:
                col_comb(t, pj, 0, 1, 1, 0)
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            done = True
            for i in range(t + 1, r):
                p, b = a[t][t], a[i][t]
                if b % p == 0:
                    row_comb(t, i, 1, 0, -(b // p), 1)
                elif b:
                    x, y, g = xgcd(p, b)
                    row_comb(t, i, x, y, -(b // g), p // g)
            for j in range(t + 1, c):
                p, b = a[t][t], a[t][j]
                if b % p == 0:
                    col_comb(t, j, 1, 0, -(b // p), 1)
                else:
                    x, y, g = xgcd(p, b)
                    col_comb(t, j, x, y, -(b // g), p // g)
                    done = False
            if any(a[i][t] for i in range(t + 1, r)):
                continue
            if not done:
                continue
            p = a[t][t]
            bad = [(i, j) for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p]
            if bad:
                # pull an offending row into row t; the next sweep lowers the pivot
                row_comb(t, bad[0][0], 1, 1, 0, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (IntMatrix.from_rows(a, cols=c), IntMatrix.from_rows(u, cols=r),
            IntMatrix.from_rows(v, cols=c))


def is_hnf(h: IntMatrix) -> bool:
    last_pivot = -1
    seen_zero = False
    for j in range(h.cols):
        col = h.column(j)
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last_pivot or col[p] <= 0:
            return False
        for jj in range(j):
            if not 0 <= h[p, jj] < col[p]:
                return False
        last_pivot = p
    return True


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^d stored by its (trimmed) column HNF basis."""
    ambient_rank: int
    basis: IntMatrix

    @classmethod
    def generated_by(cls, vectors: Sequence[Sequence[int]], ambient_rank: int) -> "Lattice":
        if not vectors:
            return cls(ambient_rank, IntMatrix(ambient_rank, 0, ()))
        h, _ = hermite_normal_form(IntMatrix.from_columns(vectors, rows=ambient_rank))
        cols = [c for c in h.columns() if any(c)]
        return cls(ambient_rank, IntMatrix.from_columns(cols, rows=ambient_rank))

    @property
    def rank(self) -> int:
        return self.basis.cols

    def basis_vectors(self) -> list[Vector]:
        return self.basis.columns()

    def is_zero(self) -> bool:
        return self.rank == 0

    def contains(self, v: Sequence[int]) -> bool:
        return lattice_contains(self, v)

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        return _hnf_coordinates(self, v)


def _hnf_coordinates(lat: Lattice, v: Sequence[int]) -> Optional[Vector]:
    if len(v) != lat.ambient_rank:
        raise ValueError(f"vector of length {len(v)} in lattice of rank {lat.ambient_rank}")
    res = list(v)
    coeffs = []
    row = 0
    for col in lat.basis_vectors():
        p = next(i for i, x in enumerate(col) if x)
        if any(res[row:p]):
            return None
        q, rem = divmod(res[p], col[p])
        if rem:
            return None
        coeffs.append(q)
        if q:
            res = [x - q * y for x, y in zip(res, col)]
        row = p + 1
    if any(res):
        return None
    return tuple(coeffs)


def lattice_contains(lat: Lattice, v: Sequence[int]) -> bool:
    """Membership by back-substitution against the HNF basis."""
    return _hnf_coordinates(lat, v) is not None


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _graded_solve(gens: tuple[Vector, ...], degs: tuple[int, ...], i: int,
                  target: Vector, tdeg: int) -> Optional[Vector]:
    if i == len(gens):
        return () if not any(target) else None
    g, dg = gens[i], degs[i]
    rest = target
    for a in range(tdeg // dg + 1):
        sub = _graded_solve(gens, degs, i + 1, rest, tdeg - a * dg)
        if sub is not None:
            return (a,) + sub
        rest = tuple(x - y for x, y in zip(rest, g))
    return None


@lru_cache(maxsize=None)
def _bounded_solve(gens: tuple[Vector, ...], i: int, target: Vector,
                   budget: int) -> Optional[Vector]:
    if i == len(gens):
        return () if not any(target) else None
    g = gens[i]
    rest = target
    for a in range(budget + 1):
        sub = _bounded_solve(gens, i + 1, rest, budget - a)
        if sub is not None:
            return (a,) + sub
        rest = tuple(x - y for x, y in zip(rest, g))
    return None


def solve_nonnegative(generators: Sequence[Sequence[int]], target: Sequence[int],
                      degree_bound: Optional[int] = None,
                      grading: Optional[Sequence[int]] = None) -> Optional[Vector]:
    """Find the lexicographically least ``a >= 0`` with ``sum a_i g_i == target``.

    With a positive ``grading`` (every generator has positive degree) the
    search is exhaustive and exact.  Without one, the total coefficient sum is
    capped by ``degree_bound`` and ``None`` only means "nothing within the cap".
    """
    gens = tuple(tuple(int(x) for x in g) for g in generators)
    target = tuple(int(x) for x in target)
    for g in gens:
        if len(g) != len(target):
            raise ValueError("dimension mismatch between generators and target")
    if not gens:
        return () if not any(target) else None
    if grading is not None:
        if len(grading) != len(target):
            raise ValueError("grading vector has wrong length")
        w = tuple(int(x) for x in grading)
        degs = tuple(_dot(w, g) for g in gens)
        if min(degs) <= 0:
            raise ValueError("grading is not positive on all generators")
        tdeg = _dot(w, target)
        if tdeg < 0:
            return None
        return _graded_solve(gens, degs, 0, target, tdeg)
    if degree_bound is None:
        raise ValueError("degree_bound is required when no positive grading is given")
    return _bounded_solve(gens, 0, target, int(degree_bound))
