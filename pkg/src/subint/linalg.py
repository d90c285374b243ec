"""Coefficient fields (Q and F_p) and exact linear algebra over them.

Vectors are plain tuples of field elements: ``Fraction`` for Q and ints in
``range(p)`` for F_p.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """Q (``Field()``) or the prime field F_p (``Field(p)``)."""

    def __init__(self, p: Optional[int] = None):
        if p is not None:
            p = int(p)
            if not _is_prime(p) or p >= 2 ** 31:
                raise ValueError(f"{p} is not a prime below 2^31")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @classmethod
    def parse(cls, spec) -> "Field":
        if spec in (None, "Q", "QQ", "rationals"):
            return cls()
        s = str(spec)
        for prefix in ("F", "GF", "F_"):
            if s.startswith(prefix) and s[len(prefix):].isdigit():
                return cls(int(s[len(prefix):]))
        if s.isdigit():
            return cls(int(s))
        raise ValueError(f"unknown field {spec!r}")

    def __call__(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def norm(self, x):
        return x if self.p is None else x % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, self.p - 2, self.p)

    def vector(self, xs: Iterable) -> Vec:
        return tuple(self(x) for x in xs)

    def zeros(self, n: int) -> Vec:
        z = self.zero
        return tuple(z for _ in range(n))

    def unit_vector(self, n: int, i: int) -> Vec:
        return tuple(self.one if j == i else self.zero for j in range(n))

    def add(self, u: Vec, v: Vec) -> Vec:
        if self.p is None:
            return tuple(a + b for a, b in zip(u, v))
        p = self.p
        return tuple((a + b) % p for a, b in zip(u, v))

    def sub(self, u: Vec, v: Vec) -> Vec:
        if self.p is None:
            return tuple(a - b for a, b in zip(u, v))
        p = self.p
        return tuple((a - b) % p for a, b in zip(u, v))

    def scale(self, c, u: Vec) -> Vec:
        if self.p is None:
            return tuple(c * a for a in u)
        p = self.p
        return tuple((c * a) % p for a in u)

    def axpy(self, c, x: Vec, y: Vec) -> Vec:
        """y + c*x"""
        if self.p is None:
            return tuple(b + c * a for a, b in zip(x, y))
        p = self.p
        return tuple((b + c * a) % p for a, b in zip(x, y))

    def to_json(self, x):
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)


def _eliminate(field: Field, rows: list[list], ncols: int) -> list[tuple[int, list]]:
    """Reduced row echelon form restricted to the first ``ncols`` columns.

    Rows may be longer than ``ncols``; the tail is carried along (used for
    tracking combinations).  Returns (pivot, row) pairs sorted by pivot.
    """
    p = field.p
    out: list[tuple[int, list]] = []
    supports: list[list[int]] = []  # nonzero positions of each pivot row
    for r in rows:
        r = list(r)
        for (piv, b), nz in zip(out, supports):
            c = r[piv]
            if c:
                for j in nz:
                    r[j] = r[j] - c * b[j] if p is None else (r[j] - c * b[j]) % p
        lead = next((j for j in range(ncols) if r[j]), None)
        if lead is None:
            continue
        inv = field.inv(r[lead])
        r = [field.norm(x * inv) if x else x for x in r]
        rnz = [j for j, x in enumerate(r) if x]
        for k, (piv, b) in enumerate(out):
            c = b[lead]
            if c:
                for j in rnz:
                    b[j] = b[j] - c * r[j] if p is None else (b[j] - c * r[j]) % p
                supports[k] = [j for j, x in enumerate(b) if x]
        out.append((lead, r))
        supports.append(rnz)
    out.sort(key=lambda t: t[0])
    return out


class Subspace:
    """A subspace of F^n held in reduced row echelon form (canonical)."""

    __slots__ = ("field", "n", "rows", "pivots")

    def __init__(self, field: Field, n: int, vectors: Iterable[Sequence] = ()):
        self.field = field
        self.n = n
        ech = _eliminate(field, [list(v) for v in vectors], n)
        self.rows: tuple[Vec, ...] = tuple(tuple(r) for _, r in ech)
        self.pivots: tuple[int, ...] = tuple(piv for piv, _ in ech)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.n == other.n
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in F^{self.n})"

    def reduce(self, v: Sequence) -> Vec:
        p = self.field.p
        r = list(v)
        for piv, b in zip(self.pivots, self.rows):
            c = r[piv]
            if c:
                if p is None:
                    r = [x - c * y for x, y in zip(r, b)]
                else:
                    r = [(x - c * y) % p for x, y in zip(r, b)]
        return tuple(r)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Sequence) -> Optional[Vec]:
        """Coefficients of v on ``rows`` (None if v is outside)."""
        if not self.contains(v):
            return None
        return tuple(v[piv] for piv in self.pivots)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.n, self.rows + other.rows)

    def extend(self, vectors: Iterable[Sequence]) -> "Subspace":
        return Subspace(self.field, self.n, list(self.rows) + [tuple(v) for v in vectors])

    def intersect(self, other: "Subspace") -> "Subspace":
        # Zassenhaus: rows (u|u) and (w|0); rows with vanishing left half span U ∩ W.
        z = self.field.zeros(self.n)
        rows = [tuple(u) + tuple(u) for u in self.rows] + [tuple(w) + z for w in other.rows]
        ech = _eliminate(self.field, rows, 2 * self.n)
        inter = [r[self.n:] for piv, r in ech if piv >= self.n]
        return Subspace(self.field, self.n, inter)

    def complement_indices(self) -> list[int]:
        """Standard basis indices spanning a complement (the non-pivot columns)."""
        piv = set(self.pivots)
        return [j for j in range(self.n) if j not in piv]


def left_kernel(field: Field, rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of {y : sum_k y_k rows[k] = 0}."""
    m = len(rows)
    aug = [list(r) + list(field.unit_vector(m, k)) for k, r in enumerate(rows)]
    ech = _eliminate(field, aug, ncols + m)
    return [tuple(r[ncols:]) for piv, r in ech if piv >= ncols]


def solve_combination(field: Field, vectors: Sequence[Sequence], target: Sequence) -> Optional[Vec]:
    """Coefficients c with sum c_k vectors[k] == target, or None."""
    n = len(target)
    m = len(vectors)
    aug = [list(v) + list(field.unit_vector(m, k)) for k, v in enumerate(vectors)]
    ech = [(piv, r) for piv, r in _eliminate(field, aug, n) if piv < n]
    r = list(target) + list(field.zeros(m))
    p = field.p
    for piv, b in ech:
        c = r[piv]
        if c:
            if p is None:
                r = [x - c * y for x, y in zip(r, b)]
            else:
                r = [(x - c * y) % p for x, y in zip(r, b)]
    if any(r[:n]):
        return None
    return tuple(field.norm(-x) for x in r[n:])


def nullspace(field: Field, matrix_rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of {x : A x = 0} for A given by rows."""
    ech = _eliminate(field, [list(r) for r in matrix_rows], ncols)
    pivots = {piv: r for piv, r in ech}
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for piv, r in pivots.items():
            x[piv] = field.norm(-r[f])
        basis.append(tuple(x))
    return basis
