"""Finite-dimensional commutative algebras, monoid algebras B[N] and the
ring-side subintegral closure.

A :class:`FiniteAlgebra` is given by structure constants over Q or F_p.
A :class:`SubalgebraExtension` is a unital subalgebra A of such a B.
Elements of B[N] are :class:`MonoidAlgebraElement` objects: sparse maps
from exponent vectors to coefficient vectors in B.  Graded questions about
A[M] ⊆ B[N] are answered on a :class:`Truncation`, the quotient of B[N] by
all monomials of degree > D, which is again a finite algebra.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .linalg import Field, Subspace, Vec, nullspace
from .monoid import (AffineMonoid, closure_via_seminormalization, elements_up_to_degree,
                     group_of_fractions, is_submonoid)

DEFAULT_GRID_BOUND = 2
GRID_CAP = 20000


class UnsupportedCharacteristic(ValueError):
    pass


@dataclass
class CheckReport:
    """Outcome of a verification harness.  Truthy iff ``ok``."""
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


# -- finite algebras -------------------------------------------------------

class FiniteAlgebra:
    """Commutative unital algebra with basis e_0..e_{n-1} over a field.

    ``table[(i, j)]`` lists the nonzero ``(k, c)`` with e_i e_j = sum c e_k.
    """

    def __init__(self, field: Field, dim: int, table: dict, unit: Sequence,
                 names: Optional[Sequence[str]] = None, check: bool = True):
        self.field = field
        self.dim = dim
        self.table = {}
        for (i, j), entries in table.items():
            entries = tuple((k, field(c)) for k, c in entries if field(c))
            if entries:
                self.table[(i, j)] = entries
        self.unit = field.vector(unit)
        if len(self.unit) != dim:
            raise ValueError("unit vector has wrong length")
        self.names = tuple(names) if names else tuple(f"e{i}" for i in range(dim))
        if len(self.names) != dim:
            raise ValueError("need one name per basis vector")
        self._trace_vec = None
        if check:
            self.validate()

    @classmethod
    def from_structure_constants(cls, field: Field, constants, unit,
                                 names: Optional[Sequence[str]] = None) -> "FiniteAlgebra":
        n = len(constants)
        table = {}
        for i in range(n):
            if len(constants[i]) != n:
                raise ValueError("structure constants must be n x n x n")
            for j in range(n):
                if len(constants[i][j]) != n:
                    raise ValueError("structure constants must be n x n x n")
                table[(i, j)] = [(k, c) for k, c in enumerate(constants[i][j])]
        return cls(field, n, table, unit, names)

    def structure_constants(self) -> list:
        n = self.dim
        out = [[[self.field.zero] * n for _ in range(n)] for _ in range(n)]
        for (i, j), entries in self.table.items():
            for k, c in entries:
                out[i][j][k] = c
        return out

    def validate(self):
        n, F = self.dim, self.field
        basis = [self.basis(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if self.mul(basis[i], basis[j]) != self.mul(basis[j], basis[i]):
                    raise ValueError(f"not commutative at ({i}, {j})")
        for i in range(n):
            if self.mul(self.unit, basis[i]) != basis[i]:
                raise ValueError(f"unit law fails on e{i}")
        for i, j, k in itertools.product(range(n), repeat=3):
            if self.mul(self.mul(basis[i], basis[j]), basis[k]) != \
                    self.mul(basis[i], self.mul(basis[j], basis[k])):
                raise ValueError(f"not associative at ({i}, {j}, {k})")
        del F

    def __repr__(self):
        return f"FiniteAlgebra({self.field!r}, dim={self.dim}, basis={list(self.names)})"

    # arithmetic on coordinate tuples
    def zero(self) -> Vec:
        return self.field.zeros(self.dim)

    def one(self) -> Vec:
        return self.unit

    def basis(self, i: int) -> Vec:
        return self.field.unit_vector(self.dim, i)

    def add(self, u: Vec, v: Vec) -> Vec:
        return self.field.add(u, v)

    def sub(self, u: Vec, v: Vec) -> Vec:
        return self.field.sub(u, v)

    def neg(self, u: Vec) -> Vec:
        return self.field.scale(self.field(-1), u)

    def scale(self, c, u: Vec) -> Vec:
        return self.field.scale(self.field(c), u)

    def mul(self, u: Vec, v: Vec) -> Vec:
        acc = [0] * self.dim
        table = self.table
        nv = [(j, b) for j, b in enumerate(v) if b]
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in nv:
                entry = table.get((i, j))
                if entry:
                    ab = a * b
                    for k, c in entry:
                        acc[k] += ab * c
        F = self.field
        if F.p is None:
            return tuple(Fraction(x) for x in acc)
        return tuple(x % F.p for x in acc)

    def power(self, u: Vec, k: int) -> Vec:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, u)
        return out

    def is_zero(self, u: Vec) -> bool:
        return not any(u)

    def is_nilpotent(self, u: Vec) -> bool:
        return self.is_zero(self.power(u, self.dim))

    def multiplication_rows(self, u: Vec) -> list[Vec]:
        """Rows of the matrix of x -> u*x: row i is u*e_i."""
        return [self.mul(u, self.basis(i)) for i in range(self.dim)]

    def is_unit(self, u: Vec) -> bool:
        return Subspace(self.field, self.dim, self.multiplication_rows(u)).dim == self.dim

    def trace(self, u: Vec):
        if self._trace_vec is None:
            tv = [0] * self.dim
            for (i, j), entries in self.table.items():
                for k, c in entries:
                    if k == j:
                        tv[i] += c
            self._trace_vec = tuple(self.field.norm(self.field(x)) for x in tv)
        return self.field.norm(sum((a * t for a, t in zip(u, self._trace_vec)), self.field.zero))

    def element(self, spec) -> Vec:
        """Coordinates from a list, a basis name, or a small linear expression
        such as ``"1 - 2*t + t2/3"``."""
        if isinstance(spec, (list, tuple)):
            if len(spec) != self.dim:
                raise ValueError(f"expected {self.dim} coordinates")
            return self.field.vector(spec)
        return parse_linear(self, str(spec))

    def format(self, u: Vec) -> str:
        terms = []
        for name, c in zip(self.names, u):
            if not c:
                continue
            cs = self.field.to_json(c)
            if name == "1":
                terms.append(cs)
            elif cs == "1":
                terms.append(name)
            elif cs == "-1":
                terms.append("-" + name)
            else:
                terms.append(f"{cs}*{name}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_linear(alg: FiniteAlgebra, text: str) -> Vec:
    F = alg.field
    out = list(alg.zero())
    index = {n: i for i, n in enumerate(alg.names)}
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse element {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2).strip().replace(" ", "")
        coef, name = Fraction(1), None
        for part in body.split("*"):
            num, _, den = part.partition("/")
            # basis names win over numbers: int("1_0") would parse as 10
            if num in index or not re.fullmatch(r"\d+", num):
                if name is not None:
                    raise ValueError(f"product of basis names in {text!r}")
                name = num
            else:
                coef *= int(num)
            if den:
                if not den.isdigit() or int(den) == 0:
                    raise ValueError(f"bad denominator in {text!r}")
                coef /= int(den)
        vec = alg.one() if name is None else alg.basis(index[name]) if name in index else None
        if vec is None:
            raise ValueError(f"unknown basis name {name!r}")
        out = list(F.axpy(F(sign * coef), vec, out))
    return tuple(out)


def truncated_polynomial_algebra(n: int, field: Optional[Field] = None, var: str = "t") -> FiniteAlgebra:
    """F[t]/(t^n) with basis 1, t, ..., t^{n-1}."""
    field = field or Field()
    table = {(i, j): [(i + j, 1)] for i in range(n) for j in range(n) if i + j < n}
    names = ["1"] + [var if i == 1 else f"{var}{i}" for i in range(1, n)]
    return FiniteAlgebra(field, n, table, field.unit_vector(n, 0), names)


def product_algebra(*algs: FiniteAlgebra) -> FiniteAlgebra:
    field = algs[0].field
    table, unit, names = {}, [], []
    off = 0
    for idx, a in enumerate(algs):
        for (i, j), entries in a.table.items():
            table[(i + off, j + off)] = [(k + off, c) for k, c in entries]
        unit += list(a.unit)
        names += [f"{n}_{idx}" for n in a.names]
        off += a.dim
    return FiniteAlgebra(field, off, table, unit, names)


def quadratic_algebra(d: int, field: Optional[Field] = None, var: str = "s") -> FiniteAlgebra:
    """F[s]/(s^2 - d)."""
    field = field or Field()
    table = {(0, 0): [(0, 1)], (0, 1): [(1, 1)], (1, 0): [(1, 1)], (1, 1): [(0, d)]}
    return FiniteAlgebra(field, 2, table, (1, 0), ["1", var])


# -- subalgebras -----------------------------------------------------------

class SubalgebraExtension:
    """A unital subalgebra A (a subspace) of a finite algebra B.

    ``degrees``/``truncation`` are set when B is a graded truncation; the
    closure search then only tries elements whose cubes are computed exactly.
    """

    def __init__(self, ambient: FiniteAlgebra, sub_basis: Iterable[Sequence], check: bool = True,
                 degrees: Optional[Sequence[int]] = None, truncation: Optional[int] = None,
                 nil_candidates: Optional[Sequence[Vec]] = None):
        self.ambient = ambient
        self.sub = Subspace(ambient.field, ambient.dim,
                            [ambient.field.vector(v) for v in sub_basis])
        self.degrees = tuple(degrees) if degrees is not None else None
        self.truncation = truncation
        self.nil_candidates = tuple(nil_candidates) if nil_candidates is not None else None
        if check:
            if not self.sub.contains(ambient.one()):
                raise ValueError("subalgebra does not contain 1")
            rows = self.sub.rows
            for i, u in enumerate(rows):
                for v in rows[i:]:
                    if not self.sub.contains(ambient.mul(u, v)):
                        raise ValueError("subspace is not closed under multiplication")

    @property
    def field(self) -> Field:
        return self.ambient.field

    @property
    def basis(self) -> tuple[Vec, ...]:
        return self.sub.rows

    def __eq__(self, other):
        return isinstance(other, SubalgebraExtension) and self.ambient is other.ambient \
            and self.sub == other.sub

    def __hash__(self):
        return hash(self.sub)

    def __repr__(self):
        return f"SubalgebraExtension(dim A={self.sub.dim}, dim B={self.ambient.dim})"

    def with_sub(self, sub_basis: Iterable[Sequence], check: bool = False) -> "SubalgebraExtension":
        return SubalgebraExtension(self.ambient, sub_basis, check=check, degrees=self.degrees,
                                   truncation=self.truncation, nil_candidates=self.nil_candidates)

    def is_trivial(self) -> bool:
        return self.sub.dim == self.ambient.dim

    # pair protocol, shared with MonoidAlgebraExtension
    def one(self):
        return self.ambient.one()

    def zero(self):
        return self.ambient.zero()

    def add(self, x, y):
        return self.ambient.add(x, y)

    def mul(self, x, y):
        return self.ambient.mul(x, y)

    def equal(self, x, y) -> bool:
        return tuple(x) == tuple(y)

    def in_ambient(self, x) -> bool:
        return len(x) == self.ambient.dim

    def in_subring(self, x) -> bool:
        return self.sub.contains(x)

    def contains_sub(self, x) -> bool:
        return self.sub.contains(x)


def subalgebra_generated(ext: SubalgebraExtension, extra: Sequence[Vec]) -> Subspace:
    """Smallest subalgebra containing A and ``extra`` (repeated products)."""
    B = ext.ambient
    span = ext.sub.extend(extra)
    while True:
        prods = [B.mul(u, v) for i, u in enumerate(span.rows) for v in span.rows[i:]]
        new = span.extend(prods)
        if new.dim == span.dim:
            return span
        span = new


# -- nil radical -----------------------------------------------------------

def nil_radical(b: FiniteAlgebra) -> Subspace:
    """nil(B) as the radical of the trace form T(x, y) = tr(L_{xy}); valid in
    characteristic 0."""
    if not b.field.is_rational:
        raise UnsupportedCharacteristic(
            f"trace-form nil radical needs characteristic 0, got {b.field!r}")
    n = b.dim
    gram = [[b.trace(b.mul(b.basis(i), b.basis(j))) for j in range(n)] for i in range(n)]
    return Subspace(b.field, n, nullspace(b.field, gram, n))


def nilpotent_brute_force(b: FiniteAlgebra, grid: int = 2) -> list[Vec]:
    """Every nilpotent coefficient vector with entries in [-grid, grid]."""
    out = []
    for coeffs in itertools.product(range(-grid, grid + 1), repeat=b.dim):
        v = b.field.vector(coeffs)
        if b.is_nilpotent(v):
            out.append(v)
    return out


# -- monoid algebra elements -----------------------------------------------

class MonoidAlgebraElement:
    """A finite sum  sum_n  c_n x^n  with c_n in B and n in Z^d."""

    __slots__ = ("algebra", "rank", "terms")

    def __init__(self, algebra: FiniteAlgebra, rank: int, terms=None):
        self.algebra = algebra
        self.rank = rank
        clean = {}
        for e, c in (terms.items() if isinstance(terms, dict) else (terms or ())):
            e = tuple(int(x) for x in e)
            if len(e) != rank:
                raise ValueError(f"exponent {e} does not have length {rank}")
            c = tuple(c)
            if e in clean:
                c = algebra.add(clean[e], c)
            clean[e] = c
        self.terms = {e: clean[e] for e in sorted(clean) if any(clean[e])}

    @classmethod
    def constant(cls, algebra: FiniteAlgebra, rank: int, b: Vec) -> "MonoidAlgebraElement":
        return cls(algebra, rank, {(0,) * rank: b})

    @classmethod
    def monomial(cls, algebra: FiniteAlgebra, exponent: Sequence[int], b: Optional[Vec] = None):
        b = algebra.one() if b is None else b
        return cls(algebra, len(exponent), {tuple(exponent): b})

    def _check(self, other):
        if not isinstance(other, MonoidAlgebraElement):
            raise TypeError("expected a MonoidAlgebraElement")
        if other.algebra is not self.algebra or other.rank != self.rank:
            raise ValueError("elements live in different monoid algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = self.algebra.add(out[e], c) if e in out else c
        return MonoidAlgebraElement(self.algebra, self.rank, out)

    def __neg__(self):
        return MonoidAlgebraElement(self.algebra, self.rank,
                                    {e: self.algebra.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MonoidAlgebraElement):
            return self.scale(other)
        self._check(other)
        B = self.algebra
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = B.mul(c1, c2)
                out[e] = B.add(out[e], p) if e in out else p
        return MonoidAlgebraElement(B, self.rank, out)

    __rmul__ = __mul__

    def scale(self, c) -> "MonoidAlgebraElement":
        return MonoidAlgebraElement(self.algebra, self.rank,
                                    {e: self.algebra.scale(c, v) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        out = self.one_like()
        for _ in range(k):
            out = out * self
        return out

    def one_like(self):
        return MonoidAlgebraElement.constant(self.algebra, self.rank, self.algebra.one())

    def zero_like(self):
        return MonoidAlgebraElement(self.algebra, self.rank, {})

    def __eq__(self, other):
        if not isinstance(other, MonoidAlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.rank == other.rank \
            and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> Vec:
        """Coefficient of x^0: the map B[N] -> B killing every nonzero monomial."""
        return self.terms.get((0,) * self.rank, self.algebra.zero())

    def support(self) -> list[tuple[int, ...]]:
        return list(self.terms)

    def map_exponents(self, f: Callable, rank: int) -> "MonoidAlgebraElement":
        out: dict = {}
        B = self.algebra
        for e, c in self.terms.items():
            e2 = tuple(f(e))
            out[e2] = B.add(out[e2], c) if e2 in out else c
        return MonoidAlgebraElement(B, rank, out)

    def homogeneous_part(self, grading: Sequence[int], degree: int) -> "MonoidAlgebraElement":
        return MonoidAlgebraElement(self.algebra, self.rank,
                                    {e: c for e, c in self.terms.items()
                                     if sum(w * x for w, x in zip(grading, e)) == degree})

    def max_degree(self, grading: Sequence[int]) -> int:
        return max((sum(w * x for w, x in zip(grading, e)) for e in self.terms), default=0)

    def __repr__(self):
        return f"MonoidAlgebraElement({self.format()})"

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            coef = self.algebra.format(c)
            if not any(e):
                parts.append(coef)
                continue
            mono = "x^" + (str(e[0]) if self.rank == 1 else str(list(e)))
            parts.append(mono if coef == "1" else f"({coef})*{mono}")
        return " + ".join(parts)

    def to_json(self):
        F = self.algebra.field
        return [{"exp": list(e), "coef": [F.to_json(x) for x in c]} for e, c in self.terms.items()]


def parse_monoid_element(algebra: FiniteAlgebra, rank: int, spec) -> MonoidAlgebraElement:
    """From ``[{"exp": [...], "coef": <element spec>}, ...]``."""
    terms = {}
    for t in spec:
        e = tuple(int(x) for x in t["exp"])
        c = algebra.element(t["coef"])
        terms[e] = algebra.add(terms[e], c) if e in terms else c
    return MonoidAlgebraElement(algebra, rank, terms)


# -- monoid algebra extensions ---------------------------------------------

class MonoidAlgebraExtension:
    """The pair A[M] ⊆ B[N] for A ⊆ B finite and M ⊆ N affine."""

    def __init__(self, ext: SubalgebraExtension, inner: AffineMonoid,
                 outer: Optional[AffineMonoid] = None, check: bool = True):
        outer = outer or inner
        if inner.ambient_rank != outer.ambient_rank:
            raise ValueError("monoids of different ranks")
        if check and not is_submonoid(inner, outer):
            raise ValueError(f"{inner!r} is not a submonoid of {outer!r}")
        self.base = ext
        self.inner = inner
        self.outer = outer
        self._trunc: dict = {}

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.base.ambient

    @property
    def rank(self) -> int:
        return self.outer.ambient_rank

    def __repr__(self):
        return f"MonoidAlgebraExtension({self.base!r}, M={self.inner!r}, N={self.outer!r})"

    def grading(self) -> tuple[int, ...]:
        w = self.outer.grading
        if w is None:
            raise ValueError(f"{self.outer!r} is not positive, so B[N] has no positive grading")
        return w

    def degree(self, e: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.grading(), e))

    def element(self, terms) -> MonoidAlgebraElement:
        return MonoidAlgebraElement(self.algebra, self.rank, terms)

    def constant(self, b: Vec) -> MonoidAlgebraElement:
        return MonoidAlgebraElement.constant(self.algebra, self.rank, b)

    def monomial(self, e: Sequence[int], b: Optional[Vec] = None) -> MonoidAlgebraElement:
        return MonoidAlgebraElement.monomial(self.algebra, e, b)

    # pair protocol
    def one(self):
        return self.constant(self.algebra.one())

    def zero(self):
        return self.element({})

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def equal(self, x, y) -> bool:
        return x == y

    def in_ambient(self, x: MonoidAlgebraElement) -> bool:
        return all(self.outer.contains(e) for e in x.terms)

    def in_subring(self, x: MonoidAlgebraElement) -> bool:
        return all(self.inner.contains(e) and self.base.sub.contains(c)
                   for e, c in x.terms.items())

    def truncation(self, degree: int) -> "Truncation":
        if degree not in self._trunc:
            self._trunc[degree] = Truncation(self, degree)
        return self._trunc[degree]

    def with_base(self, ext: SubalgebraExtension) -> "MonoidAlgebraExtension":
        return MonoidAlgebraExtension(ext, self.inner, self.outer, check=False)

    def with_monoids(self, inner: AffineMonoid, outer: Optional[AffineMonoid] = None):
        return MonoidAlgebraExtension(self.base, inner, outer or inner)


class Truncation:
    """B[N] modulo all monomials of degree > D, with A[M] inside it.

    The quotient is a finite algebra whose basis is indexed by pairs
    (i, n): basis vector e_i of B times the monomial x^n.
    """

    def __init__(self, mext: MonoidAlgebraExtension, degree: int):
        self.mext = mext
        self.degree_bound = degree
        B = mext.algebra
        w = mext.grading()
        self.grading = w
        monos = elements_up_to_degree(mext.outer, degree)
        self.monomials = monos
        mdeg = {n: sum(a * b for a, b in zip(w, n)) for n in monos}
        self.labels = [(i, n) for n in monos for i in range(B.dim)]
        self.index = {lab: k for k, lab in enumerate(self.labels)}
        self.degrees = tuple(mdeg[n] for _, n in self.labels)
        table = {}
        for n1 in monos:
            for n2 in monos:
                if mdeg[n1] + mdeg[n2] > degree:
                    continue
                n3 = tuple(a + b for a, b in zip(n1, n2))
                for (i, j), entries in B.table.items():
                    table[(self.index[(i, n1)], self.index[(j, n2)])] = \
                        [(self.index[(k, n3)], c) for k, c in entries]
        zero_mono = (0,) * mext.rank
        unit = [B.field.zero] * len(self.labels)
        for i, c in enumerate(B.unit):
            unit[self.index[(i, zero_mono)]] = c
        names = [B.names[i] if not any(n) else f"{B.names[i]}*x^{list(n)}" for i, n in self.labels]
        self.algebra = FiniteAlgebra(B.field, len(self.labels), table, unit, names, check=False)
        self.inner_monomials = [n for n in monos if mext.inner.contains(n)]
        self.sub = self.span_of(mext.base.sub.rows, self.inner_monomials)
        nil_cands = []
        if B.field.is_rational:
            nil_b = nil_radical(B)
            for n in monos:
                if 3 * mdeg[n] <= degree:
                    nil_cands += [self.encode(mext.monomial(n, z)) for z in nil_b.rows]
        self.ext = SubalgebraExtension(self.algebra, self.sub.rows, check=False,
                                       degrees=self.degrees, truncation=degree,
                                       nil_candidates=nil_cands)

    @property
    def field(self) -> Field:
        return self.algebra.field

    def span_of(self, coefficient_basis: Sequence[Vec], monomials: Iterable) -> Subspace:
        vecs = []
        for n in monomials:
            for a in coefficient_basis:
                v = [self.field.zero] * self.algebra.dim
                for i, c in enumerate(a):
                    if c:
                        v[self.index[(i, n)]] = c
                vecs.append(tuple(v))
        return Subspace(self.field, self.algebra.dim, vecs)

    def encode(self, x: MonoidAlgebraElement) -> Vec:
        v = [self.field.zero] * self.algebra.dim
        for e, c in x.terms.items():
            if sum(a * b for a, b in zip(self.grading, e)) > self.degree_bound:
                continue
            for i, a in enumerate(c):
                if a:
                    v[self.index[(i, e)]] = a
        return tuple(v)

    def decode(self, v: Sequence) -> MonoidAlgebraElement:
        terms: dict = {}
        B = self.mext.algebra
        for k, a in enumerate(v):
            if a:
                i, n = self.labels[k]
                c = terms.setdefault(n, [B.field.zero] * B.dim)
                c[i] = a
        return MonoidAlgebraElement(B, self.mext.rank, {n: tuple(c) for n, c in terms.items()})

    def component(self, subspace: Subspace, degree: int) -> Subspace:
        """The degree-``degree`` part of a graded subspace."""
        idx = [k for k, d in enumerate(self.degrees) if d == degree]
        coord = Subspace(self.field, self.algebra.dim,
                         [self.field.unit_vector(self.algebra.dim, k) for k in idx])
        return subspace.intersect(coord)


# -- subintegral closure of rings ------------------------------------------

@dataclass
class RingClosureResult:
    extension: SubalgebraExtension
    certified: str
    adjoined: list
    grid_bound: int
    rounds: int

    def verify_chain(self, start: SubalgebraExtension) -> bool:
        return verify_subintegral_chain(start, self.adjoined, self.extension)


def verify_subintegral_chain(start: SubalgebraExtension, chain: Sequence[Vec],
                             end: Optional[SubalgebraExtension] = None) -> bool:
    """Replay a chain of elementary subintegral steps: each b has b^2, b^3 in
    the previous subring, and the next subring is previous + previous*b."""
    B = start.ambient
    cur = start.sub
    for b in chain:
        b2 = B.mul(b, b)
        if not (cur.contains(b2) and cur.contains(B.mul(b2, b))):
            return False
        cur = cur.extend([B.mul(a, b) for a in cur.rows])
    return end is None or cur == end.sub


def _candidate_groups(ext: SubalgebraExtension, current: Subspace) -> list[list[int]]:
    comp = current.complement_indices()
    if ext.degrees is None:
        return [comp] if comp else []
    cap = ext.truncation // 3
    groups: dict = {}
    for j in comp:
        d = ext.degrees[j]
        if d <= cap:
            groups.setdefault(d, []).append(j)
    return [groups[d] for d in sorted(groups)]


def _grid_candidates(F: Field, n: int, idx: list[int], c: int):
    k = len(idx)
    coeffs = [x for x in range(-c, c + 1) if x]
    if (2 * c + 1) ** k <= GRID_CAP:
        combos = itertools.product(range(-c, c + 1), repeat=k)
        for t in combos:
            if sum(1 for x in t if x) >= 2:
                v = [F.zero] * n
                for j, x in zip(idx, t):
                    v[j] = F(x)
                yield tuple(v)
    else:
        for a, b in itertools.combinations(idx, 2):
            for x, y in itertools.product(coeffs, repeat=2):
                v = [F.zero] * n
                v[a], v[b] = F(x), F(y)
                yield tuple(v)


def _candidates(ext: SubalgebraExtension, current: Subspace, c: int):
    B = ext.ambient
    F = B.field
    groups = _candidate_groups(ext, current)
    for g in groups:
        for j in g:
            yield B.basis(j)
    if ext.nil_candidates is not None:
        yield from ext.nil_candidates
    elif F.is_rational and ext.degrees is None:
        yield from nil_radical(B).rows
    for g in groups:
        yield from _grid_candidates(F, B.dim, g, c)


def _is_subintegral_over(B: FiniteAlgebra, sub: Subspace, b: Vec) -> bool:
    b2 = B.mul(b, b)
    return sub.contains(b2) and sub.contains(B.mul(b2, b))


def subintegral_closure_ring(ext: SubalgebraExtension, grid_bound: int = DEFAULT_GRID_BOUND,
                             rounds: Optional[int] = None,
                             stop_at_first: bool = False) -> RingClosureResult:
    """Grid-search fixpoint for the subintegral closure of A in B.

    Tries complement basis vectors, nil(B), and integer combinations of
    complement vectors with coefficients in [-c, c]; adjoins any b with
    b^2, b^3 in the current ring.  The answer is a certified lower bound:
    ``search-certified`` means the last full sweep found nothing.
    """
    B = ext.ambient
    cur = ext.sub
    chain: list[Vec] = []
    max_rounds = B.dim if rounds is None else rounds
    n_rounds = 0
    certified = "search-certified"
    while True:
        found = None
        for b in _candidates(ext, cur, grid_bound):
            if cur.contains(b):
                continue
            if _is_subintegral_over(B, cur, b):
                found = b
                break
        if found is None:
            break
        chain.append(found)
        cur = cur.extend([B.mul(a, found) for a in cur.rows])
        n_rounds += 1
        if stop_at_first:
            certified = "stopped-at-first"
            break
        if n_rounds >= max_rounds and cur.dim < B.dim:
            certified = "round-limit"
            break
    result = ext.with_sub(cur.rows)
    return RingClosureResult(result, certified, chain, grid_bound, n_rounds)


def is_subintegrally_closed_ring(ext: SubalgebraExtension, grid_bound: int = DEFAULT_GRID_BOUND,
                                 rounds: Optional[int] = None) -> tuple[bool, str, list]:
    """(closed?, certification, witness chain).  A found witness is a proof of
    non-closedness; ``closed`` is only search-certified."""
    res = subintegral_closure_ring(ext, grid_bound, rounds, stop_at_first=True)
    if res.adjoined:
        return False, "witness", res.adjoined
    return True, "search-certified", []


# -- monomial extensions ---------------------------------------------------

@dataclass(frozen=True)
class MonomialExtension:
    """k[M'] ⊆ k[N'] with M' ⊆ N'."""
    field: Field
    inner: AffineMonoid
    outer: AffineMonoid

    def __post_init__(self):
        if not is_submonoid(self.inner, self.outer):
            raise ValueError(f"{self.inner!r} is not a submonoid of {self.outer!r}")


def closure_of_monomial_extension(ext: MonomialExtension,
                                  degree_bound: Optional[int] = None) -> MonomialExtension:
    """k[N' ∩ sn(M')], the subintegral closure of k[M'] in k[N'] (coefficients
    form a field, hence reduced and closed in themselves)."""
    inner = closure_via_seminormalization(ext.inner, ext.outer, degree_bound)
    return MonomialExtension(ext.field, inner, ext.outer)


# -- harnesses -------------------------------------------------------------

def intersection_lemma_check(ext: SubalgebraExtension, m: AffineMonoid,
                             degree_bound: int = 6) -> CheckReport:
    """Check A[gp(M)] ∩ B[M] = A[M] monomial by monomial over a box of
    exponents |u_i| <= D.  Both sides are direct sums over monomials, so the
    comparison is exact linear algebra per exponent."""
    if not m.is_positive:
        raise ValueError("M must be positive")
    gp = group_of_fractions(m)
    B = ext.ambient
    F = B.field
    full = Subspace(F, B.dim, [B.basis(i) for i in range(B.dim)])
    zero = Subspace(F, B.dim)
    failures, checked = [], 0
    for u in itertools.product(range(-degree_bound, degree_bound + 1), repeat=m.ambient_rank):
        in_gp, in_m = gp.contains(u), m.contains(u)
        lhs_a = ext.sub if in_gp else zero
        lhs_b = full if in_m else zero
        lhs = lhs_a.intersect(lhs_b)
        rhs = ext.sub if in_m else zero
        checked += 1
        if lhs != rhs:
            failures.append(list(u))
    return CheckReport("intersection-lemma", not failures,
                       {"monomials_checked": checked, "failures": failures,
                        "degree_bound": degree_bound})


def polynomial_extension(ext: SubalgebraExtension, r: int) -> MonoidAlgebraExtension:
    free = AffineMonoid.free(r)
    return MonoidAlgebraExtension(ext, free, free)


def zr_transfer_check(ext: SubalgebraExtension, r: int = 1, grid_bound: int = DEFAULT_GRID_BOUND,
                      rounds: Optional[int] = None, degree_bound: int = 6) -> CheckReport:
    """A closed in B  <=>  A[Z_+^r] closed in B[Z_+^r], the latter decided on
    the degree-D truncation (candidates of degree <= D/3 so that cubes are
    exact)."""
    base_closed, base_cert, base_w = is_subintegrally_closed_ring(ext, grid_bound, rounds)
    trunc = polynomial_extension(ext, r).truncation(degree_bound)
    lift_closed, lift_cert, lift_w = is_subintegrally_closed_ring(trunc.ext, grid_bound, rounds)
    F = ext.field
    return CheckReport("zr-transfer", base_closed == lift_closed, {
        "r": r, "degree_bound": degree_bound, "grid_bound": grid_bound,
        "base_closed": base_closed, "base_certified": base_cert,
        "lifted_closed": lift_closed, "lifted_certified": lift_cert,
        "base_witness": [[F.to_json(x) for x in b] for b in base_w],
        "lifted_witness": [trunc.decode(b).to_json() for b in lift_w],
    })


@dataclass
class GradedNilRadical:
    degree_bound: int
    components: dict  # degree -> list of MonoidAlgebraElement basis elements
    consistency: CheckReport


def nil_radical_of_monoid_algebra(b: FiniteAlgebra, n: AffineMonoid, degree_bound: int = 3,
                                  samples: int = 50, seed: int = 0) -> GradedNilRadical:
    """nil(B)[N] truncated to degree D, plus a sampled check that an element of
    B[N] is nilpotent exactly when all of its coefficients lie in nil(B).

    Nilpotency is decided exactly: any element of nil(B)[N] has f^dim(B) = 0,
    so f is nilpotent iff f^dim(B) = 0.
    """
    nil_b = nil_radical(b)
    w = n.grading
    if w is None:
        raise ValueError("N must be positive")
    rank = n.ambient_rank
    monos = elements_up_to_degree(n, degree_bound)
    comps: dict = {}
    for mono in monos:
        d = sum(x * y for x, y in zip(w, mono))
        comps.setdefault(d, []).extend(
            MonoidAlgebraElement.monomial(b, mono, z) for z in nil_b.rows)
    rng = random.Random(seed)
    mismatches = []
    basis_pool = list(nil_b.rows) + [b.basis(i) for i in range(b.dim)]
    for _ in range(samples):
        terms = {}
        for mono in rng.sample(monos, min(len(monos), rng.randint(1, 3))):
            vec = b.zero()
            for _ in range(rng.randint(1, 2)):
                vec = b.add(vec, b.scale(rng.randint(-2, 2), rng.choice(basis_pool)))
            terms[mono] = vec
        f = MonoidAlgebraElement(b, rank, terms)
        predicted = all(nil_b.contains(c) for c in f.terms.values())
        actual = (f ** b.dim).is_zero()
        if predicted != actual:
            mismatches.append(f.format())
    for d, elems in comps.items():
        for z in elems:
            if not (z ** b.dim).is_zero():
                mismatches.append(z.format())
    return GradedNilRadical(degree_bound, comps,
                            CheckReport("nil-radical-graded", not mismatches,
                                        {"samples": samples, "seed": seed,
                                         "mismatches": mismatches}))
