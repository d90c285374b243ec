"""Affine monoids inside Z^d.

Monoids are written additively: the multiplicative x^2, x^3 of the ring
side become 2x, 3x here.  Every monoid is a finitely generated submonoid of
Z^d, so it is automatically cancellative and torsion-free.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .lattice_kernel import Lattice, Vector, solve_nonnegative

DEFAULT_BOUND_RANK1 = 32
DEFAULT_BOUND_PER_COORD = 16


def default_degree_bound(rank: int) -> int:
    return DEFAULT_BOUND_RANK1 if rank == 1 else DEFAULT_BOUND_PER_COORD


def _vec(v: Iterable[int]) -> Vector:
    return tuple(int(x) for x in v)


def _add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _scale(k: int, a: Vector) -> Vector:
    return tuple(k * x for x in a)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


# -- exact rational feasibility -------------------------------------------

def _fm_solve(rows: list[tuple[list[Fraction], Fraction]], nvars: int) -> Optional[list[Fraction]]:
    """Find x with a.x >= b for every (a, b) in rows, or None if infeasible.

    Plain Fourier-Motzkin elimination followed by back substitution.  Only
    meant for the handful of variables that appear in monoid questions.
    """
    stages = [rows]
    cur = rows
    for k in range(nvars - 1, -1, -1):
        pos = [r for r in cur if r[0][k] > 0]
        neg = [r for r in cur if r[0][k] < 0]
        nxt = [r for r in cur if r[0][k] == 0]
        for (ap, bp), (an, bn) in itertools.product(pos, neg):
            lp, ln = -an[k], ap[k]
            a = [lp * x + ln * y for x, y in zip(ap, an)]
            nxt.append((a, lp * bp + ln * bn))
        # drop exact duplicates to slow the blow-up a little
        seen, dedup = set(), []
        for a, b in nxt:
            key = (tuple(a), b)
            if key not in seen:
                seen.add(key)
                dedup.append((a, b))
        cur = dedup
        stages.append(cur)
    if any(b > 0 for _, b in cur):
        return None
    x = [Fraction(0)] * nvars
    for k in range(nvars):
        system = stages[nvars - 1 - k]
        lo, hi = None, None
        for a, b in system:
            if a[k] == 0:
                continue
            rest = sum((a[i] * x[i] for i in range(k)), Fraction(0))
            bound = (b - rest) / a[k]
            if a[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is None and hi is None:
            val = Fraction(0)
        elif lo is None:
            val = Fraction(min(0, math.floor(hi)))
        elif hi is None:
            val = Fraction(max(0, math.ceil(lo)))
        else:
            c = math.ceil(lo)
            val = Fraction(c) if c <= hi else (lo + hi) / 2
            if lo <= 0 <= hi:
                val = Fraction(0)
        x[k] = val
    return x


def _in_rational_cone(gens: Sequence[Vector], v: Vector) -> bool:
    """Is v a nonnegative rational combination of gens?"""
    n = len(gens)
    if n == 0:
        return not any(v)
    rows = []
    for i in range(n):
        a = [Fraction(0)] * n
        a[i] = Fraction(1)
        rows.append((a, Fraction(0)))
    for c in range(len(v)):
        a = [Fraction(g[c]) for g in gens]
        rows.append((a, Fraction(v[c])))
        rows.append(([-x for x in a], Fraction(-v[c])))
    return _fm_solve(rows, n) is not None


# -- the monoid type -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AffineMonoid:
    """Submonoid of Z^d generated by a finite list of nonzero vectors."""
    ambient_rank: int
    generators: tuple[Vector, ...]

    def __init__(self, generators: Iterable[Sequence[int]], ambient_rank: Optional[int] = None):
        gens = [_vec(g) for g in generators]
        if ambient_rank is None:
            if not gens:
                raise ValueError("ambient_rank is required for the trivial monoid")
            ambient_rank = len(gens[0])
        for g in gens:
            if len(g) != ambient_rank:
                raise ValueError(f"generator {g} does not have length {ambient_rank}")
            if not any(g):
                raise ValueError("the zero vector is not allowed as a generator")
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generators")
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "generators", tuple(sorted(gens)))

    @classmethod
    def numerical(cls, *gens: int) -> "AffineMonoid":
        return cls([(g,) for g in gens], 1)

    @classmethod
    def free(cls, d: int) -> "AffineMonoid":
        return cls([tuple(int(i == j) for j in range(d)) for i in range(d)], d)

    def __eq__(self, other):
        if not isinstance(other, AffineMonoid):
            return NotImplemented
        return (self.ambient_rank, self.generators) == (other.ambient_rank, other.generators)

    def __hash__(self):
        return hash((self.ambient_rank, self.generators))

    def __repr__(self):
        if self.ambient_rank == 1:
            return "<" + ",".join(str(g[0]) for g in self.generators) + ">"
        return "<" + ",".join(str(g) for g in self.generators) + ">"

    @cached_property
    def grading(self) -> Optional[Vector]:
        return grading_vector(self)

    @property
    def is_positive(self) -> bool:
        return self.grading is not None

    def degree(self, v: Sequence[int]) -> int:
        if self.grading is None:
            raise ValueError(f"{self!r} has no positive grading")
        return _dot(self.grading, v)

    def contains(self, v: Sequence[int], degree_bound: Optional[int] = None) -> bool:
        return contains(self, v, degree_bound)

    def elements_up_to(self, degree: int) -> list[Vector]:
        return elements_up_to_degree(self, degree)

    def with_generators(self, extra: Iterable[Sequence[int]]) -> "AffineMonoid":
        return AffineMonoid(list(self.generators) + [_vec(e) for e in extra], self.ambient_rank)


def contains(m: AffineMonoid, v: Sequence[int], degree_bound: Optional[int] = None) -> bool:
    """Is v a nonnegative integer combination of the generators?

    Exact for positive monoids; otherwise the coefficient sum is capped by
    ``degree_bound``.
    """
    v = _vec(v)
    if len(v) != m.ambient_rank:
        raise ValueError(f"vector of length {len(v)} tested against rank {m.ambient_rank}")
    if not any(v):
        return True
    if not m.generators:
        return False
    w = m.grading
    if w is not None:
        return solve_nonnegative(m.generators, v, grading=w) is not None
    if degree_bound is None:
        degree_bound = default_degree_bound(m.ambient_rank)
    return solve_nonnegative(m.generators, v, degree_bound=degree_bound) is not None


def group_of_fractions(m: AffineMonoid) -> Lattice:
    return Lattice.generated_by(m.generators, m.ambient_rank)


def grading_vector(m: AffineMonoid, search_norm: int = 8) -> Optional[Vector]:
    """A w with <w, g> > 0 for every generator g, or None if M is not positive.

    Feasibility is decided exactly by Fourier-Motzkin.  When feasible, the
    lexicographically least integer w of smallest max-norm (up to
    ``search_norm``) is returned; failing that, the rational witness is scaled
    to integers.
    """
    d = m.ambient_rank
    gens = m.generators
    if not gens:
        return tuple([0] * d)
    rows = [([Fraction(x) for x in g], Fraction(1)) for g in gens]
    sol = _fm_solve(rows, d)
    if sol is None:
        return None
    for k in range(1, search_norm + 1):
        for w in itertools.product(range(-k, k + 1), repeat=d):
            if max(abs(x) for x in w) == k and all(_dot(w, g) > 0 for g in gens):
                return w
    den = math.lcm(*(x.denominator for x in sol))
    return tuple(int(x * den) for x in sol)


def lineality_generators(m: AffineMonoid) -> list[Vector]:
    """Generators g with -g in the rational cone of M."""
    return [g for g in m.generators if _in_rational_cone(m.generators, _scale(-1, g))]


def units(m: AffineMonoid) -> Lattice:
    """U(M) as a sublattice of Z^d.

    Generators lying in the lineality space admit a strictly positive integer
    relation, so each of them is a unit; conversely any unit is a combination
    of such generators.  Hence U(M) is the group they generate.
    """
    return Lattice.generated_by(lineality_generators(m), m.ambient_rank)


def is_positive(m: AffineMonoid) -> bool:
    return units(m).is_zero()


def elements_up_to_degree(m: AffineMonoid, degree: int) -> list[Vector]:
    """All elements of M of grading degree <= ``degree`` (coefficient sum for
    non-positive monoids), sorted by degree then lexicographically."""
    zero = tuple([0] * m.ambient_rank)
    w = m.grading
    if w is not None:
        deg = lambda v: _dot(w, v)  # noqa: E731
        gdeg = [deg(g) for g in m.generators]
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for e in frontier:
                de = deg(e)
                for g, dg in zip(m.generators, gdeg):
                    if de + dg <= degree:
                        f = _add(e, g)
                        if f not in seen:
                            seen.add(f)
                            nxt.append(f)
            frontier = nxt
        return sorted(seen, key=lambda v: (deg(v), v))
    seen = {zero}
    frontier = [zero]
    for _ in range(degree):
        nxt = []
        for e in frontier:
            for g in m.generators:
                f = _add(e, g)
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    return sorted(seen, key=lambda v: (sum(abs(x) for x in v), v))


def minimal_generators(gens: Iterable[Sequence[int]], ambient_rank: int,
                       degree_bound: Optional[int] = None) -> AffineMonoid:
    """Drop generators expressible by the others."""
    mon = AffineMonoid(set(_vec(g) for g in gens), ambient_rank)
    w = mon.grading
    if w is not None:
        kept: list[Vector] = []
        for g in sorted(mon.generators, key=lambda v: (_dot(w, v), v)):
            if not kept or solve_nonnegative(kept, g, grading=w) is None:
                kept.append(g)
        return AffineMonoid(kept, ambient_rank)
    if degree_bound is None:
        degree_bound = default_degree_bound(ambient_rank)
    kept = list(mon.generators)
    for g in list(mon.generators):
        others = [h for h in kept if h != g]
        if others and solve_nonnegative(others, g, degree_bound=degree_bound) is not None:
            kept = others
    return AffineMonoid(kept, ambient_rank)


def is_elementary_subintegral_element(m: AffineMonoid, x: Sequence[int]) -> bool:
    x = _vec(x)
    if len(x) != m.ambient_rank:
        raise ValueError("rank mismatch")
    return m.contains(_scale(2, x)) and m.contains(_scale(3, x))


def is_submonoid(m: AffineMonoid, n: AffineMonoid, degree_bound: Optional[int] = None) -> bool:
    if m.ambient_rank != n.ambient_rank:
        return False
    return all(n.contains(g, degree_bound) for g in m.generators)


# -- closures --------------------------------------------------------------

@dataclass(frozen=True)
class ClosureResult:
    monoid: AffineMonoid
    exact: bool
    degree_bound: int
    adjoined: tuple[Vector, ...] = field(default=())

    @property
    def certified(self) -> str:
        return "exact" if self.exact else f"up-to-degree({self.degree_bound})"


def _rank_one_frame(m: AffineMonoid) -> Optional[tuple[Vector, list[int]]]:
    """If gp(M) has rank 1 return (u, t) with generators g_i = t_i * u."""
    lat = group_of_fractions(m)
    if lat.rank != 1:
        return None
    u = lat.basis_vectors()[0]
    ts = [lat.coordinates(g)[0] for g in m.generators]
    if min(ts) < 0:
        u = _scale(-1, u)
        ts = [-t for t in ts]
    return u, ts


def _frobenius(ts: Sequence[int]) -> int:
    """Largest integer not in the numerical semigroup <ts> (gcd 1), -1 if none."""
    ts = sorted(set(ts))
    if ts[0] == 1:
        return -1
    a = ts[0]
    # Round-robin shortest paths over residues mod a (Wilf/Nijenhuis style).
    best = [math.inf] * a
    best[0] = 0
    changed = True
    while changed:
        changed = False
        for r in range(a):
            if best[r] is math.inf:
                continue
            for t in ts[1:]:
                s = best[r] + t
                if s < best[s % a]:
                    best[s % a] = s
                    changed = True
    return max(best) - a


def _certify(result: AffineMonoid, outer: Optional[AffineMonoid], swept: int,
             degree_of) -> bool:
    """Sound sufficient conditions for 'no further subintegral element exists'.

    * result == outer: nothing left to adjoin.
    * generators form a basis of gp(result): the monoid is free, hence
      seminormal, and any x in gp with 2x in it already lies in it.
    * gp(result) has rank 1: every missing element of gp lies below the
      Frobenius bound, so the sweep covered all of them.
    """
    if outer is not None and all(result.contains(g) for g in outer.generators):
        return True
    lat = group_of_fractions(result)
    if lat.rank == len(result.generators):
        return True
    frame = _rank_one_frame(result)
    if frame is not None:
        u, ts = frame
        g = math.gcd(*ts)
        f = _frobenius([t // g for t in ts])
        if f < 0:
            return True
        return degree_of(_scale(g * f, u)) <= swept
    return False


def _fixpoint(m: AffineMonoid, candidates: list[Vector]) -> tuple[AffineMonoid, list[Vector]]:
    current = minimal_generators(m.generators, m.ambient_rank) if m.generators else m
    adjoined: list[Vector] = []
    while True:
        added = False
        lat = group_of_fractions(current)
        for x in candidates:
            if current.contains(x) or not lat.contains(x):
                continue
            if current.contains(_scale(2, x)) and current.contains(_scale(3, x)):
                current = minimal_generators(current.generators + (x,), m.ambient_rank)
                lat = group_of_fractions(current)
                adjoined.append(x)
                added = True
        if not added:
            return current, adjoined


def subintegral_closure_monoid(m: AffineMonoid, n: AffineMonoid,
                               degree_bound: Optional[int] = None) -> ClosureResult:
    """Subintegral closure of M in N by fixpoint over elements of N of degree
    <= D, each adjoined x satisfying 2x, 3x in the current monoid."""
    if m.ambient_rank != n.ambient_rank:
        raise ValueError("rank mismatch")
    if degree_bound is None:
        degree_bound = default_degree_bound(m.ambient_rank)
    if not is_submonoid(m, n, degree_bound):
        raise ValueError(f"{m!r} is not a submonoid of {n!r}")
    cands = [x for x in elements_up_to_degree(n, degree_bound) if any(x)]
    result, adjoined = _fixpoint(m, cands)
    if n.grading is not None:
        deg = lambda v: _dot(n.grading, v)  # noqa: E731
        exact = _certify(result, n, degree_bound, deg)
    else:
        exact = all(result.contains(g, degree_bound) for g in n.generators)
    return ClosureResult(result, exact, degree_bound, tuple(adjoined))


def is_subintegrally_closed_monoid(m: AffineMonoid, n: AffineMonoid,
                                   degree_bound: Optional[int] = None) -> tuple[bool, str]:
    res = subintegral_closure_monoid(m, n, degree_bound)
    return (not res.adjoined), res.certified


def _lattice_box(lat: Lattice, bound: int) -> list[Vector]:
    d = lat.ambient_rank
    pts = [v for v in itertools.product(range(-bound, bound + 1), repeat=d)
           if any(v) and lat.contains(v)]
    return sorted(pts, key=lambda v: (sum(abs(x) for x in v), v))


def seminormalization(m: AffineMonoid, degree_bound: Optional[int] = None) -> ClosureResult:
    """sn(M): the subintegral closure of M in gp(M), searching x in gp(M) with
    coordinates bounded by D in absolute value."""
    if degree_bound is None:
        degree_bound = default_degree_bound(m.ambient_rank)
    if not m.generators:
        return ClosureResult(m, True, degree_bound)
    lat = group_of_fractions(m)
    cands = _lattice_box(lat, degree_bound)
    w = m.grading
    if w is not None:
        # 2x in M forces <w, x> >= 0
        cands = [x for x in cands if _dot(w, x) > 0]
    result, adjoined = _fixpoint(m, cands)
    exact = _certify(result, None, degree_bound, lambda v: max(abs(x) for x in v))
    return ClosureResult(result, exact, degree_bound, tuple(adjoined))


def intersect_with_monoid(n: AffineMonoid, s: AffineMonoid,
                          degree_bound: Optional[int] = None) -> AffineMonoid:
    """Generators of {x in N : x in S}, found among elements of N of degree <= D."""
    if n.ambient_rank != s.ambient_rank:
        raise ValueError("rank mismatch")
    if degree_bound is None:
        degree_bound = default_degree_bound(n.ambient_rank)
    inside = [x for x in elements_up_to_degree(n, degree_bound)
              if any(x) and s.contains(x, degree_bound)]
    if not inside:
        return AffineMonoid([], n.ambient_rank)
    return minimal_generators(inside, n.ambient_rank, degree_bound)


def closure_via_seminormalization(m: AffineMonoid, n: AffineMonoid,
                                  degree_bound: Optional[int] = None) -> AffineMonoid:
    """N ∩ sn(M); agrees with :func:`subintegral_closure_monoid` on every
    instance we have tried."""
    sn = seminormalization(m, degree_bound).monoid
    return intersect_with_monoid(n, sn, degree_bound)
