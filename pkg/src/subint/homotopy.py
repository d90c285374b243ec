"""Graded pairs R ⊆ S and the homotopy morphisms between them.

For a graded pair R = A[M] ⊆ S = B[N] (grading by a vector w on N):

* ``pi``  (R, S) -> (R0, S0)      keep the degree-0 part
* ``j``   (R0, S0) -> (R, S)      inclusion
* ``i``   (R, S) -> (R[X], S[X])  inclusion
* ``e0``, ``e1``                  substitute X = 0, X = 1
* ``w``   (R, S) -> (R[X], S[X])  s0 + s1 + ... -> s0 + s1 X + s2 X^2 + ...

R[X] ⊆ S[X] is the monoid-algebra pair over M × Z+ ⊆ N × Z+, so every map
is an exponent map on sparse elements.  All checks run in exact arithmetic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .algebra import (CheckReport, MonoidAlgebraElement, MonoidAlgebraExtension)
from .ideals import (ModuleContext, Submodule, _principal_family, is_invertible,
                     pi_map, theta_map)
from .monoid import AffineMonoid, elements_up_to_degree

SAMPLE_COEFF = 3


class RingPair:
    """A ring pair (subring, ambient) of monoid-algebra elements.

    ``degree_zero`` restricts the pair to its degree-0 part (R0, S0).
    """

    def __init__(self, name: str, mext: MonoidAlgebraExtension, degree_zero: bool = False,
                 grading: Optional[Sequence[int]] = None):
        self.name = name
        self.mext = mext
        self.degree_zero = degree_zero
        self.grading = tuple(grading) if grading is not None else mext.grading()

    def __repr__(self):
        return f"RingPair({self.name})"

    def degree(self, e) -> int:
        return sum(a * b for a, b in zip(self.grading, e))

    def _deg_ok(self, x: MonoidAlgebraElement) -> bool:
        return not self.degree_zero or all(self.degree(e) == 0 for e in x.terms)

    def one(self):
        return self.mext.one()

    def in_ambient(self, x) -> bool:
        return (isinstance(x, MonoidAlgebraElement) and x.rank == self.mext.rank
                and self.mext.in_ambient(x) and self._deg_ok(x))

    def in_subring(self, x) -> bool:
        return self.in_ambient(x) and self.mext.in_subring(x)

    def context(self, degree_bound: int) -> ModuleContext:
        if self.degree_zero:
            return ModuleContext.finite(self.mext.base, label=self.name)
        return ModuleContext.graded(self.mext, degree_bound, label=self.name)

    def sample(self, rng: random.Random, degree_bound: int, subring: bool = False,
               max_terms: int = 4) -> MonoidAlgebraElement:
        """Random element: supports uniform over monomials of degree <= D,
        coefficients in {-3..3} (on the basis of A for subring samples)."""
        mon = self.mext.inner if subring else self.mext.outer
        D = 0 if self.degree_zero else degree_bound
        monos = _monomials(mon, self.grading, D)
        if self.degree_zero:
            monos = [e for e in monos if self.degree(e) == 0]
        base = self.mext.base
        B = base.ambient
        F = B.field
        basis = base.sub.rows if subring else [B.basis(k) for k in range(B.dim)]
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = rng.choice(monos)
            c = B.zero()
            for v in basis:
                c = B.add(c, B.scale(F(rng.randint(-SAMPLE_COEFF, SAMPLE_COEFF)), v))
            terms[e] = B.add(terms[e], c) if e in terms else c
        return self.mext.element(terms)


_MONO_CACHE: dict = {}


def _monomials(mon: AffineMonoid, grading, D: int) -> list:
    key = (mon, tuple(grading), D)
    if key not in _MONO_CACHE:
        w = tuple(grading)
        if mon.grading is not None and tuple(mon.grading) == w:
            elems = elements_up_to_degree(mon, D)
        else:
            # enumerate by the monoid's own grading, then filter by w
            own = mon.grading
            bound = D * max(1, max((sum(a * b for a, b in zip(own, g)) for g in mon.generators),
                                   default=1))
            elems = [e for e in elements_up_to_degree(mon, bound)
                     if sum(a * b for a, b in zip(w, e)) <= D]
        _MONO_CACHE[key] = [tuple(e) for e in elems]
    return _MONO_CACHE[key]


def _product_with_zplus(m: AffineMonoid) -> AffineMonoid:
    d = m.ambient_rank
    gens = [tuple(g) + (0,) for g in m.generators] + [(0,) * d + (1,)]
    return AffineMonoid(gens, d + 1)


class GradedExtension:
    """R = A[M] ⊆ S = B[N] graded by ``w`` (default: the grading of N), with
    the derived pairs (R0, S0) and (R[X], S[X])."""

    def __init__(self, mext: MonoidAlgebraExtension, degree_bound: int = 6,
                 grading: Optional[Sequence[int]] = None):
        self.mext = mext
        self.degree_bound = degree_bound
        self.grading = tuple(grading) if grading is not None else mext.grading()
        if any(self.degree_of(g) < 0 for g in mext.outer.generators):
            raise ValueError("grading must be nonnegative on N")
        self.pair = RingPair("(R,S)", mext, grading=self.grading)
        self.zero_pair = RingPair("(R0,S0)", mext, degree_zero=True, grading=self.grading)
        poly = MonoidAlgebraExtension(mext.base, _product_with_zplus(mext.inner),
                                      _product_with_zplus(mext.outer), check=False)
        self.poly_pair = RingPair("(R[X],S[X])", poly, grading=self.grading + (1,))

    def degree_of(self, e) -> int:
        return sum(a * b for a, b in zip(self.grading, e))

    def check_invariants(self) -> CheckReport:
        """R_i ⊆ S_i for i <= D and additivity of degrees on generators."""
        t = self.mext.truncation(self.degree_bound)
        full = t.span_of([t.mext.algebra.basis(k) for k in range(t.mext.algebra.dim)],
                         t.monomials)
        graded_ok = all(t.component(t.sub, i).issubspace(t.component(full, i))
                        for i in range(self.degree_bound + 1))
        gens = self.mext.outer.generators
        additive = all(self.degree_of(tuple(a + b for a, b in zip(g, h)))
                       == self.degree_of(g) + self.degree_of(h) for g in gens for h in gens)
        return CheckReport("graded-invariants", graded_ok and additive,
                           {"components_nested": graded_ok, "degree_additive": additive})


@dataclass(frozen=True)
class ExtensionMorphism:
    name: str
    source: RingPair
    target: RingPair
    fn: Callable

    def __call__(self, x):
        return self.fn(x)

    def compose(self, inner: "ExtensionMorphism") -> "ExtensionMorphism":
        """self ∘ inner."""
        if inner.target is not self.source:
            raise ValueError(f"cannot compose {self.name} after {inner.name}: "
                             f"{inner.target!r} is not {self.source!r}")
        f, g = self.fn, inner.fn
        return ExtensionMorphism(f"{self.name}∘{inner.name}", inner.source, self.target,
                                 lambda x: f(g(x)))

    def check_homomorphism(self, samples: Sequence) -> list[str]:
        bad = []
        one = self.source.one()
        if self(one) != self.target.one():
            bad.append(f"{self.name}(1) != 1")
        for x, y in zip(samples, samples[1:]):
            if self(x + y) != self(x) + self(y):
                bad.append(f"{self.name} not additive on {x.format()}, {y.format()}")
            if self(x * y) != self(x) * self(y):
                bad.append(f"{self.name} not multiplicative on {x.format()}, {y.format()}")
        for x in samples:
            if not self.target.in_ambient(self(x)):
                bad.append(f"{self.name}({x.format()}) leaves the target ring")
        return bad

    def check_subring(self, samples: Sequence) -> list[str]:
        return [f"{self.name}({x.format()}) = {self(x).format()} leaves the target subring"
                for x in samples if not self.target.in_subring(self(x))]


def identity(pair: RingPair) -> ExtensionMorphism:
    return ExtensionMorphism("id", pair, pair, lambda x: x)


def degree_zero_projection(ext: GradedExtension) -> ExtensionMorphism:
    w = ext.grading
    return ExtensionMorphism("pi", ext.pair, ext.zero_pair,
                             lambda s: s.homogeneous_part(w, 0))


def inclusion_j(ext: GradedExtension) -> ExtensionMorphism:
    return ExtensionMorphism("j", ext.zero_pair, ext.pair, lambda s: s)


def inclusion_i(ext: GradedExtension) -> ExtensionMorphism:
    r = ext.mext.rank + 1
    return ExtensionMorphism("i", ext.pair, ext.poly_pair,
                             lambda s: s.map_exponents(lambda e: tuple(e) + (0,), r))


def _eval(ext: GradedExtension, value: int) -> ExtensionMorphism:
    r = ext.mext.rank

    def fn(s: MonoidAlgebraElement) -> MonoidAlgebraElement:
        if value == 0:
            s = MonoidAlgebraElement(s.algebra, s.rank,
                                     {e: c for e, c in s.terms.items() if e[-1] == 0})
        return s.map_exponents(lambda e: e[:-1], r)

    return ExtensionMorphism(f"e{value}", ext.poly_pair, ext.pair, fn)


def eval0(ext: GradedExtension) -> ExtensionMorphism:
    return _eval(ext, 0)


def eval1(ext: GradedExtension) -> ExtensionMorphism:
    return _eval(ext, 1)


def homotopy_w(ext: GradedExtension) -> ExtensionMorphism:
    r = ext.mext.rank + 1
    deg = ext.degree_of
    return ExtensionMorphism("w", ext.pair, ext.poly_pair,
                             lambda s: s.map_exponents(lambda e: tuple(e) + (deg(e),), r))


def _to_context(x, ctx: ModuleContext):
    if ctx.is_graded:
        if not isinstance(x, MonoidAlgebraElement):
            return ctx.truncation.mext.constant(x)
        return x
    if isinstance(x, MonoidAlgebraElement):
        if any(any(e) for e in x.terms):
            raise ValueError(f"{x.format()} is not a constant")
        return x.augmentation()
    return x


def induced_ideal_map(m: ExtensionMorphism, i: Submodule,
                      degree_bound: Optional[int] = None) -> Submodule:
    """I(m)(I): the target submodule generated by the images of the generators."""
    D = degree_bound if degree_bound is not None else (i.context.degree_bound or 0)
    target = m.target.context(D)
    src_is_graded = not m.source.degree_zero
    gens = []
    for g in i.generators:
        if not isinstance(g, MonoidAlgebraElement):
            g = m.source.mext.constant(g)
        elif not src_is_graded and g.rank != m.source.mext.rank:
            raise ValueError("generator does not live over the source pair")
        gens.append(_to_context(m(g), target))
    return Submodule(target, gens)


def verify_functoriality(m1: ExtensionMorphism, m2: ExtensionMorphism,
                         samples: Sequence[Submodule], degree_bound: int) -> CheckReport:
    """I(m1 ∘ m2) = I(m1) ∘ I(m2) on the sampled submodules."""
    comp = m1.compose(m2)
    bad = []
    for I in samples:
        lhs = induced_ideal_map(comp, I, degree_bound)
        rhs = induced_ideal_map(m1, induced_ideal_map(m2, I, degree_bound), degree_bound)
        if lhs != rhs:
            bad.append(I.format())
    return CheckReport("functoriality", not bad,
                       {"composite": comp.name, "samples": len(samples), "counterexamples": bad})


def verify_homotopy_identities(ext: GradedExtension, sample_size: int = 100, seed: int = 0,
                               ideal_samples: int = 20) -> CheckReport:
    """Check pi j = id, e0 i = e1 i = id, e0 w = j pi, e1 w = id on random
    elements, the hom/subring properties of every map, and I(pi) θ = id on
    invertible principal submodules."""
    rng = random.Random(seed)
    D = ext.degree_bound
    pi, j, inc = degree_zero_projection(ext), inclusion_j(ext), inclusion_i(ext)
    e0, e1, w = eval0(ext), eval1(ext), homotopy_w(ext)
    zero = ext.pair.mext.zero()
    xs = [zero] + [ext.pair.sample(rng, D, subring=k % 2 == 1) for k in range(sample_size - 1)]
    x0 = [ext.zero_pair.sample(rng, D, subring=k % 2 == 1) for k in range(sample_size)]
    xp = [ext.poly_pair.sample(rng, D, subring=k % 2 == 1) for k in range(sample_size)]

    failures: dict = {k: [] for k in ("pi.j = id", "e0.i = id", "e1.i = id",
                                      "e0.w = j.pi", "e1.w = id")}
    for s in x0:
        if pi(j(s)) != s:
            failures["pi.j = id"].append(s.format())
    for s in xs:
        if e0(inc(s)) != s:
            failures["e0.i = id"].append(s.format())
        if e1(inc(s)) != s:
            failures["e1.i = id"].append(s.format())
        if e0(w(s)) != j(pi(s)):
            failures["e0.w = j.pi"].append(s.format())
        if e1(w(s)) != s:
            failures["e1.w = id"].append(s.format())

    morphism_problems = []
    for m, src in ((pi, xs), (j, x0), (inc, xs), (w, xs), (e0, xp), (e1, xp)):
        morphism_problems += m.check_homomorphism(src)
        morphism_problems += m.check_subring([x for x in src if m.source.in_subring(x)])

    base = ext.mext.base
    finite = ModuleContext.finite(base)
    graded = ext.pair.context(D)
    fam = _principal_family(base, 2, ideal_samples)
    round_trip_bad, tested = [], 0
    for u in fam:
        I = Submodule(finite, [u])
        if not is_invertible(I):
            continue
        tested += 1
        if pi_map(theta_map(I, graded), finite) != I:
            round_trip_bad.append(I.format())
        if induced_ideal_map(pi, theta_map(I, graded), D) != I:
            round_trip_bad.append(I.format() + " (induced)")

    ok = not any(failures.values()) and not morphism_problems and not round_trip_bad
    return CheckReport("homotopy-identities", ok, {
        "seed": seed,
        "samples": len(xs),
        "degree_bound": D,
        "identities": {k: not v for k, v in failures.items()},
        "counterexamples": {k: v for k, v in failures.items() if v},
        "morphism_problems": morphism_problems,
        "ideal_round_trips": tested,
        "ideal_round_trip_failures": round_trip_bad,
    })
