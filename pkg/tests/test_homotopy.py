import random

import pytest

from subint.algebra import MonoidAlgebraExtension
from subint.homotopy import (GradedExtension, degree_zero_projection, eval0, eval1, homotopy_w,
                             identity, inclusion_i, inclusion_j, induced_ideal_map,
                             verify_functoriality, verify_homotopy_identities)
from subint.ideals import ModuleContext, Submodule, canonical_pair_d1, is_invertible, theta_map
from subint.library import library_extensions
from subint.monoid import AffineMonoid

ZPLUS = AffineMonoid.numerical(1)


@pytest.fixture(scope="module")
def cusp():
    return library_extensions()["cusp"]


@pytest.fixture(scope="module")
def graded(cusp):
    return GradedExtension(MonoidAlgebraExtension(cusp, ZPLUS), 6)


def el(ext, s):
    return ext.ambient.element(s)


def test_invariants(graded):
    assert graded.check_invariants().ok


def test_projection_and_inclusions(cusp, graded):
    mext = graded.mext
    pi, j = degree_zero_projection(graded), inclusion_j(graded)
    s = mext.one() + mext.monomial((1,), el(cusp, "t"))
    assert pi(s) == mext.one()
    c = mext.constant(el(cusp, "1 + t3"))
    assert pi(c) == c and pi(j(c)) == c


def test_evaluations(cusp, graded):
    mext = graded.mext
    poly = graded.poly_pair.mext
    s0, s1 = el(cusp, "1 + t"), el(cusp, "t2")
    f = poly.constant(s0) + poly.monomial((0, 1), s1)
    e0, e1, inc = eval0(graded), eval1(graded), inclusion_i(graded)
    assert e0(f) == mext.constant(s0)
    assert e1(f) == mext.constant(cusp.ambient.add(s0, s1))
    x = mext.monomial((2,), s1) + mext.constant(s0)
    assert e0(inc(x)) == x and e1(inc(x)) == x


def test_homotopy_w(cusp, graded):
    mext = graded.mext
    poly = graded.poly_pair.mext
    t, t2 = el(cusp, "t"), el(cusp, "t2")
    s = mext.one() + mext.monomial((1,), t) + mext.monomial((2,), t2)
    w = homotopy_w(graded)
    assert w(s) == poly.one() + poly.monomial((1, 1), t) + poly.monomial((2, 2), t2)
    c = mext.constant(t2)
    assert w(c) == poly.constant(t2)
    assert eval0(graded)(w(s)) == inclusion_j(graded)(degree_zero_projection(graded)(s))
    assert eval1(graded)(w(s)) == s


def test_verify_identities(graded):
    rep = verify_homotopy_identities(graded, 100, seed=0)
    assert rep.ok, rep.details
    assert all(rep.details["identities"].values())
    assert rep.details["ideal_round_trips"] == 20


def test_identities_on_other_pairs():
    lib = library_extensions()
    cases = [(lib["dual-numbers"], AffineMonoid.numerical(2, 3), ZPLUS),
             (lib["split-dual"], AffineMonoid.free(2), AffineMonoid.free(2)),
             (lib["sqrt2"], ZPLUS, ZPLUS)]
    for ext, m, n in cases:
        g = GradedExtension(MonoidAlgebraExtension(ext, m, n), 4)
        rep = verify_homotopy_identities(g, 40, seed=5, ideal_samples=8)
        assert rep.ok, rep.details


def test_morphisms_preserve_subring(graded):
    rng = random.Random(1)
    samples = [graded.pair.sample(rng, 6, subring=True) for _ in range(200)]
    for m in (degree_zero_projection(graded), inclusion_i(graded), homotopy_w(graded)):
        assert m.check_subring(samples) == []
    polys = [graded.poly_pair.sample(rng, 6, subring=True) for _ in range(200)]
    for m in (eval0(graded), eval1(graded)):
        assert m.check_subring(polys) == []


def test_composition_errors(graded):
    with pytest.raises(ValueError):
        eval0(graded).compose(degree_zero_projection(graded))


def test_induced_maps(cusp, graded):
    finite = ModuleContext.finite(cusp)
    ctx = graded.pair.context(6)
    I = Submodule(finite, [el(cusp, "1 + t")])
    assert induced_ideal_map(identity(graded.pair), theta_map(I, ctx)) == theta_map(I, ctx)
    assert induced_ideal_map(degree_zero_projection(graded), theta_map(I, ctx)) == I
    P, Qm, _ = canonical_pair_d1(graded.mext, el(cusp, "t"), (1,), 6)
    e0, w = eval0(graded), homotopy_w(graded)
    j, pi = inclusion_j(graded), degree_zero_projection(graded)
    for K in (P, Qm):
        assert induced_ideal_map(e0, induced_ideal_map(w, K)) == \
            induced_ideal_map(j, induced_ideal_map(pi, K), 6)


def test_functoriality(cusp, graded):
    P, Qm, _ = canonical_pair_d1(graded.mext, el(cusp, "t"), (1,), 6)
    assert verify_functoriality(eval0(graded), homotopy_w(graded), [P, Qm], 6).ok
    assert verify_functoriality(inclusion_j(graded), degree_zero_projection(graded), [P, Qm], 6).ok
    assert verify_functoriality(homotopy_w(graded), identity(graded.pair), [P], 6).ok
    unit = graded.pair.context(6).unit_module()
    rep = verify_functoriality(inclusion_j(graded), degree_zero_projection(graded), [unit], 6)
    assert rep.ok


def test_isomorphism_transports_certificates(cusp, graded):
    # e1 ∘ w is the identity, so it carries certified modules to certified modules
    P, _, _ = canonical_pair_d1(graded.mext, el(cusp, "t"), (1,), 6)
    image = induced_ideal_map(eval1(graded).compose(homotopy_w(graded)), P)
    assert image == P
    cert = is_invertible(image)
    assert cert is not None and cert.replay()
