import random

import pytest
from hypothesis import given, settings, strategies as st

from subint.algebra import (MonoidAlgebraExtension, SubalgebraExtension,
                            UnsupportedCharacteristic, truncated_polynomial_algebra)
from subint.ideals import (ContextMismatch, ModuleContext, PreconditionViolated, Submodule,
                           canonical_pair_d1, canonical_pair_d2, conductor,
                           exact_sequence_check, is_invertible, non_surjectivity_check, phi_map,
                           pi_map, product_submodule, tensor_identity_check, theta_certificate,
                           theta_map, units_quotient_witness)
from subint.library import library_extensions
from subint.linalg import Field, Subspace
from subint.monoid import AffineMonoid

Q = Field()
ZPLUS = AffineMonoid.numerical(1)
M23 = AffineMonoid.numerical(2, 3)


@pytest.fixture(scope="module")
def lib():
    return library_extensions()


@pytest.fixture(scope="module")
def dual_ctx(lib):
    return ModuleContext.finite(lib["dual-numbers"])


def el(ext, s):
    return ext.ambient.element(s)


# -- finite contexts ----------------------------------------------------------------

def test_conductor_examples(lib, dual_ctx):
    ext = lib["dual-numbers"]
    I = Submodule(dual_ctx, [el(ext, "1 + e")])
    J = conductor(I)
    assert J.span == Subspace(Q, 2, [el(ext, "1 - e")])
    assert conductor(dual_ctx.unit_module()) == dual_ctx.unit_module()
    eps = Submodule(dual_ctx, [el(ext, "e")])
    assert conductor(eps).span == Subspace(Q, 2, [el(ext, "e")])
    assert product_submodule(eps, conductor(eps)).span.dim == 0


def test_invertibility_examples(lib, dual_ctx):
    ext = lib["dual-numbers"]
    cert = is_invertible(Submodule(dual_ctx, [el(ext, "1 + e")]))
    assert cert is not None and cert.replay()
    assert cert.inverse == Submodule(dual_ctx, [el(ext, "1 - e")])
    assert is_invertible(Submodule(dual_ctx, [el(ext, "e")])) is None
    unit = dual_ctx.unit_module()
    c = is_invertible(unit)
    assert c is not None and c.inverse == unit


def test_products(lib, dual_ctx):
    ext = lib["dual-numbers"]
    I = Submodule(dual_ctx, [el(ext, "1 + 2*e")])
    assert product_submodule(I, dual_ctx.unit_module()) == I
    eps = Submodule(dual_ctx, [el(ext, "e")])
    sq = product_submodule(eps, eps)
    assert sq.generators == () and sq.span.dim == 0
    other = ModuleContext.finite(lib["cusp"])
    with pytest.raises(ContextMismatch):
        product_submodule(I, other.unit_module())


def test_generators_canonical(lib):
    ctx = ModuleContext.finite(lib["cusp"])
    ext = lib["cusp"]
    a = Submodule(ctx, [el(ext, "1 + t"), el(ext, "t2 + t3"), el(ext, "1 + t")])
    b = Submodule(ctx, [el(ext, "t2 + t3"), el(ext, "1 + t")])
    assert a.generators == b.generators and a == b
    # (t2 + t3) = t2 * (1 + t) is redundant over A
    assert len(a.generators) == 1


def cusp_units(ext, rng, k):
    B = ext.ambient
    out = []
    while len(out) < k:
        v = (Q(rng.choice([1, 2, -1, 3])),) + tuple(Q(rng.randint(-3, 3)) for _ in range(B.dim - 1))
        if B.is_unit(v):
            out.append(v)
    return out


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6))
def test_group_laws_on_certified_modules(seed):
    ext = library_extensions()["cusp"]
    ctx = ModuleContext.finite(ext)
    rng = random.Random(seed)
    a, b, c = (Submodule(ctx, [u]) for u in cusp_units(ext, rng, 3))
    for I in (a, b, c):
        cert = is_invertible(I)
        assert cert is not None and cert.replay()
        assert product_submodule(I, cert.inverse).is_unit()
    assert product_submodule(product_submodule(a, b), c) == \
        product_submodule(a, product_submodule(b, c))
    assert product_submodule(a, ctx.unit_module()) == a
    assert product_submodule(a, b) == product_submodule(b, a)


def test_theta_pi_phi(lib):
    ext = lib["dual-numbers"]
    finite = ModuleContext.finite(ext)
    mext = MonoidAlgebraExtension(ext, ZPLUS)
    graded = ModuleContext.graded(mext, 4)
    I = Submodule(finite, [el(ext, "1 + e")])
    tI = theta_map(I, graded)
    assert tI == Submodule(graded, [mext.constant(el(ext, "1 + e"))])
    assert theta_map(finite.unit_module(), graded).is_unit()
    assert pi_map(tI, finite) == I
    cert = theta_certificate(is_invertible(I), graded)
    assert cert.replay()
    y = Submodule(graded, [mext.one() + mext.monomial((1,), el(ext, "e"))])
    assert pi_map(y, finite).is_unit()
    plus = ModuleContext.finite(ext.with_sub([ext.ambient.one(), el(ext, "e")]))
    assert phi_map(I, plus).is_unit()
    assert phi_map(finite.unit_module(), plus).is_unit()
    with pytest.raises(ContextMismatch):
        theta_map(tI, graded)
    with pytest.raises(ContextMismatch):
        phi_map(I, ModuleContext.finite(lib["cusp"]))


def test_pi_theta_round_trip_on_units(lib):
    rng = random.Random(3)
    for name in ("cusp", "dual-numbers", "split-dual", "sqrt2"):
        ext = lib[name]
        finite = ModuleContext.finite(ext)
        graded = ModuleContext.graded(MonoidAlgebraExtension(ext, ZPLUS), 3)
        B = ext.ambient
        tried = 0
        while tried < 6:
            v = tuple(Q(rng.randint(-3, 3)) for _ in range(B.dim))
            if not B.is_unit(v):
                continue
            I = Submodule(finite, [v])
            if is_invertible(I) is None:
                continue
            tried += 1
            assert pi_map(theta_map(I, graded), finite) == I


# -- canonical pairs -------------------------------------------------------------------

def test_pair_d1_cusp(lib):
    ext = lib["cusp"]
    mext = MonoidAlgebraExtension(ext, ZPLUS)
    I, J, cert = canonical_pair_d1(mext, el(ext, "t"), (1,), 8)
    assert cert.valid and cert.replay()
    assert all(cert.identities.values())
    assert product_submodule(I, J).is_unit()
    inv = is_invertible(I)
    assert inv is not None and inv.inverse == J
    finite = ModuleContext.finite(ext)
    assert pi_map(I, finite).is_unit()


def test_pair_d1_dual_and_trivial(lib):
    ext = lib["dual-numbers"]
    mext = MonoidAlgebraExtension(ext, ZPLUS)
    I, J, cert = canonical_pair_d1(mext, el(ext, "e"), (1,), 6)
    assert cert.valid and product_submodule(I, J).is_unit()
    cusp = lib["cusp"]
    mext = MonoidAlgebraExtension(cusp, ZPLUS)
    I, J, cert = canonical_pair_d1(mext, el(cusp, "t2"), (2,), 8)
    assert cert.valid and I.is_unit()


def test_pair_d1_preconditions(lib):
    ext = lib["sqrt2"]
    mext = MonoidAlgebraExtension(ext, ZPLUS)
    with pytest.raises(PreconditionViolated):
        canonical_pair_d1(mext, el(ext, "s"), (1,))
    cusp = lib["cusp"]
    mext = MonoidAlgebraExtension(cusp, ZPLUS)
    with pytest.raises(PreconditionViolated):
        canonical_pair_d1(mext, el(cusp, "t"), (0,))
    mext = MonoidAlgebraExtension(cusp, M23, ZPLUS)
    with pytest.raises(PreconditionViolated):
        canonical_pair_d1(mext, el(cusp, "t"), (1,))


def test_pair_d2_examples(lib):
    d = truncated_polynomial_algebra(2, Q)
    ext = SubalgebraExtension(d, [d.one()])
    mext = MonoidAlgebraExtension(ext, ZPLUS)
    g = mext.monomial((1,), d.element("t"))
    I, J, cert = canonical_pair_d2(mext, g, 6)
    assert cert.valid and product_submodule(I, J).is_unit()
    h = mext.monomial((2,))
    assert canonical_pair_d2(mext, h, 6)[2].valid
    cusp = lib["cusp"]
    mext = MonoidAlgebraExtension(cusp, ZPLUS)
    g = mext.monomial((1,), el(cusp, "t"))
    assert canonical_pair_d2(mext, g, 6)[2].valid
    # g = x over k[<2,3>]: g^2, g^3 lie in k[M]
    k = truncated_polynomial_algebra(1, Q)
    mext = MonoidAlgebraExtension(SubalgebraExtension(k, [k.one()]), M23, ZPLUS)
    I, J, cert = canonical_pair_d2(mext, mext.monomial((1,)), 10)
    assert cert.valid and not I.is_unit()
    with pytest.raises(PreconditionViolated):
        canonical_pair_d2(MonoidAlgebraExtension(lib["sqrt2"], ZPLUS),
                          MonoidAlgebraExtension(lib["sqrt2"], ZPLUS).monomial(
                              (1,), el(lib["sqrt2"], "s")))


def test_randomized_pairs(lib):
    rng = random.Random(11)
    for _ in range(10):
        ext = lib["cusp"]
        c = Q(rng.choice([1, 2, -1, -3]))
        b = ext.ambient.scale(c, el(ext, "t"))
        b = ext.ambient.add(b, ext.ambient.scale(Q(rng.randint(-2, 2)), el(ext, "t2")))
        m = (rng.randint(1, 2),)
        mext = MonoidAlgebraExtension(ext, ZPLUS)
        assert canonical_pair_d1(mext, b, m, 8)[2].valid
        g = mext.monomial(m, b)
        assert canonical_pair_d2(mext, g, 8)[2].valid


def test_certificate_replay_is_fresh(lib):
    ext = lib["cusp"]
    mext = MonoidAlgebraExtension(ext, ZPLUS)
    _, _, cert = canonical_pair_d1(mext, el(ext, "t"), (1,), 8)
    assert cert.replay()
    # tampering with a coefficient breaks replay (the first term is b^4 = 0 here)
    left, right, coef = cert.witness[1]
    cert.witness[1] = (left, right, coef + coef)
    assert not cert.replay()


# -- harnesses ----------------------------------------------------------------------

def test_exact_sequence_dual(lib):
    rep = exact_sequence_check(lib["dual-numbers"], ZPLUS, 4)
    assert rep.ok
    assert rep.details["plus_equals_B"] and rep.details["I(+A,B)_trivial_on_sample"]
    assert len(rep.details["sampled_I(A,+A)"]) >= 5


def test_exact_sequence_family(lib):
    for name in ("cusp", "trivial-self", "split-dual", "diagonal"):
        rep = exact_sequence_check(lib[name], ZPLUS, 3)
        assert rep.ok, (name, rep.details["problems"])
    rep = exact_sequence_check(lib["split-dual"], M23, 4)
    assert rep.ok and not rep.details["I(+A,B)_trivial_on_sample"]


def test_tensor_identity(lib):
    rep = tensor_identity_check(lib["cusp"], ZPLUS, 10)
    assert rep.ok and [r["plus_quotient"] for r in rep.details["table"]] == [1] * 11
    rep = tensor_identity_check(lib["cusp"], M23, 10)
    assert rep.ok and [r["tensor"] for r in rep.details["table"]] == [1, 0] + [1] * 9
    rep = tensor_identity_check(lib["trivial-self"], ZPLUS, 6)
    assert rep.ok and all(r["plus_quotient"] == 0 for r in rep.details["table"])
    rep = tensor_identity_check(lib["cusp-t3"], AffineMonoid.free(2), 4)
    assert rep.ok and rep.details["quotient_dim"] == 2
    f5 = truncated_polynomial_algebra(2, Field(5))
    with pytest.raises(UnsupportedCharacteristic):
        tensor_identity_check(SubalgebraExtension(f5, [f5.one()]), ZPLUS, 3)


def test_units_quotient_witness(lib):
    w = units_quotient_witness(lib["dual-self"], M23, ZPLUS, 6)
    assert w is not None and w.exponent == (1,)
    assert w.element.format() == "1 + (e)*x^1"
    assert w.certificate is not None and w.certificate.replay()
    assert units_quotient_witness(lib["dual-self"], ZPLUS, ZPLUS) is None
    assert units_quotient_witness(lib["diagonal"], M23, ZPLUS) is None
    rep = non_surjectivity_check(lib["dual-self"], M23, ZPLUS, 6)
    assert rep.ok and rep.details["equal_to_theta_for_c"] == []
