import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from subint.algebra import (FiniteAlgebra, MonoidAlgebraElement, MonoidAlgebraExtension,
                            MonomialExtension, SubalgebraExtension, UnsupportedCharacteristic,
                            closure_of_monomial_extension, intersection_lemma_check,
                            is_subintegrally_closed_ring, nil_radical,
                            nil_radical_of_monoid_algebra, nilpotent_brute_force,
                            product_algebra, quadratic_algebra, subintegral_closure_ring,
                            truncated_polynomial_algebra, verify_subintegral_chain,
                            zr_transfer_check)
from subint.library import library_extensions
from subint.linalg import Field, Subspace
from subint.monoid import AffineMonoid

Q = Field()
ZPLUS = AffineMonoid.numerical(1)


def span_ext(alg, names):
    return SubalgebraExtension(alg, [alg.element(n) for n in names])


@pytest.fixture(scope="module")
def t4():
    return truncated_polynomial_algebra(4, Q)


@pytest.fixture(scope="module")
def dual():
    return truncated_polynomial_algebra(2, Q, var="e")


def test_algebra_validation_rejects_bad_tables():
    with pytest.raises(ValueError):
        FiniteAlgebra(Q, 2, {(0, 0): [(0, 1)], (0, 1): [(1, 1)], (1, 0): [(0, 1)]}, (1, 0))
    with pytest.raises(ValueError):
        FiniteAlgebra(Q, 2, {(0, 0): [(0, 1)], (1, 1): [(1, 1)]}, (1, 0))


def test_structure_constants_round_trip(t4):
    again = FiniteAlgebra.from_structure_constants(Q, t4.structure_constants(), t4.unit, t4.names)
    for i, j in itertools.product(range(4), repeat=2):
        assert again.mul(again.basis(i), again.basis(j)) == t4.mul(t4.basis(i), t4.basis(j))


def test_element_parsing(t4):
    assert t4.element("1 - 2*t + t2/3") == Q.vector([1, -2, "1/3", 0])
    assert t4.format(t4.element("t3 - t")) == "-t + t3"
    with pytest.raises(ValueError):
        t4.element("t*t")


def test_subalgebra_must_be_closed(t4):
    with pytest.raises(ValueError):
        span_ext(t4, ["1", "t"])
    with pytest.raises(ValueError):
        span_ext(t4, ["t2"])


def test_nil_radical_examples(dual):
    assert nil_radical(dual) == Subspace(Q, 2, [dual.element("e")])
    qq = product_algebra(truncated_polynomial_algebra(1, Q), truncated_polynomial_algebra(1, Q))
    assert nil_radical(qq).dim == 0
    t3 = truncated_polynomial_algebra(3, Q)
    assert nil_radical(t3) == Subspace(Q, 3, [t3.element("t"), t3.element("t2")])
    with pytest.raises(UnsupportedCharacteristic):
        nil_radical(truncated_polynomial_algebra(2, Field(5)))


def test_nil_radical_sound_and_complete_on_small_algebras():
    algs = [truncated_polynomial_algebra(2, Q), truncated_polynomial_algebra(3, Q),
            truncated_polynomial_algebra(4, Q), quadratic_algebra(2), quadratic_algebra(0),
            product_algebra(truncated_polynomial_algebra(1, Q), truncated_polynomial_algebra(2, Q))]
    for B in algs:
        nil = nil_radical(B)
        for v in nil.rows:
            assert B.is_zero(B.power(v, B.dim))
        found = nilpotent_brute_force(B, 2)
        assert all(nil.contains(v) for v in found)
        assert Subspace(Q, B.dim, found) == nil


def test_ring_closure_examples(t4, dual):
    res = subintegral_closure_ring(span_ext(t4, ["1", "t3"]))
    assert res.extension.is_trivial() and res.verify_chain(span_ext(t4, ["1", "t3"]))
    assert res.adjoined[0] == t4.element("t2")
    res = subintegral_closure_ring(span_ext(t4, ["1", "t2", "t3"]))
    assert res.extension.is_trivial() and res.adjoined == [t4.element("t")]
    res = subintegral_closure_ring(span_ext(dual, ["1"]))
    assert res.extension.is_trivial()
    same = span_ext(t4, ["1", "t", "t2", "t3"])
    assert subintegral_closure_ring(same).extension == same


def test_is_closed_examples(dual):
    lib = library_extensions()
    assert is_subintegrally_closed_ring(lib["diagonal"])[0]
    assert is_subintegrally_closed_ring(lib["sqrt2"])[0]
    closed, cert, chain = is_subintegrally_closed_ring(span_ext(dual, ["1"]))
    assert not closed and cert == "witness" and chain == [dual.element("e")]
    assert is_subintegrally_closed_ring(lib["trivial-self"])[0]


def test_diagonal_closedness_by_equations():
    # b = (u, v) with b^2, b^3 diagonal forces u = v: check every rational grid point
    lib = library_extensions()
    ext = lib["diagonal"]
    B = ext.ambient
    for u, v in itertools.product([Q(x) / 2 for x in range(-6, 7)], repeat=2):
        b = (u, v)
        sq, cube = B.mul(b, b), B.mul(B.mul(b, b), b)
        assert (ext.sub.contains(sq) and ext.sub.contains(cube)) == (u == v)


def test_split_dual_closure():
    ext = library_extensions()["split-dual"]
    res = subintegral_closure_ring(ext)
    B = ext.ambient
    assert res.extension.sub.dim == 2
    assert res.extension.sub.contains(B.element("e_1"))
    assert not res.extension.sub.contains(B.element("1_0"))


def test_closure_chain_and_monotone_fixpoint():
    for name, ext in library_extensions().items():
        if not isinstance(ext, SubalgebraExtension):
            continue
        res = subintegral_closure_ring(ext)
        assert verify_subintegral_chain(ext, res.adjoined, res.extension)
        assert ext.sub.issubspace(res.extension.sub)
        again = subintegral_closure_ring(res.extension)
        assert not again.adjoined, name


def test_monomial_extension_closure():
    assert closure_of_monomial_extension(
        MonomialExtension(Q, AffineMonoid.numerical(2, 3), ZPLUS)).inner == ZPLUS
    even = MonomialExtension(Q, AffineMonoid.numerical(2), ZPLUS)
    assert closure_of_monomial_extension(even).inner == AffineMonoid.numerical(2)
    same = MonomialExtension(Q, ZPLUS, ZPLUS)
    assert closure_of_monomial_extension(same) == same
    with pytest.raises(ValueError):
        MonomialExtension(Q, ZPLUS, AffineMonoid.numerical(2))


# -- monoid algebra elements ---------------------------------------------------

def random_element(rng, alg, rank, terms=3, span=3):
    out = {}
    for _ in range(rng.randint(0, terms)):
        e = tuple(rng.randint(0, span) for _ in range(rank))
        out[e] = tuple(Q(rng.randint(-3, 3)) for _ in range(alg.dim))
    return MonoidAlgebraElement(alg, rank, out)


@settings(max_examples=100)
@given(st.integers(0, 10 ** 6))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    alg = truncated_polynomial_algebra(3, Q)
    a, b, c = (random_element(rng, alg, 2) for _ in range(3))
    one = a.one_like()
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a * one == a and a + a.zero_like() == a
    assert (a - a).is_zero()
    # augmentation is a ring map
    assert (a * b).augmentation() == alg.mul(a.augmentation(), b.augmentation())
    assert (a + b).augmentation() == alg.add(a.augmentation(), b.augmentation())


def test_pair_identities_in_monoid_algebra(t4):
    mext = MonoidAlgebraExtension(span_ext(t4, ["1", "t2", "t3"]), ZPLUS)
    one = mext.one()
    bm = mext.monomial((1,), t4.element("t"))
    assert (one - bm) * (one + bm) == one - bm * bm
    assert (one - bm).augmentation() == t4.one()
    assert (bm * 0).is_zero()
    d = truncated_polynomial_algebra(2, Q)
    g = MonoidAlgebraElement.monomial(d, (1,), d.element("t"))
    one = g.one_like()
    assert (one + g + g * g) * (one - g + g * g) == one + g * g + (g * g) * (g * g)
    eps_y = MonoidAlgebraElement.monomial(d, (2,), d.element("t"))
    assert (one + eps_y).augmentation() == d.one()


def test_truncation_encode_decode(t4):
    mext = MonoidAlgebraExtension(span_ext(t4, ["1", "t2", "t3"]), AffineMonoid.numerical(2, 3),
                                  ZPLUS)
    tr = mext.truncation(5)
    x = mext.monomial((2,), t4.element("t")) + mext.constant(t4.element("1 + t3"))
    assert tr.decode(tr.encode(x)) == x
    assert tr.encode(mext.monomial((6,))) == tr.algebra.zero()
    assert tr.sub.contains(tr.encode(mext.monomial((3,), t4.element("t2"))))
    assert not tr.sub.contains(tr.encode(mext.monomial((1,))))


def test_nil_radical_of_monoid_algebra():
    d = truncated_polynomial_algebra(2, Q, var="e")
    res = nil_radical_of_monoid_algebra(d, ZPLUS, 3)
    assert res.consistency.ok
    assert sorted(res.components) == [0, 1, 2, 3]
    assert all(len(v) == 1 for v in res.components.values())
    qq = product_algebra(truncated_polynomial_algebra(1, Q), truncated_polynomial_algebra(1, Q))
    red = nil_radical_of_monoid_algebra(qq, ZPLUS, 3)
    assert red.consistency.ok and all(not v for v in red.components.values())
    t3 = truncated_polynomial_algebra(3, Q)
    two = nil_radical_of_monoid_algebra(t3, AffineMonoid.free(2), 2)
    assert two.consistency.ok and len(two.components[1]) == 2 * 2


# -- harnesses -----------------------------------------------------------------

def test_intersection_lemma(t4):
    assert intersection_lemma_check(span_ext(t4, ["1", "t2"]), AffineMonoid.numerical(2, 3), 6).ok
    assert intersection_lemma_check(span_ext(t4, ["1", "t", "t2", "t3"]),
                                    AffineMonoid.numerical(2, 3), 6).ok
    for ext in library_extensions().values():
        if isinstance(ext, SubalgebraExtension):
            assert intersection_lemma_check(ext, ZPLUS, 4).ok


def test_zr_transfer_on_library():
    for name, ext in library_extensions().items():
        if not isinstance(ext, SubalgebraExtension):
            continue
        for r in (1, 2):
            rep = zr_transfer_check(ext, r, degree_bound=6)
            assert rep.ok, (name, r, rep.details)


def test_zr_transfer_examples(dual):
    rep = zr_transfer_check(span_ext(dual, ["1"]), 1)
    assert rep.ok and not rep.details["base_closed"] and not rep.details["lifted_closed"]
    rep = zr_transfer_check(library_extensions()["trivial-self"], 1)
    assert rep.ok and rep.details["base_closed"] and rep.details["lifted_closed"]
