import itertools
import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from fqzeta.algebra import (
    GF,
    AdditiveSubgroup,
    FqPoly,
    binom_mod_p,
    irreducible_monics,
    monic_polys,
    necklace_count,
    power_sum_subgroup,
    power_sums_subgroup,
    verify_log_derivative_identity,
)

from strategies import polys

F2, F3, F5 = GF(2), GF(3), GF(5)


def P(F, s):
    return FqPoly.parse(F, s)


# fields


@pytest.mark.parametrize("F", [GF(2), GF(3), GF(5), GF(2, 2), GF(3, 2), GF(2, 3)])
def test_field_axioms(F):
    els = list(F.elements())
    assert len(els) == F.q
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a, b, c in itertools.product(els[:4], repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_extension_frobenius_fixes_prime_field():
    F = GF(2, 2)
    for a in F.elements():
        assert F.pow(a, 4) == a
        assert (F.pow(a, 2) == a) == (a in (0, 1))


def test_bad_modulus_rejected():
    with pytest.raises(ValueError):
        GF(2, 2, (1, 0, 1))  # T^2 + 1 = (T+1)^2
    with pytest.raises(ValueError):
        GF(4)


# polynomials


def test_parse_dense_and_human():
    assert P(F2, "1,1,0,1") == P(F2, "T^3+T+1")
    assert P(F2, "1,1,0,1").dense() == "1,1,0,1"
    assert str(P(F3, "2,0,1")) == "T^2+2"
    F4 = GF(2, 2)
    a = P(F4, "01,1")  # coefficient digits are base p, ascending
    assert a.coeff(0) == 2 and a.deg == 1


@given(st.sampled_from([F2, F3, F5]).flatmap(lambda F: st.tuples(polys(F), polys(F), polys(F))))
def test_ring_laws(abc):
    a, b, c = abc
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - b) + b == a
    if a and b:
        assert (a * b).deg == a.deg + b.deg


@given(st.sampled_from([F2, F3, F5]).flatmap(lambda F: st.tuples(polys(F), polys(F, 4))))
def test_divmod(ab):
    a, b = ab
    if not b:
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.deg < b.deg


def test_monic_polys_examples():
    assert set(monic_polys(F2, 1)) == {P(F2, "T"), P(F2, "T+1")}
    assert monic_polys(F3, 0) == (FqPoly.one(F3),)
    assert len(monic_polys(F2, 3)) == 8


@pytest.mark.parametrize("F", [F2, F3])
def test_monic_counts_distinct(F):
    for d in range(7):
        ms = monic_polys(F, d)
        assert len(ms) == F.q**d == len(set(ms))
        assert all(m.is_monic() and m.deg == d for m in ms)


def test_monic_order_is_lexicographic_by_digits():
    ms = monic_polys(F3, 2)
    assert [m.coeffs()[:2] for m in ms[:4]] == [[0, 0], [1, 0], [2, 0], [0, 1]]


def test_irreducibles_examples():
    assert irreducible_monics(F2, 2) == (P(F2, "T^2+T+1"),)
    assert set(irreducible_monics(F2, 1)) == {P(F2, "T"), P(F2, "T+1")}
    assert len(irreducible_monics(F3, 2)) == 3


@pytest.mark.parametrize("F,d", [(F2, 1), (F2, 3), (F2, 4), (F3, 2), (F3, 3)])
def test_irreducibles_divide_field_polynomial(F, d):
    T = FqPoly.T(F)
    irr = irreducible_monics(F, d)
    assert len(irr) == necklace_count(F.q, d)
    for f in irr:
        assert not (FqPoly.T(F, F.q**d) - T) % f
        for m in range(1, d):
            assert (FqPoly.T(F, F.q**m) - T) % f


def test_binom_mod_p_lucas():
    for p in (2, 3, 5):
        for n in range(40):
            for k in range(n + 1):
                assert binom_mod_p(n, k, p) == comb(n, k) % p


# additive subgroups and power sums


def test_power_sum_examples():
    W = AdditiveSubgroup(F3, [1])
    assert power_sum_subgroup(W, 1) == FqPoly.zero(F3)
    assert power_sum_subgroup(W, 0) == FqPoly.zero(F3)
    W2 = AdditiveSubgroup(F2, [1, P(F2, "T")])
    assert W2.order == 4
    assert power_sum_subgroup(W2, 2) == FqPoly.zero(F2)


def _random_subgroup(F, rng, ngens, maxdeg):
    return AdditiveSubgroup(F, [FqPoly(F, [rng.randrange(F.q) for _ in range(maxdeg + 1)]) for _ in range(ngens)])


@pytest.mark.parametrize("F", [F2, F3])
def test_power_sums_vanish_below_order(F):
    rng = random.Random(7)
    for _ in range(15):
        W = _random_subgroup(F, rng, rng.randrange(1, 4), 3)
        if W.order > 64:
            continue
        sums = power_sums_subgroup(W, max(W.order - 1, 0))
        assert all(not s for s in sums[: W.order - 1])
        # s_{|W|-1} is the first one that survives
        if W.order > 1:
            assert sums[W.order - 1]


def test_vectorized_power_sums_match_bruteforce():
    rng = random.Random(3)
    for F in (F2, F3, GF(2, 2)):
        W = _random_subgroup(F, rng, 2, 2)
        vec = power_sums_subgroup(W, 12)
        assert vec == [power_sum_subgroup(W, i) for i in range(13)]


@pytest.mark.parametrize("F", [F2, F3])
def test_e_poly_is_additive(F):
    rng = random.Random(11)
    W = _random_subgroup(F, rng, 2, 2)
    e = W.e_poly()

    def ev(x):
        acc = FqPoly.zero(F)
        for c in reversed(e):
            acc = acc * x + c
        return acc

    for _ in range(10):
        a = FqPoly(F, [rng.randrange(F.q) for _ in range(4)])
        b = FqPoly(F, [rng.randrange(F.q) for _ in range(4)])
        assert ev(a + b) == ev(a) + ev(b)


def test_log_derivative_identity():
    assert verify_log_derivative_identity(AdditiveSubgroup(F2, []), 3)
    assert verify_log_derivative_identity(AdditiveSubgroup(F2, [1]), 4)
    assert verify_log_derivative_identity(AdditiveSubgroup(F3, [1]), 5)
    assert verify_log_derivative_identity(AdditiveSubgroup(F2, [1, P(F2, "T"), P(F2, "T^2")]), 20)
