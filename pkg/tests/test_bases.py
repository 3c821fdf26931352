import random
from fractions import Fraction

import numpy as np
import pytest

from fqzeta.algebra import GF, binom_mod_p
from fqzeta.bases import (
    NewtonBasis,
    amice_order_check,
    order_from_gamma,
    unit_power_coefficients,
    valuations_of,
    weight,
)
from fqzeta.series import KPoly, LaurentSeries

F2, F3 = GF(2), GF(3)


def first_nonzero(row):
    nz = np.flatnonzero(row)
    return int(nz[0]) if len(nz) else None


def test_vwd_points():
    B2, B3 = NewtonBasis(F2), NewtonBasis(F3)
    assert B2.point_series(0) == LaurentSeries.zero(F2)
    assert B2.point_series(5) == LaurentSeries.from_u_poly(F2, [1, 0, 1])
    assert B3.point_series(4) == LaurentSeries.from_u_poly(F3, [1, 1])
    assert B3.index_of(B3.point_series(17)) == 17


@pytest.mark.parametrize("F", [F2, F3])
def test_coset_coverage(F):
    B = NewtonBasis(F)
    for h in range(5):
        residues = {tuple(B.point_series(n).window(0, h)) for n in range(F.q**h)}
        assert len(residues) == F.q**h


def test_newton_poly_examples():
    B = NewtonBasis(F2)
    assert B.newton_poly(1).coeffs == [LaurentSeries.zero(F2), LaurentSeries.one(F2)]
    p2 = B.newton_poly(2)
    assert [str(c) for c in p2.coeffs] == ["0; ", "0; 1", "0; 1"]  # z^2 + z
    Q2 = B.Q_poly(2)
    assert Q2.coeffs[2] == LaurentSeries.monomial(F2, -1)


def test_weight_examples():
    assert weight(3, 2) == 1
    assert weight(8, 2) == 7
    assert weight(5, 2, 1) == 2
    assert weight(0, 3) == 0


@pytest.mark.parametrize("F", [F2, F3])
def test_newton_poly_vanishing_and_monic(F):
    B = NewtonBasis(F)
    for n in range(12):
        p = B.newton_poly(n)
        assert p.degree == n and p.coeffs[n] == LaurentSeries.one(F)
        for m in range(n):
            assert not p(B.point_series(m))


@pytest.mark.parametrize("F", [F2, F3])
def test_valuation_law(F):
    B = NewtonBasis(F)
    n_max, m_max, P = 32, 100, 4
    xs = B.points_array(range(m_max + 1))
    mins = [None] * (n_max + 1)
    for n, vals in B.iter_Q_values(xs, n_max, P):
        v = [first_nonzero(r) for r in vals]
        finite = [x for x in v if x is not None]
        mins[n] = min(finite)
        assert v[n] == 0  # Q_n(u_n) is a unit
    assert all(m == 0 for m in mins)  # so v(p_n(u_m)) >= w(n) with equality


def test_digit_basis_examples():
    B = NewtonBasis(F2)
    assert B.digit_poly(0).coeffs == [LaurentSeries.one(F2)]
    assert B.digit_poly(1).coeffs == B.Q_poly(1).coeffs
    e1 = B.digit_poly(2)
    assert e1.coeffs[1] == LaurentSeries.monomial(F2, -1) and e1.coeffs[2] == LaurentSeries.monomial(F2, -1)


def _rand_point(F, rng, L=6):
    return [rng.randrange(F.q) for _ in range(L)]


@pytest.mark.parametrize("F", [F2, F3])
def test_digit_functions_are_linear(F):
    B = NewtonBasis(F)
    rng = random.Random(5)
    P = 8
    for i in range(4):
        n = F.q**i
        for _ in range(25):
            a, b, c = _rand_point(F, rng), _rand_point(F, rng), rng.randrange(F.q)
            s = [F.add(x, y) for x, y in zip(a, b)]
            ca = [F.mul(c, x) for x in a]
            vals = B.digit_values(np.array([a, b, s, ca]), n, P)[:, n, :]
            assert np.array_equal(vals[2], F.vadd(vals[0], vals[1]))
            assert np.array_equal(vals[3], F.vscale(c, vals[0]))


@pytest.mark.parametrize("F", [F2, F3])
def test_digit_binomial_theorem(F):
    B = NewtonBasis(F)
    rng = random.Random(9)
    P, n_max = 6, F.q**3
    for _ in range(6):
        x, y = _rand_point(F, rng), _rand_point(F, rng)
        s = [F.add(a, b) for a, b in zip(x, y)]
        G = B.digit_values(np.array([x, y, s]), n_max, P)
        for n in range(n_max + 1):
            acc = np.zeros(P, dtype=np.int64)
            for i in range(n + 1):
                c = binom_mod_p(n, i, F.p)
                if c:
                    prod = F.conv(G[0, i], G[1, n - i])[:P]
                    acc = F.vadd(acc, F.vscale(c, prod))
            assert np.array_equal(acc, G[2, n])


def test_newton_coefficients_of_basis_functions():
    B = NewtonBasis(F2)
    M, P = 7, 10
    table = B.diag_table(M, P)
    for k in range(M + 1):
        a = B.newton_coefficients_array(table[:, k, :], P)
        for n in range(M + 1):
            assert a[n].any() == (n == k)
            if n == k:
                assert a[n][0] == 1 and not a[n][1:].any()


def test_indicator_of_uR_has_order_one_decay():
    # locally constant of order 1, so v(a_n) >= w(n) - w_1(n); the expansion is infinite
    B = NewtonBasis(F2)
    M, P = 31, 24
    vals = np.zeros((M + 1, P), dtype=np.int64)
    for m in range(M + 1):
        if m % 2 == 0:
            vals[m, 0] = 1
    a = B.newton_coefficients_array(vals, P)
    assert a[0][0] == 1 and not a[0][1:].any()
    assert a[1][0] == 1 and not a[1][1:].any()  # 1 - z through u_0, u_1
    assert a[2].any()  # not affine: the indicator is 1 at u but 1 - u is not
    for n, v in valuations_of(a, P):
        assert v >= weight(n, 2) - weight(n, 2, 1)


def test_z_cubed_matches_change_of_basis():
    B = NewtonBasis(F2)
    M, P = 7, 12
    vals = np.zeros((M + 1, P), dtype=np.int64)
    for m in range(M + 1):
        vals[m] = (B.point_series(m) ** 3).window(0, P)
    a = B.newton_coefficients_array(vals, P)
    from fqzeta.measures import expand_polynomial

    want = expand_polynomial(KPoly(F2, [0, 0, 0, 1]), [B.Q_poly(n) for n in range(4)])
    for n in range(M + 1):
        w = want[n].window(0, P) if n < 4 else np.zeros(P, dtype=np.int64)
        assert np.array_equal(a[n], w)


@pytest.mark.parametrize("F", [F2, F3])
def test_newton_interpolation_round_trip(F):
    B = NewtonBasis(F)
    rng = random.Random(2)
    M, P = 9, 10
    coeffs = [LaurentSeries.from_u_poly(F, _rand_point(F, rng, 3)) for _ in range(M + 1)]
    f = KPoly(F, coeffs)
    values = [f(B.point_series(m)).truncate(P) for m in range(M + 1)]
    a = B.newton_coefficients(values, P)
    Q = [B.Q_poly(n) for n in range(M + 1)]
    for m in range(M + 1):
        x = B.point_series(m)
        total = sum((a[n] * Q[n](x) for n in range(M + 1)), LaurentSeries.zero(F))
        assert total.agrees(values[m], P)


def test_amice_examples():
    q = 2
    exact = [(n, weight(n, q)) for n in range(64)]
    assert amice_order_check(exact, 0, q).verdict == "boundary: bounded, not divergent"
    flat = [(n, 0) for n in range(64)]
    for h in range(4):
        assert amice_order_check(flat, h, q).verdict == "inconsistent"


@pytest.mark.parametrize("y", [-1, 5, -7])
def test_unit_power_is_order_one(y):
    P = 160
    rep = amice_order_check(valuations_of(unit_power_coefficients(F2, y, 127, P), P), 1, 2)
    assert rep.verdict == "consistent"
    assert rep.min_deficiency >= 0


def test_order_from_gamma():
    for q in (2, 3, 5):
        assert order_from_gamma(Fraction(1, q - 1), q) == 1
        assert order_from_gamma(Fraction(q, q - 1), q) == 0
    assert order_from_gamma(Fraction(1, 8), 2) == 4
    with pytest.raises(ValueError):
        order_from_gamma(0, 2)
