import random

import pytest

from fqzeta.algebra import GF, binom_mod_p
from fqzeta.bases import NewtonBasis
from fqzeta.measures import (
    DIGIT,
    NEWTON,
    Measure,
    act,
    convolve,
    dirac,
    divided_derivative,
    expand_polynomial,
    integrate,
    to_digit,
    to_newton,
    transform,
    transform_series,
)
from fqzeta.series import KPoly, LaurentSeries, TateSeries, hyperderivative

F2, F3 = GF(2), GF(3)
P = 12


def rand_R(F, rng, L=5):
    return LaurentSeries.from_u_poly(F, [rng.randrange(F.q) for _ in range(L)])


def rand_measure(F, rng, n_max):
    return Measure(F, DIGIT, tuple(rand_R(F, rng).with_prec(P) for _ in range(n_max + 1)))


def digit_expansion(f: KPoly, n_max):
    B = NewtonBasis(f.F)
    c = expand_polynomial(f, [B.digit_poly(n) for n in range(f.degree + 1)])
    zero = LaurentSeries.zero(f.F)
    return (c + [zero] * (n_max + 1))[: n_max + 1]


def unit(F, k, n):
    return [LaurentSeries.one(F) if i == k else LaurentSeries.zero(F) for i in range(n + 1)]


def agree_lists(a, b, prec=P):
    return len(a) == len(b) and all(x.agrees(y, prec) for x, y in zip(a, b))


@pytest.mark.parametrize("tag", [NEWTON, DIGIT])
def test_dirac_at_zero(tag):
    mu = dirac(LaurentSeries.zero(F2), 16, P, tag)
    assert mu.coeffs[0].agrees(LaurentSeries.one(F2), P)
    assert all(not c for c in mu.coeffs[1:])


@pytest.mark.parametrize("F", [F2, F3])
def test_integrating_dirac_evaluates(F):
    rng = random.Random(1)
    for _ in range(10):
        deg = rng.randrange(9)
        f = KPoly(F, [rand_R(F, rng, 3) for _ in range(deg + 1)])
        alpha = rand_R(F, rng)
        val, tail = integrate(digit_expansion(f, deg), dirac(alpha, deg, P))
        assert tail == float("inf")
        assert val.agrees(f(alpha), P)


def test_integrate_picks_coefficient_and_is_linear():
    rng = random.Random(2)
    mu = rand_measure(F2, rng, 8)
    for k in range(9):
        assert integrate(unit(F2, k, 8), mu)[0] == mu.coeffs[k]
    for _ in range(20):
        a = [rand_R(F2, rng) for _ in range(9)]
        b = [rand_R(F2, rng) for _ in range(9)]
        lhs = integrate([x + y for x, y in zip(a, b)], mu)[0]
        assert lhs.agrees(integrate(a, mu)[0] + integrate(b, mu)[0], P)


def test_tag_mismatch_rejected():
    mu = dirac(LaurentSeries.one(F2), 4, P, NEWTON)
    with pytest.raises(ValueError):
        convolve(mu, mu)
    with pytest.raises(ValueError):
        integrate(unit(F2, 0, 4), mu, tag=DIGIT)


def test_newton_digit_round_trip():
    rng = random.Random(3)
    alpha = rand_R(F3, rng)
    mu = dirac(alpha, 12, P, NEWTON)
    assert to_digit(mu).agrees(dirac(alpha, 12, P, DIGIT))
    assert to_newton(to_digit(mu)).agrees(mu)


@pytest.mark.parametrize("F", [F2, F3])
def test_dirac_convolution(F):
    rng = random.Random(4)
    n = 16
    for a, b in [(LaurentSeries.one(F), LaurentSeries.monomial(F, 1))] + [
        (rand_R(F, rng), rand_R(F, rng)) for _ in range(4)
    ]:
        assert convolve(dirac(a, n, P), dirac(b, n, P)).agrees(dirac(a + b, n, P))


@pytest.mark.parametrize("F", [F2, F3])
def test_convolution_algebra_laws(F):
    rng = random.Random(5)
    n = 16
    e = dirac(LaurentSeries.zero(F), n, P)
    for _ in range(30):
        x, y, z = (rand_measure(F, rng, n) for _ in range(3))
        assert convolve(x, y).agrees(convolve(y, x))
        assert convolve(convolve(x, y), z).agrees(convolve(x, convolve(y, z)))
        assert convolve(x, e).agrees(x)


def test_divided_derivative_composition():
    # the structure constant is C(i+j, i)
    for F in (F2, F3):
        n = 12
        for i in range(4):
            for j in range(4):
                lhs = convolve(divided_derivative(F, i, n), divided_derivative(F, j, n))
                c = binom_mod_p(i + j, i, F.p)
                rhs = divided_derivative(F, i + j, n).scale(LaurentSeries.const(F, c))
                assert lhs.agrees(rhs)
    both = convolve(divided_derivative(F2, 1, 8), divided_derivative(F2, 1, 8))
    assert both.is_zero()


def test_divided_derivative_on_digit_basis():
    for F in (F2, F3):
        N = 10
        for n in range(N + 1):
            for i in range(n + 1):
                out = act(divided_derivative(F, i, N), unit(F, n, N))
                c = binom_mod_p(n, i, F.p)
                want = [LaurentSeries.const(F, c) if m == n - i else LaurentSeries.zero(F) for m in range(N + 1)]
                assert agree_lists(out, want)


def test_translation_by_dirac():
    rng = random.Random(6)
    F, deg = F3, 6
    f = KPoly(F, [rand_R(F, rng, 2) for _ in range(deg + 1)])
    alpha = rand_R(F, rng)
    g = act(dirac(alpha, deg, P), digit_expansion(f, deg))
    for _ in range(10):
        x = rand_R(F, rng)
        assert integrate(g, dirac(x, deg, P))[0].agrees(f(x + alpha), P)
    assert agree_lists(act(dirac(LaurentSeries.zero(F), deg, P), digit_expansion(f, deg)), digit_expansion(f, deg))


@pytest.mark.parametrize("F", [F2, F3])
def test_action_evaluation_identity(F):
    rng = random.Random(7)
    B = NewtonBasis(F)
    n = 12
    mu = rand_measure(F, rng, n)
    f = [rand_R(F, rng) for _ in range(n + 1)]
    g = act(mu, f)
    for m in range(33):
        alpha = B.point_series(m)
        lhs = integrate(g, dirac(alpha, n, P))[0]
        rhs = integrate(f, convolve(dirac(alpha, n, P), mu))[0]
        assert lhs.agrees(rhs, P)


@pytest.mark.parametrize("F", [F2, F3])
def test_module_law(F):
    rng = random.Random(8)
    n = 10
    for _ in range(5):
        mu, nu = rand_measure(F, rng, n), rand_measure(F, rng, n)
        f = [rand_R(F, rng) for _ in range(n + 1)]
        assert agree_lists(act(convolve(mu, nu), f), act(mu, act(nu, f)))


def test_transform_examples():
    F = F2
    for k in range(6):
        t = transform_series(unit(F, k, 6))
        assert t.agrees(TateSeries.from_list(F, [1 if i == k else 0 for i in range(7)]))
    rng = random.Random(9)
    f = [rand_R(F, rng) for _ in range(7)]
    assert transform(f, LaurentSeries.zero(F)) == f[0]


@pytest.mark.parametrize("F", [F2, F3])
def test_transform_intertwines_divided_derivatives(F):
    f = unit(F, 5, 5)
    lhs = transform_series(act(divided_derivative(F, 2, 5), f))
    rhs = hyperderivative(transform_series(f), 2)
    assert lhs.agrees(rhs)
    rng = random.Random(10)
    g = [rand_R(F, rng) for _ in range(9)]
    for i in range(5):
        assert transform_series(act(divided_derivative(F, i, 8), g)).agrees(hyperderivative(transform_series(g), i))


def test_alternating_measure_times_powers(capsys):
    # nu has digit coefficients (-1)^n, mu has c^n; nu * mu has (c - 1)^n
    rng = random.Random(11)
    for F in (F2, F3):
        n = 16
        c = LaurentSeries.one(F) + LaurentSeries.monomial(F, 1) * rand_R(F, rng, 3)
        minus = LaurentSeries.const(F, F.neg(1))
        nu = Measure(F, DIGIT, tuple(minus**k for k in range(n + 1)))
        mu = Measure(F, DIGIT, tuple(c**k for k in range(n + 1)))
        out = convolve(nu, mu)
        d = c - LaurentSeries.one(F)
        for k in range(n + 1):
            assert out.coeffs[k] == d**k
        assert [x.valuation for x in out.coeffs[1:]] == [k * d.valuation for k in range(1, n + 1)]
    # parity indicator: reported only
    F = F2
    nu = Measure(F, DIGIT, tuple(LaurentSeries.one(F) for _ in range(17)))
    mu = Measure(F, DIGIT, tuple(LaurentSeries.one(F) if k % 2 == 0 else LaurentSeries.zero(F) for k in range(17)))
    print("parity case:", [str(x) for x in convolve(nu, mu).coeffs])
