import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from fqzeta.padic import (
    IwasawaSeries,
    MahlerFunction,
    PadicInt,
    act,
    dirac_series,
    eigen_check,
    eigenfunction,
    mahler_from_values,
    tate_tail_action,
    values_from_mahler,
)
from fqzeta.series import PrecisionError

PRIMES = (2, 3, 5)


def test_padic_int_arithmetic():
    a = PadicInt(7, 3, 4)
    assert (a * a.inverse()).value == 1
    assert PadicInt(18, 3, 4).valuation == 2
    with pytest.raises(ZeroDivisionError):
        PadicInt(9, 3, 4).inverse()


def test_dirac_examples():
    assert dirac_series(0, 5, 3, 4).coeffs == (1, 0, 0, 0, 0, 0)
    assert dirac_series(1, 5, 3, 4).coeffs == (1, 1, 0, 0, 0, 0)
    for p in PRIMES:
        assert dirac_series(2, 8, p, 6) * dirac_series(3, 8, p, 6) == dirac_series(5, 8, p, 6)


def test_dirac_of_truncated_exponent_needs_room():
    with pytest.raises(PrecisionError):
        dirac_series(PadicInt(5, 2, 3), 8, 2, 3)
    # with enough digits the result only depends on the residue
    a = dirac_series(PadicInt(5, 2, 6), 8, 2, 3)
    b = dirac_series(5 + 2**6, 8, 2, 3)
    assert a == b


def test_act_examples():
    p, N = 3, 6
    X = IwasawaSeries.X(p, N, 6)
    for k in range(1, 5):
        assert act(X, MahlerFunction.binomial(p, N, k, 6)) == MahlerFunction.binomial(p, N, k - 1, 6)
    assert act(X, MahlerFunction.binomial(p, N, 0, 6)).coeffs == (0,) * 7
    shifted = act(dirac_series(1, 6, p, N), MahlerFunction.binomial(p, N, 2, 6))
    assert shifted.values(5) == [comb(x + 1, 2) for x in range(6)]
    assert shifted.coeffs[:3] == (0, 1, 1)


@pytest.mark.parametrize("p", PRIMES)
def test_eigenfunction_identity(p):
    N, D = 8, 12
    for m in (p, 2 * p, p * p):
        assert eigen_check(IwasawaSeries(p, N, [1, 1] + [0] * D), m, D, N)
        assert eigen_check(IwasawaSeries.X(p, N, D), m, D, N)
        assert eigen_check(IwasawaSeries.X(p, N, D, 2), m, D, N)
    rng = random.Random(p)
    for _ in range(5):
        Fs = IwasawaSeries(p, N, [rng.randrange(p**N) for _ in range(D + 1)])
        assert eigen_check(Fs, p, D, N)


def test_eigenfunction_precision_guard():
    with pytest.raises(PrecisionError):
        eigenfunction(2, 2, 8, 4)


def test_mahler_examples():
    p, N = 3, 6
    assert mahler_from_values([1] * 6, p, N) == [1, 0, 0, 0, 0, 0]
    assert mahler_from_values(list(range(6)), p, N) == [0, 1, 0, 0, 0, 0]
    a = 1 + p
    assert mahler_from_values([a**n for n in range(7)], p, N) == [p**n % p**N for n in range(7)]


@given(st.sampled_from(PRIMES), st.lists(st.integers(0, 10**6), min_size=1, max_size=12))
def test_mahler_round_trip(p, vals):
    N = 5
    coeffs = mahler_from_values(vals, p, N)
    assert values_from_mahler(coeffs, p, N) == [v % p**N for v in vals]


def test_tate_tail_examples():
    p, N = 3, 4
    g = [1, 2, 0, 1]
    assert tate_tail_action(IwasawaSeries.const(p, N, 5), g) == g
    assert tate_tail_action(IwasawaSeries.X(p, N, 5), [0, 1]) == [1, 0]
    assert tate_tail_action(IwasawaSeries.X(p, N, 5, 2), [0, 1]) == [0, 0]


def _rand_series(rng, p, N, D):
    return IwasawaSeries(p, N, [rng.randrange(p**N) for _ in range(D + 1)])


@pytest.mark.parametrize("p", PRIMES)
def test_convolution_algebra_laws(p):
    rng = random.Random(10 + p)
    N, D = 4, 12
    for _ in range(10):
        a, b, c = (_rand_series(rng, p, N, D) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("p", PRIMES)
def test_act_is_an_algebra_action(p):
    rng = random.Random(20 + p)
    N, D = 5, 10
    for _ in range(10):
        Fs, G = _rand_series(rng, p, N, 4), _rand_series(rng, p, N, 4)
        f = MahlerFunction(p, N, [rng.randrange(p**N) for _ in range(D + 1)])
        Fs = IwasawaSeries(p, N, list(Fs.coeffs) + [0] * (D - 4))
        G = IwasawaSeries(p, N, list(G.coeffs) + [0] * (D - 4))
        assert act(Fs * G, f) == act(Fs, act(G, f))
