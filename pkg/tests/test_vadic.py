import itertools
import random

import pytest

from fqzeta.algebra import GF, FqPoly
from fqzeta.lseries import CongruenceCondition, DirichletSeries, euler_expand, special_polynomial
from fqzeta.series import PadicExponent
from fqzeta.vadic import (
    SvExponent,
    VadicBasis,
    VadicResidue,
    one_unit_part,
    reduce_special,
    teichmuller,
    vadic_pow,
    vadic_special_value,
    vadic_vwd_and_partial,
)

F2, F3 = GF(2), GF(3)
N = 8


def T(F):
    return FqPoly.T(F)


def places(F):
    t = T(F)
    out = [t, t + 1]
    if F.q == 2:
        out.append(t * t + t + 1)
    else:
        out.append(t * t + 1)
    return out


def rand_unit(f, rng, deg=7):
    F = f.F
    while True:
        a = FqPoly(F, [rng.randrange(F.q) for _ in range(deg + 1)])
        if a % f:
            return VadicResidue.of(f, N, a)


def test_residue_basics():
    f = T(F2) + 1
    r = VadicResidue.of(f, 3, T(F2) ** 5)
    assert r.modulus == f**3 and r.Q == 2
    assert r.is_unit() and VadicResidue.of(f, 3, f * T(F2)).valuation == 1
    assert (r * r.inverse()).r == FqPoly.one(F2)
    with pytest.raises(ValueError):
        VadicResidue.of(T(F2) * T(F2), 2, 1)  # not irreducible
    with pytest.raises((ValueError, ZeroDivisionError)):
        VadicResidue.of(f, 3, f).inverse()


@pytest.mark.parametrize("F", [F2, F3])
def test_teichmuller_constants_and_fixed_point(F):
    rng = random.Random(1)
    for f in places(F):
        for c in range(1, F.q):
            b = VadicResidue.of(f, N, FqPoly.const(F, c))
            if f.deg == 1:
                assert teichmuller(b) == b
        for _ in range(10):
            w = teichmuller(rand_unit(f, rng))
            assert w**w.Q == w
            assert teichmuller(w) == w
            assert (one_unit_part(rand_unit(f, rng)).r - 1) % f == FqPoly.zero(F)


def test_teichmuller_of_one_plus_T():
    b = VadicResidue.of(T(F2), N, T(F2) + 1)
    assert teichmuller(b).r == FqPoly.one(F2)


@pytest.mark.parametrize("F", [F2, F3])
def test_teichmuller_multiplicative(F):
    rng = random.Random(2)
    for f in places(F):
        for _ in range(20):
            a, b = rand_unit(f, rng), rand_unit(f, rng)
            assert teichmuller(a * b) == teichmuller(a) * teichmuller(b)


@pytest.mark.parametrize("F", [F2, F3])
def test_integer_points(F):
    rng = random.Random(3)
    for f in places(F):
        for _ in range(4):
            b = rand_unit(f, rng)
            assert vadic_pow(b, 0).r == FqPoly.one(F)
            for j in range(-16, 17):
                assert vadic_pow(b, j) == b**j


def test_inverse_one_unit():
    b = VadicResidue.of(T(F2), N, T(F2) + 1)
    y = SvExponent(PadicExponent.from_int(-1, 2), 0, 2)
    assert (b * vadic_pow(b, y)).r == FqPoly.one(F2)


def test_padic_exponent_is_continuous():
    # y_0 close to y_0' p-adically gives close powers of the 1-unit part
    f = T(F3) + 1
    b = one_unit_part(VadicResidue.of(f, N, T(F3) ** 3 + 2))
    y = PadicExponent.from_digits(3, [1, 2, 0, 1, 1, 2, 0, 0, 1, 2])
    z = PadicExponent.from_digits(3, [1, 2, 0, 1, 1, 2, 0, 0, 2, 0])
    d = vadic_pow(b, SvExponent(y, 0, 3)) - vadic_pow(b, SvExponent(z, 0, 3))
    assert d.valuation >= N  # lambda^k has valuation >= k, and digits agree below 3^8 > N


def monics(F, d):
    for low in itertools.product(range(F.q), repeat=d):
        yield FqPoly(F, list(low) + [1])


def brute_removed(F, f, j, d, keep=lambda a: True):
    acc = FqPoly.zero(F)
    for a in monics(F, d):
        if a % f and keep(a):
            acc = acc + a**j
    return acc % f**N


def test_special_value_examples():
    Z = DirichletSeries.zeta(F2)
    t = T(F2)
    v = vadic_special_value(Z, 1, t, N)
    assert v.coeffs[1] == t + 1
    for j in range(6):
        v = vadic_special_value(Z, j, t, N)
        for d in range(v.d_max + 1):
            assert v.coeffs[d] == brute_removed(F2, t, j, d)
    assert vadic_special_value(Z, 0, t, N).trimmed() == [FqPoly.one(F2), FqPoly.one(F2)]


@pytest.mark.parametrize("f", places(F2))
def test_matches_euler_removed_infinite_value(f):
    F = F2
    for j in range(13):
        v = vadic_special_value(DirichletSeries.zeta(F), j, f, N)
        D = v.d_max
        table = euler_expand(F, {f: [FqPoly.one(F)]}, D)
        L = DirichletSeries.from_table(F, table)
        assert reduce_special(special_polynomial(L, j), f, N) == v


def test_carlitz_removed_value():
    f = T(F3) + 2
    C = DirichletSeries.carlitz(F3)
    for j in range(5):
        v = vadic_special_value(C, j, f, 4)
        for d in range(v.d_max + 1):
            want = sum((a ** (j + 1) for a in monics(F3, d) if a % f), FqPoly.zero(F3)) % f**4
            assert v.coeffs[d] == want


def test_vadic_basis_nodes():
    for f in places(F3):
        V = VadicBasis(f)
        for n in range(60):
            assert V.index_of(V.point(n)) == n
        rows = V.Q_values([V.point(m) for m in range(20)], 19, 4)
        for m in range(20):
            assert VadicResidue(f, 4, rows[m][m]).is_unit()
            assert all(not rows[m][n] for n in range(m + 1, 20))


@pytest.mark.parametrize("F", [F2, F3])
def test_partial_route_vacuous(F):
    for f in places(F)[:2]:
        for j in range(4):
            assert vadic_vwd_and_partial(DirichletSeries.zeta(F), j, f, 4) == vadic_special_value(DirichletSeries.zeta(F), j, f, 4)


@pytest.mark.parametrize("f_expr,j", [("T", 1), ("T+1", 2)])
def test_partial_route_examples(f_expr, j):
    F = F2
    f = FqPoly.parse(F, f_expr)
    cond = CongruenceCondition.at_place(F, f, 1, FqPoly.one(F))
    Z = DirichletSeries.zeta(F)
    got = vadic_vwd_and_partial(Z, j, f, N, cond)
    for d in range(got.d_max + 1):
        assert got.coeffs[d] == brute_removed(F, f, j, d, lambda a: not (a - 1) % f)
    assert got == vadic_special_value(Z, j, f, N, cond=cond)


def test_partial_route_rejects_other_places():
    cond = CongruenceCondition.at_place(F2, T(F2), 1, FqPoly.one(F2))
    with pytest.raises(ValueError):
        vadic_vwd_and_partial(DirichletSeries.zeta(F2), 1, T(F2) + 1, N, cond)
    with pytest.raises(ValueError):
        vadic_vwd_and_partial(DirichletSeries.zeta(F2), 1, T(F2), N, CongruenceCondition.at_infinity(F2, 1, (1,)))
