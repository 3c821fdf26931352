"""Measures on R = F_q[[u]] as coefficient sequences against a basis.

A measure mu is stored through its coefficients b_n = integral of Q_n (Newton
tag) or of G_n (digit tag), n <= n_max.  Convolution and the action on
functions use the binomial theorem of the digit basis,
G_n(x + y) = sum_i C(n, i) G_i(x) G_{n-i}(y), so they need the digit tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


from .algebra import GF, binom_mod_p
from .bases import NewtonBasis, weight
from .series import KPoly, LaurentSeries, PrecisionError, TateSeries

__all__ = [
    "Measure",
    "dirac",
    "divided_derivative",
    "integrate",
    "convolve",
    "act",
    "transform",
    "transform_series",
    "expand_polynomial",
    "to_digit",
    "to_newton",
    "evaluate_expansion",
]

NEWTON = "newton"
DIGIT = "digit"


def _min_val(coeffs) -> float:
    vals = [c.valuation for c in coeffs if c]
    return min(vals) if vals else math.inf


@dataclass(frozen=True)
class Measure:
    """Basis-tagged truncated coefficient sequence of a measure."""

    F: GF
    tag: str
    coeffs: tuple

    def __post_init__(self):
        if self.tag not in (NEWTON, DIGIT):
            raise ValueError(f"unknown basis tag {self.tag!r}")

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    @property
    def certificate(self) -> float:
        """Minimum valuation of the stored coefficients (boundedness witness)."""
        return _min_val(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other: "Measure") -> "Measure":
        _check_tag(self, other.tag)
        n = min(self.n_max, other.n_max)
        return Measure(self.F, self.tag, tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)))

    def scale(self, s: LaurentSeries) -> "Measure":
        return Measure(self.F, self.tag, tuple(c * s for c in self.coeffs))

    def truncate(self, n_max: int) -> "Measure":
        return Measure(self.F, self.tag, self.coeffs[: n_max + 1])

    def agrees(self, other: "Measure") -> bool:
        if self.tag != other.tag:
            return False
        n = min(self.n_max, other.n_max)
        return all(self.coeffs[i].agrees(other.coeffs[i]) for i in range(n + 1))

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)


def _check_tag(mu: Measure, tag: str):
    if mu.tag != tag:
        raise ValueError(f"basis mismatch: measure has tag {mu.tag!r}, need {tag!r}")


@lru_cache(maxsize=None)
def _basis(F: GF) -> NewtonBasis:
    return NewtonBasis(F)


def _binom(n: int, k: int, p: int) -> int:
    return binom_mod_p(n, k, p)


def dirac(alpha: LaurentSeries, n_max: int, prec: int, tag: str = DIGIT, basis: NewtonBasis | None = None) -> Measure:
    """delta_alpha: coefficients Q_n(alpha) or G_n(alpha), mod u^prec."""
    F = alpha.F
    B = basis or _basis(F)
    if alpha and alpha.val < 0:
        raise ValueError("Dirac measures are supported on F_q[[u]]")
    need = prec + weight(n_max, F.q)
    if alpha.prec is not None and alpha.prec < need:
        raise PrecisionError(f"alpha known to u^{alpha.prec}; need u^{need} for n_max={n_max}")
    x = alpha.window(0, need if alpha.prec is not None else max(alpha.val + len(alpha.c), 1))
    if tag == NEWTON:
        vals = B.Q_values(x[None, :], n_max, prec)[0]
    elif tag == DIGIT:
        vals = B.digit_values(x[None, :], n_max, prec)[0]
    else:
        raise ValueError(f"unknown basis tag {tag!r}")
    return Measure(F, tag, tuple(LaurentSeries(F, 0, row, prec) for row in vals))


def divided_derivative(F: GF, i: int, n_max: int) -> Measure:
    """D^i/i!: the digit-tag measure with b_n = 1 if n = i else 0."""
    if i < 0:
        raise ValueError("order must be non-negative")
    one, zero = LaurentSeries.one(F), LaurentSeries.zero(F)
    return Measure(F, DIGIT, tuple(one if n == i else zero for n in range(n_max + 1)))


def integrate(a, mu: Measure, tag: str | None = None, tail_order: int | None = None):
    """Return (sum a_n b_n, tail valuation bound).

    With tail_order = h the expansion is taken to continue beyond the supplied
    terms with v(a_n) >= w(n) - w_h(n) (an order-h function of norm <= 1),
    and the bound is that plus the measure's certificate.  Without it the
    expansion is treated as finite and the bound is inf.
    """
    if tag is not None:
        _check_tag(mu, tag)
    F = mu.F
    N = len(a) - 1
    if N > mu.n_max:
        raise ValueError(f"expansion has {N + 1} terms but the measure stops at n_max={mu.n_max}")
    total = LaurentSeries.zero(F)
    for n, an in enumerate(a):
        an = an if isinstance(an, LaurentSeries) else LaurentSeries.const(F, int(an))
        total = total + an * mu.coeffs[n]
    if tail_order is None:
        return total, math.inf
    n1 = N + 1
    return total, (weight(n1, F.q) - weight(n1, F.q, tail_order)) + min(mu.certificate, 0)


def convolve(mu: Measure, nu: Measure) -> Measure:
    """mu * nu in the digit tag: c_n = sum_i C(n,i) a_i b_{n-i}."""
    _check_tag(mu, DIGIT)
    _check_tag(nu, DIGIT)
    F = mu.F
    p = F.p
    n_max = min(mu.n_max, nu.n_max)
    out = []
    for n in range(n_max + 1):
        acc = LaurentSeries.zero(F)
        for i in range(n + 1):
            c = _binom(n, i, p)
            if c:
                acc = acc + (mu.coeffs[i] * nu.coeffs[n - i]).scale(F.from_int(c))
        out.append(acc)
    return Measure(F, DIGIT, tuple(out))


def act(mu: Measure, f) -> list:
    """(mu * f)(x) = integral f(x + y) dmu(y), on digit expansions.

    Since mu * G_n = sum_i C(n,i) b_i G_{n-i}, the new coefficients are
    d_m = sum_i C(m+i, i) b_i c_{m+i}.
    """
    _check_tag(mu, DIGIT)
    F = mu.F
    p = F.p
    c = [x if isinstance(x, LaurentSeries) else LaurentSeries.const(F, int(x)) for x in f]
    N = len(c) - 1
    out = []
    for m in range(N + 1):
        acc = LaurentSeries.zero(F)
        for i in range(0, min(N - m, mu.n_max) + 1):
            k = _binom(m + i, i, p)
            if k:
                acc = acc + (mu.coeffs[i] * c[m + i]).scale(F.from_int(k))
        out.append(acc)
    return out


def transform_series(f) -> TateSeries:
    """f^(z) = sum_n c_n z^n for a digit expansion f = sum c_n G_n."""
    if not f:
        raise ValueError("empty expansion")
    F = next((x.F for x in f if isinstance(x, LaurentSeries)), None)
    if F is None:
        raise ValueError("expansion coefficients must be LaurentSeries")
    return TateSeries.from_list(F, list(f))


def transform(f, z: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Evaluate f^ at z (z in the unit disc), optionally truncated."""
    val = transform_series(f).eval(z)
    return val if prec is None else val.truncate(prec)


def evaluate_expansion(coeffs, x: LaurentSeries, prec: int, tag: str = DIGIT, basis: NewtonBasis | None = None) -> LaurentSeries:
    """sum c_n B_n(x) mod u^prec for the basis B given by tag."""
    delta = dirac(x, len(coeffs) - 1, prec, tag, basis)
    return integrate(coeffs, delta)[0]


# change of basis


def expand_polynomial(f: KPoly, basis_polys) -> list:
    """Coefficients of f in a triangular polynomial basis with monomial leading terms.

    basis_polys[k] has degree k and leading coefficient a monomial in u, so
    the elimination stays exact.
    """
    F = f.F
    rem = list(f.coeffs)
    out = [LaurentSeries.zero(F) for _ in range(len(rem))]
    for k in range(len(rem) - 1, -1, -1):
        c = rem[k]
        if not c:
            continue
        bk = basis_polys[k]
        lc = bk.coeffs[k]
        if len(lc.c) != 1 or not lc.is_exact():
            raise ValueError("basis leading coefficients must be exact monomials")
        g = c / lc
        out[k] = g
        for i in range(k + 1):
            if bk.coeffs[i]:
                rem[i] = rem[i] - g * bk.coeffs[i]
    return out


@lru_cache(maxsize=None)
def _change_matrices(F: GF, n_max: int):
    B = _basis(F)
    Q = [B.Q_poly(n) for n in range(n_max + 1)]
    G = [B.digit_poly(n) for n in range(n_max + 1)]
    g_in_q = [expand_polynomial(G[n], Q) for n in range(n_max + 1)]
    q_in_g = [expand_polynomial(Q[n], G) for n in range(n_max + 1)]
    return g_in_q, q_in_g


def to_digit(mu: Measure) -> Measure:
    """Digit-tag coefficients: integral of G_n = sum_k g_{n,k} (integral of Q_k)."""
    if mu.tag == DIGIT:
        return mu
    g_in_q, _ = _change_matrices(mu.F, mu.n_max)
    out = []
    for n in range(mu.n_max + 1):
        acc = LaurentSeries.zero(mu.F)
        for k, g in enumerate(g_in_q[n]):
            if g:
                acc = acc + g * mu.coeffs[k]
        out.append(acc)
    return Measure(mu.F, DIGIT, tuple(out))


def to_newton(mu: Measure) -> Measure:
    if mu.tag == NEWTON:
        return mu
    _, q_in_g = _change_matrices(mu.F, mu.n_max)
    out = []
    for n in range(mu.n_max + 1):
        acc = LaurentSeries.zero(mu.F)
        for k, g in enumerate(q_in_g[n]):
            if g:
                acc = acc + g * mu.coeffs[k]
        out.append(acc)
    return Measure(mu.F, NEWTON, tuple(out))
