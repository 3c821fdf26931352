"""Newton (Amice) and digit (Carlitz-Conrad) bases of continuous functions on R = F_q[[u]].

The VWD sequence is u_n = sum_i n_i u^i over the base-q digits n_i of n, with
F_q elements encoded as ints so that the digit map is the identity.  Then
p_n(z) = prod_{i<n} (z - u_i), the normalizer is s_n = u^{w(n)} with
w(n) = sum_{i>=1} floor(n / q^i), and Q_n = p_n / s_n.

Elements of R known mod u^P are numpy arrays of length P; most routines here
work on such arrays and are wrapped by LaurentSeries-level helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import GF
from .series import KPoly, LaurentSeries, PadicExponent, PrecisionError, one_unit_pow

__all__ = [
    "weight",
    "vwd_digits",
    "NewtonBasis",
    "AmiceReport",
    "amice_order_check",
    "order_from_gamma",
    "mul_trunc",
    "inv_unit_trunc",
    "unit_power_coefficients",
    "valuations_of",
]


def weight(n: int, q: int, h: int | None = None) -> int:
    """w(n) = sum_{i>=1} floor(n/q^i), or the partial sum up to i = h."""
    if n < 0:
        raise ValueError("index must be non-negative")
    total, i, qi = 0, 1, q
    while qi <= n and (h is None or i <= h):
        total += n // qi
        i += 1
        qi *= q
    return total


def vwd_digits(n: int, q: int) -> np.ndarray:
    """Base-q digits of n, ascending; these are the u-coefficients of u_n."""
    out = []
    while n:
        out.append(n % q)
        n //= q
    return np.array(out, dtype=np.int64)


def mul_trunc(F: GF, a: np.ndarray, b: np.ndarray, P: int) -> np.ndarray:
    out = np.zeros(P, dtype=np.int64)
    if len(a) and len(b):
        c = F.conv(a[:P], b[:P])[:P]
        out[: len(c)] = c
    return out


def inv_unit_trunc(F: GF, a: np.ndarray, P: int) -> np.ndarray:
    """Inverse of a unit of R modulo u^P."""
    if len(a) == 0 or a[0] == 0:
        raise ZeroDivisionError("not a unit of F_q[[u]]")
    return LaurentSeries(F, 0, a[:P]).inverse(P).window(0, P)


def _rows_mul_short(F: GF, rows: np.ndarray, fac: np.ndarray) -> np.ndarray:
    """Row-wise product of rows [M, P] by short factors [M, L], truncated to P."""
    M, P = rows.shape
    if F.e == 1:
        out = np.zeros_like(rows)
        for t in range(min(fac.shape[1], P)):
            col = fac[:, t]
            if col.any():
                out[:, t:] += col[:, None] * rows[:, : P - t]
        return out % F.p
    out = np.zeros_like(rows)
    for t in range(min(fac.shape[1], P)):
        col = fac[:, t]
        if col.any():
            out[:, t:] = F.vadd(out[:, t:], F.vmul(col[:, None], rows[:, : P - t]))
    return out


class NewtonBasis:
    """The VWD sequence of R = F_q[[u]] with its Newton polynomials, cached."""

    def __init__(self, F: GF):
        self.F = F
        self.q = F.q
        self._p = [np.ones((1, 1), dtype=np.int64)]  # p_n as [z-degree, u-degree] arrays

    # points and weights
    def point(self, n: int) -> np.ndarray:
        return vwd_digits(n, self.q)

    def point_series(self, n: int) -> LaurentSeries:
        return LaurentSeries.from_u_poly(self.F, self.point(n))

    def index_of(self, x) -> int:
        """Index n with u_n = x, for x given exactly as a u-polynomial."""
        c = x.window(0, len(x.c) + max(x.val, 0)) if isinstance(x, LaurentSeries) else np.asarray(x)
        if isinstance(x, LaurentSeries) and (x.val < 0 or not x.is_exact()):
            raise ValueError("only exact elements of F_q[u] are VWD points")
        return int(sum(int(d) * self.q**i for i, d in enumerate(c)))

    def weight(self, n: int, h: int | None = None) -> int:
        return weight(n, self.q, h)

    # exact polynomials
    def _p_array(self, n: int) -> np.ndarray:
        F = self.F
        while len(self._p) <= n:
            k = len(self._p) - 1
            cur = self._p[k]
            uk = self.point(k)
            rows, cols = cur.shape
            out = np.zeros((rows + 1, cols + max(len(uk) - 1, 0)), dtype=np.int64)
            out[1:, :cols] = cur  # z * p_k
            for t, c in enumerate(uk.tolist()):
                if c:
                    term = F.vneg(F.vscale(c, cur))
                    out[:rows, t : t + cols] = F.vadd(out[:rows, t : t + cols], term)
            self._p.append(out)
        return self._p[n]

    def newton_poly(self, n: int) -> KPoly:
        """p_n(z) with exact coefficients in F_q[u]."""
        arr = self._p_array(n)
        return KPoly(self.F, [LaurentSeries.from_u_poly(self.F, row) for row in arr])

    def Q_poly(self, n: int) -> KPoly:
        """Q_n = p_n / u^{w(n)}."""
        w = self.weight(n)
        arr = self._p_array(n)
        return KPoly(self.F, [LaurentSeries(self.F, -w, row) for row in arr])

    def q_coeffs(self, n: int) -> list:
        """Monomial coefficients q_{n,j} of Q_n, exact Laurent polynomials in u."""
        return self.Q_poly(n).coeffs

    # evaluation
    def iter_Q_values(self, xs: np.ndarray, n_max: int, P: int):
        """Yield (k, Q_k(x) mod u^P for each row x of xs) for k = 0..n_max.

        xs is an [M, L] array of elements of R given exactly (or mod u^L with
        L >= P).  p_k(x) is carried mod u^{P + w(n_max)} so that dividing by
        u^{w(k)} keeps P correct digits.
        """
        F = self.F
        xs = np.atleast_2d(np.asarray(xs, dtype=np.int64))
        M = xs.shape[0]
        Pw = P + self.weight(n_max)
        cur = np.zeros((M, Pw), dtype=np.int64)
        cur[:, 0] = 1
        L = max(xs.shape[1], len(self.point(n_max)) if n_max else 1)
        xpad = np.zeros((M, L), dtype=np.int64)
        xpad[:, : xs.shape[1]] = xs
        for k in range(n_max + 1):
            w = self.weight(k)
            if w and cur[:, :w].any():
                raise AssertionError("VWD valuation law violated")  # pragma: no cover
            yield k, cur[:, w : w + P]
            if k == n_max:
                break
            uk = self.point(k)
            fac = xpad.copy()
            fac[:, : len(uk)] = F.vadd(fac[:, : len(uk)], F.vneg(uk)[None, :])
            cur = _rows_mul_short(F, cur, fac)

    def Q_values(self, xs: np.ndarray, n_max: int, P: int) -> np.ndarray:
        """Array [M, n_max+1, P] of Q_k(x) mod u^P."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.int64))
        out = np.zeros((xs.shape[0], n_max + 1, P), dtype=np.int64)
        for k, vals in self.iter_Q_values(xs, n_max, P):
            out[:, k, :] = vals
        return out

    def points_array(self, idx) -> np.ndarray:
        idx = list(idx)
        L = max((len(self.point(n)) for n in idx), default=1) or 1
        out = np.zeros((len(idx), L), dtype=np.int64)
        for r, n in enumerate(idx):
            d = self.point(n)
            out[r, : len(d)] = d
        return out

    def diag_table(self, M: int, P: int) -> np.ndarray:
        """T[m, k] = Q_k(u_m) mod u^P for k, m <= M."""
        return self.Q_values(self.points_array(range(M + 1)), M, P)

    def newton_coefficients_array(self, values: np.ndarray, P: int, table: np.ndarray | None = None) -> np.ndarray:
        """Solve f(u_m) = sum_{n<=m} a_n Q_n(u_m) for a_0..a_M, all mod u^P.

        values is [M+1, P].  Q_m(u_m) is a unit, so no precision is lost.
        """
        F = self.F
        values = np.asarray(values, dtype=np.int64)
        M = values.shape[0] - 1
        T = self.diag_table(M, P) if table is None else table
        a = np.zeros((M + 1, P), dtype=np.int64)
        for m in range(M + 1):
            acc = values[m].copy()
            for n in range(m):
                if a[n].any() and T[m, n].any():
                    acc = F.vadd(acc, F.vneg(mul_trunc(F, a[n], T[m, n], P)))
            piv = T[m, m]
            if piv[0] == 0:
                raise PrecisionError(f"Q_{m}(u_{m}) is not a unit to precision {P}")
            a[m] = mul_trunc(F, acc, inv_unit_trunc(F, piv, P), P)
        return a

    def newton_coefficients(self, values, prec: int | None = None) -> list:
        """Newton coefficients of the function with the given values f(u_0..u_M).

        values are LaurentSeries (or F_q ints); the result carries the common
        precision of the inputs, shifted back by any negative valuation.
        """
        F = self.F
        vals = [v if isinstance(v, LaurentSeries) else LaurentSeries.const(F, int(v)) for v in values]
        precs = [v.prec for v in vals if v.prec is not None]
        P = prec if prec is not None else (min(precs) if precs else 32)
        if precs and P > min(precs):
            raise PrecisionError(f"values known only to u^{min(precs)}")
        shift = max([0] + [-v.val for v in vals if v])
        arr = np.stack([v.shift(shift).window(0, P + shift) for v in vals])
        a = self.newton_coefficients_array(arr, P + shift)
        return [LaurentSeries(F, -shift, row, P) for row in a]

    # digit basis
    def digit_poly(self, n: int) -> KPoly:
        """G_n = prod_t e_t^{n_t} with e_t = Q_{q^t}."""
        out = KPoly(self.F, [1])
        t, m = 0, n
        while m:
            d = m % self.q
            if d:
                e_t = self.Q_poly(self.q**t)
                for _ in range(d):
                    out = out * e_t
            m //= self.q
            t += 1
        return out

    def digit_values(self, xs: np.ndarray, n_max: int, P: int) -> np.ndarray:
        """Array [M, n_max+1, P] of G_n(x) mod u^P."""
        F = self.F
        q = self.q
        xs = np.atleast_2d(np.asarray(xs, dtype=np.int64))
        tops = []
        t = 0
        while q**t <= max(n_max, 1):
            tops.append(q**t)
            t += 1
        Qv = self.Q_values(xs, tops[-1], P)
        e = [Qv[:, qt, :] for qt in tops]
        M = xs.shape[0]
        G = np.zeros((M, n_max + 1, P), dtype=np.int64)
        G[:, 0, 0] = 1
        for n in range(1, n_max + 1):
            t, m = 0, n
            while m % q == 0:
                m //= q
                t += 1
            prev = G[:, n - q**t, :]
            G[:, n, :] = np.stack([mul_trunc(F, prev[r], e[t][r], P) for r in range(M)])
        return G


@dataclass(frozen=True)
class AmiceReport:
    h: int
    min_deficiency: float
    slope: float
    verdict: str
    deficiencies: tuple


def amice_order_check(valuations, h: int, q: int, tol: float = 1e-9) -> AmiceReport:
    """Compare coefficient valuations with the order-h growth law.

    The deficiency is d_n = v(a_n) - (w(n) - w_h(n)); order h means d_n -> inf.
    Infinite valuations (zero coefficients) are replaced by a cap above all
    finite data; callers with coefficients known only mod u^P should pass P.
    Valuations are typically constant on the blocks q^k <= n < q^{k+1} while
    the bound grows inside each block, so the evidence is the sequence of
    per-block minima of d_n: the least-squares slope over the last three
    blocks decides "consistent" (rising), "inconsistent" (falling) or
    "boundary: bounded, not divergent" (flat).
    """
    pts = sorted(valuations)
    if not pts:
        raise ValueError("empty sample")
    finite = [v for _, v in pts if v != float("inf")]
    cap = (max(finite) if finite else 0) + max(n for n, _ in pts) + 1
    defs = []
    blocks = {}
    for n, v in pts:
        v = cap if v == float("inf") else v
        d = v - (weight(n, q) - weight(n, q, h))
        defs.append(d)
        if n >= 1:
            k = len(vwd_digits(n, q)) - 1
            blocks[k] = min(blocks.get(k, d), d)
    ks = sorted(blocks)[-3:]
    if len(ks) < 2:
        slope = 0.0
    else:
        slope = float(np.polyfit(np.array(ks, dtype=float), np.array([blocks[k] for k in ks], dtype=float), 1)[0])
    if slope > tol:
        verdict = "consistent"
    elif slope < -tol:
        verdict = "inconsistent"
    else:
        verdict = "boundary: bounded, not divergent"
    return AmiceReport(h, float(min(defs)), slope, verdict, tuple(defs))


def order_from_gamma(gamma, q: int) -> int:
    """l = max(0, 1 + floor(-log(gamma (q-1)) / log q)), evaluated exactly."""
    g = Fraction(gamma)
    if g <= 0:
        raise ValueError("not locally analytic: gamma must be positive")
    r = g * (q - 1)
    # floor(-log_q r) is the largest k with q^k <= 1/r
    inv = 1 / r
    k = 0
    if inv >= 1:
        while Fraction(q) ** (k + 1) <= inv:
            k += 1
    else:
        while Fraction(q) ** k > inv:
            k -= 1
    return max(0, 1 + k)


def unit_power_coefficients(F: GF, y, n_max: int, P: int, basis: NewtonBasis | None = None) -> np.ndarray:
    """Newton coefficients of z~^y (z^y on 1 + uR, 0 elsewhere), mod u^P, as [n_max+1, P]."""
    B = basis or NewtonBasis(F)
    if isinstance(y, int):
        y = PadicExponent.from_int(y, F.p)
    vals = np.zeros((n_max + 1, P), dtype=np.int64)
    for m in range(n_max + 1):
        d = B.point(m)
        if len(d) and d[0] == 1:
            vals[m] = one_unit_pow(LaurentSeries.from_u_poly(F, d), y, P).window(0, P)
    return B.newton_coefficients_array(vals, P)


def valuations_of(rows: np.ndarray, P: int) -> list:
    """[(n, v(a_n))] with rows that vanish mod u^P reported as P."""
    out = []
    for n, r in enumerate(rows):
        nz = np.flatnonzero(r)
        out.append((n, int(nz[0]) if len(nz) else P))
    return out
