"""Dirichlet series over A = F_q[T]: special polynomials, partial series, measures.

For a series L(s) = sum_a b_a a^{-s} over monic a with b_a in A, and the
point s = (x, y) acting by a^s = x^{deg a} <a>^y, the twisted value at
y = -j is the polynomial in x^{-1}

    z_L(x, -j) = sum_d x^{-d} c_{j,d},    c_{j,d} = sum_{deg a = d} b_a a^j.

The untwisted value L(x, -j) has x^{-d} coefficient u^{jd} c_{j,d}, since
a = u^{-deg a} <a>.  The canonical measure mu_{L,x} = sum_a b_a x^{-deg a}
delta_{<a>} lets the same numbers be recovered by integrating z^j against
Newton expansions, which is the second route implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import GF, FqPoly, irreducible_monics, lucas_submultisets, monic_polys, binom_mod_p
from .bases import NewtonBasis, _rows_mul_short, mul_trunc, weight
from .measures import NEWTON, Measure
from .series import LaurentSeries, PadicExponent, one_unit_pow

__all__ = [
    "DirichletSeries",
    "CongruenceCondition",
    "SpecialPoly",
    "power_sum",
    "stratum_power_sums",
    "special_polynomial",
    "zeta_power_sum_layers",
    "zeta_degree_table",
    "dirichlet_eval",
    "EvalResult",
    "canonical_measure",
    "coset_mass",
    "stratum_measure_coeffs",
    "measure_coefficient_polys",
    "partial_via_measure",
    "MeasureRoute",
    "euler_expand",
    "read_euler_factors",
    "degree_growth_report",
    "GrowthRow",
    "StratumCertificate",
    "fit_envelope",
    "floor_log",
]


# Dirichlet series


@dataclass(frozen=True)
class DirichletSeries:
    """Coefficients b_a in A indexed by monic a, with deg b_a <= delta * deg a.

    kind is "zeta" (b = 1), "carlitz" (b_a = a) or "table" (explicit values,
    missing monics have b_a = 0).
    """

    F: GF
    kind: str
    delta: int = 0
    table: dict | None = field(default=None, compare=False, hash=False)
    name: str = ""

    @classmethod
    def zeta(cls, F: GF) -> "DirichletSeries":
        return cls(F, "zeta", 0, None, "zeta")

    @classmethod
    def carlitz(cls, F: GF) -> "DirichletSeries":
        return cls(F, "carlitz", 1, None, "carlitz")

    @classmethod
    def from_table(cls, F: GF, table: dict, delta: int | None = None, name: str = "table") -> "DirichletSeries":
        for a, b in table.items():
            if not a.is_monic():
                raise ValueError(f"index {a} is not monic")
        if delta is None:
            ratios = [b.deg / a.deg for a, b in table.items() if b and a.deg > 0]
            delta = math.ceil(max(ratios, default=0))
        return cls(F, "table", delta, dict(table), name)

    @classmethod
    def read_table(cls, F: GF, text: str, delta: int | None = None) -> "DirichletSeries":
        """Lines ``poly;value`` in the dense polynomial format."""
        table = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, _, b = line.partition(";")
            table[FqPoly.parse(F, a)] = FqPoly.parse(F, b)
        return cls.from_table(F, table, delta)

    def coeff(self, a: FqPoly) -> FqPoly:
        if self.kind == "zeta":
            return FqPoly.one(self.F)
        if self.kind == "carlitz":
            return a
        return self.table.get(a, FqPoly.zero(self.F))

    def power_shift(self) -> int | None:
        """k such that b_a = a^k (zeta: 0, Carlitz: 1), else None."""
        return {"zeta": 0, "carlitz": 1}.get(self.kind)

    def max_table_degree(self) -> int | None:
        if self.kind != "table":
            return None
        return max((a.deg for a in self.table), default=-1)


# congruence conditions


@dataclass(frozen=True)
class CongruenceCondition:
    """a = alpha mod f^n at finite places, <a> = alpha mod u^{n_inf} at infinity."""

    F: GF
    finite: tuple = ()
    n_inf: int = 0
    alpha_inf: tuple = ()

    def __post_init__(self):
        seen = set()
        for f, n, alpha in self.finite:
            if not f.is_monic() or f.deg < 1:
                raise ValueError(f"modulus {f} must be monic of positive degree")
            if f in seen:
                raise ValueError(f"place {f} given twice")
            seen.add(f)
            if n < 1:
                raise ValueError("exponents must be positive")
        if self.n_inf < 0:
            raise ValueError("n_inf must be non-negative")
        al = tuple(int(c) for c in self.alpha_inf[: self.n_inf])
        al = al + (0,) * (self.n_inf - len(al))
        object.__setattr__(self, "alpha_inf", al)

    @classmethod
    def none(cls, F: GF) -> "CongruenceCondition":
        return cls(F)

    @classmethod
    def at_infinity(cls, F: GF, n_inf: int, alpha) -> "CongruenceCondition":
        return cls(F, (), n_inf, tuple(alpha))

    @classmethod
    def at_place(cls, F: GF, f: FqPoly, n: int, alpha: FqPoly) -> "CongruenceCondition":
        return cls(F, ((f, n, alpha % (f**n)),))

    @classmethod
    def parse(cls, F: GF, specs) -> "CongruenceCondition":
        """Combine specs ``f=<poly>;n=<int>;a=<poly>`` and ``inf;n=<int>;a=<u-digits>``."""
        if isinstance(specs, str):
            specs = [specs]
        finite, n_inf, alpha_inf, inf_seen = [], 0, (), False
        for spec in specs:
            parts = [s.strip() for s in spec.split(";") if s.strip()]
            kv = {}
            is_inf = False
            for part in parts:
                if part == "inf":
                    is_inf = True
                    continue
                k, sep, v = part.partition("=")
                if not sep:
                    raise ValueError(f"cannot read condition part {part!r} in {spec!r}")
                kv[k.strip()] = v.strip()
            if is_inf:
                if inf_seen:
                    raise ValueError("at most one condition at infinity")
                inf_seen = True
                n_inf = int(kv.get("n", "0"))
                a = kv.get("a", "1")
                alpha_inf = tuple(F.parse_coeff(s) for s in a.split(",")) if a else ()
            else:
                if "f" not in kv or "a" not in kv:
                    raise ValueError(f"finite condition needs f= and a=: {spec!r}")
                f = FqPoly.parse(F, kv["f"])
                n = int(kv.get("n", "1"))
                alpha = FqPoly.parse(F, kv["a"]) % (f**n)
                finite.append((f, n, alpha))
        return cls(F, tuple(finite), n_inf, alpha_inf)

    def is_vacuous(self) -> bool:
        return not self.finite and self.n_inf == 0

    @property
    def finite_degree(self) -> int:
        return sum(n * f.deg for f, n, _ in self.finite)

    def matches(self, a: FqPoly) -> bool:
        for f, n, alpha in self.finite:
            if (a - alpha) % (f**n):
                return False
        if self.n_inf:
            top = a.coeffs()[::-1][: self.n_inf]
            top = top + [0] * (self.n_inf - len(top))
            if tuple(top) != self.alpha_inf:
                return False
        return True

    def coset_dimension(self, d: int) -> int | None:
        """m with the admissible monics of degree d an affine coset of size q^m, if provable."""
        m = d - max(self.n_inf - 1, 0) - self.finite_degree
        if self.n_inf and self.alpha_inf[0] != 1:
            return None  # no monic qualifies
        return m if m >= 0 else None

    def admissible(self, d: int) -> list:
        return [a for a in monic_polys(self.F, d) if self.matches(a)]

    def spec_strings(self) -> list:
        out = [f"f={f.dense()};n={n};a={alpha.dense()}" for f, n, alpha in self.finite]
        if self.n_inf:
            out.append(f"inf;n={self.n_inf};a=" + ",".join(self.F.coeff_str(c) for c in self.alpha_inf))
        return out


def _vanishes(L: DirichletSeries, cond: CongruenceCondition, d: int, j: int) -> bool:
    """Stratum d of sum b_a a^j is provably 0 (power sums over an affine coset)."""
    if cond.n_inf and cond.alpha_inf[0] != 1:
        return True  # <a> is a 1-unit, so no monic qualifies
    k = L.power_shift()
    if k is None:
        return False
    m = cond.coset_dimension(d)
    if m is None:
        return False
    return j + k < L.F.q**m - 1


# powering and stratum sums


def _frob_spread(F: GF, arr: np.ndarray, k: int) -> np.ndarray:
    """Coefficients of a(T)^{p^k}: spread by p^k and Frobenius the coefficients."""
    pk = F.p**k
    c = arr if F.e == 1 else np.array([F.pow(int(x), pk) for x in arr], dtype=np.int64)
    out = np.zeros((len(c) - 1) * pk + 1, dtype=np.int64)
    out[::pk] = c
    return out


def _pow_frobenius(F: GF, arr: np.ndarray, j: int) -> np.ndarray:
    """a^j = prod_i (a^{p^i})^{j_i}."""
    out = np.ones(1, dtype=np.int64)
    k = 0
    while j:
        dgt = j % F.p
        if dgt:
            base = _frob_spread(F, arr, k)
            for _ in range(dgt):
                out = F.conv(out, base)
        j //= F.p
        k += 1
    return out


def power_sum(d: int, j: int, L: DirichletSeries, cond: CongruenceCondition | None = None) -> FqPoly:
    """sum of b_a a^j over monic a of degree d meeting cond, by enumeration."""
    if d < 0 or j < 0:
        raise ValueError("d and j must be non-negative")
    F = L.F
    cond = cond or CongruenceCondition.none(F)
    total = np.zeros(1, dtype=np.int64)
    for a in monic_polys(F, d):
        if not cond.matches(a):
            continue
        b = L.coeff(a)
        if not b:
            continue
        term = F.conv(b.c, _pow_frobenius(F, a.c, j))
        if len(term) > len(total):
            total = np.concatenate([total, np.zeros(len(term) - len(total), dtype=np.int64)])
        total[: len(term)] = F.vadd(total[: len(term)], term)
    return FqPoly(F, total)


def stratum_power_sums(L: DirichletSeries, d: int, j_max: int, cond: CongruenceCondition | None = None) -> list:
    """[sum_{deg a = d} b_a a^j for j = 0..j_max], all powers advanced together."""
    F = L.F
    cond = cond or CongruenceCondition.none(F)
    adm = [a for a in cond.admissible(d) if L.coeff(a)]
    if not adm:
        return [FqPoly.zero(F)] * (j_max + 1)
    width = d * j_max + 1
    rows = np.zeros((len(adm), width), dtype=np.int64)
    rows[:, 0] = 1
    fac = np.stack([a.c for a in adm])
    weights = [L.coeff(a) for a in adm]
    wdeg = max(b.deg for b in weights)
    W = np.zeros((len(adm), wdeg + 1), dtype=np.int64)
    for r, b in enumerate(weights):
        W[r, : len(b.c)] = b.c
    plain = wdeg == 0 and bool((W[:, 0] == 1).all())
    out = []
    for j in range(j_max + 1):
        cur = rows[:, : d * j + 1]
        if not plain:
            padded = np.zeros((len(adm), d * j + 1 + wdeg), dtype=np.int64)
            padded[:, : d * j + 1] = cur
            prod = _rows_mul_short(F, padded, W)
        else:
            prod = cur
        out.append(FqPoly(F, _colsum(F, prod)))
        if j < j_max:
            nxt = np.zeros_like(rows[:, : d * (j + 1) + 1])
            nxt[:, : d * j + 1] = cur
            rows[:, : d * (j + 1) + 1] = _rows_mul_short(F, nxt, fac)
    return out


def _colsum(F: GF, arr: np.ndarray) -> np.ndarray:
    if F.e == 1:
        return arr.sum(axis=0) % F.p
    acc = np.zeros(arr.shape[1], dtype=np.int64)
    for row in arr:
        acc = F.vadd(acc, row)
    return acc


# special polynomials


@dataclass(frozen=True)
class SpecialPoly:
    """sum_d c_d x^{-d} with c_d in A, scanned for d <= d_max.

    ``proof`` says why strata beyond d_max are taken as zero: "vanishing"
    (the affine-coset power-sum law), "consecutive-zeros" (the auto-extend
    policy) or "none" (the scan hit its cap).
    """

    F: GF
    j: int
    coeffs: tuple
    d_max: int
    proof: str = "none"
    cond: CongruenceCondition | None = None

    @property
    def stable(self) -> bool:
        return self.proof in ("vanishing", "consecutive-zeros")

    @property
    def degree(self) -> int:
        """deg in x^{-1}; -1 for the zero polynomial."""
        for d in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[d]:
                return d
        return -1

    def coeff(self, d: int) -> FqPoly:
        return self.coeffs[d] if d < len(self.coeffs) else FqPoly.zero(self.F)

    def t_degrees(self) -> list:
        return [c.deg for c in self.coeffs]

    def trimmed(self) -> list:
        return list(self.coeffs[: self.degree + 1])

    def evaluate(self, x: LaurentSeries, prec: int | None = None) -> LaurentSeries:
        """sum_d c_d x^{-d}; x must be invertible."""
        xinv = x.inverse(prec if prec is not None else 64) if not (x.is_exact() and len(x.c) == 1) else LaurentSeries.one(self.F) / x
        acc = LaurentSeries.zero(self.F)
        pw = LaurentSeries.one(self.F)
        for c in self.coeffs:
            if c:
                acc = acc + LaurentSeries.from_A(c) * pw
            pw = pw * xinv
        return acc if prec is None else acc.truncate(prec)

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "coeffs": [c.dense() for c in self.trimmed()],
            "degree": self.degree,
            "d_max": self.d_max,
            "proof": self.proof,
        }

    def __eq__(self, other):
        if not isinstance(other, SpecialPoly):
            return NotImplemented
        return self.F == other.F and self.j == other.j and self.trimmed() == other.trimmed()

    def __hash__(self):
        return hash((self.F, self.j, tuple(self.trimmed())))


def special_polynomial(
    L: DirichletSeries,
    j: int,
    cond: CongruenceCondition | None = None,
    d_max: int | None = None,
    d_cap: int = 24,
) -> SpecialPoly:
    """z_L(x, -j) stratum by stratum.

    With d_max given the scan covers d <= d_max.  Otherwise it extends until
    the remaining strata provably vanish, or (for series without that law)
    until q consecutive strata are zero; d_cap bounds the scan.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    F = L.F
    cond = cond or CongruenceCondition.none(F)
    coeffs = []
    proof = "none"
    zeros = 0
    d = 0
    limit = d_max if d_max is not None else d_cap
    if L.kind == "table" and d_max is None:
        limit = min(limit, L.max_table_degree())
    while d <= limit:
        if _vanishes(L, cond, d, j) and d_max is None:
            proof = "vanishing"
            break
        if _vanishes(L, cond, d, j):
            c = FqPoly.zero(F)
        else:
            c = power_sum(d, j, L, cond)
        coeffs.append(c)
        zeros = zeros + 1 if not c else 0
        if d_max is None and L.kind != "table" and zeros >= F.q and L.power_shift() is None:
            proof = "consecutive-zeros"
            break
        d += 1
    if d_max is not None:
        # strata past an explicit d_max are zero if the vanishing law covers them
        proof = "vanishing" if _vanishes(L, cond, d_max + 1, j) else "none"
    elif L.kind == "table" and proof == "none":
        proof = "vanishing"  # no monic beyond the table's largest degree
    scanned = len(coeffs) - 1
    return SpecialPoly(F, j, tuple(coeffs), scanned, proof, cond)


# unconditioned zeta power sums by recursion on the degree


def zeta_power_sum_layers(F: GF, K: int, d_max: int | None = None):
    """Yield (d, layer) with layer[k] = S_d(k) = sum_{deg a = d} a^k for k <= K.

    Splitting a = T b + c (b monic of degree d-1, c in F_q) and summing over c
    gives S_d(k) = -sum C(k,i) T^i S_{d-1}(i) over i < k with C(k,i) != 0 mod p
    and (q-1) | (k-i); S_0(k) = 1.  Layers stop once one is entirely zero,
    since every later layer is then zero too.  For p = 2 the layers are
    Python ints used as bit vectors; otherwise numpy coefficient arrays.
    """
    q, p = F.q, F.p
    if F.e == 1 and p == 2:
        prev = [1] * (K + 1)
        d = 0
        yield 0, prev
        while d_max is None or d < d_max:
            d += 1
            cur = [0] * (K + 1)
            for k in range(1, K + 1):
                acc = 0
                i = (k - 1) & k
                while True:
                    s = prev[i]
                    if s:
                        acc ^= s << i
                    if i == 0:
                        break
                    i = (i - 1) & k
                cur[k] = acc
            yield d, cur
            if not any(cur):
                return
            prev = cur
        return
    one = np.ones(1, dtype=np.int64)
    prev = [one] * (K + 1)
    yield 0, [FqPoly.one(F)] * (K + 1)
    d = 0
    while d_max is None or d < d_max:
        d += 1
        cur = []
        for k in range(K + 1):
            acc = np.zeros(0, dtype=np.int64)
            for i in lucas_submultisets(k, p):
                if i >= k or (k - i) % (q - 1):
                    continue
                s = prev[i]
                if not len(s):
                    continue
                c = binom_mod_p(k, i, p)
                term = F.vscale(F.from_int(c), s)
                need = i + len(term)
                if need > len(acc):
                    acc = np.concatenate([acc, np.zeros(need - len(acc), dtype=np.int64)])
                acc[i:need] = F.vadd(acc[i:need], term)
            acc = F.vneg(acc)
            nz = np.flatnonzero(acc)
            cur.append(acc[: nz[-1] + 1] if len(nz) else acc[:0])
        yield d, [FqPoly(F, c) for c in cur]
        if not any(len(c) for c in cur):
            return
        prev = cur


def _layer_poly(F: GF, s) -> FqPoly:
    if isinstance(s, FqPoly):
        return s
    bits = []
    while s:
        bits.append(s & 1)
        s >>= 1
    return FqPoly(F, bits)


def zeta_degree_table(F: GF, j_max: int, shift: int = 0) -> list:
    """deg_{x^{-1}} z(x, -j) for j = 0..j_max from the exact recursion.

    shift = 1 gives the Carlitz-module series (b_a = a), whose strata are
    S_d(j + 1).
    """
    K = j_max + shift
    deg = [-1] * (K + 1)
    for d, layer in zeta_power_sum_layers(F, K):
        for k in range(K + 1):
            if layer[k]:
                deg[k] = d
    return deg[shift:]


# evaluation and measures


@dataclass(frozen=True)
class EvalResult:
    value: LaurentSeries
    tail_bound: float
    converged: bool


def _stratum_unit_sums(L: DirichletSeries, d: int, y: PadicExponent, prec: int, cond) -> LaurentSeries:
    """sum_{deg a = d} b_a <a>^{-y}, to absolute precision prec."""
    F = L.F
    total = LaurentSeries.zero(F, prec)
    ny = -y
    for a in monic_polys(F, d):
        if cond is not None and not cond.matches(a):
            continue
        b = L.coeff(a)
        if not b:
            continue
        bl = LaurentSeries.from_A(b)
        rel = prec - bl.val
        if rel <= 0:
            continue
        total = total + bl * one_unit_pow(LaurentSeries.one_unit_part(a), ny, rel)
    return total.truncate(prec)


def dirichlet_eval(
    L: DirichletSeries,
    x: LaurentSeries,
    y,
    D: int,
    prec: int = 32,
    cond: CongruenceCondition | None = None,
) -> EvalResult:
    """sum_{deg a <= D} b_a x^{-deg a} <a>^{-y} with a bound on the omitted terms.

    A term of degree d has valuation >= d (-v(x) - delta), so the tail past D
    is bounded by (D+1)(-v(x) - delta) when that rate is positive.
    """
    F = L.F
    if isinstance(y, int):
        y = PadicExponent.from_int(y, F.p)
    vx = x.valuation
    rate = -vx - L.delta
    tail = (D + 1) * rate if rate > 0 else -math.inf
    xinv = LaurentSeries.one(F) / x if (x.is_exact() and len(x.c) == 1) else x.inverse(prec + D * abs(vx) + 8)
    total = LaurentSeries.zero(F, prec)
    pw = LaurentSeries.one(F)
    for d in range(D + 1):
        # the stratum is multiplied by x^{-d}, valuation -d v(x)
        need = prec - (pw.val if pw else 0)
        s = _stratum_unit_sums(L, d, y, need, cond)
        total = total + (s * pw).truncate(prec)
        pw = pw * xinv
    value = total.truncate(int(min(prec, tail))) if tail > -math.inf and tail < prec else total
    return EvalResult(value, tail, rate > 0)


def _stratum_points(L: DirichletSeries, d: int, cond=None):
    """Monics of degree d (meeting cond, b_a != 0) with their 1-unit parts as digit rows."""
    adm = [a for a in monic_polys(L.F, d) if (cond is None or cond.matches(a)) and L.coeff(a)]
    pts = np.zeros((len(adm), d + 1), dtype=np.int64)
    for r, a in enumerate(adm):
        pts[r] = a.c[::-1]
    return adm, pts


def _stratum_weights(L: DirichletSeries, adm) -> tuple:
    """(s, W) with u^s b_a as rows of W, so that b_a = u^{-s} W[a]."""
    bs = [L.coeff(a) for a in adm]
    s = max((b.deg for b in bs), default=0)
    s = max(s, 0)
    W = np.zeros((len(adm), s + 1), dtype=np.int64)
    for r, b in enumerate(bs):
        W[r, s - b.deg : s + 1] = b.c[::-1]
    return s, W


def stratum_measure_coeffs(
    L: DirichletSeries,
    d: int,
    n_hi: int,
    P: int,
    basis: NewtonBasis | None = None,
    n_lo: int = 0,
    cond=None,
):
    """b_{n,d} = sum_{deg a = d} b_a Q_n(<a>) for n_lo <= n <= n_hi.

    Returns (s, arr) with b_{n,d} = u^{-s} arr[n - n_lo], arr known mod u^P.
    Indices past q^{d+1} - 1 give 0, since every <a> of degree d is a VWD
    point of smaller index.
    """
    F = L.F
    B = basis or NewtonBasis(F)
    adm, pts = _stratum_points(L, d, cond)
    s, W = _stratum_weights(L, adm)
    out = np.zeros((max(n_hi - n_lo + 1, 0), P), dtype=np.int64)
    if not adm or n_hi < n_lo:
        return s, out
    top = min(n_hi, F.q ** (d + 1) - 1)
    for n, vals in B.iter_Q_values(pts, top, P):
        if n < n_lo:
            continue
        prod = _rows_mul_short(F, vals, W) if (s or not (W[:, 0] == 1).all()) else vals
        out[n - n_lo] = _colsum(F, prod)
    return s, out


def canonical_measure(
    L: DirichletSeries,
    x: LaurentSeries,
    n_max: int,
    D: int,
    prec: int,
    basis: NewtonBasis | None = None,
):
    """(mu, tail): Newton-tag coefficients of sum_{deg a <= D} b_a x^{-deg a} delta_{<a>}.

    tail bounds the valuation of the omitted strata, (D+1)(-v(x) - delta).
    """
    F = L.F
    B = basis or NewtonBasis(F)
    rate = -x.valuation - L.delta
    tail = (D + 1) * rate if rate > 0 else -math.inf
    xinv = LaurentSeries.one(F) / x if (x.is_exact() and len(x.c) == 1) else x.inverse(prec + 8)
    coeffs = [LaurentSeries.zero(F, prec) for _ in range(n_max + 1)]
    pw = LaurentSeries.one(F)
    for d in range(D + 1):
        P = max(prec + L.delta * d - pw.val, 1)
        s, arr = stratum_measure_coeffs(L, d, n_max, P, B)
        for n in range(n_max + 1):
            if arr[n].any():
                term = LaurentSeries(F, -s, arr[n], arr.shape[1] - s) * pw
                coeffs[n] = coeffs[n] + term.truncate(prec)
        pw = pw * xinv
    return Measure(F, NEWTON, tuple(c.truncate(prec) for c in coeffs)), tail


def coset_mass(
    L: DirichletSeries,
    x: LaurentSeries,
    alpha,
    h: int,
    D: int,
    prec: int,
):
    """(mass, tail) of mu_{L,x} on alpha + u^h R, summing strata d <= D."""
    F = L.F
    al = tuple(int(c) for c in alpha[:h]) + (0,) * max(h - len(alpha), 0)
    rate = -x.valuation - L.delta
    tail = (D + 1) * rate if rate > 0 else -math.inf
    xinv = LaurentSeries.one(F) / x if (x.is_exact() and len(x.c) == 1) else x.inverse(prec + 8)
    total = LaurentSeries.zero(F, prec)
    pw = LaurentSeries.one(F)
    for d in range(D + 1):
        acc = FqPoly.zero(F)
        for a in monic_polys(F, d):
            top = a.coeffs()[::-1][:h]
            top = tuple(top + [0] * (h - len(top)))
            if top == al:
                acc = acc + L.coeff(a)
        if acc:
            total = total + (LaurentSeries.from_A(acc) * pw).truncate(prec)
        pw = pw * xinv
    return total, tail


def _measure_low_index(L: DirichletSeries, d: int) -> int:
    """Smallest n with b_{n,d} possibly nonzero.

    b_{n,d} = sum_{j' <= n} q_{n,j'} u^{j'd} c_{j',d}, and c_{j',d} = 0 for
    j' + k < q^d - 1 when b_a = a^k.
    """
    k = L.power_shift()
    if k is None:
        return 0
    return max(L.F.q**d - 1 - k, 0)


def measure_coefficient_polys(
    L: DirichletSeries,
    n_max: int,
    route: str = "dirac",
    d_max: int | None = None,
    basis: NewtonBasis | None = None,
) -> list:
    """b_n(x) = sum_d b_{n,d} x^{-d} for n <= n_max, each b_{n,d} exact in K.

    route "dirac" sums b_a Q_n(<a>) over each stratum; route "monomial" uses
    b_{n,d} = sum_{j'} q_{n,j'} u^{j'd} c_{j',d} with the monomial
    coefficients of Q_n and direct power sums.  Strata run to d_max, by
    default the last d with q^d - 1 - k <= n_max (later strata vanish).
    Returns out[n][d].
    """
    F = L.F
    B = basis or NewtonBasis(F)
    if d_max is None:
        if L.kind == "table":
            d_max = L.max_table_degree()
        else:
            d_max = 0
            while _measure_low_index(L, d_max + 1) <= n_max:
                d_max += 1
    out = [[LaurentSeries.zero(F) for _ in range(d_max + 1)] for _ in range(n_max + 1)]
    if route == "dirac":
        for d in range(d_max + 1):
            # Q_n(x) is a polynomial in u of degree <= n (d + 1) for x of degree d
            P = n_max * max(d, 1) + L.delta * d + 2
            s, arr = stratum_measure_coeffs(L, d, n_max, P, B)
            for n in range(n_max + 1):
                out[n][d] = LaurentSeries(F, -s, arr[n])
    elif route == "monomial":
        for d in range(d_max + 1):
            sums = stratum_power_sums(L, d, n_max)
            cs = [LaurentSeries.from_A(c).shift(jp * d) if c else LaurentSeries.zero(F) for jp, c in enumerate(sums)]
            for n in range(n_max + 1):
                acc = LaurentSeries.zero(F)
                for jp, qc in enumerate(B.q_coeffs(n)):
                    if qc and cs[jp]:
                        acc = acc + qc * cs[jp]
                out[n][d] = acc
    else:
        raise ValueError(f"unknown route {route!r}")
    return out


@dataclass(frozen=True)
class StratumCertificate:
    """Tail control for one stratum of the measure route.

    tau bounds v(sum_{n > n_max} f_n b_{n,d}); the stratum is certified when
    tau > needed = j d, the top u-exponent of u^{jd} c_{j,d}.
    """

    d: int
    tau: float
    needed: int
    exact_b: bool
    certified: bool


@dataclass(frozen=True)
class MeasureRoute:
    poly: SpecialPoly
    certificates: tuple
    n_max: int

    @property
    def certified(self) -> bool:
        return all(c.certified for c in self.certificates)

    def failures(self) -> list:
        return [c for c in self.certificates if not c.certified]


def _indicator_power_values(F: GF, cond: CongruenceCondition, j: int, n_max: int, P: int, B: NewtonBasis) -> np.ndarray:
    """chi(u_m) u_m^j mod u^P for m <= n_max, zero off the 1-units."""
    vals = np.zeros((n_max + 1, P), dtype=np.int64)
    h = max(cond.n_inf, 1)
    target = cond.alpha_inf if cond.n_inf else (1,)
    for m in range(n_max + 1):
        dg = B.point(m)
        head = tuple(int(c) for c in dg[:h]) + (0,) * max(h - len(dg), 0)
        if head[: len(target)] != target or head[0] != 1:
            continue
        x = LaurentSeries.from_u_poly(F, dg, P)
        vals[m] = (x**j).window(0, P)
    return vals


def partial_via_measure(
    L: DirichletSeries,
    j: int,
    cond: CongruenceCondition | None = None,
    n_max: int = 64,
    basis: NewtonBasis | None = None,
    tail_budget: float = 5e7,
) -> MeasureRoute:
    """z_{L,cond}(x, -j) from the canonical measure, with certified tails.

    f = chi z~^j (z~^j = z^j on 1-units, 0 elsewhere) is expanded in the
    Newton basis from its values at u_0..u_{n_max}.  Stratum d of the pairing
    sum_n f_n b_n(x) is u^{jd} c_{j,d}; its terms with n > n_max are bounded
    using v(f_n) >= w(n) - w_h(n) (f has order h = max(n_inf, 1) and norm 1)
    and v(b_{n,d}) >= -delta d, or the exact valuation of b_{n,d} when the
    tail range is small enough (tail_budget limits the work).  The
    coefficient is read off the polar part, which needs tail > j d.
    Strata are scanned until the coset power-sum law makes the rest vanish.
    """
    F = L.F
    q = F.q
    cond = cond or CongruenceCondition.none(F)
    if cond.finite:
        raise ValueError("finite-place conditions are handled by direct summation or the v-adic route")
    if j < 0:
        raise ValueError("j must be non-negative")
    B = basis or NewtonBasis(F)
    h = max(cond.n_inf, 1)
    delta = L.delta
    if L.kind == "table":
        D = L.max_table_degree()
    else:
        D = 0
        while not _vanishes(L, cond, D, j):
            D += 1
        D -= 1  # strata 0..D may be nonzero
    D = max(D, 0)
    P = j * D + delta * D + 1
    vals = _indicator_power_values(F, cond, j, n_max, P, B)
    f = B.newton_coefficients_array(vals, P)
    coeffs, certs = [], []
    for d in range(D + 1):
        need = j * d
        top = q ** (d + 1) - 1
        lo = _measure_low_index(L, d)
        s, arr = stratum_measure_coeffs(L, d, min(n_max, top), P, B)
        acc = np.zeros(P, dtype=np.int64)
        for n in range(lo, min(n_max, top) + 1):
            if arr[n].any() and f[n].any():
                acc = F.vadd(acc, mul_trunc(F, f[n], arr[n], P))
        # u^{jd} c_{j,d} = u^{-s} acc, known mod u^{P - s}
        first_tail = max(n_max + 1, lo)
        exact_b = False
        if first_tail > top:
            tau = math.inf
        else:
            tau = weight(first_tail, q) - weight(first_tail, q, h) - delta * d
            if tau <= need:
                npts = len(_stratum_points(L, d)[0])
                if npts * (top - n_max) * (P + weight(top, q)) <= tail_budget:
                    tau = _exact_tail_bound(L, d, first_tail, top, q, h, need + s + 1, B)
                    exact_b = True
        sd = LaurentSeries(F, -s, acc, P - s)
        known = min(P - s, tau)
        c = _untwist(F, sd.window(-s, need + 1), s, need)
        certs.append(StratumCertificate(d, tau, need, exact_b, tau > need and known > need))
        coeffs.append(c)
    poly = SpecialPoly(F, j, tuple(coeffs), D, "vanishing", cond)
    return MeasureRoute(poly, tuple(certs), n_max)


def _untwist(F: GF, window: np.ndarray, s: int, need: int) -> FqPoly:
    """c_{j,d} from the coefficients of u^{-s} .. u^{jd} of u^{jd} c_{j,d}."""
    # window[t] is the coefficient of u^{t - s}; T^i corresponds to u^{jd - i}
    n = len(window)
    coeffs = np.zeros(need + s + 1, dtype=np.int64)
    for t in range(n):
        e = t - s
        coeffs[need - e] = window[t]
    return FqPoly(F, coeffs)


def _exact_tail_bound(L, d, n_lo, n_hi, q, h, P, B) -> float:
    """min over n_lo <= n <= n_hi of (Amice bound on v(f_n)) + v(b_{n,d})."""
    F = L.F
    adm, pts = _stratum_points(L, d)
    s, W = _stratum_weights(L, adm)
    plain = s == 0 and bool((W[:, 0] == 1).all())
    best = math.inf
    for n, vals in B.iter_Q_values(pts, n_hi, P):
        if n < n_lo:
            continue
        amice = weight(n, q) - weight(n, q, h)
        if amice - s >= best:
            break  # the Amice part is nondecreasing in n
        col = _colsum(F, vals if plain else _rows_mul_short(F, vals, W))
        nz = np.flatnonzero(col)
        vb = (int(nz[0]) if len(nz) else P) - s
        best = min(best, amice + vb)
    return best


# Euler products


def _default_factor(F: GF, P: FqPoly, kind: str) -> list:
    one = FqPoly.one(F)
    if kind == "zeta":
        return [one, -one]
    if kind == "carlitz":
        return [one, -P]
    if kind == "one":
        return [one]
    raise ValueError(f"unknown default factor {kind!r}")


def _local_inverse(F: GF, f: list, K: int) -> list:
    """Coefficients e_0..e_K of 1/f(u) for f with constant term 1."""
    if not f or f[0] != FqPoly.one(F):
        raise ValueError("local factors must have constant term 1")
    e = [FqPoly.one(F)]
    for k in range(1, K + 1):
        acc = FqPoly.zero(F)
        for i in range(1, min(k, len(f) - 1) + 1):
            if f[i]:
                acc = acc - f[i] * e[k - i]
        e.append(acc)
    return e


def euler_expand(F: GF, factors: dict, D: int, default: str = "zeta") -> dict:
    """b_a for monic deg a <= D from prod_P 1/f_P(P^{-s}).

    factors maps a monic irreducible P to the coefficient list of f_P (a
    polynomial in u_P with coefficients in A and f_P(0) = 1); other P use
    default: "zeta" (1 - u_P), "carlitz" (1 - P u_P) or "one" (no factor).
    """
    irr = [P for k in range(1, D + 1) for P in irreducible_monics(F, k)]
    local = {}
    for P in irr:
        f = factors.get(P)
        f = _default_factor(F, P, default) if f is None else list(f)
        local[P] = _local_inverse(F, f, D // P.deg)
    for P in factors:
        if P not in local and P.deg <= D:
            raise ValueError(f"{P} is not a monic irreducible")
    b = {FqPoly.one(F): FqPoly.one(F)}
    for d in range(1, D + 1):
        for a in monic_polys(F, d):
            P = next((P for P in irr if P.deg <= d and not a % P), None)
            k, rest = 0, a
            while not rest % P:
                rest = rest // P
                k += 1
            b[a] = local[P][k] * b[rest]
    return b


def read_euler_factors(F: GF, text: str):
    """Read lines ``<P dense>;<f_0> <f_1> ...`` and ``*;zeta|carlitz|one``."""
    factors, default = {}, "zeta"
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, body = line.partition(";")
        if head.strip() == "*":
            default = body.strip()
            _default_factor(F, FqPoly.one(F), default)
            continue
        P = FqPoly.parse(F, head.strip())
        factors[P] = [FqPoly.parse(F, t) for t in body.split()]
    return factors, default


# degree growth


@dataclass(frozen=True)
class GrowthRow:
    j: int
    deg: int
    bound: float
    passed: bool


def floor_log(n: int, q: int) -> int:
    """floor(log_q n) for n >= 1, in exact integer arithmetic."""
    k = 0
    while q ** (k + 1) <= n:
        k += 1
    return k


def degree_growth_report(
    L: DirichletSeries,
    j_max: int,
    cond: CongruenceCondition | None = None,
    C1: float | None = None,
    C2: float | None = None,
    d_max: int | None = None,
) -> list:
    """Degree of z_{L,cond}(x, -j) for j <= j_max against a log envelope.

    For b_a = a^k the bound floor(log_q(j+k+1)) + c with
    c = deg of the finite modulus + max(n_inf - 1, 0) follows from the coset
    power-sum law, and is used unless C1, C2 are given (then the envelope is
    C1 log_q(j+1) + C2).  Table series need d_max.
    """
    F = L.F
    q = F.q
    cond = cond or CongruenceCondition.none(F)
    k = L.power_shift()
    if k is not None and cond.is_vacuous():
        degs = zeta_degree_table(F, j_max, k)
    else:
        if k is not None:
            c = cond.finite_degree + max(cond.n_inf - 1, 0)
            top = floor_log(j_max + k + 1, q) + c
        elif d_max is None:
            if L.kind != "table":
                raise ValueError("d_max is required for this series")
            top = L.max_table_degree()
        else:
            top = d_max
        degs = [-1] * (j_max + 1)
        for d in range(top + 1):
            for j, s in enumerate(stratum_power_sums(L, d, j_max, cond)):
                if s:
                    degs[j] = d
    rows = []
    for j, dg in enumerate(degs):
        if C1 is None and C2 is None and k is not None:
            c = cond.finite_degree + max(cond.n_inf - 1, 0)
            bound = floor_log(j + k + 1, q) + c
        else:
            bound = (1.0 if C1 is None else C1) * math.log(j + 1, q) + (0.0 if C2 is None else C2)
        rows.append(GrowthRow(j, dg, bound, dg <= bound + 1e-12))
    return rows


def fit_envelope(rows, q: int, C1: float = 1.0) -> float:
    """Smallest C2 with deg <= C1 log_q(j+1) + C2 on all rows."""
    return max(r.deg - C1 * math.log(r.j + 1, q) for r in rows)
