"""Truncated Laurent series in K = F_q((u)), u = 1/T, and p-adic exponents.

A :class:`LaurentSeries` stores a valuation, a window of coefficients and an
absolute precision ``prec``: the series is known modulo u^prec.  ``prec=None``
marks an exact (finite) series, which is how elements of A = F_q[T] and the
1-unit parts of monic polynomials are carried.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import GF, FqPoly, _trim, binom_mod_p as _binom_int

__all__ = [
    "LaurentSeries",
    "PadicExponent",
    "binom_mod_p",
    "one_unit_pow",
    "one_unit_pow_binomial",
    "TateSeries",
    "hyperderivative",
    "KPoly",
    "gauss_norm",
    "PrecisionError",
]


class PrecisionError(ArithmeticError):
    """Raised when a computation needs more precision than its inputs carry."""


def _lead_trim(c: np.ndarray) -> tuple:
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return 0, c[:0]
    return int(nz[0]), c[nz[0] :]


class LaurentSeries:
    """Element of F_q((u)) known modulo u^prec (prec None = exact)."""

    __slots__ = ("F", "val", "c", "prec")

    def __init__(self, F: GF, val: int, coeffs, prec: int | None = None):
        self.F = F
        arr = np.asarray(coeffs, dtype=np.int64)
        if F.e == 1:
            arr = arr % F.p
        shift, arr = _lead_trim(arr)
        val = int(val) + shift
        if prec is not None:
            keep = max(prec - val, 0)
            arr = _trim(arr[:keep])
        else:
            arr = _trim(arr)
        if len(arr) == 0:
            val = prec if prec is not None else 0
        self.val = val
        self.c = arr
        self.prec = prec

    # constructors
    @classmethod
    def zero(cls, F: GF, prec: int | None = None) -> "LaurentSeries":
        return cls(F, 0 if prec is None else prec, [], prec)

    @classmethod
    def one(cls, F: GF, prec: int | None = None) -> "LaurentSeries":
        return cls(F, 0, [1], prec)

    @classmethod
    def const(cls, F: GF, a: int, prec: int | None = None) -> "LaurentSeries":
        return cls(F, 0, [a], prec)

    @classmethod
    def monomial(cls, F: GF, k: int, a: int = 1, prec: int | None = None) -> "LaurentSeries":
        return cls(F, k, [a], prec)

    @classmethod
    def from_u_poly(cls, F: GF, coeffs, prec: int | None = None) -> "LaurentSeries":
        """The series sum coeffs[i] u^i."""
        return cls(F, 0, coeffs, prec)

    @classmethod
    def from_A(cls, a: FqPoly) -> "LaurentSeries":
        """Exact image of a in K: T^i = u^{-i}."""
        if not a:
            return cls.zero(a.F)
        return cls(a.F, -a.deg, a.c[::-1].copy())

    @classmethod
    def one_unit_part(cls, a: FqPoly) -> "LaurentSeries":
        """<a> = a u^{deg a} for monic a, as an exact 1-unit."""
        if not a or not a.is_monic():
            raise ValueError("the 1-unit part is defined for monic polynomials")
        return cls(a.F, 0, a.c[::-1].copy())

    @classmethod
    def parse(cls, F: GF, text: str, exact: bool = False) -> "LaurentSeries":
        """Read ``"v; c0,c1,..."``; the window length fixes the precision unless exact."""
        head, _, body = text.partition(";")
        v = int(head.strip())
        digits = [F.parse_coeff(s) for s in body.split(",")] if body.strip() else []
        return cls(F, v, digits, None if exact else v + len(digits))

    # structure
    def is_zero(self) -> bool:
        return len(self.c) == 0

    def __bool__(self):
        return len(self.c) > 0

    @property
    def valuation(self):
        """u-adic valuation; for a zero-to-precision element this is prec (or inf)."""
        if len(self.c):
            return self.val
        return self.prec if self.prec is not None else math.inf

    def is_exact(self) -> bool:
        return self.prec is None

    def coeff(self, k: int) -> int:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient of u^{k} beyond precision {self.prec}")
        i = k - self.val
        return int(self.c[i]) if 0 <= i < len(self.c) else 0

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients of u^lo .. u^{hi-1} as an array."""
        out = np.zeros(max(hi - lo, 0), dtype=np.int64)
        a, b = max(lo, self.val), min(hi, self.val + len(self.c))
        if a < b:
            out[a - lo : b - lo] = self.c[a - self.val : b - self.val]
        return out

    def is_one_unit(self) -> bool:
        return len(self.c) > 0 and self.val == 0 and int(self.c[0]) == 1

    def truncate(self, prec: int) -> "LaurentSeries":
        p = prec if self.prec is None else min(prec, self.prec)
        return LaurentSeries(self.F, self.val, self.c, p)

    def with_prec(self, prec: int | None) -> "LaurentSeries":
        return LaurentSeries(self.F, self.val, self.c, prec)

    def to_A(self) -> FqPoly:
        """The element of A represented, if the series is exact with v <= 0 and no u^{>0} terms."""
        if self.prec is not None and self.prec <= 0:
            raise PrecisionError("precision too low to recover a polynomial in T")
        if not self:
            return FqPoly.zero(self.F)
        top = self.val + len(self.c) - 1
        if top > 0:
            raise ValueError("series has positive-valuation terms; not in A")
        # coefficient of u^{-i} is the T^i coefficient
        return FqPoly(self.F, self.window(self.val, 1)[::-1].copy())

    def polar_part(self) -> "LaurentSeries":
        """Terms with exponent <= 0, kept exactly."""
        if not self or self.val > 0:
            return LaurentSeries.zero(self.F)
        return LaurentSeries(self.F, self.val, self.window(self.val, 1))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentSeries.const(self.F, int(other))
        if isinstance(other, FqPoly):
            return LaurentSeries.from_A(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = _min_prec(self.prec, other.prec)
        if not other:
            return self.with_prec(prec) if prec != self.prec else self
        if not self:
            return other.with_prec(prec)
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.c), other.val + len(other.c))
        if prec is not None:
            hi = min(hi, prec)
        if hi <= lo:
            return LaurentSeries.zero(self.F, prec)
        a, b = self.window(lo, hi), other.window(lo, hi)
        return LaurentSeries(self.F, lo, self.F.vadd(a, b), prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.F, self.val, self.F.vneg(self.c), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        # absolute precision of a product: v(f) + prec(g) and v(g) + prec(f)
        cands = []
        if self.prec is not None:
            cands.append(self.prec + (other.val if other else other.valuation))
        if other.prec is not None:
            cands.append(other.prec + (self.val if self else self.valuation))
        cands = [c for c in cands if c != math.inf]
        prec = min(cands) if cands else None
        if not self or not other:
            return LaurentSeries.zero(F, prec)
        val = self.val + other.val
        a, b = self.c, other.c
        if prec is not None:
            keep = max(prec - val, 0)
            a, b = a[:keep], b[:keep]
        prod = F.conv(a, b)
        return LaurentSeries(F, val, prod, prec)

    __rmul__ = __mul__

    def scale(self, a: int) -> "LaurentSeries":
        return LaurentSeries(self.F, self.val, self.F.vscale(a, self.c), self.prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by u^k."""
        prec = None if self.prec is None else self.prec + k
        return LaurentSeries(self.F, self.val + k, self.c, prec)

    def inverse(self, rel_prec: int | None = None) -> "LaurentSeries":
        """1/self to relative precision rel_prec (default: that of self, or 32 if exact)."""
        if not self:
            raise ZeroDivisionError("inverse of a series that is zero to its precision")
        F = self.F
        if rel_prec is None:
            rel_prec = (self.prec - self.val) if self.prec is not None else 32
        if self.prec is not None:
            rel_prec = min(rel_prec, self.prec - self.val)
        n = max(rel_prec, 1)
        a = np.zeros(n, dtype=np.int64)
        m = min(n, len(self.c))
        a[:m] = self.c[:m]
        inv0 = F.inv(int(a[0]))
        out = np.zeros(n, dtype=np.int64)
        out[0] = inv0
        # Newton iteration b <- b(2 - a b), doubling precision
        k = 1
        while k < n:
            k2 = min(2 * k, n)
            ab = F.conv(a[:k2], out[:k2])[:k2]
            ab = F.vneg(ab)
            ab[0] = F.add(int(ab[0]), 2 % F.p if F.e == 1 else F.from_int(2))
            out[:k2] = F.conv(out[:k2], ab)[:k2]
            k = k2
        return LaurentSeries(F, -self.val, out, -self.val + n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_exact() and len(other.c) == 1:
            # division by a monomial is exact
            r = self.shift(-other.val)
            return r.scale(self.F.inv(int(other.c[0])))
        if not other:
            raise ZeroDivisionError("division by a series that is zero to its precision")
        if not self:
            prec = None if self.prec is None else self.prec - other.valuation
            return LaurentSeries.zero(self.F, prec)
        rel = None
        if self.prec is not None:
            rel = self.prec - self.val
        inv = other.inverse(rel if rel is not None else 32)
        return self * inv

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.one(self.F)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, k: int = 1) -> "LaurentSeries":
        """The p^k-th power, computed by spreading coefficients."""
        F = self.F
        pk = F.p**k
        if not self:
            return LaurentSeries.zero(F, None if self.prec is None else self.prec * pk)
        c = self.c if F.e == 1 else np.array([F.pow(int(x), pk) for x in self.c], dtype=np.int64)
        out = np.zeros((len(c) - 1) * pk + 1, dtype=np.int64)
        out[::pk] = c
        prec = None if self.prec is None else self.prec * pk
        return LaurentSeries(F, self.val * pk, out, prec)

    # comparison
    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, LaurentSeries) else other
        if other is NotImplemented:
            return NotImplemented
        return (
            self.F == other.F
            and self.prec == other.prec
            and self.val == other.val
            and np.array_equal(self.c, other.c)
        )

    def __hash__(self):
        return hash((self.F, self.val, self.c.tobytes(), self.prec))

    def agrees(self, other: "LaurentSeries", prec: int | None = None) -> bool:
        """Equality modulo u^prec (default: the common known precision)."""
        p = _min_prec(self.prec, other.prec)
        if prec is not None:
            if p is not None and prec > p:
                raise PrecisionError(f"cannot compare to precision {prec}; known only to {p}")
            p = prec
        d = (self - other) if p is None else (self.truncate(p) - other.truncate(p))
        return d.is_zero()

    # text
    def __str__(self):
        if self.prec is None:
            body = ",".join(self.F.coeff_str(int(x)) for x in self.c)
            return f"{self.val}; {body}"
        n = self.prec - self.val
        body = ",".join(self.F.coeff_str(int(x)) for x in self.window(self.val, self.val + n))
        return f"{self.val}; {body}"

    def __repr__(self):
        tag = "exact" if self.prec is None else f"O(u^{self.prec})"
        return f"LaurentSeries({self}, {tag})"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# p-adic exponents


@dataclass(frozen=True)
class PadicExponent:
    """y in Z_p known modulo p^M, stored as base-p digits (ascending)."""

    p: int
    digits: tuple
    exact: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if any(not 0 <= d < self.p for d in self.digits):
            raise ValueError("digit out of range")

    @classmethod
    def from_int(cls, n: int, p: int, M: int = 32) -> "PadicExponent":
        r = n % p**M
        return cls(p, tuple((r // p**i) % p for i in range(M)), exact=n)

    @classmethod
    def from_digits(cls, p: int, digits) -> "PadicExponent":
        return cls(p, tuple(int(d) for d in digits))

    @property
    def M(self) -> int:
        return len(self.digits)

    @property
    def residue(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    def _combine(self, other, op):
        if isinstance(other, int):
            other = PadicExponent.from_int(other, self.p, self.M)
        if other.p != self.p:
            raise ValueError("mismatched primes")
        M = min(self.M, other.M)
        r = op(self.residue, other.residue)
        ex = op(self.exact, other.exact) if self.exact is not None and other.exact is not None else None
        y = PadicExponent.from_int(r, self.p, M)
        return PadicExponent(self.p, y.digits, exact=ex)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    def __neg__(self):
        y = PadicExponent.from_int(-self.residue, self.p, self.M)
        return PadicExponent(self.p, y.digits, exact=None if self.exact is None else -self.exact)

    def __str__(self):
        if self.exact is not None:
            return str(self.exact)
        return "..." + "".join(str(d) for d in reversed(self.digits)) + f"_{self.p}"


def binom_mod_p(y: PadicExponent, j: int) -> int:
    """C(y, j) mod p by Lucas, valid for 0 <= j < p^M."""
    if j < 0:
        raise ValueError("j must be non-negative")
    p = y.p
    if j >= p**y.M:
        raise PrecisionError(f"C(y, {j}) needs more than {y.M} exponent digits")
    r = 1
    i = 0
    while j:
        jd = j % p
        yd = y.digits[i]
        if jd > yd:
            return 0
        r = r * math.comb(yd, jd) % p
        j //= p
        i += 1
    return r


def one_unit_pow(alpha: LaurentSeries, y: PadicExponent, prec: int) -> LaurentSeries:
    """alpha^y mod u^prec for a 1-unit alpha.

    Uses alpha^y = prod_i (alpha^{p^i})^{y_i} over the base-p digits of y with
    p^i < prec, since alpha^{p^i} = 1 + lambda^{p^i} and lambda^{p^i} has
    valuation >= p^i.
    """
    if not alpha.is_one_unit():
        raise ValueError("exponentiation by p-adic exponents needs a 1-unit")
    if alpha.prec is not None and alpha.prec < prec:
        raise PrecisionError(f"1-unit known to u^{alpha.prec}, requested u^{prec}")
    F = alpha.F
    if y.exact is not None and 0 <= y.exact < 64:
        return (alpha.truncate(prec) ** y.exact).truncate(prec)
    a = alpha.truncate(prec)
    result = LaurentSeries.one(F, prec)
    i = 0
    while F.p**i < prec:
        if i >= y.M:
            raise PrecisionError(f"exponent digit {i} needed; only {y.M} stored")
        d = y.digits[i]
        if d:
            result = result * (a ** d).truncate(prec)
        a = a.frobenius().truncate(prec)
        i += 1
    return result.truncate(prec)


def one_unit_pow_binomial(alpha: LaurentSeries, y: PadicExponent, prec: int) -> LaurentSeries:
    """The same power as a binomial series sum_j C(y,j) lambda^j (reference form)."""
    if not alpha.is_one_unit():
        raise ValueError("exponentiation by p-adic exponents needs a 1-unit")
    F = alpha.F
    lam = alpha.truncate(prec) - LaurentSeries.one(F)
    total = LaurentSeries.zero(F, prec)
    power = LaurentSeries.one(F, prec)
    for j in range(prec):
        c = binom_mod_p(y, j)
        if c:
            total = total + power.scale(F.from_int(c))
        power = (power * lam).truncate(prec)
    return total


# Tate series and hyperderivatives


@dataclass(frozen=True)
class TateSeries:
    """sum_{i <= D} c_i z^i modulo z^{D+1}; coefficients are LaurentSeries."""

    coeffs: tuple
    D: int

    def __post_init__(self):
        if len(self.coeffs) != self.D + 1:
            raise ValueError("need exactly D+1 coefficients")

    @classmethod
    def from_list(cls, F: GF, coeffs, D: int | None = None) -> "TateSeries":
        cs = [c if isinstance(c, LaurentSeries) else LaurentSeries.const(F, int(c)) for c in coeffs]
        D = len(cs) - 1 if D is None else D
        cs = (cs + [LaurentSeries.zero(F)] * (D + 1))[: D + 1]
        return cls(tuple(cs), D)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __mul__(self, other: "TateSeries") -> "TateSeries":
        D = min(self.D, other.D)
        F = self.coeffs[0].F
        out = [LaurentSeries.zero(F) for _ in range(D + 1)]
        for i in range(D + 1):
            if not self.coeffs[i]:
                continue
            for j in range(D + 1 - i):
                if other.coeffs[j]:
                    out[i + j] = out[i + j] + self.coeffs[i] * other.coeffs[j]
        return TateSeries(tuple(out), D)

    def __add__(self, other: "TateSeries") -> "TateSeries":
        D = min(self.D, other.D)
        return TateSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(D + 1)), D)

    def eval(self, z: LaurentSeries) -> LaurentSeries:
        acc = LaurentSeries.zero(z.F)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def agrees(self, other: "TateSeries") -> bool:
        D = min(self.D, other.D)
        return all(self.coeffs[i].agrees(other.coeffs[i]) for i in range(D + 1))


def hyperderivative(Fz: TateSeries, i: int) -> TateSeries:
    """D^i/i!: z^n -> C(n,i) z^{n-i}, binomials mod p; the result has degree bound D - i."""
    if i < 0:
        raise ValueError("order must be non-negative")
    if i == 0:
        return Fz
    F = Fz.coeffs[0].F
    D = Fz.D - i
    if D < 0:
        return TateSeries((LaurentSeries.zero(F),), 0)
    out = []
    for m in range(D + 1):
        c = _binom_int(m + i, i, F.p)
        out.append(Fz.coeffs[m + i].scale(F.from_int(c)) if c else LaurentSeries.zero(F))
    return TateSeries(tuple(out), D)


class KPoly:
    """Polynomial in z with coefficients in K (ascending list of LaurentSeries)."""

    __slots__ = ("F", "coeffs")

    def __init__(self, F: GF, coeffs):
        self.F = F
        cs = [c if isinstance(c, LaurentSeries) else LaurentSeries.const(F, int(c)) for c in coeffs]
        while cs and not cs[-1] and cs[-1].is_exact():
            cs.pop()
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: LaurentSeries) -> LaurentSeries:
        acc = LaurentSeries.zero(self.F)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "KPoly") -> "KPoly":
        n = len(self.coeffs) + len(other.coeffs) - 1
        out = [LaurentSeries.zero(self.F) for _ in range(max(n, 0))]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return KPoly(self.F, out)

    def __add__(self, other: "KPoly") -> "KPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = LaurentSeries.zero(self.F)
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return KPoly(self.F, [x + y for x, y in zip(a, b)])

    def scale(self, s: LaurentSeries) -> "KPoly":
        return KPoly(self.F, [c * s for c in self.coeffs])

    def __repr__(self):
        return "KPoly(" + " + ".join(f"[{c}]z^{i}" for i, c in enumerate(self.coeffs)) + ")"


def gauss_norm(f: KPoly):
    """Minimum u-valuation of the coefficients (the Gauss norm, additively)."""
    vals = [c.valuation for c in f.coeffs if c]
    if not vals:
        raise ValueError("Gauss norm of the zero polynomial is undefined")
    return min(vals)
