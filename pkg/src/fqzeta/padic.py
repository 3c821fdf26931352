"""Mahler calculus on Z_p and the measure / power-series dictionary.

Measures on Z_p correspond to power series F(X) in Z_p[[X]] (mod p^N, X^{D+1}
here); X acts on continuous functions as the difference operator
f(x) -> f(x+1) - f(x), which on Mahler expansions f = sum c_k C(x,k) shifts
coefficients down by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .series import PrecisionError

__all__ = [
    "PadicInt",
    "IwasawaSeries",
    "MahlerFunction",
    "dirac_series",
    "act",
    "eigen_check",
    "eigenfunction",
    "mahler_from_values",
    "values_from_mahler",
    "tate_tail_action",
]


def _vp(n: int, p: int) -> int:
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    """Residue mod p^N standing for an element of Z_p."""

    value: int
    p: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.N)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _other(self, o):
        if isinstance(o, int):
            return PadicInt(o, self.p, self.N)
        if o.p != self.p:
            raise ValueError("mismatched primes")
        return o

    def __add__(self, o):
        o = self._other(o)
        return PadicInt(self.value + o.value, self.p, min(self.N, o.N))

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return PadicInt(self.value - o.value, self.p, min(self.N, o.N))

    def __neg__(self):
        return PadicInt(-self.value, self.p, self.N)

    def __mul__(self, o):
        o = self._other(o)
        return PadicInt(self.value * o.value, self.p, min(self.N, o.N))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PadicInt(pow(self.value, k, self.modulus), self.p, self.N)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise ZeroDivisionError("not a p-adic unit")
        return PadicInt(pow(self.value, -1, self.modulus), self.p, self.N)

    @property
    def valuation(self):
        v = _vp(self.value, self.p)
        return self.N if v == math.inf else min(v, self.N)

    def __int__(self):
        return self.value


class IwasawaSeries:
    """sum_{k <= D} a_k X^k with a_k mod p^N."""

    __slots__ = ("p", "N", "coeffs")

    def __init__(self, p: int, N: int, coeffs):
        self.p, self.N = p, N
        m = p**N
        self.coeffs = tuple(int(c) % m for c in coeffs)
        if not self.coeffs:
            raise ValueError("need at least the constant coefficient")

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def X(cls, p: int, N: int, D: int, k: int = 1) -> "IwasawaSeries":
        c = [0] * (D + 1)
        if k <= D:
            c[k] = 1
        return cls(p, N, c)

    @classmethod
    def const(cls, p: int, N: int, D: int, a: int = 1) -> "IwasawaSeries":
        return cls(p, N, [a] + [0] * D)

    def __add__(self, o: "IwasawaSeries") -> "IwasawaSeries":
        D, N = min(self.D, o.D), min(self.N, o.N)
        return IwasawaSeries(self.p, N, [a + b for a, b in zip(self.coeffs[: D + 1], o.coeffs[: D + 1])])

    def __sub__(self, o: "IwasawaSeries") -> "IwasawaSeries":
        D, N = min(self.D, o.D), min(self.N, o.N)
        return IwasawaSeries(self.p, N, [a - b for a, b in zip(self.coeffs[: D + 1], o.coeffs[: D + 1])])

    def __mul__(self, o: "IwasawaSeries") -> "IwasawaSeries":
        """Product of series, i.e. convolution of the measures."""
        D, N = min(self.D, o.D), min(self.N, o.N)
        out = [0] * (D + 1)
        for i, a in enumerate(self.coeffs[: D + 1]):
            if a:
                for j in range(D + 1 - i):
                    out[i + j] += a * o.coeffs[j]
        return IwasawaSeries(self.p, N, out)

    def __call__(self, x: int) -> int:
        """Evaluate at an integer x with v_p(x) >= 1 (mod p^N; truncation error is the caller's concern)."""
        m = self.p**self.N
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % m
        return acc

    def __eq__(self, o):
        if not isinstance(o, IwasawaSeries):
            return NotImplemented
        return (self.p, self.N, self.coeffs) == (o.p, o.N, o.coeffs)

    def __hash__(self):
        return hash((self.p, self.N, self.coeffs))

    def __repr__(self):
        return f"IwasawaSeries(p={self.p}, N={self.N}, {list(self.coeffs)})"


class MahlerFunction:
    """f(x) = sum_{k <= D} c_k C(x, k) with c_k mod p^N."""

    __slots__ = ("p", "N", "coeffs")

    def __init__(self, p: int, N: int, coeffs):
        self.p, self.N = p, N
        m = p**N
        self.coeffs = tuple(int(c) % m for c in coeffs)

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def binomial(cls, p: int, N: int, k: int, D: int | None = None) -> "MahlerFunction":
        D = k if D is None else D
        c = [0] * (D + 1)
        c[k] = 1
        return cls(p, N, c)

    def __call__(self, x: int) -> int:
        if x < 0:
            raise ValueError("values are reconstructed at non-negative integers")
        m = self.p**self.N
        return sum(c * math.comb(x, k) for k, c in enumerate(self.coeffs)) % m

    def values(self, M: int) -> list:
        return [self(x) for x in range(M + 1)]

    def __eq__(self, o):
        if not isinstance(o, MahlerFunction):
            return NotImplemented
        return (self.p, self.N, self.coeffs) == (o.p, o.N, o.coeffs)

    def __hash__(self):
        return hash((self.p, self.N, self.coeffs))

    def __repr__(self):
        return f"MahlerFunction(p={self.p}, N={self.N}, {list(self.coeffs)})"


def dirac_series(a, D: int, p: int | None = None, N: int | None = None) -> IwasawaSeries:
    """(1+X)^a mod (p^N, X^{D+1}).

    An exact int a is used as is.  A PadicInt is only known mod p^{a.N}, and
    C(a, k) mod p^N depends on a mod p^{N + floor(log_p k)}; the requested N
    must leave that much room.
    """
    if isinstance(a, PadicInt):
        p = a.p if p is None else p
        N = a.N if N is None else N
        need = N + (int(math.log(D, p) + 1e-9) if D >= 1 else 0)
        if a.N < need and D >= p:
            raise PrecisionError(
                f"(1+X)^a to degree {D} mod {p}^{N} needs a mod {p}^{need}; have {p}^{a.N}"
            )
        a = a.value
    if p is None or N is None:
        raise ValueError("p and N are required for an integer exponent")
    m = p**N
    coeffs, c = [], 1
    for k in range(D + 1):
        coeffs.append(c % m)
        c = c * (a - k) // (k + 1)
    return IwasawaSeries(p, N, coeffs)


def act(F: IwasawaSeries, f: MahlerFunction) -> MahlerFunction:
    """F * f, with X acting as the difference operator.

    X^i sends C(x, k) to C(x, k - i), so the new coefficients are
    d_m = sum_i a_i c_{m+i}.
    """
    if F.p != f.p:
        raise ValueError("mismatched primes")
    N = min(F.N, f.N)
    c = f.coeffs
    out = []
    for m in range(f.D + 1):
        s = 0
        for i, a in enumerate(F.coeffs):
            if m + i > f.D:
                break
            s += a * c[m + i]
        out.append(s)
    return MahlerFunction(f.p, N, out)


def eigenfunction(m: int, p: int, N: int, D: int) -> MahlerFunction:
    """(1+m)^x as a Mahler series, coefficients m^k, truncated at degree D."""
    if m % p:
        raise ValueError("need v_p(m) >= 1")
    if (D + 1) * _vp(m, p) < N:
        raise PrecisionError(
            f"dropping m^k for k > {D} is exact mod {p}^{N} only if (D+1) v_p(m) >= N"
        )
    return MahlerFunction(p, N, [pow(m, k, p**N) for k in range(D + 1)])


def eigen_check(F: IwasawaSeries, m: int, D: int, N: int) -> bool:
    """Whether F * f_m = F(m) f_m mod (p^N, degree D) for f_m(x) = (1+m)^x."""
    p = F.p
    f = eigenfunction(m, p, N, D)
    lhs = act(IwasawaSeries(p, N, F.coeffs), f)
    lam = IwasawaSeries(p, N, F.coeffs)(m)
    rhs = MahlerFunction(p, N, [lam * c for c in f.coeffs])
    return lhs == rhs


def mahler_from_values(values, p: int, N: int) -> list:
    """b_n = sum_k (-1)^{n-k} C(n,k) f(k), the forward differences at 0."""
    m = p**N
    vals = [int(v) % m for v in values]
    out = []
    row = vals[:]
    for _ in range(len(vals)):
        out.append(row[0] % m)
        row = [(row[i + 1] - row[i]) % m for i in range(len(row) - 1)]
    return out


def values_from_mahler(coeffs, p: int, N: int) -> list:
    """f(0..M) from Mahler coefficients c_0..c_M."""
    return MahlerFunction(p, N, coeffs).values(len(coeffs) - 1)


def tate_tail_action(F: IwasawaSeries, g, p: int | None = None, N: int | None = None) -> list:
    """Product of F with g = sum_k g_k X^{-k}, keeping only exponents <= 0.

    ``g`` lists the coefficients of X^0, X^{-1}, ...; the result uses the same
    layout.  The X^0 term is kept as the representative of the quotient.
    """
    p = F.p if p is None else p
    N = F.N if N is None else N
    m = p**N
    g = [int(x) % m for x in g]
    out = []
    for k in range(len(g)):
        s = 0
        for i, a in enumerate(F.coeffs):
            if k + i >= len(g):
                break
            s += a * g[k + i]
        out.append(s % m)
    return out
