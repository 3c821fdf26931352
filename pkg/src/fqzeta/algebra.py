"""Exact arithmetic for F_q (q = p^e) and the polynomial ring A = F_q[T].

Field elements are plain ints in ``range(q)``: the base-p digits of the int
are the coefficients (ascending) of the element written over F_p modulo a
fixed monic irreducible of degree e.  For e = 1 this is just arithmetic mod p.

Polynomials are immutable :class:`FqPoly` values backed by numpy int64
coefficient vectors in ascending degree order.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "GF",
    "FqPoly",
    "AdditiveSubgroup",
    "monic_polys",
    "irreducible_monics",
    "necklace_count",
    "power_sum_subgroup",
    "power_sums_subgroup",
    "verify_log_derivative_identity",
    "binom_mod_p",
    "lucas_submultisets",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class GF:
    """The finite field F_q, q = p**e.

    ``modulus`` is the ascending coefficient tuple of a monic irreducible
    of degree e over F_p; when omitted for e > 1 the lexicographically first
    one is used.
    """

    p: int
    e: int = 1
    modulus: tuple | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise ValueError("extension degree must be positive")
        if self.e == 1:
            object.__setattr__(self, "modulus", None)
        elif self.modulus is None:
            object.__setattr__(self, "modulus", _first_irreducible_fp(self.p, self.e))
        else:
            mod = tuple(int(c) % self.p for c in self.modulus)
            if len(mod) != self.e + 1 or mod[-1] != 1:
                raise ValueError("modulus must be monic of degree e")
            if not _is_irreducible_fp(mod, self.p):
                raise ValueError("modulus is not irreducible over F_p")
            object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __repr__(self):
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    # tables for e > 1; elements are ints whose base-p digits are coordinates
    @cached_property
    def _tables(self):
        q, p, e = self.q, self.p, self.e
        digits = np.array([[(x // p**i) % p for i in range(e)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = self._mul_slow(a, b)
        neg = ((-digits) % p) @ weights
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        return add, mul, neg, inv

    def _mul_slow(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da = [(a // p**i) % p for i in range(e)]
        db = [(b // p**i) % p for i in range(e)]
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for i in range(e + 1):
                    prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
        return sum(prod[i] * p**i for i in range(e))

    # scalar operations
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return int(self._tables[0][a, b])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return int(self._tables[2][a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        return int(self._tables[1][a, b])

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._tables[3][a])

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def digits(self, a: int) -> tuple:
        return tuple((a // self.p**i) % self.p for i in range(self.e))

    def elements(self) -> range:
        return range(self.q)

    # vector operations on int64 arrays
    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return self._tables[0][a, b]

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (-a) % self.p
        return self._tables[2][a]

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of arrays (broadcasting)."""
        if self.e == 1:
            return (a * b) % self.p
        return self._tables[1][a, b]

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (c * a) % self.p
        return self._tables[1][c, a]

    def conv(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if len(a) == 0 or len(b) == 0:
            return np.zeros(0, dtype=np.int64)
        if self.e == 1:
            if self.p == 2:
                return np.convolve(a, b) & 1
            # exact as long as min(len)*(p-1)^2 fits in int64
            return np.convolve(a, b) % self.p
        if len(a) > len(b):
            a, b = b, a
        add, mul = self._tables[0], self._tables[1]
        out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
        for i, c in enumerate(a.tolist()):
            if c:
                seg = out[i : i + len(b)]
                out[i : i + len(b)] = add[seg, mul[c, b]]
        return out

    def coeff_str(self, a: int) -> str:
        """Base-p digit string of a field element (ascending digits)."""
        if self.e == 1:
            return str(a)
        return "".join(str(d) for d in self.digits(a))

    def parse_coeff(self, s: str) -> int:
        s = s.strip()
        if self.e == 1:
            return int(s) % self.p
        if len(s) > self.e or not all(ch.isdigit() and int(ch) < self.p for ch in s):
            raise ValueError(f"bad F_{self.q} digit string {s!r}")
        return sum(int(ch) * self.p**i for i, ch in enumerate(s))


def _poly_mod_fp(a: list, m: tuple, p: int) -> list:
    a = list(a)
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] % p
        if c:
            for i in range(dm + 1):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
    a = [x % p for x in a[:dm]]
    return a


def _is_irreducible_fp(m: tuple, p: int) -> bool:
    # brute force: no monic factor of degree <= deg/2
    d = len(m) - 1
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            if not any(_poly_mod_fp(list(m), tuple(tail) + (1,), p)):
                return False
    return True


def _first_irreducible_fp(p: int, e: int) -> tuple:
    for tail in itertools.product(range(p), repeat=e):
        m = tuple(reversed(tail)) + (1,)
        if m[0] and _is_irreducible_fp(m, p):
            return m
    raise AssertionError("unreachable")


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return c[:0]
    return c[: nz[-1] + 1]


_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(?:T(?:\^(\d+))?)?$")


class FqPoly:
    """Immutable polynomial over F_q in the variable T."""

    __slots__ = ("F", "c", "_hash")

    def __init__(self, F: GF, coeffs=(), _trusted: bool = False):
        self.F = F
        if _trusted:
            self.c = coeffs
        else:
            arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=np.int64)
            if F.e == 1:
                arr = arr % F.p
            elif len(arr) and (arr.min() < 0 or arr.max() >= F.q):
                raise ValueError("coefficient out of range")
            self.c = _trim(arr)
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, F: GF) -> "FqPoly":
        return cls(F, np.zeros(0, dtype=np.int64), _trusted=True)

    @classmethod
    def one(cls, F: GF) -> "FqPoly":
        return cls(F, np.ones(1, dtype=np.int64), _trusted=True)

    @classmethod
    def const(cls, F: GF, a: int) -> "FqPoly":
        return cls(F, [a])

    @classmethod
    def T(cls, F: GF, k: int = 1) -> "FqPoly":
        c = np.zeros(k + 1, dtype=np.int64)
        c[k] = 1
        return cls(F, c, _trusted=True)

    @classmethod
    def parse(cls, F: GF, text: str) -> "FqPoly":
        """Parse the dense form ``"1,1,0,1"`` or a human form ``"T^3+T+1"``."""
        text = text.strip()
        if not text:
            raise ValueError("empty polynomial text")
        if "T" not in text and "," in text or re.fullmatch(r"\d+", text):
            return cls(F, [F.parse_coeff(s) for s in text.split(",")])
        return cls._parse_human(F, text)

    @classmethod
    def _parse_human(cls, F: GF, text: str) -> "FqPoly":
        s = text.replace(" ", "")
        s = s.replace("-", "+-")
        out = {}
        for term in filter(None, s.split("+")):
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            m = _TERM.match(term)
            if not m or not term:
                raise ValueError(f"cannot parse term {term!r} in {text!r}")
            coef = F.parse_coeff(m.group(1)) if m.group(1) else 1
            if "T" in term:
                deg = int(m.group(2)) if m.group(2) else 1
            else:
                deg = 0
            if sign < 0:
                coef = F.neg(coef)
            out[deg] = F.add(out.get(deg, 0), coef)
        n = max(out, default=-1) + 1
        return cls(F, [out.get(i, 0) for i in range(n)])

    # basic structure
    @property
    def degree(self):
        """Degree, with -inf for the zero polynomial."""
        return len(self.c) - 1 if len(self.c) else -math.inf

    @property
    def deg(self) -> int:
        """Degree as an int; -1 for zero (internal convenience)."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def __bool__(self):
        return len(self.c) > 0

    def lead(self) -> int:
        return int(self.c[-1]) if len(self.c) else 0

    def is_monic(self) -> bool:
        return self.lead() == 1

    def coeff(self, i: int) -> int:
        return int(self.c[i]) if 0 <= i < len(self.c) else 0

    def coeffs(self) -> list:
        return [int(x) for x in self.c]

    def __len__(self):
        return len(self.c)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, FqPoly):
            return other
        if isinstance(other, (int, np.integer)):
            return FqPoly(self.F, [int(other) % self.F.q] if self.F.e > 1 else [int(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 0:
            return FqPoly(self.F, a, _trusted=True)
        out = a.copy()
        out[: len(b)] = self.F.vadd(a[: len(b)], b)
        return FqPoly(self.F, _trim(out), _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return FqPoly(self.F, self.F.vneg(self.c), _trusted=True)

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
        if not self or not other:
            return FqPoly.zero(self.F)
        return FqPoly(self.F, _trim(self.F.conv(self.c, other.c)), _trusted=True)

    __rmul__ = __mul__

    def scale(self, a: int) -> "FqPoly":
        return FqPoly(self.F, _trim(self.F.vscale(a, self.c)), _trusted=True)

    def shift(self, k: int) -> "FqPoly":
        """Multiply by T^k."""
        if not self:
            return self
        return FqPoly(self.F, np.concatenate([np.zeros(k, dtype=np.int64), self.c]), _trusted=True)

    def divmod(self, other: "FqPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = self.c.copy()
        db = other.deg
        inv_lead = F.inv(other.lead())
        if self.deg < db:
            return FqPoly.zero(F), self
        qc = np.zeros(self.deg - db + 1, dtype=np.int64)
        b = other.c
        for k in range(self.deg - db, -1, -1):
            c = int(r[k + db])
            if c:
                t = F.mul(c, inv_lead)
                qc[k] = t
                r[k : k + db + 1] = F.vadd(r[k : k + db + 1], F.vneg(F.vscale(t, b)))
        return FqPoly(F, _trim(qc), _trusted=True), FqPoly(F, _trim(r[:db] if db > 0 else r[:0]), _trusted=True)

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __pow__(self, n: int, mod: "FqPoly | None" = None):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = FqPoly.one(self.F)
        base = self if mod is None else self % mod
        while n:
            if n & 1:
                result = result * base
                if mod is not None:
                    result = result % mod
            n >>= 1
            if n:
                base = base * base
                if mod is not None:
                    base = base % mod
        return result

    def __call__(self, x: int) -> int:
        F = self.F
        acc = 0
        for c in reversed(self.c.tolist()):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def monic(self) -> "FqPoly":
        return self.scale(self.F.inv(self.lead()))

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def reverse(self, n: int | None = None) -> "FqPoly":
        """Coefficients reversed over a window of length n (default deg + 1)."""
        n = len(self.c) if n is None else n
        c = np.zeros(n, dtype=np.int64)
        c[: len(self.c)] = self.c
        return FqPoly(self.F, _trim(c[::-1].copy()), _trusted=True)

    # comparison and hashing
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self._coerce(other)
        if not isinstance(other, FqPoly):
            return NotImplemented
        return self.F == other.F and np.array_equal(self.c, other.c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.F, self.c.tobytes()))
        return self._hash

    def sort_key(self):
        """Key for the canonical enumeration order (degree, then digits from the top)."""
        return (self.deg, tuple(reversed(self.coeffs())))

    # text formats
    def dense(self) -> str:
        if not self:
            return "0"
        return ",".join(self.F.coeff_str(int(x)) for x in self.c)

    def __str__(self):
        if not self:
            return "0"
        terms = []
        for i in range(self.deg, -1, -1):
            a = int(self.c[i])
            if not a:
                continue
            cs = self.F.coeff_str(a).rstrip("0") or "0"
            if i == 0:
                terms.append(cs)
            else:
                mon = "T" if i == 1 else f"T^{i}"
                terms.append(mon if a == 1 else f"{cs}*{mon}")
        return "+".join(terms)

    def __repr__(self):
        return f"FqPoly({self}, {self.F!r})"


@lru_cache(maxsize=None)
def monic_polys(F: GF, d: int) -> tuple:
    """All q^d monic polynomials of degree d.

    Order: the i-th polynomial has lower coefficients given by the base-q
    digits of i (c_0 least significant), so the coefficient tuple read from
    the top is lexicographically increasing.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    q = F.q
    out = []
    for i in range(q**d):
        c = np.empty(d + 1, dtype=np.int64)
        n = i
        for k in range(d):
            c[k] = n % q
            n //= q
        c[d] = 1
        out.append(FqPoly(F, c, _trusted=True))
    return tuple(out)


def necklace_count(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q."""

    def mobius(n):
        res, m, k = 1, n, 2
        while k * k <= m:
            if m % k == 0:
                m //= k
                if m % k == 0:
                    return 0
                res = -res
            k += 1
        if m > 1:
            res = -res
        return res

    return sum(mobius(m) * q ** (d // m) for m in range(1, d + 1) if d % m == 0) // d


@lru_cache(maxsize=None)
def irreducible_monics(F: GF, d: int) -> tuple:
    """Monic irreducibles of degree d by trial division (desk scale only)."""
    if d < 1:
        raise ValueError("degree must be positive")
    small = [P for k in range(1, d // 2 + 1) for P in irreducible_monics(F, k)]
    out = []
    for a in monic_polys(F, d):
        if all((a % P) for P in small):
            out.append(a)
    return tuple(out)


# binomial coefficients mod p


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p for integers 0 <= k, n >= 0 via Lucas."""
    if k < 0 or n < 0 or k > n:
        return 0
    r = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        r = r * math.comb(nd, kd) % p
        n //= p
        k //= p
    return r


def lucas_submultisets(n: int, p: int):
    """Yield every k in [0, n] with C(n, k) != 0 mod p (digitwise k <= n)."""
    digits = []
    m = n
    while m:
        digits.append(m % p)
        m //= p
    ranges = [range(d + 1) for d in digits]
    for combo in itertools.product(*ranges):
        yield sum(c * p**i for i, c in enumerate(combo))


# additive subgroups and power sums


class AdditiveSubgroup:
    """Finite F_p-span of a list of polynomials (constants allowed as ints)."""

    def __init__(self, F: GF, generators):
        self.F = F
        self.generators = [g if isinstance(g, FqPoly) else FqPoly.const(F, g) for g in generators]
        elems = {FqPoly.zero(F)}
        for g in self.generators:
            if g in elems:
                continue
            new = set()
            for c in range(F.p):
                cg = g.scale(F.from_int(c))
                new.update(x + cg for x in elems)
            elems = new
        self._elements = sorted(elems, key=FqPoly.sort_key)

    @property
    def elements(self) -> list:
        return list(self._elements)

    @property
    def order(self) -> int:
        return len(self._elements)

    @property
    def dimension(self) -> int:
        return round(math.log(self.order, self.F.p))

    def e_poly(self) -> list:
        """Coefficients (ascending in z) of e_W(z) = prod_{w in W} (z - w), over A."""
        F = self.F
        coeffs = [FqPoly.one(F)]
        for w in self._elements:
            nw = -w
            new = [FqPoly.zero(F)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i + 1] = new[i + 1] + c
                new[i] = new[i] + c * nw
            coeffs = new
        return coeffs


def power_sums_subgroup(W: AdditiveSubgroup, i_max: int) -> list:
    """[s_0(W), ..., s_{i_max}(W)] by exhaustive summation, 0^0 = 1.

    Powers of every element are advanced together as rows of one array.
    """
    F = W.F
    elems = W.elements
    dmax = max(max(w.deg for w in elems), 0)
    width = dmax * i_max + 1
    rows = np.zeros((len(elems), width), dtype=np.int64)
    rows[:, 0] = 1
    gens = np.zeros((len(elems), dmax + 1), dtype=np.int64)
    for r, w in enumerate(elems):
        gens[r, : len(w.c)] = w.c
    out = []
    cur_len = 1
    for i in range(i_max + 1):
        total = rows[:, :cur_len].sum(axis=0) if F.e == 1 else _field_colsum(F, rows[:, :cur_len])
        out.append(FqPoly(F, total % F.p if F.e == 1 else total))
        if i == i_max:
            break
        nxt = np.zeros_like(rows)
        for t in range(dmax + 1):
            col = gens[:, t]
            if not col.any():
                continue
            if F.e == 1:
                nxt[:, t : t + cur_len] += col[:, None] * rows[:, :cur_len]
            else:
                prod = F._tables[1][col[:, None], rows[:, :cur_len]]
                nxt[:, t : t + cur_len] = F._tables[0][nxt[:, t : t + cur_len], prod]
        if F.e == 1:
            nxt %= F.p
        rows = nxt
        cur_len = min(cur_len + dmax, width)
    return out


def _field_colsum(F: GF, arr: np.ndarray) -> np.ndarray:
    acc = np.zeros(arr.shape[1], dtype=np.int64)
    add = F._tables[0]
    for row in arr:
        acc = add[acc, row]
    return acc


def power_sum_subgroup(W: AdditiveSubgroup, i: int) -> FqPoly:
    """s_i(W) = sum over w in W of w^i (with 0^0 = 1)."""
    if i < 0:
        raise ValueError("power must be non-negative")
    total = FqPoly.zero(W.F)
    for w in W.elements:
        total = total + (w**i)
    return total


def verify_log_derivative_identity(W: AdditiveSubgroup, J: int) -> bool:
    """Check that z^{-j} in lambda_W / e_W(z) has coefficient s_{j-1}(W), 1 <= j <= J."""
    if J < 1:
        raise ValueError("J must be positive")
    F = W.F
    e = W.e_poly()
    lam = e[1]
    if not lam:
        raise ValueError("e_W has zero derivative; generators do not describe a subgroup")
    N = len(e) - 1
    # 1/e_W(z) = z^{-N} * sum_k h_k z^{-k}, with e_W monic
    h = [FqPoly.one(F)]
    for k in range(1, max(J - N, 0) + 1):
        acc = FqPoly.zero(F)
        for i in range(1, min(k, N) + 1):
            acc = acc + e[N - i] * h[k - i]
        h.append(-acc)
    sums = power_sums_subgroup(W, J - 1)
    for j in range(1, J + 1):
        coeff = lam * h[j - N] if j >= N else FqPoly.zero(F)
        if coeff != sums[j - 1]:
            return False
    return True
