"""The finite place v = (f) of A: residues mod f^N, Teichmuller splitting, v-adic L-values.

A_v is modelled by A / f^N.  A unit beta splits as omega(beta) <beta> with
omega(beta) a (Q-1)-th root of unity (Q = q^{deg f}) and <beta> = 1 mod f,
which lets beta be raised to exponents y = (y_0, y_1) in Z_p x Z/(Q-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import FqPoly, monic_polys
from .bases import weight
from .lseries import CongruenceCondition, DirichletSeries, SpecialPoly
from .series import PadicExponent, PrecisionError, binom_mod_p

__all__ = [
    "VadicResidue",
    "SvExponent",
    "teichmuller",
    "one_unit_part",
    "vadic_pow",
    "VadicSpecialValue",
    "vadic_special_value",
    "reduce_special",
    "VadicBasis",
    "vadic_vwd_and_partial",
    "direct_restricted_sum",
]


@lru_cache(maxsize=256)
def _check_place(f: FqPoly):
    if not f.is_monic() or f.deg < 1:
        raise ValueError(f"{f} is not a monic polynomial of positive degree")
    if any(not f % g for k in range(1, f.deg // 2 + 1) for g in monic_polys(f.F, k)):
        raise ValueError(f"{f} is not irreducible")


@dataclass(frozen=True)
class VadicResidue:
    f: FqPoly
    N: int
    r: FqPoly

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("level must be positive")
        object.__setattr__(self, "r", self.r % self.modulus)

    @classmethod
    def of(cls, f: FqPoly, N: int, a) -> "VadicResidue":
        _check_place(f)
        if isinstance(a, int):
            a = FqPoly.const(f.F, a)
        return cls(f, N, a)

    @property
    def modulus(self) -> FqPoly:
        return self.f**self.N

    @property
    def Q(self) -> int:
        """Size of the residue field A / f."""
        return self.f.F.q**self.f.deg

    @property
    def valuation(self) -> int:
        """v_f of the residue, capped at N."""
        v, r = 0, self.r
        while r and v < self.N and not r % self.f:
            r = r // self.f
            v += 1
        return v if r else self.N

    def is_unit(self) -> bool:
        return bool(self.r % self.f)

    def _same(self, o):
        if isinstance(o, (int, FqPoly)):
            return VadicResidue.of(self.f, self.N, o)
        if o.f != self.f:
            raise ValueError("residues at different places")
        return o if o.N == self.N else VadicResidue(self.f, min(self.N, o.N), o.r)

    def __add__(self, o):
        o = self._same(o)
        return VadicResidue(self.f, min(self.N, o.N), self.r + o.r)

    def __sub__(self, o):
        o = self._same(o)
        return VadicResidue(self.f, min(self.N, o.N), self.r - o.r)

    def __neg__(self):
        return VadicResidue(self.f, self.N, -self.r)

    def __mul__(self, o):
        o = self._same(o)
        N = min(self.N, o.N)
        return VadicResidue(self.f, N, (self.r * o.r) % (self.f**N))

    __rmul__ = __mul__

    def unit_order(self) -> int:
        """|(A/f^N)^*| = (Q-1) Q^{N-1}."""
        return (self.Q - 1) * self.Q ** (self.N - 1)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return VadicResidue(self.f, self.N, pow(self.r, k, self.modulus))

    def inverse(self) -> "VadicResidue":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self.r} is not a unit mod {self.f}")
        return self ** (self.unit_order() - 1)

    def __eq__(self, o):
        if not isinstance(o, VadicResidue):
            return NotImplemented
        return self.f == o.f and self.N == o.N and self.r == o.r

    def __hash__(self):
        return hash((self.f, self.N, self.r))

    def __repr__(self):
        return f"VadicResidue({self.r} mod ({self.f})^{self.N})"


@dataclass(frozen=True)
class SvExponent:
    """y = (y_0, y_1) with y_0 in Z_p and y_1 mod Q - 1."""

    y0: PadicExponent
    y1: int
    Q: int

    def __post_init__(self):
        object.__setattr__(self, "y1", self.y1 % (self.Q - 1) if self.Q > 2 else 0)

    @classmethod
    def from_int(cls, j: int, p: int, Q: int, M: int = 32) -> "SvExponent":
        """The diagonal image of an integer."""
        return cls(PadicExponent.from_int(j, p, M), j, Q)


def teichmuller(beta: VadicResidue) -> VadicResidue:
    """omega(beta): iterate beta -> beta^Q until it is fixed."""
    if not beta.is_unit():
        raise ValueError("the Teichmuller part is defined for units")
    w = beta
    # (1 + f g)^{Q^k} = 1 mod f^{Q^k}, so N steps always suffice
    for _ in range(beta.N + 1):
        nxt = w**beta.Q
        if nxt == w:
            return w
        w = nxt
    raise AssertionError("Teichmuller iteration did not stabilize")  # pragma: no cover


def one_unit_part(beta: VadicResidue) -> VadicResidue:
    return beta * teichmuller(beta).inverse()


def vadic_pow(beta: VadicResidue, y) -> VadicResidue:
    """omega(beta)^{y_1} <beta>^{y_0}, the 1-unit part by the binomial series.

    An int y means its diagonal image.  The series sum_k C(y_0, k) lambda^k
    stops at k = N - 1 since lambda = <beta> - 1 is divisible by f.
    """
    F = beta.f.F
    if isinstance(y, int):
        y = SvExponent.from_int(y, F.p, beta.Q)
    omega = teichmuller(beta)
    lam = beta * omega.inverse() - 1
    acc = VadicResidue.of(beta.f, beta.N, 1) - 1
    power = VadicResidue.of(beta.f, beta.N, 1)
    for k in range(beta.N):
        if k:
            power = power * lam
        if not power.r:
            break
        try:
            c = binom_mod_p(y.y0, k)
        except PrecisionError:
            raise PrecisionError(f"exponent needs more than {y.y0.M} digits at level {beta.N}") from None
        if c:
            acc = acc + power * F.from_int(c)
    return (omega ** y.y1) * acc


# special values at v


@dataclass(frozen=True)
class VadicSpecialValue:
    """sum_d x_v^{-d} c_d with c_d in A / f^N."""

    f: FqPoly
    N: int
    j: int
    coeffs: tuple
    d_max: int
    proof: str

    def trimmed(self) -> list:
        out = list(self.coeffs)
        while out and not out[-1]:
            out.pop()
        return out

    @property
    def degree(self) -> int:
        return len(self.trimmed()) - 1

    def __eq__(self, o):
        if not isinstance(o, VadicSpecialValue):
            return NotImplemented
        return (self.f, self.N, self.j) == (o.f, o.N, o.j) and self.trimmed() == o.trimmed()

    def __hash__(self):
        return hash((self.f, self.N, self.j, tuple(self.trimmed())))

    def to_json(self) -> dict:
        return {
            "f": self.f.dense(),
            "N": self.N,
            "j": self.j,
            "coeffs": [c.dense() for c in self.trimmed()],
            "d_max": self.d_max,
            "proof": self.proof,
        }


def _removed_vanishes(L: DirichletSeries, f: FqPoly, d: int, j: int) -> bool:
    """Stratum d of sum_{f not | a} b_a a^j is provably zero for b_a = a^k.

    It is S_d(j+k) - f^{j+k} S_{d - deg f}(j+k), and both power sums vanish
    once j + k < q^{d - deg f} - 1.
    """
    k = L.power_shift()
    if k is None or d < f.deg:
        return False
    return j + k < L.F.q ** (d - f.deg) - 1


def _auto_dmax(L: DirichletSeries, f: FqPoly, j: int, d_max: int | None):
    if d_max is not None:
        return d_max, ("vanishing" if _removed_vanishes(L, f, d_max + 1, j) else "none")
    if L.kind == "table":
        return L.max_table_degree(), "vanishing"
    d = 0
    while not _removed_vanishes(L, f, d, j):
        d += 1
    return d - 1, "vanishing"


def vadic_special_value(
    L: DirichletSeries,
    j,
    f: FqPoly,
    N: int,
    d_max: int | None = None,
    cond: CongruenceCondition | None = None,
) -> VadicSpecialValue:
    """sum over monic a with f not dividing a of b_a a^y x_v^{-deg a}, mod f^N.

    y is an int j or an SvExponent; for an int the plain power is used.
    """
    _check_place(f)
    F = L.F
    jj = j if isinstance(j, int) else -1
    dm, proof = _auto_dmax(L, f, max(jj, 0), d_max)
    if not isinstance(j, int):
        proof = "none" if d_max is None else proof
    mod = f**N
    coeffs = []
    for d in range(dm + 1):
        acc = FqPoly.zero(F)
        for a in monic_polys(F, d):
            if not a % f or (cond is not None and not cond.matches(a)):
                continue
            b = L.coeff(a)
            if not b:
                continue
            if isinstance(j, int):
                term = pow(a, j, mod) if j >= 0 else vadic_pow(VadicResidue.of(f, N, a), j).r
            else:
                term = vadic_pow(VadicResidue.of(f, N, a), j).r
            acc = (acc + b * term) % mod
        coeffs.append(acc)
    return VadicSpecialValue(f, N, jj, tuple(coeffs), dm, proof)


def reduce_special(sp: SpecialPoly, f: FqPoly, N: int) -> VadicSpecialValue:
    mod = f**N
    return VadicSpecialValue(f, N, sp.j, tuple(c % mod for c in sp.coeffs), sp.d_max, sp.proof)


def direct_restricted_sum(L: DirichletSeries, j: int, f: FqPoly, N: int, cond: CongruenceCondition, d_max: int) -> VadicSpecialValue:
    """The same sum restricted to a meeting cond, by enumeration."""
    return vadic_special_value(L, j, f, N, d_max, cond)


# VWD sequence at v


class VadicBasis:
    """VWD points of A_v: u_n = sum_i r(n_i) f^i over the base-Q digits of n.

    r(k) is the polynomial of degree < deg f whose coefficients are the
    base-q digits of k.  Every polynomial a is some u_n exactly, through its
    f-adic expansion.
    """

    def __init__(self, f: FqPoly):
        _check_place(f)
        self.f = f
        self.F = f.F
        self.Q = self.F.q**f.deg

    def digit_poly(self, k: int) -> FqPoly:
        q = self.F.q
        return FqPoly(self.F, [(k // q**i) % q for i in range(self.f.deg)])

    def digit_index(self, r: FqPoly) -> int:
        q = self.F.q
        return sum(r.coeff(i) * q**i for i in range(self.f.deg))

    def point(self, n: int) -> FqPoly:
        acc, fp = FqPoly.zero(self.F), FqPoly.one(self.F)
        while n:
            acc = acc + self.digit_poly(n % self.Q) * fp
            fp = fp * self.f
            n //= self.Q
        return acc

    def index_of(self, a: FqPoly) -> int:
        n, i = 0, 0
        while a:
            a, r = a.divmod(self.f)
            n += self.digit_index(r) * self.Q**i
            i += 1
        return n

    def weight(self, n: int) -> int:
        return weight(n, self.Q)

    def Q_values(self, xs, n_max: int, N: int) -> list:
        """rows[r][n] = Q_n(xs[r]) mod f^N with Q_n = p_n / f^{w(n)}.

        p_n(x) is carried mod f^{N + w(n_max)} and divided exactly.
        """
        f = self.f
        wmax = self.weight(n_max)
        big = f ** (N + wmax)
        mod = f**N
        pts = [self.point(k) for k in range(n_max)]
        out = []
        for x in xs:
            row, cur = [], FqPoly.one(self.F)
            for n in range(n_max + 1):
                w = self.weight(n)
                q_, rem = cur.divmod(f**w) if w else (cur, FqPoly.zero(self.F))
                if rem:
                    raise AssertionError("valuation law violated")  # pragma: no cover
                row.append(q_ % mod)
                if n < n_max:
                    cur = (cur * (x - pts[n])) % big
            out.append(row)
        return out

    def newton_coefficients(self, values: list, N: int) -> list:
        """a_n with f(u_m) = sum_{n <= m} a_n Q_n(u_m) mod f^N; Q_m(u_m) is a unit."""
        M = len(values) - 1
        mod = self.f**N
        table = self.Q_values([self.point(m) for m in range(M + 1)], M, N)
        a = []
        for m in range(M + 1):
            acc = values[m]
            for n in range(m):
                acc = acc - a[n] * table[m][n]
            piv = VadicResidue(self.f, N, table[m][m])
            a.append((acc % mod * piv.inverse().r) % mod)
        return a


def vadic_vwd_and_partial(
    L: DirichletSeries,
    j,
    f: FqPoly,
    N: int,
    cond: CongruenceCondition | None = None,
    d_max: int | None = None,
) -> VadicSpecialValue:
    """The restricted v-adic value through the v-adic canonical measure.

    g = chi (z^y on units, 0 on f A_v) is expanded in the Newton basis at v
    from its values at u_0..u_M, where M is the largest index of a monic in
    the support; every such a is a node, so pairing with
    b_{n,d} = sum_{deg a = d, f not | a} b_a Q_n(a) gives the sum exactly.
    """
    F = L.F
    V = VadicBasis(f)
    cond = cond or CongruenceCondition.none(F)
    if cond.n_inf:
        raise ValueError("conditions at infinity use partial_via_measure")
    for g, _, _ in cond.finite:
        if g != f:
            raise ValueError(f"condition at {g} is not supported at v = ({f})")
    jj = j if isinstance(j, int) else -1
    dm, proof = _auto_dmax(L, f, max(jj, 0), d_max)
    mod = f**N
    strata = []
    M = 0
    for d in range(dm + 1):
        pts = [a for a in monic_polys(F, d) if a % f and L.coeff(a)]
        strata.append(pts)
        if pts:
            M = max(M, max(V.index_of(a) for a in pts))
    values = []
    for m in range(M + 1):
        x = V.point(m)
        if not x % f or not _finite_match(cond, x):
            values.append(FqPoly.zero(F))
            continue
        values.append(vadic_pow(VadicResidue.of(f, N, x), j).r)
    fn = V.newton_coefficients(values, N)
    coeffs = []
    for d, pts in enumerate(strata):
        acc = FqPoly.zero(F)
        if pts:
            rows = V.Q_values(pts, M, N)
            for a, row in zip(pts, rows):
                b = L.coeff(a)
                inner = FqPoly.zero(F)
                for n in range(M + 1):
                    if fn[n] and row[n]:
                        inner = inner + fn[n] * row[n]
                acc = (acc + b * (inner % mod)) % mod
        coeffs.append(acc)
    return VadicSpecialValue(f, N, jj, tuple(coeffs), dm, proof)


def _finite_match(cond: CongruenceCondition, x: FqPoly) -> bool:
    return all(not (x - alpha) % (g**n) for g, n, alpha in cond.finite)
