"""Run configuration shared by the CLI and the scripts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .algebra import GF


def factor_prime_power(q: int) -> tuple:
    """(p, e) with q = p^e, or ValueError."""
    if q < 2:
        raise ValueError(f"q = {q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p, e


@dataclass
class RunConfig:
    q: int = 2
    modulus: list | None = None
    prec: int = 32
    padic_N: int = 8
    level_N: int = 8
    M: int = 32
    n_max: int = 64
    d_max: int | None = None
    j: int = 1
    j_max: int = 255
    cond: list = field(default_factory=list)
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        factor_prime_power(self.q)
        for name in ("prec", "padic_N", "level_N", "M"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.n_max < 0 or self.j_max < 0:
            raise ValueError("n_max and j_max must be non-negative")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")

    @property
    def p(self) -> int:
        return factor_prime_power(self.q)[0]

    @property
    def e(self) -> int:
        return factor_prime_power(self.q)[1]

    def field(self) -> GF:
        mod = tuple(self.modulus) if self.modulus else None
        return GF(self.p, self.e, mod)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def merged(cls, base: "RunConfig | None", overrides: dict) -> "RunConfig":
        """base updated with every override that is not None (flags win)."""
        data = asdict(base or cls())
        for k, v in overrides.items():
            if k in data and v is not None:
                data[k] = v
        return cls(**data)
