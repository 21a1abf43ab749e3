"""Protocol parameter sets and their consistency constraints.

A parameter set fixes (lam, n, m, q, Q, sigma, tau) with
q an odd prime, Q = ceil(log2 q), m = n(2Q + 1) and tau = q/(4mQ).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    c = max(n, 2)
    if c % 2 == 0 and c != 2:
        c += 1
    while not is_prime(c):
        c += 2 if c > 2 else 1
    return c


@dataclass(frozen=True)
class Params:
    lam: int
    n: int
    q: int
    sigma: float
    preset_name: str = "custom"
    Q: int = field(init=False)
    m: int = field(init=False)
    tau: Fraction = field(init=False)

    def __post_init__(self):
        if self.q < 3 or self.q % 2 == 0 or not is_prime(self.q):
            raise ValueError(f"q={self.q} must be an odd prime")
        if self.q.bit_length() > 61:
            raise ValueError("moduli >= 2**61 are not supported")
        if self.sigma < 1:
            raise ValueError("sigma must be >= 1")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        Q = (self.q - 1).bit_length()  # ceil(log2 q) for q >= 3, q not a power of 2
        m = self.n * (2 * Q + 1)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "tau", Fraction(self.q, 4 * m * Q))

    @property
    def tau_floor(self) -> int:
        return self.tau.numerator // self.tau.denominator

    @property
    def nQ(self) -> int:
        return self.n * self.Q

    def completeness_error(self) -> float:
        """5*m*sigma^2/q^2 + m*sigma/(2*tau)."""
        return (5 * self.m * self.sigma**2 / self.q**2
                + self.m * self.sigma / (2 * float(self.tau)))

    def describe(self) -> dict:
        return {
            "preset": self.preset_name,
            "lambda": self.lam,
            "n": self.n,
            "m": self.m,
            "q": str(self.q),
            "Q": self.Q,
            "sigma": self.sigma,
            "tau": f"{self.tau.numerator}/{self.tau.denominator}",
            "completeness_error": self.completeness_error(),
            "security": "functional, not secure" if self.preset_name == "desk"
                        else "unvetted",
        }


def select_params(n: int, c: float, eps: float, rng, lam: int | None = None) -> Params:
    """sigma = n^c and q a random odd prime in [n^(2+eps)*sigma, 2n^(2+eps)*sigma]."""
    if n < 2 or c <= 0 or eps <= 0:
        raise ValueError("need n >= 2, c > 0, eps > 0")
    sigma = float(n) ** c
    lo = math.ceil(n ** (2 + eps) * sigma)
    hi = math.floor(2 * n ** (2 + eps) * sigma)
    if hi - lo < 4:
        raise ValueError("prime search range too narrow")
    for _ in range(10_000):
        cand = int(rng.integers(lo, hi + 1)) | 1
        if lo <= cand <= hi and is_prime(cand):
            return Params(lam=lam if lam is not None else n, n=n, q=cand,
                          sigma=sigma, preset_name=f"selected-n{n}")
    raise AssertionError("no prime found in range (cannot occur for ranges this wide)")


@lru_cache(maxsize=None)
def desk_preset() -> Params:
    """Small-n, large-q preset: completeness error < 1e-4. Functional, not secure."""
    q = next_prime(1 << 42)
    return Params(lam=4, n=4, q=q, sigma=3.0, preset_name="desk")


@lru_cache(maxsize=None)
def tiny_params(n: int, q: int, sigma: float = 1.0, lam: int = 4) -> Params:
    """Deliberately tiny instances for exhaustive / oracle tests."""
    return Params(lam=lam, n=n, q=q, sigma=sigma, preset_name=f"tiny-n{n}-q{q}")


PRESETS = {"desk": desk_preset}


def get_preset(name: str) -> Params:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
