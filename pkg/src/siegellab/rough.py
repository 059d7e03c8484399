"""Roughness and squarefree filters that localize weights on R-rough integers.

P(n) denotes the smallest prime factor of n, with P(1) = +infinity, so n = 1
survives every roughness cut.  R is a free dial at desk scale: the default_R
rule reproduces the asymptotic choice max(D^5, x e^{-sqrt(log x)}) but any
R >= 2 is accepted everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .characters import RealCharacter, chi_eval
from .tables import ArithTable, SpfTable

ALPHA_LIMIT = 1.0 / 500.0


@dataclass(frozen=True)
class SiegelParams:
    """Parameter bundle shared by the scan and report layers."""

    x: int
    disc: int
    R: int
    A: float = 2.0
    alpha: float = 1e-3
    h: float = 0.5
    Q: int | None = None

    def __post_init__(self):
        if self.x < 1:
            raise ValueError("x must be positive")
        if self.R < 2:
            raise ValueError("R must be >= 2")
        if not 0 < self.h < 1:
            raise ValueError("h must lie in (0, 1)")
        if not 0 < self.alpha < ALPHA_LIMIT:
            raise ValueError(f"alpha must lie in (0, {ALPHA_LIMIT})")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.Q is not None and self.Q < 2:
            raise ValueError("Q must be >= 2")


def default_R(x: int, D: int) -> int:
    """max(D^5, ceil(x e^{-sqrt(log x)})), saturated at x.

    With R = x the rough cut keeps only n = 1 and primes above x, so saturation
    marks the regime where the filters are vacuous at the chosen desk scale.
    """
    if x < 16:
        raise ValueError("default_R requires x >= 16")
    if D < 3:
        raise ValueError("default_R requires D >= 3")
    smooth_term = math.ceil(x * math.exp(-math.sqrt(math.log(x))))
    return min(x, max(D**5, smooth_term))


def rough_restrict(f: ArithTable, spf: SpfTable, R: int) -> ArithTable:
    """Zero out f(n) unless P(n) > R (n = 1 always survives)."""
    if f.limit != spf.limit:
        raise ValueError("limit mismatch between table and spf")
    keep = spf.spf > R
    keep[1] = True
    values = f.values * keep
    return ArithTable(
        name=f"{f.name}|P>{R}",
        limit=f.limit,
        values=values,
        value_kind=f.value_kind,
        provenance=f"{f.provenance}|rough(R={R})",
    )


def squarefree_restrict(f: ArithTable, mu: ArithTable) -> ArithTable:
    """Zero out f(n) on non-squarefree n via the mu(n)^2 indicator."""
    if f.limit != mu.limit:
        raise ValueError("limit mismatch between table and mu")
    values = f.values * (mu.values * mu.values)
    return ArithTable(
        name=f"{f.name}|sqfree",
        limit=f.limit,
        values=values,
        value_kind=f.value_kind,
        provenance=f"{f.provenance}|squarefree",
    )


def split_pm(n: int, chi: RealCharacter, spf: SpfTable) -> tuple[int, int]:
    """Factor n = n1 * nm1 with chi(p) = +1 on n1's primes, -1 on nm1's."""
    if n < 1 or n > spf.limit:
        raise ValueError("n outside table range")
    if math.gcd(n, chi.conductor) != 1:
        raise ValueError("split_pm requires gcd(n, conductor) = 1")
    n1 = nm1 = 1
    m = n
    while m > 1:
        p = int(spf.spf[m])
        pe = 1
        while m % p == 0:
            pe *= p
            m //= p
        v = chi_eval(chi, p)
        if v == 1:
            n1 *= pe
        elif v == -1:
            nm1 *= pe
        else:
            raise ValueError(f"prime {p} divides the conductor")
    return n1, nm1


@dataclass(frozen=True)
class RoughSupportReport:
    primes_checked: int
    squarefree_rough_checked: int
    max_prime_deviation: float
    min_lambda_margin: float


def verify_rough_prime_support(
    chi: RealCharacter,
    x: int,
    R: int,
    lam_w_prime: ArithTable,
    spf: SpfTable,
    mu: ArithTable,
    vonmangoldt: ArithTable,
) -> RoughSupportReport:
    """Check that lambda'_W dominates Lambda on squarefree R-rough n and matches
    log p exactly on primes p > R.  Raises on any violation."""
    if not (lam_w_prime.limit >= x and spf.limit >= x and mu.limit >= x):
        raise ValueError("limit mismatch")
    n = np.arange(x + 1)
    rough = spf.spf[: x + 1] > R
    rough[1] = True
    sqfree = mu.values[: x + 1] != 0
    sel = rough & sqfree
    sel[0] = False
    margin = lam_w_prime.values[: x + 1][sel] - vonmangoldt.values[: x + 1][sel]
    min_margin = float(margin.min()) if margin.size else 0.0
    if margin.size and min_margin < -1e-9:
        raise ValueError(f"lambda'_W fails to dominate Lambda (margin {min_margin})")
    primes = (spf.spf[: x + 1] == n) & (n > R)
    pvals = n[primes].astype(np.float64)
    dev = (
        np.abs(lam_w_prime.values[: x + 1][primes] - np.log(pvals)) if pvals.size else np.zeros(0)
    )
    max_dev = float(dev.max()) if dev.size else 0.0
    if dev.size and max_dev > 1e-9:
        raise ValueError(f"lambda'_W(p) != log p on a prime above R (dev {max_dev})")
    return RoughSupportReport(
        primes_checked=int(pvals.size),
        squarefree_rough_checked=int(sel.sum()),
        max_prime_deviation=max_dev,
        min_lambda_margin=min_margin,
    )
