"""Real primitive Dirichlet characters chi_d(n) = (d|n) via the Kronecker symbol."""

from __future__ import annotations

import math

import numpy as np

from .tables import ArithTable, ensure_capacity

# Conductors at or below this size get a cached period table on first use;
# larger conductors evaluate the symbol per call so that discriminant scans
# do not accumulate quadratic memory.
DEFAULT_CACHE_LIMIT = 10_000


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    acc = 1
    if n < 0:
        if a < 0:
            acc = -1
        n = -n
    # strip factors of 2 from n; (a|2) is 0 for even a, +1 for a = +-1 (mod 8), -1 otherwise
    t = (n & -n).bit_length() - 1
    n >>= t
    if t:
        if a & 1 == 0:
            return 0
        if t & 1 and a % 8 in (3, 5):
            acc = -acc
    # Jacobi loop on odd positive n
    a %= n
    while a:
        t = (a & -a).bit_length() - 1
        a >>= t
        if t & 1 and n % 8 in (3, 5):
            acc = -acc
        if a % 4 == 3 and n % 4 == 3:
            acc = -acc
        a, n = n % a, a
    return acc if n == 1 else 0


def _squarefree(m: int) -> bool:
    m = abs(m)
    if m % 4 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 2
    return True


def is_fundamental_discriminant(d: int) -> bool:
    """True when (d|.) is a primitive real character of conductor |d| (d != 1)."""
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


class RealCharacter:
    """chi_d for a fundamental discriminant d; immutable after construction.

    Evaluation is chi(n) = kronecker(d, n).  For conductors up to cache_limit a
    full period is materialized lazily and reused; rebuilding it concurrently is
    harmless (idempotent), so instances are safe to share across threads.
    """

    __slots__ = ("disc", "conductor", "cache_limit", "_period")

    def __init__(self, disc: int, cache_limit: int = DEFAULT_CACHE_LIMIT):
        if not is_fundamental_discriminant(disc):
            raise ValueError(f"{disc} is not a fundamental discriminant")
        self.disc = disc
        self.conductor = abs(disc)
        self.cache_limit = cache_limit
        self._period = None

    def __repr__(self):
        return f"RealCharacter(disc={self.disc})"

    def period_values(self) -> np.ndarray:
        """chi(n) for n = 0..conductor-1, indexed by n mod conductor."""
        if self._period is None:
            d = self.disc
            self._period = np.array(
                [kronecker(d, n) for n in range(self.conductor)], dtype=np.int64
            )
            self._period.flags.writeable = False
        return self._period

    def __call__(self, n: int) -> int:
        return chi_eval(self, n)


def chi_eval(chi: RealCharacter, n: int) -> int:
    """chi(n) for n >= 1.  Negative or zero arguments are rejected: every use
    site evaluates the character on positive integers only."""
    if n < 1:
        raise ValueError("chi_eval is defined for n >= 1")
    if chi.conductor <= chi.cache_limit:
        return int(chi.period_values()[n % chi.conductor])
    return kronecker(chi.disc, n)


def chi_table(chi: RealCharacter, limit: int, cap: int | None = None) -> ArithTable:
    """Dense table of chi(1..limit)."""
    ensure_capacity(limit, cap)
    d, q = chi.disc, chi.conductor
    if limit < q:
        values = np.zeros(limit + 1, dtype=np.int64)
        for n in range(1, limit + 1):
            values[n] = kronecker(d, n)
    else:
        period = (
            chi.period_values()
            if q <= chi.cache_limit
            else np.array([kronecker(d, n) for n in range(q)], dtype=np.int64)
        )
        reps = limit // q + 2
        values = np.tile(period, reps)[: limit + 1].copy()
        values[0] = 0
    return ArithTable(
        name=f"chi[{d}]",
        limit=limit,
        values=values,
        value_kind="integer",
        provenance=f"chi(disc={d},limit={limit})",
    )
