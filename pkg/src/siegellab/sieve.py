"""Segmented sieves for the base tables: spf, mu, Lambda, phi, tau_k.

Every sieve accepts a segment_size (default 2^18 entries) and a thread count.
Segments write disjoint slices of a preallocated output array, so results are
identical for any segment size and any thread count; only wall time changes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._convolve import convolve_values
from .tables import ArithTable, SpfTable, ensure_capacity

DEFAULT_SEGMENT_SIZE = 1 << 18


def prime_mask(limit: int) -> np.ndarray:
    """Boolean primality mask for 0..limit."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def base_primes(limit: int) -> np.ndarray:
    return np.nonzero(prime_mask(limit))[0].astype(np.int64)


def _segments(lo: int, hi: int, size: int):
    while lo < hi:
        yield lo, min(lo + size, hi)
        lo += size


def _run_segments(worker, lo, hi, segment_size, threads):
    segs = list(_segments(lo, hi, segment_size))
    if threads <= 1 or len(segs) <= 1:
        for a, b in segs:
            worker(a, b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda seg: worker(*seg), segs))


def sieve_spf(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    cap: int | None = None,
) -> SpfTable:
    """Smallest prime factor of every n <= x."""
    if x < 2:
        raise ValueError("sieve_spf requires x >= 2")
    ensure_capacity(x, cap)
    spf = np.zeros(x + 1, dtype=np.int64)
    primes = base_primes(math.isqrt(x))

    def worker(lo, hi):
        for p in primes:
            p2 = p * p
            if p2 >= hi:
                break
            start = max(p2, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            block = spf[start:hi:p]
            block[block == 0] = p
        seg = spf[lo:hi]
        unset = seg == 0
        if unset.any():
            seg[unset] = np.arange(lo, hi, dtype=np.int64)[unset]

    _run_segments(worker, 2, x + 1, segment_size, threads)
    return SpfTable(limit=x, spf=spf)


def sieve_mu(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    cap: int | None = None,
) -> ArithTable:
    """Moebius function table."""
    ensure_capacity(x, cap)
    values = np.zeros(x + 1, dtype=np.int64)
    primes = base_primes(math.isqrt(x))

    def worker(lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        mu = np.ones(hi - lo, dtype=np.int64)
        prod = np.ones(hi - lo, dtype=np.int64)
        for p in primes:
            start = ((lo + p - 1) // p) * p
            if start < hi:
                sl = slice(start - lo, hi - lo, p)
                np.negative(mu[sl], out=mu[sl])
                prod[sl] *= p
            p2 = p * p
            start2 = ((lo + p2 - 1) // p2) * p2
            if start2 < hi:
                mu[start2 - lo :: p2] = 0
        # entries with one prime factor above sqrt(x) still owe a sign flip
        left = prod < n
        mu[left] = -mu[left]
        values[lo:hi] = mu

    _run_segments(worker, 1, x + 1, segment_size, threads)
    return ArithTable("mu", x, values, "integer", f"mu(limit={x})")


def sieve_vonmangoldt(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    spf: SpfTable | None = None,
    cap: int | None = None,
) -> ArithTable:
    """Lambda(n) = log p for n = p^k, else 0; the value is log(spf[n]) exactly."""
    ensure_capacity(x, cap)
    if spf is None:
        spf = sieve_spf(x, segment_size=segment_size, threads=threads, cap=cap)
    values = np.zeros(x + 1, dtype=np.float64)
    spv = spf.spf

    def worker(lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        isp = spv[lo:hi] == n
        values[lo:hi][isp] = np.log(n[isp].astype(np.float64))

    _run_segments(worker, 2, x + 1, segment_size, threads)
    for p in base_primes(math.isqrt(x)):
        logp = values[p]
        pk = p * p
        while pk <= x:
            values[pk] = logp
            pk *= p
    return ArithTable("vonmangoldt", x, values, "real", f"vonmangoldt(limit={x})")


def sieve_totient(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
    cap: int | None = None,
) -> ArithTable:
    """Euler phi table, exact integers."""
    ensure_capacity(x, cap)
    values = np.zeros(x + 1, dtype=np.int64)
    primes = base_primes(math.isqrt(x))

    def worker(lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        phi = n.copy()
        rem = n.copy()
        for p in primes:
            start = ((lo + p - 1) // p) * p
            if start >= hi:
                continue
            sl = slice(start - lo, hi - lo, p)
            phi[sl] //= p
            phi[sl] *= p - 1
            r = rem[sl]
            r //= p
            while True:
                again = r % p == 0
                if not again.any():
                    break
                r[again] //= p
        left = rem > 1
        if left.any():
            phi[left] //= rem[left]
            phi[left] *= rem[left] - 1
        values[lo:hi] = phi

    _run_segments(worker, 1, x + 1, segment_size, threads)
    return ArithTable("totient", x, values, "integer", f"totient(limit={x})")


def sieve_tau_k(x: int, k: int = 2, cap: int | None = None) -> ArithTable:
    """k-fold divisor function tau_k (tau_2 = ordinary tau), exact integers."""
    if not 2 <= k <= 8:
        raise ValueError("tau_k supported for 2 <= k <= 8")
    ensure_capacity(x, cap)
    ones = np.ones(x + 1, dtype=np.int64)
    ones[0] = 0
    acc = ones
    for _ in range(k - 1):
        acc = convolve_values(acc, ones, x)
    name = "tau" if k == 2 else f"tau_{k}"
    return ArithTable(name, x, acc, "integer", f"tau_k(k={k},limit={x})")


def sieve_square_part(x: int, cap: int | None = None) -> ArithTable:
    """s(n) = largest square divisor of n; n/s(n) is automatically squarefree."""
    ensure_capacity(x, cap)
    values = np.ones(x + 1, dtype=np.int64)
    values[0] = 0
    for d in range(2, math.isqrt(x) + 1):
        d2 = d * d
        values[d2::d2] = d2
    return ArithTable("square_part", x, values, "integer", f"square_part(limit={x})")


def sieve_gpf(x: int, cap: int | None = None) -> ArithTable:
    """Greatest prime factor of n (gpf(1) = 1 by convention)."""
    ensure_capacity(x, cap)
    values = np.zeros(x + 1, dtype=np.int64)
    values[1] = 1
    for p in base_primes(x):
        values[p::p] = p
    return ArithTable("gpf", x, values, "integer", f"gpf(limit={x})")
