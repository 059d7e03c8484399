"""Measured divisor-sum inequalities, smooth-number counts, and the Dickman rho
function.

These routines do not prove anything; they compute both sides of the
inequalities the analytic arguments rest on, over concrete ranges, and report
the worst observed ratios so regressions in the table machinery show up as
numeric drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.chebyshev import Chebyshev

from .sieve import sieve_gpf, sieve_tau_k
from .tables import ArithTable, ensure_capacity


@dataclass(frozen=True)
class BoundsReport:
    inequality_id: str
    parameter: float
    exponent: float
    worst_ratio: float
    worst_n: int
    sample_limit: int


def munshi_beta(r: float) -> float:
    """beta(r) = -log r / log 2 + r * (1 + (1 - 1/r) * log(1 - 1/r) / log 2).

    Vanishes at r = 2, increases with r, and stays below 1 up to r = 4.
    """
    if r <= 1:
        raise ValueError("munshi_beta needs r > 1")
    if r == 2:
        return 0.0
    s = 1.0 - 1.0 / r
    return -math.log(r) / math.log(2) + r * (1.0 + s * math.log(s) / math.log(2))


def _divisor_cutoff_start(d: int, r: float) -> int:
    # smallest n with d <= n^(1/r), i.e. n >= d^r; the tiny slack keeps
    # integer cases like d^r = 8.000000000000002 from excluding n = d^r
    if d == 1:
        return 1
    t = math.exp(r * math.log(d))
    return max(d, int(math.ceil(t - 1e-9 * t)))


def munshi_verify(x: int, r: float, tau: ArithTable | None = None) -> BoundsReport:
    """Worst ratio of tau(n) against sum_{d | n, d <= n^(1/r)} tau(d)^beta(r)
    over 2 <= n <= x.

    The denominator always contains the d = 1 term, so the ratio is finite.
    """
    if x < 10:
        raise ValueError("need x >= 10")
    if not 2 < r <= 4:
        raise ValueError("r must lie in (2, 4]")
    ensure_capacity(x)
    beta = munshi_beta(r)
    tau_tab = tau if tau is not None else sieve_tau_k(x, 2)
    if tau_tab.limit < x:
        raise ValueError("limit mismatch: tau table below x")
    tau_vals = tau_tab.values[: x + 1]
    d_max = int(x ** (1.0 / r)) + 2
    while _divisor_cutoff_start(d_max, r) > x:
        d_max -= 1
    weights = tau_vals[: d_max + 1].astype(np.float64) ** beta
    den = np.zeros(x + 1, dtype=np.float64)
    for d in range(1, d_max + 1):
        start = _divisor_cutoff_start(d, r)
        first = ((start + d - 1) // d) * d
        if first <= x:
            den[first :: d] += weights[d]
    ratios = tau_vals[2:].astype(np.float64) / den[2:]
    worst = int(np.argmax(ratios)) + 2
    return BoundsReport(
        inequality_id="munshi_divisor",
        parameter=r,
        exponent=beta,
        worst_ratio=float(ratios[worst - 2]),
        worst_n=worst,
        sample_limit=x,
    )


def tau_shift_bound_demo(
    f: ArithTable, x: int, a: int, q_base: int, tau: ArithTable | None = None
) -> float:
    """Both sides of the shifted-divisor bound for a nonnegative weight f:

        sum_{q_base < q <= 2*q_base} sum_{n <= x, n = a mod q, n != a} f(n)
            <=  sum_{n <= x, n != a} f(n) * tau(|n - a|)

    Verifies the divisor-count comparison exactly and returns RHS / LHS
    (1.0 when both sides vanish, inf when only the left does).
    """
    if not 0 < a < x:
        raise ValueError("need 0 < a < x")
    if q_base < 1:
        raise ValueError("q_base must be >= 1")
    if f.limit < x:
        raise ValueError("limit mismatch: x beyond table")
    fv = f.values[: x + 1].astype(np.float64)
    if fv.min() < -1e-9:
        raise ValueError("demo weight must be nonnegative")
    np.maximum(fv, 0.0, out=fv)  # clear -1e-16 scale convolution rounding
    shifts = np.abs(np.arange(x + 1, dtype=np.int64) - a)
    tau_tab = tau if tau is not None else sieve_tau_k(int(shifts.max()), 2)
    tau_of_shift = np.zeros(x + 1, dtype=np.int64)
    nz = shifts > 0
    tau_of_shift[nz] = tau_tab.values[shifts[nz]]
    counts = np.zeros(x + 1, dtype=np.int64)
    for q in range(q_base + 1, 2 * q_base + 1):
        counts[shifts % q == 0] += 1
    counts[a] = 0
    bad = counts > tau_of_shift
    bad[a] = False
    if bad.any():
        raise RuntimeError("divisor count exceeded tau(n - a); table corruption")
    lhs = float(np.dot(fv, counts))
    rhs = float(np.dot(fv, tau_of_shift))
    if lhs == 0.0:
        return 1.0 if rhs == 0.0 else math.inf
    if lhs > rhs * (1 + 1e-12):
        raise RuntimeError("shifted-divisor inequality violated")
    return rhs / lhs


def smooth_count(x: int, y: int, gpf: ArithTable | None = None) -> int:
    """Exact Psi(x, y): how many n <= x have no prime factor above y.

    n = 1 counts (it has no prime factors at all)."""
    if not 2 <= y <= x:
        raise ValueError("need 2 <= y <= x")
    g = gpf if gpf is not None else sieve_gpf(x)
    if g.limit < x:
        raise ValueError("limit mismatch: x beyond table")
    return int(np.count_nonzero(g.values[1 : x + 1] <= y))


_RHO_DEGREE = 48
_rho_pieces: dict[int, object] = {}


def _rho_piece(k: int):
    """Chebyshev model of rho on [k, k+1], built by integrating the previous
    piece through u * rho'(u) = -rho(u - 1)."""
    piece = _rho_pieces.get(k)
    if piece is not None:
        return piece
    if k == 0:
        piece = Chebyshev([1.0], domain=[0.0, 1.0])
    elif k == 1:
        piece = Chebyshev.interpolate(
            lambda u: 1.0 - np.log(u), _RHO_DEGREE, domain=[1.0, 2.0]
        )
    else:
        prev = _rho_piece(k - 1)
        integrand = Chebyshev.interpolate(
            lambda u: prev(u - 1.0) / u, _RHO_DEGREE, domain=[float(k), float(k + 1)]
        )
        antideriv = integrand.integ(1, lbnd=float(k))
        rho_k = float(prev(float(k)))
        piece = rho_k - antideriv
    _rho_pieces[k] = piece
    return piece


def dickman_rho(u: float) -> float:
    """rho(u) for 0 <= u <= 20.

    Piecewise polynomial solution of u rho'(u) = -rho(u-1), rho = 1 on [0, 1];
    each unit interval is a degree-48 Chebyshev fit of the exact integral of
    the previous piece. Relative error stays below 1e-8 out to u ~ 10; past
    that the double-precision absolute floor of the recursion (~1e-16)
    dominates the tiny true values, so the far tail is order-of-magnitude only.
    """
    if u < 0:
        raise ValueError("rho is defined for u >= 0")
    if u > 20:
        raise ValueError("rho evaluation capped at u = 20")
    if u <= 1:
        return 1.0
    k = min(int(math.floor(u)), 19)
    return float(_rho_piece(k)(u))


def smooth_vs_rho(x: int, u: float, gpf: ArithTable | None = None) -> dict:
    """Measured Psi(x, y)/x against rho(u) at y = round(x^(1/u))."""
    if u < 1:
        raise ValueError("need u >= 1")
    y = max(2, int(round(x ** (1.0 / u))))
    psi = smooth_count(x, y, gpf=gpf)
    rho = dickman_rho(u)
    return {
        "u": u,
        "y": y,
        "smooth_count": psi,
        "density": psi / x,
        "rho": rho,
        "density_over_rho": (psi / x) / rho,
    }


def shiu_ratio(
    x: int, q: int, a: int, k: int, tau_k: ArithTable | None = None
) -> float:
    """[sum of tau_k(n) over n <= x, n = a mod q] / [(x/q) * (log x)^(k-1)].

    A raw measurement of the constant in the Shiu-style average; no claim is
    checked here beyond positivity.
    """
    if k not in (2, 4):
        raise ValueError("k must be 2 or 4")
    if q < 1 or math.gcd(a, q) != 1:
        raise ValueError("need q >= 1 and gcd(a, q) = 1")
    if x < max(3, a):
        raise ValueError("x too small for a nonempty progression")
    tab = tau_k if tau_k is not None else sieve_tau_k(x, k)
    if tab.limit < x:
        raise ValueError("limit mismatch: x beyond table")
    a0 = a % q
    if a0 == 0:
        a0 = q
    total = int(tab.values[a0 : x + 1 : q].sum())
    return total / ((x / q) * math.log(x) ** (k - 1))
