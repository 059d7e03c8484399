"""Dirichlet convolution algebra over dense tables.

The central objects are lambda = chi * 1, lambda' = chi * log and
nu = mu * (mu chi); they satisfy Lambda = lambda' * nu exactly, which is the
identity the rest of the package leans on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._convolve import convolve_values
from .characters import RealCharacter, chi_table
from .sieve import prime_mask, sieve_mu, sieve_vonmangoldt
from .tables import ArithTable

NAMED_WEIGHTS = ("one", "log")


def weight_values(name: str, limit: int) -> np.ndarray:
    """Dense values of a named convolution weight."""
    if name == "one":
        w = np.ones(limit + 1, dtype=np.int64)
        w[0] = 0
        return w
    if name == "log":
        w = np.zeros(limit + 1, dtype=np.float64)
        w[1:] = np.log(np.arange(1, limit + 1, dtype=np.float64))
        return w
    raise ValueError(f"unknown weight {name!r}; expected one of {NAMED_WEIGHTS}")


@dataclass(frozen=True)
class ConvolutionPlan:
    """A pending convolution: left table against a table or named weight."""

    left: ArithTable
    right: ArithTable | str
    limit: int

    def __post_init__(self):
        if self.left.limit < self.limit:
            raise ValueError("limit mismatch: left table too short")
        if isinstance(self.right, ArithTable) and self.right.limit < self.limit:
            raise ValueError("limit mismatch: right table too short")
        if isinstance(self.right, str) and self.right not in NAMED_WEIGHTS:
            raise ValueError(f"unknown weight {self.right!r}")

    def run(self) -> ArithTable:
        if isinstance(self.right, ArithTable):
            rvals = self.right.values
            rname, rprov = self.right.name, self.right.provenance
            rkind = self.right.value_kind
        else:
            rvals = weight_values(self.right, self.limit)
            rname = rprov = self.right
            rkind = "integer" if self.right == "one" else "real"
        out = convolve_values(self.left.values, rvals, self.limit)
        kind = "integer" if (self.left.value_kind == "integer" and rkind == "integer") else "real"
        return ArithTable(
            name=f"({self.left.name}*{rname})",
            limit=self.limit,
            values=out,
            value_kind=kind,
            provenance=f"dirichlet({self.left.provenance},{rprov},limit={self.limit})",
        )


def dirichlet_convolve(f: ArithTable, g: ArithTable, x: int) -> ArithTable:
    """(f*g)(n) for n <= x; exact when both inputs are integer tables."""
    return ConvolutionPlan(f, g, x).run()


def build_lambda(
    chi: RealCharacter, x: int, chi_tab: ArithTable | None = None, cap: int | None = None
) -> ArithTable:
    """lambda(n) = sum_{d|n} chi(d); nonnegative, integer valued."""
    ct = chi_tab if chi_tab is not None else chi_table(chi, x, cap=cap)
    out = ConvolutionPlan(ct, "one", x).run()
    if out.values[1:].min() < 0:
        raise RuntimeError("lambda postcondition violated: negative entry")
    return ArithTable(
        f"lambda[{chi.disc}]", x, out.values, "integer", f"lambda(disc={chi.disc},limit={x})"
    )


def build_lambda_prime(
    chi: RealCharacter, x: int, chi_tab: ArithTable | None = None, cap: int | None = None
) -> ArithTable:
    """lambda'(n) = sum_{l|n} chi(l) log(n/l), float64."""
    ct = chi_tab if chi_tab is not None else chi_table(chi, x, cap=cap)
    out = ConvolutionPlan(ct, "log", x).run()
    if out.values[1:].min() < -1e-9:
        raise RuntimeError("lambda_prime postcondition violated: entry below -1e-9")
    return ArithTable(
        f"lambda_prime[{chi.disc}]",
        x,
        out.values,
        "real",
        f"lambda_prime(disc={chi.disc},limit={x})",
    )


def build_nu(
    chi: RealCharacter,
    x: int,
    mu: ArithTable | None = None,
    chi_tab: ArithTable | None = None,
    cap: int | None = None,
) -> ArithTable:
    """nu = mu * (mu chi), the Dirichlet inverse of lambda'."""
    mt = mu if mu is not None else sieve_mu(x, cap=cap)
    ct = chi_tab if chi_tab is not None else chi_table(chi, x, cap=cap)
    muchi = mt.values * ct.values
    out = convolve_values(mt.values, muchi, x)
    primes = prime_mask(x)
    want = -(1 + ct.values[primes])
    if not np.array_equal(out[primes], want):
        raise RuntimeError("nu postcondition violated: nu(p) != -(1 + chi(p))")
    return ArithTable(f"nu[{chi.disc}]", x, out, "integer", f"nu(disc={chi.disc},limit={x})")


def convolution_at(f: np.ndarray, g: np.ndarray, n: int) -> float:
    """(f*g)(n) by direct divisor enumeration with compensated summation."""
    terms = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            terms.append(float(f[d]) * float(g[n // d]))
            if d != n // d:
                terms.append(float(f[n // d]) * float(g[d]))
        d += 1
    return math.fsum(terms)


def verify_vonmangoldt_identity(
    chi: RealCharacter,
    x: int,
    lam_prime: ArithTable | None = None,
    nu: ArithTable | None = None,
    vonmangoldt: ArithTable | None = None,
    cap: int | None = None,
) -> float:
    """max_{n<=x} |(lambda' * nu)(n) - Lambda(n)|.

    The identity is exact in exact arithmetic, so the returned value measures
    accumulated float64 rounding only; the worst point is re-evaluated with
    compensated summation as a cross-check.
    """
    lp = lam_prime if lam_prime is not None else build_lambda_prime(chi, x, cap=cap)
    nv = nu if nu is not None else build_nu(chi, x, cap=cap)
    vm = vonmangoldt if vonmangoldt is not None else sieve_vonmangoldt(x, cap=cap)
    conv = convolve_values(lp.values, nv.values, x)
    dev = np.abs(conv - vm.values[: x + 1])
    worst = int(np.argmax(dev[1:]) + 1)
    refined = abs(convolution_at(lp.values, nv.values, worst) - float(vm.values[worst]))
    return float(max(dev[1:].max(), refined))


def product_rule_deviation(lam: ArithTable, lam_prime: ArithTable, limit: int) -> float:
    """max |lambda'(dn) - lambda(d) lambda'(n) - lambda'(d) lambda(n)| over coprime d, n with dn <= limit."""
    if lam.limit < limit or lam_prime.limit < limit:
        raise ValueError("limit mismatch")
    lv = lam.values
    lpv = lam_prime.values
    worst = 0.0
    for d in range(1, limit + 1):
        top = limit // d
        n = np.arange(1, top + 1)
        cop = np.gcd(n, d) == 1
        n = n[cop]
        dev = np.abs(lpv[d * n] - lv[d] * lpv[n] - lpv[d] * lv[n])
        if dev.size:
            worst = max(worst, float(dev.max()))
    return worst


def square_part_bound_margin(
    lam: ArithTable, square_part: ArithTable, limit: int
) -> float:
    """min of lambda(s) lambda(t) - lambda(n) over n <= limit, n = s t with s the
    largest square divisor; nonnegative when the submultiplicative bound holds."""
    if lam.limit < limit or square_part.limit < limit:
        raise ValueError("limit mismatch")
    n = np.arange(1, limit + 1)
    s = square_part.values[1 : limit + 1]
    t = n // s
    margin = lam.values[s] * lam.values[t] - lam.values[1 : limit + 1]
    return float(margin.min())


def mean_value_rows(lam: ArithTable, chi: RealCharacter, l_value: float, xs) -> list[dict]:
    """Measured constants C = |sum_{n<=X} lambda(n) - X L(1,chi)| / (D sqrt(X))."""
    rows = []
    csum = np.cumsum(lam.values)
    for X in xs:
        if X > lam.limit:
            continue
        err = abs(float(csum[X]) - X * l_value)
        rows.append(
            {
                "x": int(X),
                "lambda_sum": float(csum[X]),
                "x_times_l": X * l_value,
                "c_measured": err / (chi.conductor * math.sqrt(X)),
            }
        )
    return rows


def log_mean_ratio(lam: ArithTable, chi: RealCharacter, l_value: float, x: int) -> float:
    """sum_{D^2 <= n <= x} lambda(n)/n divided by L(1,chi) log x (tends to 1)."""
    lo = chi.conductor * chi.conductor
    if lo > x:
        raise ValueError("x below D^2")
    n = np.arange(lo, x + 1, dtype=np.float64)
    s = float((lam.values[lo : x + 1] / n).sum())
    return s / (l_value * math.log(x))
