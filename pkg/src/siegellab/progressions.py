"""Progression sums, Chebyshev psi in residue classes, and the scan layers.

All per-residue sums are plain strided-slice reductions over a shared table, so
a scan costs O(x) regardless of the modulus and is bit-reproducible across
thread counts (threads only split independent work items).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .characters import RealCharacter, chi_eval, chi_table
from .convolution import build_lambda, build_lambda_prime
from .lvalues import curly_l, l_one
from .rough import SiegelParams, rough_restrict, squarefree_restrict
from .sieve import sieve_mu, sieve_spf, sieve_totient, sieve_vonmangoldt
from .tables import ArithTable, SpfTable, TableCache


def progression_sum(f: ArithTable, x: int, q: int, a: int):
    """sum of f(n) over n <= x, n = a (mod q); exact for integer tables."""
    if q < 1 or not 1 <= a <= q:
        raise ValueError("need q >= 1 and 1 <= a <= q")
    if x > f.limit:
        raise ValueError("limit mismatch: x beyond table")
    if x < a:
        return 0 if f.value_kind == "integer" else 0.0
    block = f.values[a : x + 1 : q]
    total = block.sum()
    return int(total) if f.value_kind == "integer" else float(total)


def coprime_sum(f: ArithTable, x: int, q: int):
    """sum of f(n) over n <= x with gcd(n, q) = 1."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if x > f.limit:
        raise ValueError("limit mismatch: x beyond table")
    n = np.arange(x + 1, dtype=np.int64)
    mask = np.gcd(n, q) == 1
    mask[0] = False
    total = f.values[: x + 1][mask].sum()
    return int(total) if f.value_kind == "integer" else float(total)


def phi_of(q: int) -> int:
    """Euler phi of a single integer by trial division."""
    if q < 1:
        raise ValueError("q must be >= 1")
    phi = q
    m = q
    p = 2
    while p * p <= m:
        if m % p == 0:
            phi -= phi // p
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        phi -= phi // m
    return phi


def main_term(chi: RealCharacter, q: int, a: int, sign: str) -> float:
    """(1 -/+ chi(a D/(D,q))) / phi(q); 'minus' subtracts the character value."""
    if sign not in ("minus", "plus"):
        raise ValueError("sign must be 'minus' or 'plus'")
    if math.gcd(a, q) != 1:
        raise ValueError("main_term requires gcd(a, q) = 1")
    g = math.gcd(chi.conductor, q)
    arg = a * (chi.conductor // g)
    cval = chi_eval(chi, arg)
    phi = phi_of(q)
    return (1 - cval) / phi if sign == "minus" else (1 + cval) / phi


def chebyshev_psi(x: int, vonmangoldt: ArithTable | None = None) -> float:
    """psi(x) = sum_{n<=x} Lambda(n)."""
    vm = vonmangoldt if vonmangoldt is not None else sieve_vonmangoldt(x)
    if vm.limit < x:
        raise ValueError("limit mismatch: x beyond table")
    return float(vm.values[: x + 1].sum())


@dataclass(frozen=True)
class ProgressionReport:
    q: int
    a: int
    chi_a: int
    psi: float
    s_prime: float
    s_plain: float
    s_w_prime: float
    predicted: float
    discrepancy: float
    normalization: str = "main_term_minus*psi(x)"


@dataclass(frozen=True)
class DiscrepancyStats:
    max_abs: float
    l1: float
    exceptional_count: int
    total_residues: int
    threshold: float


@dataclass
class LabTables:
    """The standard table bundle for one (chi, x, R) workspace."""

    chi: RealCharacter
    x: int
    R: int
    spf: SpfTable
    mu: ArithTable
    vonmangoldt: ArithTable
    chi_tab: ArithTable
    lam: ArithTable
    lam_prime: ArithTable
    lam_r_prime: ArithTable
    lam_w_prime: ArithTable


def build_lab_tables(
    chi: RealCharacter,
    x: int,
    R: int,
    cache: TableCache | None = None,
    segment_size: int | None = None,
    threads: int = 1,
    cap: int | None = None,
) -> LabTables:
    from .sieve import DEFAULT_SEGMENT_SIZE

    seg = segment_size if segment_size is not None else DEFAULT_SEGMENT_SIZE
    store = cache if cache is not None else TableCache(None)

    spf_tab = store.get(
        f"spf(limit={x})",
        lambda: sieve_spf(x, segment_size=seg, threads=threads, cap=cap).as_table(),
    )
    spf = SpfTable.from_table(spf_tab)
    mu = store.get(f"mu(limit={x})", lambda: sieve_mu(x, segment_size=seg, threads=threads, cap=cap))
    vm = store.get(
        f"vonmangoldt(limit={x})",
        lambda: sieve_vonmangoldt(x, segment_size=seg, threads=threads, spf=spf, cap=cap),
    )
    ct = store.get(f"chi(disc={chi.disc},limit={x})", lambda: chi_table(chi, x, cap=cap))
    lam = store.get(
        f"lambda(disc={chi.disc},limit={x})", lambda: build_lambda(chi, x, chi_tab=ct, cap=cap)
    )
    lam_prime = store.get(
        f"lambda_prime(disc={chi.disc},limit={x})",
        lambda: build_lambda_prime(chi, x, chi_tab=ct, cap=cap),
    )
    lam_r_prime = store.get(
        f"lambda_prime(disc={chi.disc},limit={x})|rough(R={R})",
        lambda: rough_restrict(lam_prime, spf, R),
    )
    lam_w_prime = store.get(
        f"lambda_prime(disc={chi.disc},limit={x})|rough(R={R})|squarefree",
        lambda: squarefree_restrict(lam_r_prime, mu),
    )
    return LabTables(chi, x, R, spf, mu, vm, ct, lam, lam_prime, lam_r_prime, lam_w_prime)


def coprime_residues(q: int) -> list[int]:
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


def theorem1_scan(
    params: SiegelParams, q: int, tables: LabTables
) -> tuple[DiscrepancyStats, list[ProgressionReport], dict]:
    """Per-residue psi(x, q, a) against the character main term, with the
    deficient-residue count and the analytic error scale for these parameters."""
    x = params.x
    if q > x:
        raise ValueError("q > x gives empty progressions")
    if q < 2:
        raise ValueError("q must be >= 2")
    chi = tables.chi
    psi_x = chebyshev_psi(x, tables.vonmangoldt)
    phi = phi_of(q)
    threshold = (1 - params.h) * x / phi
    reports = []
    for a in coprime_residues(q):
        psi_a = progression_sum(tables.vonmangoldt, x, q, a)
        sp = progression_sum(tables.lam_prime, x, q, a)
        spl = progression_sum(tables.lam, x, q, a)
        swp = progression_sum(tables.lam_w_prime, x, q, a)
        predicted = main_term(chi, q, a, "minus") * psi_x
        reports.append(
            ProgressionReport(
                q=q,
                a=a,
                chi_a=chi_eval(chi, a) if math.gcd(a, chi.conductor) == 1 else 0,
                psi=psi_a,
                s_prime=sp,
                s_plain=float(spl),
                s_w_prime=swp,
                predicted=predicted,
                discrepancy=psi_a - predicted,
            )
        )
    devs = np.array([r.discrepancy for r in reports])
    exceptional = sum(1 for r in reports if r.psi <= threshold)
    stats = DiscrepancyStats(
        max_abs=float(np.abs(devs).max()),
        l1=float(np.abs(devs).sum()),
        exceptional_count=exceptional,
        total_residues=len(reports),
        threshold=threshold,
    )
    logx = math.log(x)
    logR = math.log(params.R)
    curly = curly_l(chi, x, params.A)
    scales = {
        "e_rough": x / q * math.exp(-params.alpha * logx / (24 * logR)),
        "e_lvalue": x * logx**5 * curly / phi,
        "e_r_term": params.R * logx**2,
        "curly_l": curly,
        "psi_x": psi_x,
        # the two asymptotic admissibility thresholds for R at this x
        "r_threshold_sqrt": x * math.exp(-math.sqrt(logx)),
        "r_threshold_three_fifths": x * math.exp(-(logx ** (3.0 / 5.0 - params.alpha))),
        "q_window_low": math.sqrt(x),
        "q_window_high": x ** (2.0 / 3.0 - params.alpha) / chi.conductor,
    }
    scales["e_total"] = scales["e_rough"] + scales["e_lvalue"] + scales["e_r_term"]
    scales["q_in_window"] = bool(scales["q_window_low"] < q < scales["q_window_high"])
    return stats, reports, scales


@dataclass(frozen=True)
class Theorem2Result:
    aggregate: float
    bound_scale: float
    l_value: float
    rows: list = field(default_factory=list)  # (q, phi_q, psi_qa, expected, abs_dev)


def theorem2_aggregate(
    params: SiegelParams,
    a: int,
    vonmangoldt: ArithTable,
    totient: ArithTable | None = None,
    threads: int = 1,
) -> Theorem2Result:
    """sum over Q < q <= 2Q, gcd(a, q) = 1 of |psi(x, q, a) - psi(x)/phi(q)|."""
    if params.Q is None:
        raise ValueError("params.Q is required")
    Q, x = params.Q, params.x
    if a == 0:
        raise ValueError("a must be nonzero")
    if vonmangoldt.limit < x:
        raise ValueError("limit mismatch: x beyond table")
    phi = totient if totient is not None else sieve_totient(2 * Q)
    if phi.limit < 2 * Q:
        raise ValueError("limit mismatch: totient table below 2Q")
    psi_x = chebyshev_psi(x, vonmangoldt)
    qs = [q for q in range(Q + 1, 2 * Q + 1) if math.gcd(a, q) == 1]

    def row(q: int):
        a0 = a % q
        psi_qa = progression_sum(vonmangoldt, x, q, a0)
        expected = psi_x / int(phi.values[q])
        return (q, int(phi.values[q]), psi_qa, expected, abs(psi_qa - expected))

    if threads <= 1 or len(qs) < 4:
        rows = [row(q) for q in qs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, qs))
    aggregate = float(np.sum([r[4] for r in rows])) if rows else 0.0
    chi = RealCharacter(params.disc)
    lval = l_one(chi, 1e-9).value
    logx = math.log(x)
    bound = (
        x * math.exp(-params.alpha * logx / (24 * math.log(params.R)))
        + x * logx**5 * lval
        + params.R * logx**2
    )
    return Theorem2Result(aggregate=aggregate, bound_scale=bound, l_value=lval, rows=rows)


@dataclass(frozen=True)
class ProfileResult:
    entries: list  # (a, chi_a, observed, expected, discrepancy)
    coprime_total: float
    scales: dict


def lemma_discrepancy_profile(
    f: ArithTable,
    chi: RealCharacter,
    x: int,
    q: int,
    sign: str,
    alpha: float = 1e-3,
    R: int | None = None,
    A: float = 2.0,
) -> ProfileResult:
    """Per-residue observed sums against main_term(sign) * coprime total, plus the
    reference error scales the discrepancies are meant to be compared with."""
    if q < 2 or q > x:
        raise ValueError("need 2 <= q <= x")
    total = coprime_sum(f, x, q)
    entries = []
    for a in coprime_residues(q):
        obs = progression_sum(f, x, q, a)
        expected = main_term(chi, q, a, sign) * total
        chi_a = chi_eval(chi, a) if math.gcd(a, chi.conductor) == 1 else 0
        entries.append((a, chi_a, float(obs), expected, float(obs) - expected))
    D = chi.conductor
    scales = {"dq_scale": (D * q) ** (0.5 + alpha)}
    if R is not None:
        logx = math.log(x)
        scales["e_rough"] = x / q * math.exp(-alpha * logx / (24 * math.log(R)))
        scales["e_lvalue"] = x * logx**5 * curly_l(chi, x, A) / phi_of(q)
    return ProfileResult(entries=entries, coprime_total=float(total), scales=scales)


def prime_power_correction(
    vonmangoldt: ArithTable, spf: SpfTable, x: int, R: int, q: int
) -> float:
    """Exact correction term C(x, R, q): the Lambda-mass of prime powers p^k <= x
    that the squarefree rough weight cannot see, namely every p^k except the
    primes p with p > R and p not dividing q."""
    if vonmangoldt.limit < x or spf.limit < x:
        raise ValueError("limit mismatch")
    vm = vonmangoldt.values[: x + 1]
    idx = np.nonzero(vm > 0)[0]
    p = spf.spf[idx]
    uncovered_prime = (idx == p) & (p > R) & (np.mod(q, p) != 0)
    return float(vm[idx[~uncovered_prime]].sum())


def upper_bound_margin(
    params: SiegelParams, q: int, a: int, tables: LabTables
) -> tuple[float, float, float]:
    """(psi(x,q,a), S'_W(x,q,a) + C, margin): margin >= 0 is the pointwise
    sieve upper bound with its exact prime-power correction."""
    if math.gcd(a, q) != 1:
        raise ValueError("requires gcd(a, q) = 1")
    x = params.x
    psi_a = progression_sum(tables.vonmangoldt, x, q, a)
    swp = progression_sum(tables.lam_w_prime, x, q, a)
    corr = prime_power_correction(tables.vonmangoldt, tables.spf, x, params.R, q)
    rhs = swp + corr
    return psi_a, rhs, rhs - psi_a


def bias_rank_statistic(
    vonmangoldt: ArithTable, chi: RealCharacter, x: int, q: int
) -> dict:
    """Mean psi(x, q, a) over residues with chi(a) = -1 versus chi(a) = +1."""
    if q > x:
        raise ValueError("q > x gives empty progressions")
    sums = {1: [], -1: []}
    for a in coprime_residues(q):
        if math.gcd(a, chi.conductor) != 1:
            continue
        sums[chi_eval(chi, a)].append(progression_sum(vonmangoldt, x, q, a))
    mean_plus = float(np.mean(sums[1])) if sums[1] else 0.0
    mean_minus = float(np.mean(sums[-1])) if sums[-1] else 0.0
    return {
        "mean_nonresidue": mean_minus,
        "mean_residue": mean_plus,
        "gap": mean_minus - mean_plus,
        "count_nonresidue": len(sums[-1]),
        "count_residue": len(sums[1]),
    }
