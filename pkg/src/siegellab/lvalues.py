"""L(1, chi) for real primitive characters, two independent routes.

The primary route sums chi(n)/n over N = k*|D| full periods; with S(t) the
character partial sum, Abel summation bounds the dropped tail by
max|S| / N <= D/N, so k = ceil(1/target) periods meet any target.  The partial
sum itself is evaluated in closed form through the digamma recurrence
sum_{j<k} 1/(jD+r) = (psi(k + r/D) - psi(r/D))/D, which keeps the cost O(D)
independent of k.  The cross-check route goes through class numbers computed
from scratch: reduced-form counts for negative discriminants, reduced-cycle
counts plus the fundamental totally-positive unit for positive ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import digamma

from .characters import RealCharacter
from .errors import NonConvergenceError


@dataclass(frozen=True)
class LValueResult:
    value: float
    tail_bound: float
    terms_used: int
    method: str


def l_one(
    chi: RealCharacter, target_error: float = 1e-9, term_budget: int = 10**14
) -> LValueResult:
    """Partial sum of chi(n)/n over full periods, tail bounded by D/N."""
    if not 0 < target_error < 1:
        raise ValueError("target_error must lie in (0, 1)")
    D = chi.conductor
    k = math.ceil(1.0 / target_error)
    terms = k * D
    if terms > term_budget:
        raise NonConvergenceError(
            f"reaching tail {target_error} needs {terms} terms, over budget {term_budget}"
        )
    r = np.arange(1, D + 1, dtype=np.float64)
    cv = chi.period_values() if D <= chi.cache_limit else None
    if cv is not None:
        coeff = np.roll(cv, -1).astype(np.float64)  # coeff[i] = chi(i+1), chi(D) = 0
    else:
        from .characters import kronecker

        coeff = np.array([kronecker(chi.disc, int(n)) for n in range(1, D + 1)], dtype=np.float64)
    z = r / D
    partial = float(np.sum(coeff * (digamma(k + z) - digamma(z))) / D)
    return LValueResult(value=partial, tail_bound=1.0 / k, terms_used=terms, method="direct_abel")


def l_one_direct_terms(chi: RealCharacter, terms: int) -> float:
    """Plain chunked summation of chi(n)/n; used to validate the closed form."""
    total = 0.0
    step = 1 << 20
    for lo in range(1, terms + 1, step):
        hi = min(lo + step, terms + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        cv = np.array([chi(int(v)) for v in n % chi.conductor + chi.conductor], dtype=np.float64)
        total += float(np.sum(cv / n))
    return total


def class_number_imaginary(d: int) -> int:
    """h(d) for fundamental d < 0 by counting reduced binary quadratic forms."""
    if d >= 0:
        raise ValueError("requires d < 0")
    Dabs = -d
    h = 0
    b = Dabs & 1
    while 3 * b * b <= Dabs:
        m = (b * b + Dabs) // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if b == 0 or a == b or a == c:
                    h += 1
                else:
                    h += 2
            a += 1
        b += 2
    return h


def _reduced_indefinite_forms(d: int) -> set[tuple[int, int, int]]:
    sq = math.isqrt(d)
    forms = set()
    for b in range(1, sq + 1):
        if (b - d) % 2:
            continue
        m = (b * b - d) // 4  # negative: a*c = m
        mm = -m
        for a_abs in range(1, mm + 1):
            if mm % a_abs:
                continue
            # reduced window: sqrt(d) - b < 2|a| < sqrt(d) + b
            t = 2 * a_abs
            if t - b >= 0 and (t - b) * (t - b) >= d:
                continue
            if (t + b) * (t + b) <= d:
                continue
            for a in (a_abs, -a_abs):
                c = m // a
                forms.add((a, b, c))
    return forms


def _rho_step(form: tuple[int, int, int], d: int, sq: int) -> tuple[int, int, int]:
    _, b, c = form
    m = 2 * abs(c)
    r = (-b) % m
    b2 = sq - ((sq - r) % m)
    c2 = (b2 * b2 - d) // (4 * c)
    return (c, b2, c2)


def narrow_class_number_real(d: int) -> int:
    """h+(d) for fundamental d > 0: number of cycles of reduced forms."""
    if d <= 0:
        raise ValueError("requires d > 0")
    forms = _reduced_indefinite_forms(d)
    sq = math.isqrt(d)
    seen: set[tuple[int, int, int]] = set()
    cycles = 0
    for start in sorted(forms):
        if start in seen:
            continue
        cycles += 1
        f = start
        while f not in seen:
            seen.add(f)
            f = _rho_step(f, d, sq)
            if f not in forms:
                raise RuntimeError(f"reduction left the reduced set at {f} (d={d})")
    return cycles


def fundamental_unit_plus(d: int) -> tuple[int, int]:
    """Minimal (t, u) with t, u >= 1 and t^2 - d u^2 = 4.

    (t + u sqrt(d))/2 is the smallest totally positive unit > 1 of the order of
    discriminant d, found from one period of the continued fraction of
    (1 + sqrt(d))/2 (d odd) or sqrt(d/4) (d even).
    """
    if d <= 0:
        raise ValueError("requires d > 0")
    if d % 4 == 1:
        Dp, P, Q = d, 1, 2
    elif d % 4 == 0:
        Dp, P, Q = d // 4, 0, 1
    else:
        raise ValueError("not a discriminant (d mod 4 must be 0 or 1)")
    sq = math.isqrt(Dp)
    if sq * sq == Dp:
        raise ValueError("discriminant must not be a perfect square")
    seen: dict[tuple[int, int], int] = {}
    states: list[tuple[int, int]] = []
    quots: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(states)
        states.append((P, Q))
        a = (P + sq) // Q
        quots.append(a)
        P = a * Q - P
        Q = (Dp - P * P) // Q
    j = seen[(P, Q)]
    A, B, C, E = 1, 0, 0, 1
    for a in quots[j:]:
        A, B, C, E = A * a + B, A, C * a + E, C
    Pj, Qj = states[j]
    tq = Fraction(2 * (C * Pj + E * Qj), Qj)
    uq = Fraction((2 if d % 4 == 1 else 1) * C, Qj)
    if tq.denominator != 1 or uq.denominator != 1:
        raise RuntimeError(f"unit extraction failed for d={d}")
    t, u = int(tq), int(uq)
    norm = t * t - d * u * u
    if norm == -4:
        t, u = (t * t + d * u * u) // 2, t * u
        norm = t * t - d * u * u
    if norm != 4:
        raise RuntimeError(f"unit for d={d} has norm {norm//4}, expected +-1")
    return t, u


def l_one_class_number(chi: RealCharacter) -> LValueResult:
    """L(1, chi) from the class number formula; independent of any series."""
    d = chi.disc
    if d < 0:
        h = class_number_imaginary(d)
        w = 6 if d == -3 else 4 if d == -4 else 2
        value = 2 * math.pi * h / (w * math.sqrt(-d))
    else:
        hp = narrow_class_number_real(d)
        t, u = fundamental_unit_plus(d)
        log_eps = math.log(t / 2.0 + (u / 2.0) * math.sqrt(d))
        value = hp * log_eps / math.sqrt(d)
    return LValueResult(value=value, tail_bound=1e-12 * value, terms_used=0, method="class_number")


def curly_l(chi: RealCharacter, x: int, A: float, target_error: float = 1e-9) -> float:
    """max(L(1, chi), (log x)^(-A)): the truncation floor used in error scales."""
    if x < 2:
        raise ValueError("x must be >= 2")
    if A < 0:
        raise ValueError("A must be >= 0")
    return max(l_one(chi, target_error).value, math.log(x) ** (-A))


def exceptionality_score(chi: RealCharacter, x: int, target_error: float = 1e-9) -> float:
    """L(1, chi) (log x)^5; small scores mark near-exceptional characters."""
    if x < 2:
        raise ValueError("x must be >= 2")
    return l_one(chi, target_error).value * math.log(x) ** 5
