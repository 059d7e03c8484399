"""Divisor-bound experiments, smooth counts, and the rho function."""

from __future__ import annotations

import math
import random

import numpy as np
import pytest

from siegellab.bounds import (
    dickman_rho,
    munshi_beta,
    munshi_verify,
    shiu_ratio,
    smooth_count,
    smooth_vs_rho,
    tau_shift_bound_demo,
)
from siegellab.characters import RealCharacter
from siegellab.convolution import build_lambda_prime
from siegellab.rough import rough_restrict, squarefree_restrict
from siegellab.sieve import sieve_gpf, sieve_mu, sieve_spf
from siegellab.tables import ArithTable


def test_munshi_beta_anchor_values():
    assert munshi_beta(2.0) == 0.0
    assert munshi_beta(2.5) == pytest.approx(0.072623513863328, rel=1e-12)
    assert munshi_beta(3.0) == pytest.approx(0.24511249783653155, rel=1e-12)
    assert munshi_beta(3.5) == pytest.approx(0.47907801001679173, rel=1e-12)
    assert munshi_beta(4.0) == pytest.approx(0.7548875021634687, rel=1e-12)
    assert munshi_beta(4.0) < 1.0
    with pytest.raises(ValueError):
        munshi_beta(1.0)


def test_munshi_beta_strictly_increasing():
    grid = [2.0 + k * 0.1 for k in range(21)]
    vals = [munshi_beta(r) for r in grid]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_munshi_verify_small_cases():
    rep = munshi_verify(10, 3.0)
    assert rep.worst_ratio == pytest.approx(4.0)
    assert rep.worst_n == 6
    assert rep.inequality_id == "munshi_divisor"
    assert rep.exponent == pytest.approx(munshi_beta(3.0))
    # n = 2 has tau = 2 against denominator 1, so the ratio is never below 2
    assert munshi_verify(10, 2.5).worst_ratio >= 2.0


def test_munshi_verify_frozen_at_1e5():
    frozen = {2.5: (4.0, 15), 3.0: (4.180645161290322, 35035), 3.5: (8.0, 2431)}
    ratios = []
    for r, (ratio, n) in sorted(frozen.items()):
        rep = munshi_verify(100_000, r)
        assert rep.worst_ratio == pytest.approx(ratio, rel=1e-9)
        assert rep.worst_n == n
        ratios.append(rep.worst_ratio)
    # larger r admits more divisors below n^(1/r) but the beta exponent falls
    # faster; measured direction on this range is increasing in r
    assert ratios == sorted(ratios)


def test_munshi_verify_rejects_out_of_range():
    with pytest.raises(ValueError):
        munshi_verify(100, 2.0)
    with pytest.raises(ValueError):
        munshi_verify(100, 4.5)
    with pytest.raises(ValueError):
        munshi_verify(5, 3.0)


def lambda_w_table(x: int, disc: int = -4, R: int = 10) -> ArithTable:
    chi = RealCharacter(disc)
    spf = sieve_spf(x)
    mu = sieve_mu(x)
    lp = build_lambda_prime(chi, x)
    return squarefree_restrict(rough_restrict(lp, spf, R), mu)


def test_tau_shift_inequality_random_triples():
    f = lambda_w_table(100_000, disc=-4, R=50)
    rng = random.Random(20240817)
    for _ in range(20):
        x = rng.randint(50, 100_000)
        a = rng.randint(1, x - 1)
        q_base = rng.randint(2, max(2, int(round(x**0.25)) * 2))
        # raises RuntimeError if the pointwise divisor comparison ever fails
        ratio = tau_shift_bound_demo(f, x, a, q_base)
        assert ratio >= 1.0 or ratio == 1.0


def test_tau_shift_zero_weight_convention():
    zeros = ArithTable("z", 100, np.zeros(101, dtype="<f8"), "real", "zero(limit=100)")
    assert tau_shift_bound_demo(zeros, 100, 1, 10) == 1.0


def test_tau_shift_reported_ratio_reasonable():
    f = lambda_w_table(10_000, disc=-4, R=20)
    ratio = tau_shift_bound_demo(f, 10_000, 1, 10)
    assert math.isfinite(ratio) and ratio >= 1.0


def test_smooth_count_oracle_values():
    assert smooth_count(100, 10) == 46
    assert smooth_count(10, 2) == 4
    for x in (2, 17, 100, 1000):
        assert smooth_count(x, x) == x


def test_smooth_count_brute_force():
    x, y = 500, 7
    gpf = sieve_gpf(x)
    got = smooth_count(x, y, gpf=gpf)
    expect = 0
    for n in range(1, x + 1):
        m = n
        for p in (2, 3, 5, 7):
            while m % p == 0:
                m //= p
        if m == 1:
            expect += 1
    assert got == expect


def test_dickman_rho_anchors():
    assert dickman_rho(0.0) == 1.0
    assert dickman_rho(0.4) == 1.0
    assert dickman_rho(1.0) == 1.0
    assert dickman_rho(2.0) == pytest.approx(1 - math.log(2), abs=1e-8)
    assert dickman_rho(3.0) == pytest.approx(0.0486083882911316, rel=1e-10)
    assert dickman_rho(4.0) == pytest.approx(0.00491092564776083, rel=1e-10)
    assert dickman_rho(5.0) == pytest.approx(3.547247004563618e-4, rel=1e-9)
    assert dickman_rho(10.0) == pytest.approx(2.770171838e-11, rel=1e-3)


def test_dickman_rho_domain_and_decay():
    with pytest.raises(ValueError):
        dickman_rho(-0.5)
    with pytest.raises(ValueError):
        dickman_rho(20.5)
    us = [1 + 0.5 * k for k in range(19)]
    vals = [dickman_rho(u) for u in us]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))
    # far tail is below the float64 recursion floor; only positivity is promised
    assert 0 < dickman_rho(20.0) < 1e-12


def test_smooth_vs_rho_bracket():
    gpf = sieve_gpf(100_000)
    for u in (1.5, 2.0, 2.5, 3.0):
        row = smooth_vs_rho(100_000, u, gpf=gpf)
        assert set(row) >= {"u", "y", "smooth_count", "density", "rho", "density_over_rho"}
        assert 1 / 3 <= row["density_over_rho"] <= 3


def test_shiu_ratio_divisor_average():
    # Dirichlet average: sum tau(n) ~ x log x, so the normalized ratio sits near 1
    assert shiu_ratio(1_000_000, 1, 1, 2) == pytest.approx(1.0111847797001356, rel=1e-9)
    r4 = shiu_ratio(100_000, 7, 1, 4)
    assert r4 > 0
    with pytest.raises(ValueError):
        shiu_ratio(100, 3, 1, 3)
    with pytest.raises(ValueError):
        shiu_ratio(100, 4, 2, 2)
