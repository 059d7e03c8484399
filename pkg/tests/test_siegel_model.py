"""Rough/squarefree filters, parameter bundle, and the R heuristic."""

from __future__ import annotations

import math

import numpy as np
import pytest

from siegellab.characters import RealCharacter
from siegellab.convolution import build_lambda_prime
from siegellab.rough import (
    ALPHA_LIMIT,
    SiegelParams,
    default_R,
    rough_restrict,
    split_pm,
    squarefree_restrict,
    verify_rough_prime_support,
)
from siegellab.sieve import sieve_mu, sieve_spf, sieve_vonmangoldt


def test_params_validation():
    ok = SiegelParams(x=1000, disc=-4, R=10)
    assert ok.h == 0.5 and ok.A == 2.0 and ok.Q is None
    with pytest.raises(ValueError):
        SiegelParams(x=0, disc=-4, R=10)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=1)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=10, h=0.0)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=10, h=1.0)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=10, alpha=ALPHA_LIMIT)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=10, alpha=0.0)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=10, A=0.0)
    with pytest.raises(ValueError):
        SiegelParams(x=1000, disc=-4, R=10, Q=1)


def test_default_r_values():
    # hand-checked: exp(-sqrt(log 1e6)) * 1e6 = 24308.7..., ceil -> 24309
    assert default_R(10**6, 3) == 24309
    # D^5 dominates once D^5 exceeds the smooth term
    assert default_R(10**6, 10) == 10**5
    # saturation: R can never exceed x
    assert default_R(16, 3) == 16
    assert default_R(10**5, 163) == 10**5
    with pytest.raises(ValueError):
        default_R(15, 3)
    with pytest.raises(ValueError):
        default_R(100, 2)


def test_default_r_monotone_in_d():
    values = [default_R(10**6, D) for D in (3, 5, 10, 15, 20)]
    assert values == sorted(values)
    assert values[-1] == 10**6  # 20^5 > 10^6 saturates


def test_rough_restrict_support():
    x = 10_000
    R = 50
    spf = sieve_spf(x)
    vm = sieve_vonmangoldt(x, spf=spf)
    rough = rough_restrict(vm, spf, R)
    assert rough.provenance == vm.provenance + f"|rough(R={R})"
    # survivors are exactly n = 1 and n with smallest prime factor > R
    for n in range(2, x + 1):
        if spf.spf[n] <= R and vm.values[n] != 0.0:
            assert rough.values[n] == 0.0
    assert rough.values[1] == vm.values[1]
    # a prime above R survives untouched
    assert rough.values[53] == vm.values[53]
    assert rough.values[49] == 0.0  # 7^2 is 50-smooth


def test_squarefree_restrict_support():
    x = 5000
    mu = sieve_mu(x)
    lam = sieve_vonmangoldt(x)
    sf = squarefree_restrict(lam, mu)
    assert sf.provenance.endswith("|squarefree")
    for n in (4, 8, 9, 12, 25, 49, 2048):
        assert sf.values[n] == 0.0
    for n in (2, 3, 5, 30, 4999):
        assert sf.values[n] == lam.values[n]


def test_restrict_requires_matching_limits():
    vm = sieve_vonmangoldt(1000)
    with pytest.raises(ValueError):
        rough_restrict(vm, sieve_spf(2000), 10)
    with pytest.raises(ValueError):
        squarefree_restrict(vm, sieve_mu(500))


def test_split_pm_factorization():
    chi = RealCharacter(-4)
    spf = sieve_spf(1000)
    # 195 = 3 * 5 * 13; chi(3) = -1, chi(5) = chi(13) = +1
    assert split_pm(195, chi, spf) == (65, 3)
    assert split_pm(1, chi, spf) == (1, 1)
    assert split_pm(5, chi, spf) == (5, 1)
    assert split_pm(27, chi, spf) == (1, 27)
    with pytest.raises(ValueError):
        split_pm(4, chi, spf)  # shares a factor with the conductor
    with pytest.raises(ValueError):
        split_pm(2000, chi, spf)  # beyond table range


def test_split_pm_reconstructs_n():
    chi = RealCharacter(5)
    spf = sieve_spf(2000)
    for n in range(1, 2001):
        if math.gcd(n, 5) != 1:
            continue
        n1, nm1 = split_pm(n, chi, spf)
        assert n1 * nm1 == n
        assert math.gcd(n1, nm1) == 1


def test_rough_prime_support_report():
    chi = RealCharacter(-4)
    x, R = 20_000, 50
    spf = sieve_spf(x)
    mu = sieve_mu(x)
    vm = sieve_vonmangoldt(x, spf=spf)
    lam_prime = build_lambda_prime(chi, x)
    lam_w_prime = squarefree_restrict(rough_restrict(lam_prime, spf, R), mu)
    report = verify_rough_prime_support(chi, x, R, lam_w_prime, spf, mu, vm)
    assert report.primes_checked == 2247
    # at a rough prime the filtered weight equals log p exactly
    assert report.max_prime_deviation == 0.0
    # filtered lambda' never dips below zero beyond rounding
    assert report.min_lambda_margin > -1e-12


def test_saturated_r_empties_weight():
    chi = RealCharacter(-163)
    x = 1000
    spf = sieve_spf(x)
    lam_prime = build_lambda_prime(chi, x)
    rough = rough_restrict(lam_prime, spf, x)
    # only n = 1 survives P(n) > x, and lambda'(1) = 0
    assert float(np.abs(rough.values).sum()) == pytest.approx(0.0, abs=1e-15)
