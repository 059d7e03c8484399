"""Dirichlet convolution kernel and the character identity suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from siegellab.characters import RealCharacter, chi_table
from siegellab.convolution import (
    build_lambda,
    build_lambda_prime,
    build_nu,
    convolution_at,
    dirichlet_convolve,
    mean_value_rows,
    log_mean_ratio,
    product_rule_deviation,
    square_part_bound_margin,
    verify_vonmangoldt_identity,
)
from siegellab.lvalues import l_one
from siegellab.sieve import sieve_mu, sieve_square_part, sieve_tau_k, sieve_vonmangoldt
from siegellab.tables import ArithTable

X = 100_000


def ones_table(x: int) -> ArithTable:
    vals = np.ones(x + 1, dtype="<i8")
    vals[0] = 0
    return ArithTable("one", x, vals, "integer", f"one(limit={x})")


@pytest.fixture(scope="module")
def chi4():
    return RealCharacter(-4)


@pytest.fixture(scope="module")
def lam4(chi4):
    return build_lambda(chi4, X)


def brute_convolve(f: np.ndarray, g: np.ndarray, n: int) -> float:
    total = 0.0
    for d in range(1, n + 1):
        if n % d == 0:
            total += float(f[d]) * float(g[n // d])
    return total


def test_convolution_kernel_recovers_divisor_function():
    one = ones_table(5000)
    tau = dirichlet_convolve(one, one, 5000)
    expect = sieve_tau_k(5000, k=2)
    assert tau.value_kind == "integer"
    assert np.array_equal(tau.values, expect.values)


def test_convolution_kernel_recovers_mobius_inverse():
    one = ones_table(5000)
    mu = sieve_mu(5000)
    unit = dirichlet_convolve(mu, one, 5000)
    expect = np.zeros(5001, dtype=np.int64)
    expect[1] = 1
    assert np.array_equal(unit.values, expect)


def test_convolution_kernel_float_path_log_identity():
    # Lambda * 1 = log n, up to float accumulation
    x = 20_000
    vm = sieve_vonmangoldt(x)
    conv = dirichlet_convolve(vm, ones_table(x), x)
    n = np.arange(1, x + 1, dtype=np.float64)
    dev = np.abs(conv.values[1:] - np.log(n)).max()
    assert dev < 1e-10


def test_convolution_at_matches_brute_force(lam4):
    vm = sieve_vonmangoldt(X)
    for n in (1, 2, 12, 97, 360, 1024, 99991):
        got = convolution_at(lam4.values, vm.values, n)
        assert got == pytest.approx(brute_convolve(lam4.values, vm.values, n), abs=1e-10)


def test_lambda_small_values(lam4):
    expected = {1: 1, 2: 1, 3: 0, 4: 1, 5: 2, 9: 1, 10: 2, 25: 3, 45: 2, 65: 4}
    for n, want in expected.items():
        assert int(lam4.values[n]) == want
    assert lam4.provenance == f"lambda(disc=-4,limit={X})"
    assert lam4.value_kind == "integer"


def test_lambda_nonnegative_and_positive_on_squares(lam4):
    assert int(lam4.values[1:].min()) >= 0
    squares = np.arange(1, int(math.isqrt(X)) + 1) ** 2
    assert int(lam4.values[squares].min()) >= 1


def test_nu_small_values(chi4):
    nu = build_nu(chi4, 1000)
    # nu = mu * (mu chi): at p it is -1 - chi(p), at p^2 it is chi(p), 0 beyond
    expected = {1: 1, 2: -1, 3: 0, 4: 0, 5: -2, 9: -1, 25: 1, 125: 0, 8: 0}
    for n, want in expected.items():
        assert int(nu.values[n]) == want


def test_nu_dominated_by_lambda(chi4, lam4):
    nu = build_nu(chi4, X)
    assert int((np.abs(nu.values) - lam4.values).max()) <= 0


def test_lambda_prime_at_primes_is_log(chi4):
    lp = build_lambda_prime(chi4, 10_000)
    for p in (2, 3, 5, 7, 11, 101, 9973):
        assert lp.values[p] == pytest.approx(math.log(p), abs=1e-12)
    # prime square where chi(p) = -1: lambda'(49) = log 7
    assert lp.values[49] == pytest.approx(math.log(7), abs=1e-12)


def test_vonmangoldt_identity_deviation(chi4):
    # Lambda = lambda' * nu, deviation is pure rounding
    dev = verify_vonmangoldt_identity(chi4, X)
    assert dev < 1e-8 * math.log(X)
    assert dev < 1e-11


def test_lambda_prime_equals_lambda_conv_vonmangoldt(chi4, lam4):
    vm = sieve_vonmangoldt(X)
    lp = build_lambda_prime(chi4, X)
    conv = dirichlet_convolve(lam4, vm, X)
    dev = float(np.abs(conv.values - lp.values).max())
    assert dev < 1e-8 * math.log(X)


def test_identity_suite_other_discriminants():
    for d in (5, -163):
        chi = RealCharacter(d)
        dev = verify_vonmangoldt_identity(chi, 30_000)
        assert dev < 1e-8 * math.log(30_000)


def test_coprime_product_rule(chi4, lam4):
    lp = build_lambda_prime(chi4, X)
    dev = product_rule_deviation(lam4, lp, 20_000)
    assert dev < 1e-9


def test_square_split_inequality(chi4, lam4):
    sq = sieve_square_part(X)
    margin = square_part_bound_margin(lam4, sq, X)
    assert margin >= 0.0


def test_mean_value_rows_converge_to_l(chi4, lam4):
    l_val = l_one(chi4).value
    rows = mean_value_rows(lam4, chi4, l_val, [1000, 10_000, X])
    for row in rows:
        assert set(row) >= {"x", "lambda_sum", "x_times_l", "c_measured"}
        # sum_{n<=x} lambda(n) ~ L(1,chi) x; ratio settles near 1
        assert row["lambda_sum"] / row["x_times_l"] == pytest.approx(1.0, abs=0.05)


def test_log_mean_ratio_domain_and_convergence(chi4, lam4):
    chi163 = RealCharacter(-163)
    with pytest.raises(ValueError):
        log_mean_ratio(build_lambda(chi163, 1000), chi163, 0.25, 1000)
    # ratio approaches 1 like 1 - c/log x; the deficit constant is stable
    l_val = l_one(chi4).value
    r4 = log_mean_ratio(build_lambda(chi4, 10_000), chi4, l_val, 10_000)
    r5 = log_mean_ratio(lam4, chi4, l_val, X)
    assert r4 < r5 < 1.0
    c4 = (1.0 - r4) * math.log(10_000)
    c5 = (1.0 - r5) * math.log(X)
    assert c4 == pytest.approx(2.666, abs=0.01)
    assert c5 == pytest.approx(c4, rel=0.005)


def test_chi_table_feeds_builders_consistently(chi4):
    tab = chi_table(chi4, 5000)
    a = build_lambda(chi4, 5000, chi_tab=tab)
    b = build_lambda(chi4, 5000)
    assert np.array_equal(a.values, b.values)
