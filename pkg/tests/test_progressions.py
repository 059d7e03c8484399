"""Primes-in-progressions sums, predictions, and aggregate statistics."""

from __future__ import annotations

import math

import numpy as np
import pytest

from siegellab.characters import RealCharacter, chi_eval
from siegellab.convolution import build_lambda
from siegellab.progressions import (
    bias_rank_statistic,
    build_lab_tables,
    chebyshev_psi,
    coprime_residues,
    coprime_sum,
    lemma_discrepancy_profile,
    main_term,
    phi_of,
    prime_power_correction,
    progression_sum,
    theorem1_scan,
    theorem2_aggregate,
    upper_bound_margin,
)
from siegellab.rough import SiegelParams
from siegellab.sieve import sieve_spf, sieve_totient, sieve_vonmangoldt
from siegellab.tables import TableCache


def oracle_lambda_weight(n: int) -> float:
    # independent von Mangoldt: log p if n is a prime power, else 0
    if n < 2:
        return 0.0
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
    return 0.0


@pytest.fixture(scope="module")
def vm100k():
    return sieve_vonmangoldt(100_000)


def test_progression_sum_hand_case():
    chi = RealCharacter(-4)
    lam = build_lambda(chi, 20)
    # n = 1,4,7,10,13,16,19 -> 1+1+0+2+2+1+0
    assert progression_sum(lam, 20, 3, 1) == 7
    assert coprime_sum(lam, 20, 3) == progression_sum(lam, 20, 3, 1) + progression_sum(
        lam, 20, 3, 2
    )


def test_progression_sum_validation(vm100k):
    with pytest.raises(ValueError):
        progression_sum(vm100k, 100, 0, 1)
    with pytest.raises(ValueError):
        progression_sum(vm100k, 100, 5, 6)
    with pytest.raises(ValueError):
        progression_sum(vm100k, 200_000, 5, 1)
    # x below the residue: empty sum
    assert progression_sum(vm100k, 3, 7, 5) == 0.0


def test_progression_sums_partition_psi(vm100k):
    # sum over all residues a of psi(x, q, a) recovers psi(x) exactly
    x, q = 100_000, 12
    total = sum(progression_sum(vm100k, x, q, a) for a in range(1, q + 1))
    assert total == pytest.approx(chebyshev_psi(x, vm100k), abs=1e-9)


def test_phi_of_matches_sieve():
    phi_tab = sieve_totient(500)
    for q in range(1, 501):
        assert phi_of(q) == int(phi_tab.values[q])


def test_main_term_values():
    chi = RealCharacter(-4)
    assert main_term(chi, 12, 1, "minus") == 0.0
    assert main_term(chi, 12, 7, "minus") == pytest.approx(0.5)
    assert main_term(chi, 9, 2, "minus") == pytest.approx(1 / 6)
    # plus sign flips which residues are doubled
    assert main_term(chi, 12, 1, "plus") == pytest.approx(0.5)
    assert main_term(chi, 12, 7, "plus") == 0.0
    with pytest.raises(ValueError):
        main_term(chi, 12, 2, "minus")
    with pytest.raises(ValueError):
        main_term(chi, 12, 1, "between")


@pytest.mark.parametrize("disc,q", [(-4, 4), (-4, 8), (-4, 12), (-163, 163), (-163, 489)])
def test_main_term_minus_is_a_density_when_disc_divides_q(disc, q):
    chi = RealCharacter(disc)
    total = sum(main_term(chi, q, a, "minus") for a in coprime_residues(q))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_main_term_doubles_nonresidues_kills_residues():
    chi = RealCharacter(-163)
    q = 163
    for a in coprime_residues(q):
        mt = main_term(chi, q, a, "minus")
        if chi_eval(chi, a) == -1:
            assert mt == pytest.approx(2 / phi_of(q))
        else:
            assert mt == 0.0


def test_theorem2_matches_hand_enumeration(vm100k):
    params = SiegelParams(x=10, disc=-4, R=2, Q=3)
    res = theorem2_aggregate(params, 1, vm100k, totient=sieve_totient(6))
    # independent enumeration with a from-scratch Lambda
    psi_x = sum(oracle_lambda_weight(n) for n in range(1, 11))
    expect = 0.0
    for q in (4, 5, 6):
        psi_qa = sum(oracle_lambda_weight(n) for n in range(1, 11) if n % q == 1 % q)
        expect += abs(psi_qa - psi_x / phi_of(q))
    assert res.aggregate == pytest.approx(expect, abs=1e-9)
    assert res.aggregate == pytest.approx(5.136057375474312, abs=1e-6)
    assert len(res.rows) == 3


def test_theorem2_threads_agree(vm100k):
    params = SiegelParams(x=100_000, disc=-4, R=100, Q=50)
    one = theorem2_aggregate(params, 1, vm100k, threads=1)
    four = theorem2_aggregate(params, 1, vm100k, threads=4)
    assert one.aggregate == four.aggregate
    assert one.rows == four.rows


def test_theorem2_skips_moduli_sharing_a_factor(vm100k):
    params = SiegelParams(x=1000, disc=-4, R=10, Q=6)
    res = theorem2_aggregate(params, 3, vm100k)
    assert [r[0] for r in res.rows] == [7, 8, 10, 11]


def test_build_lab_tables_and_cache(tmp_path):
    chi = RealCharacter(-4)
    cache = TableCache(tmp_path)
    t1 = build_lab_tables(chi, 5000, 20, cache=cache)
    assert t1.x == 5000 and t1.R == 20
    assert t1.lam_w_prime.provenance == "lambda_prime(disc=-4,limit=5000)|rough(R=20)|squarefree"
    stored = {p.name for p in tmp_path.iterdir()}
    assert stored  # cache populated
    t2 = build_lab_tables(chi, 5000, 20, cache=TableCache(tmp_path))
    assert np.array_equal(t1.lam_w_prime.values, t2.lam_w_prime.values)
    assert {p.name for p in tmp_path.iterdir()} == stored


def test_theorem1_scan_report_shape():
    chi = RealCharacter(-163)
    x, q, R = 100_000, 163, 300
    tables = build_lab_tables(chi, x, R)
    params = SiegelParams(x=x, disc=-163, R=R)
    stats, reports, scales = theorem1_scan(params, q, tables)
    assert len(reports) == phi_of(q) == 162
    assert stats.total_residues == 162
    psi_x = chebyshev_psi(x, tables.vonmangoldt)
    for rep in reports:
        assert rep.q == q and math.gcd(rep.a, q) == 1
        assert rep.chi_a == chi_eval(chi, rep.a)
        assert rep.predicted == pytest.approx(main_term(chi, q, rep.a, "minus") * psi_x)
        assert rep.discrepancy == pytest.approx(rep.psi - rep.predicted)
    assert stats.max_abs == pytest.approx(max(abs(r.discrepancy) for r in reports))
    assert stats.l1 == pytest.approx(sum(abs(r.discrepancy) for r in reports))
    assert stats.threshold == pytest.approx((1 - params.h) * x / phi_of(q))
    assert stats.exceptional_count == sum(1 for r in reports if r.psi <= stats.threshold)
    assert scales["q_in_window"] in (True, False)
    assert scales["psi_x"] == pytest.approx(psi_x)


def test_lemma_discrepancy_profile_consistency(vm100k):
    chi = RealCharacter(-4)
    prof = lemma_discrepancy_profile(vm100k, chi, 50_000, 12, "minus", R=100)
    assert len(prof.entries) == phi_of(12)
    for a, chi_a, obs, expected, disc in prof.entries:
        assert disc == pytest.approx(obs - expected)
        assert chi_a == chi_eval(chi, a)
    # expected values distribute the coprime total
    tot_expected = sum(e[3] for e in prof.entries)
    assert tot_expected == pytest.approx(prof.coprime_total, rel=1e-12)
    assert "e_rough" in prof.scales and "e_lvalue" in prof.scales


def test_prime_power_correction_brute_force(vm100k):
    spf = sieve_spf(100_000)
    x, R, q = 3000, 20, 6
    got = prime_power_correction(vm100k, spf, x, R, q)
    expect = 0.0
    for n in range(2, x + 1):
        w = oracle_lambda_weight(n)
        if w == 0.0:
            continue
        p = min(p for p in range(2, n + 1) if n % p == 0)
        is_uncovered_prime = (n == p) and (p > R) and (q % p != 0)
        if not is_uncovered_prime:
            expect += w
    assert got == pytest.approx(expect, abs=1e-9)


def test_upper_bound_margin_nonnegative():
    chi = RealCharacter(-4)
    x, R = 50_000, 50
    tables = build_lab_tables(chi, x, R)
    params = SiegelParams(x=x, disc=-4, R=R)
    for q, a in ((3, 1), (3, 2), (10, 7), (163, 100), (420, 1)):
        psi_a, rhs, margin = upper_bound_margin(params, q, a, tables)
        assert margin >= 0.0
        assert rhs == pytest.approx(psi_a + margin)
    with pytest.raises(ValueError):
        upper_bound_margin(params, 10, 5, tables)


def test_bias_rank_statistic_reference_window():
    vm = sieve_vonmangoldt(1_000_000)
    chi = RealCharacter(-163)
    out = bias_rank_statistic(vm, chi, 1_000_000, 163)
    assert out["count_nonresidue"] == 81
    assert out["count_residue"] == 81
    # measured once and pinned: the quadratic-residue classes lead at this scale
    assert out["gap"] == pytest.approx(-28.900515, abs=0.01)
    assert out["gap"] < 0


def test_bias_rank_statistic_rejects_oversized_q(vm100k):
    with pytest.raises(ValueError):
        bias_rank_statistic(vm100k, RealCharacter(-4), 100, 101)
