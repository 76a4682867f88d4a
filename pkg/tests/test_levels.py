import math
import random
from fractions import Fraction

import pytest

from quadclass.conditions import LocalConditions
from quadclass.levels import bound_report, gamma0_index, q_sigma, sturm_bound

from bruteforce import random_conditions, trial_factor


def _index_by_divisor_sum(n):
    # independent route: n * prod(1 + 1/p) = sum of n/d over squarefree d | n
    total = 0
    for d in range(1, n + 1):
        if n % d == 0 and all(e == 1 for e in trial_factor(d).values()):
            total += n // d
    return total


def test_gamma0_index_examples():
    assert gamma0_index(1) == 1
    assert gamma0_index(4) == 6
    assert gamma0_index(2916) == 5832
    with pytest.raises(ValueError):
        gamma0_index(0)


def test_gamma0_index_against_divisor_sum():
    for n in range(1, 10**4 + 1):
        assert gamma0_index(n) == _index_by_divisor_sum(n)


def test_gamma0_index_multiplicative():
    for m in range(1, 80):
        for n in range(1, 80):
            if math.gcd(m, n) == 1:
                assert gamma0_index(m * n) == gamma0_index(m) * gamma0_index(n)


def test_q_sigma_examples():
    assert q_sigma(LocalConditions(5, inert=frozenset({7}))) == 1
    assert q_sigma(LocalConditions(7, inert=frozenset({7}))) == 1
    assert q_sigma(LocalConditions(5)) == 3
    assert q_sigma(LocalConditions(5, split=frozenset({3}))) == 7


def test_q_sigma_skips_inadmissible_inert_prime():
    # smallest candidate both 1 mod ell and 3 mod 4 must be skipped:
    # ell = 7, conditions excluding 3 and 5 leave 7 = ell, then 11, 13...
    # 11 = 4 mod 7 is fine, so block 11 too and check 13 is taken over 11
    lc = LocalConditions(7, split=frozenset({3, 5, 11}))
    assert q_sigma(lc) == 13
    # 43 = 1 mod 7 and 3 mod 4: inadmissible as the substitute
    lc = LocalConditions(7, split=frozenset(
        {3, 5, 11, 13, 17, 19, 23, 29, 31, 37, 41}))
    assert q_sigma(lc) == 47


def test_bound_report_empty_sets():
    report = bound_report(LocalConditions(5))
    assert report.q_sigma == 3
    assert report.n_sigma == 2916
    assert report.index == 5832
    assert report.m_sigma == 729
    # 129 primes below 729, minus the prime 2, minus ell = 5
    assert report.r_sigma == 127


def test_bound_report_single_inert():
    report = bound_report(LocalConditions(5, inert=frozenset({7})))
    assert report.q_sigma == 1
    assert report.n_sigma == 4 * 7**6 == 470596
    assert report.index == 806736
    assert report.m_sigma == 100842


def test_bound_report_non_integral_m_sigma():
    # N = 4 * 5^6 has index 112500, not divisible by 8
    report = bound_report(LocalConditions(7, inert=frozenset({5})))
    assert report.m_sigma == Fraction(28125, 2)
    assert report.r_sigma is not None


def test_bound_report_astronomical():
    lc = LocalConditions(5, split=frozenset({3}), inert=frozenset({7, 13, 17, 23}))
    report = bound_report(lc, m_sigma_ceiling=10**6)
    assert report.r_sigma is None
    assert report.note is not None and "astronomically" in report.note
    assert report.m_sigma > 10**6  # fields still exact


def test_bound_report_rejects_invalid():
    with pytest.raises(ValueError):
        bound_report(LocalConditions(5, ramified=frozenset({11})))


def test_sturm_bound_examples():
    assert sturm_bound(3, 4) == Fraction(3, 4)
    assert sturm_bound(24, 1) == 1  # weight 12, level 1
    with pytest.raises(ValueError):
        sturm_bound(0, 4)


def test_sturm_bound_equals_m_sigma_times_p_plus_one():
    rng = random.Random(20250810)
    conditions = [LocalConditions(5)] + [random_conditions(rng) for _ in range(12)]
    checked = 0
    for lc in conditions:
        report = bound_report(lc)
        for p in (5, 7, 11, 13, 17):
            if p == lc.ell or report.n_sigma % p == 0:
                continue
            if p * report.n_sigma > 2**63:
                continue  # beyond the factoring range gamma0_index supports
            assert sturm_bound(3, p * report.n_sigma) == report.m_sigma * (p + 1)
            checked += 1
    assert checked >= 15


def test_bound_report_field_invariants():
    rng = random.Random(99)
    for _ in range(10):
        lc = random_conditions(rng)
        report = bound_report(lc)
        expected_n = 4 * report.q_sigma**6
        for q in lc.all_primes():
            expected_n *= q**6
        assert report.n_sigma == expected_n
        support = {2} | set(lc.all_primes())
        if report.q_sigma > 1:
            support.add(report.q_sigma)
        expected_index = Fraction(report.n_sigma)
        for p in support:
            expected_index *= Fraction(p + 1, p)
        assert report.index == expected_index
        if report.n_sigma <= 2**63:
            assert report.index == gamma0_index(report.n_sigma)
        assert report.m_sigma == Fraction(report.index, 8)
        if lc.inert:
            assert report.q_sigma == 1
