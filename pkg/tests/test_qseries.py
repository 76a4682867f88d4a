import random
from fractions import Fraction

import pytest

from quadclass.arithmetic import kronecker
from quadclass.classnumbers import hurwitz
from quadclass.conditions import LocalConditions, effective_conditions, in_A_sigma
from quadclass.levels import bound_report, sturm_bound
from quadclass.qseries import (
    QSeries,
    ResidualShadowError,
    build_F,
    build_h_sigma,
    gauss_check,
    linear_combination,
    ord_ell,
    quadratic_symbol,
    sieve_inert,
    sieve_ramified,
    sieve_split,
    squared_symbol,
    theta_cube,
    three_squares_counts,
    truncate,
    twist,
    u_operator,
    v_operator,
    zagier_series,
)

from bruteforce import naive_three_squares, random_conditions


def H(n):
    return Fraction(hurwitz(n), 12)


def test_zagier_series_small():
    z = zagier_series(4)
    assert z.holo == {0: Fraction(-1, 12), 3: Fraction(1, 3), 4: Fraction(1, 2)}
    assert z.shadow == {0: 1, 1: 2, 2: 2}
    assert z.level == 4
    z1 = zagier_series(1)
    assert z1.holo == {0: Fraction(-1, 12)} and z1.shadow == {0: 1, 1: 2}
    z10 = zagier_series(10)
    assert z10.holo[7] == 1 and z10.holo[8] == 1


def test_qseries_validation():
    with pytest.raises(ValueError):
        QSeries(0)
    with pytest.raises(ValueError):
        QSeries(5, holo={6: Fraction(1)})
    with pytest.raises(ValueError):
        QSeries(5, shadow={3: Fraction(1)})  # 9 > 5
    s = QSeries(5, holo={2: 0, 3: Fraction(1, 2)})
    assert s.holo == {3: Fraction(1, 2)}  # zeros dropped


def test_twist_by_squared_symbol():
    z = zagier_series(9)
    t = twist(z, squared_symbol(3))
    assert t.coefficient(3) == 0
    assert t.coefficient(4) == Fraction(1, 2)
    assert 3 not in t.shadow and 0 not in t.shadow
    assert 1 in t.shadow and 2 in t.shadow
    assert t.level == 9 * 4
    again = twist(t, squared_symbol(3))
    assert again.has_same_terms(t)  # idempotent on the terms


def test_twist_by_quadratic_symbol_shadow_rule():
    # slot n picks up chi(-n^2) = (-1 | p) when p does not divide n, and
    # dies when p | n; for p = 7 the surviving slots flip sign
    z = zagier_series(400)
    t = twist(z, quadratic_symbol(7))
    for n in range(1, 21):
        expected = 2 * kronecker(-n * n, 7)
        assert t.shadow.get(n, 0) == expected
        if n % 7:
            assert t.shadow[n] == 2 * kronecker(-1, 7) == -2
    assert 0 not in t.shadow


def test_u_operator():
    z = zagier_series(12)
    assert u_operator(z, 1) == z
    u = u_operator(z, 4)
    assert u.truncation == 3
    assert u.holo == {0: Fraction(-1, 12), 1: Fraction(1, 2), 2: 1, 3: Fraction(4, 3)}
    assert u.shadow == {0: 1, 1: 2}  # old slot 2 at exponent -4 -> -1
    u3 = u_operator(zagier_series(100), 3)
    assert set(u3.shadow) == {0}  # -9/3 = -3 is not a negative square


def test_v_operator():
    z = zagier_series(12)
    assert v_operator(z, 1) == z
    v = v_operator(z, 3)
    assert v.truncation == 12
    assert v.holo == {0: Fraction(-1, 12), 9: Fraction(1, 3), 12: Fraction(1, 2)}
    assert set(v.shadow) == {0}  # -3n^2 is never a slot
    v4 = v_operator(zagier_series(9), 4)
    assert set(v4.shadow) == {0, 2}  # slot 1 -> slot 2; slots 2, 3 overflow


def test_u_v_round_trip():
    z = zagier_series(60)
    for d in (2, 3, 4, 5):
        back = u_operator(v_operator(z, d), d)
        assert back.truncation == 60 // d
        assert back.holo == {n: c for n, c in z.holo.items() if n <= 60 // d}
    # V after U projects onto multiples of d
    for d in (2, 3):
        proj = v_operator(u_operator(z, d), d)
        for n, c in proj.holo.items():
            assert n % d == 0 and c == z.holo[n]


def test_linear_combination():
    z = zagier_series(20)
    zero = linear_combination([(Fraction(1), z), (Fraction(-1), z)])
    assert zero.holo == {} and zero.shadow == {}
    with pytest.raises(ValueError):
        linear_combination([(Fraction(1), z), (Fraction(1), zagier_series(10))])
    with pytest.raises(ValueError):
        linear_combination([])


def test_annihilating_combination_coefficient_law():
    # f = (H - (-1|p) H_chi) / 2 keeps H(n) at inert n, halves multiples
    # of p, kills split n; its shadow survives exactly on multiples of p
    p = 7
    z = zagier_series(50)
    eps = kronecker(-1, p)
    f = linear_combination([
        (Fraction(1, 2), z),
        (Fraction(-eps, 2), twist(z, quadratic_symbol(p))),
    ])
    for n in range(1, 51):
        symbol = kronecker(-n, p)
        if symbol == -1:
            assert f.coefficient(n) == H(n)
        elif symbol == 1:
            assert f.coefficient(n) == 0
        else:
            assert f.coefficient(n) == H(n) / 2
    for n in range(1, 8):
        if n % p == 0:
            assert f.shadow.get(n) == 1  # half of the original weight 2
        else:
            assert n not in f.shadow
    assert f.shadow[0] == Fraction(1, 2)


def test_sieve_inert():
    p = 7
    s = sieve_inert(zagier_series(50), p)
    for n in range(1, 51):
        expected = H(n) if kronecker(-n, p) == -1 else Fraction(0)
        assert s.coefficient(n) == expected
    assert s.shadow == {}
    assert s.coefficient(49) == 0 and s.coefficient(14) == 0
    twice = sieve_inert(s, p)
    assert twice.has_same_terms(s)


def test_sieve_split():
    s = sieve_split(zagier_series(50), 3)
    assert s.coefficient(8) == H(8) == 1
    for n in range(3, 51, 3):
        assert s.coefficient(n) == 0
    for n in range(1, 51):
        expected = H(n) if kronecker(-n, 3) == 1 else Fraction(0)
        assert s.coefficient(n) == expected
    # split then inert at the same prime leaves nothing
    nothing = sieve_inert(s, 3)
    assert nothing.holo == {} and nothing.shadow == {}


def test_sieve_ramified():
    z = zagier_series(100)
    assert sieve_ramified(z, frozenset()) is z
    s = sieve_ramified(z, frozenset({3}))
    assert s.truncation == 100  # full truncation retained
    assert s.coefficient(15) == H(15) == 2
    assert s.coefficient(9) == 0
    for n, c in s.holo.items():
        assert n % 3 == 0 and (n // 3) % 3 != 0 and c == H(n)
    assert s.shadow == {}


def test_sieve_ramified_equals_operator_composite():
    # the one-shot support transform must agree with the literal
    # U(d) -> squared twists -> V(d) route wherever the latter reaches
    # (the composite's truncation shrinks to T // d)
    z = zagier_series(200)
    for s0 in ({3}, {5}, {3, 5}):
        d = 1
        for q in s0:
            d *= q
        composite = u_operator(z, d)
        for q in sorted(s0):
            composite = twist(composite, squared_symbol(q))
        composite = v_operator(composite, d)
        direct = sieve_ramified(z, frozenset(s0))
        assert composite.shadow == {} and direct.shadow == {}
        assert composite.level == direct.level
        for n in range(composite.truncation + 1):
            assert composite.coefficient(n) == direct.coefficient(n)
        # and the direct route keeps the full range
        assert direct.truncation == 200


def test_build_h_sigma_support_and_coefficients():
    lc = LocalConditions(5, split=frozenset({3}), inert=frozenset({7}))
    series = build_h_sigma(lc, 200)
    assert series.shadow == {}
    expected = [n for n in range(1, 201) if in_A_sigma(n, lc)]
    assert series.support() == expected
    for n in expected:
        assert series.holo[n] == H(n)
    # squares of condition primes never appear
    for n in series.support():
        assert n % 9 != 0 and n % 49 != 0


def test_build_h_sigma_empty_inert_substitution():
    lc = LocalConditions(5, split=frozenset({3}))
    series = build_h_sigma(lc, 300)
    eff = effective_conditions(lc)
    assert eff.inert == frozenset({7})
    assert series.support() == [n for n in range(1, 301) if in_A_sigma(n, eff)]
    assert series.shadow == {}


def test_build_h_sigma_generator_properties():
    rng = random.Random(20250810)
    seen_ramified = seen_empty_inert = False
    for _ in range(10):
        lc = random_conditions(rng)
        seen_ramified = seen_ramified or bool(lc.ramified)
        seen_empty_inert = seen_empty_inert or not lc.inert
        series = build_h_sigma(lc, 500)
        assert series.shadow == {}
        eff = effective_conditions(lc)
        assert series.support() == [n for n in range(1, 501) if in_A_sigma(n, eff)]
        for n in series.support():
            assert series.holo[n] == H(n)
        # level bookkeeping stays within the padded bound
        report = bound_report(lc)
        assert report.n_sigma % series.level == 0
        assert series.level % 4 == 0
    assert seen_ramified and seen_empty_inert


def test_build_h_sigma_rejects_invalid():
    with pytest.raises(ValueError):
        build_h_sigma(LocalConditions(5, split=frozenset({19})), 50)
    with pytest.raises(ValueError):
        build_h_sigma(LocalConditions(3), 50)


def test_residual_shadow_is_reported():
    with pytest.raises(ResidualShadowError):
        raise ResidualShadowError("synthetic")


def test_build_F_against_direct_recomputation():
    lc = LocalConditions(5, split=frozenset({3}), inert=frozenset({7}))
    p = 11
    base = build_h_sigma(lc, 2000)
    series = build_F(lc, p, 2000)
    assert series.truncation == 2000 // p
    for n in range(series.truncation + 1):
        expected = base.coefficient(n * p)
        if n % p == 0:
            expected -= p * base.coefficient(n // p)
        assert series.coefficient(n) == expected
    assert series.shadow == {}


def test_build_F_preconditions():
    lc = LocalConditions(5, split=frozenset({3}))
    with pytest.raises(ValueError):
        build_F(lc, 3, 100)  # collides with split set
    with pytest.raises(ValueError):
        build_F(lc, 5, 100)  # collides with ell
    with pytest.raises(ValueError):
        build_F(lc, 15, 100)  # not prime
    # the substituted inert prime collides too: effective inert is {7}
    with pytest.raises(ValueError):
        build_F(lc, 7, 100)


def test_ord_ell():
    assert ord_ell(zagier_series(30), 5) == 3
    assert ord_ell(QSeries(10), 5) is None
    single = QSeries(10, holo={7: Fraction(35, 12)})
    assert ord_ell(single, 5) is None
    assert ord_ell(single, 7) is None
    assert ord_ell(single, 11) == 7
    with pytest.raises(ValueError):
        ord_ell(zagier_series(10), 3)
    with pytest.raises(ValueError):
        ord_ell(zagier_series(10), 9)
    with pytest.raises(ValueError):
        ord_ell(QSeries(10, holo={1: Fraction(1, 24)}), 5)


def test_ord_ell_within_sturm_bound():
    # the auxiliary form has a coefficient indivisible by ell no later
    # than the Sturm bound m_sigma * (p + 1)
    lc = LocalConditions(5, split=frozenset({3}))
    p = 5
    with pytest.raises(ValueError):
        build_F(lc, p, 500)  # p = ell is rejected
    p = 13
    series = build_F(lc, p, 2600)
    n_p = ord_ell(series, 5)
    report = bound_report(lc)
    assert n_p is not None
    assert n_p <= report.m_sigma * (p + 1)
    assert n_p <= sturm_bound(3, p * report.n_sigma)


def test_truncate():
    z = zagier_series(50)
    t = truncate(z, 10)
    assert t.truncation == 10
    assert t.holo == {n: c for n, c in z.holo.items() if n <= 10}
    assert t.shadow == {n: w for n, w in z.shadow.items() if n * n <= 10}
    with pytest.raises(ValueError):
        truncate(t, 50)


def test_theta_cube_counts():
    series = theta_cube(30)
    counts = three_squares_counts(30)
    for n in range(31):
        assert series.coefficient(n) == counts[n] == naive_three_squares(n)
    assert counts[1] == 6 and hurwitz(4) == 6
    assert counts[3] == 8 and 2 * hurwitz(3) == 8
    assert counts[7] == 0
    assert counts[:10].tolist() == [1, 6, 12, 8, 6, 24, 24, 0, 12, 30]


def test_gauss_check():
    assert gauss_check(1000)


def test_csv_lines():
    lines = list(zagier_series(4).csv_lines())
    assert lines == ["n,numerator,denominator", "0,-1,12", "3,1,3", "4,1,2"]
