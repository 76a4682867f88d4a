"""Elliptic curve invariants, odd-prime reduction types and Frey twists.

A curve enters as its five Weierstrass coefficients plus externally
supplied data that this package does not compute: the conductor, the odd
prime order ell of a rational torsion point, and the user's assertion
that the point is not in the kernel of reduction mod ell.  From the
derived c4, c6, Delta and j the module classifies reduction at odd
primes (split multiplicative = Tate curve, decided by whether -c6 is a
square mod p on a p-minimal model), forms the three prime sets entering
Frey's twist criterion, evaluates the criterion itself for a negative
squarefree twisting integer, and enumerates twist discriminants whose
ell-Selmer group the criterion certifies to be trivial (rank 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arithmetic import FACTOR_LIMIT, factor, is_prime, kronecker, squarefree_decompose
from .classnumbers import class_number_table


@dataclass(frozen=True)
class CurveData:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    delta: int
    j_num: int
    j_den: int
    conductor: int | None = None
    ell: int | None = None
    torsion_hypothesis_asserted: bool = False

    def a_invariants(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def j(self) -> Fraction:
        return Fraction(self.j_num, self.j_den)


def derive_invariants(a_invariants, conductor: int | None = None,
                      ell: int | None = None,
                      torsion_hypothesis_asserted: bool = False) -> CurveData:
    """Standard b, c, Delta, j quantities from (a1, a2, a3, a4, a6)."""
    a1, a2, a3, a4, a6 = (int(a) for a in a_invariants)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    delta = -(b2 * b2 * b8) - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if delta == 0:
        raise ValueError("singular curve: discriminant is zero")
    assert 1728 * delta == c4**3 - c6**2
    j = Fraction(c4**3, delta)
    if ell is not None and (ell % 2 == 0 or not is_prime(ell)):
        raise ValueError(f"torsion order ell = {ell} must be an odd prime")
    if conductor is not None and conductor < 1:
        raise ValueError("conductor must be positive")
    return CurveData(a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, delta,
                     j.numerator, j.denominator, conductor, ell,
                     torsion_hypothesis_asserted)


def _valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _ord_p_of_j(curve: CurveData, p: int) -> int:
    # j = 0 is p-integral everywhere; encoded as 0 since only the sign of
    # ord_p(j) is ever consulted
    if curve.j_num == 0:
        return 0
    return _valuation(curve.j_num, p) - _valuation(curve.j_den, p)


@dataclass(frozen=True)
class ReductionInfo:
    p: int
    ord_delta: int
    ord_c4: int | None  # None encodes c4 = 0 (infinite valuation)
    ord_j: int
    kind: str  # good | multiplicative_split | multiplicative_nonsplit | additive

    def is_tate_curve(self) -> bool:
        return self.kind == "multiplicative_split"


def reduction_at(curve: CurveData, p: int) -> ReductionInfo:
    """Reduction type at an odd prime, on a p-minimal model.

    Minimality at p is enforced by dividing out u^4 | c4, u^6 | c6,
    u^12 | Delta while possible; split vs nonsplit multiplicative is the
    squareness of -c6 mod p.  ord_j is model-independent and comes from
    j in lowest terms.
    """
    if p == 2 or not is_prime(p):
        raise ValueError("reduction_at handles odd primes only")
    vd = _valuation(curve.delta, p)
    vc4 = _valuation(curve.c4, p) if curve.c4 else None
    c6_min = curve.c6
    while vd >= 12 and (vc4 is None or vc4 >= 4) and (c6_min == 0 or c6_min % p**6 == 0):
        vd -= 12
        if vc4 is not None:
            vc4 -= 4
        if c6_min:
            c6_min //= p**6
    ord_j = _ord_p_of_j(curve, p)
    if vd == 0:
        kind = "good"
    elif vc4 == 0:
        kind = ("multiplicative_split" if kronecker(-c6_min, p) == 1
                else "multiplicative_nonsplit")
    else:
        kind = "additive"
    return ReductionInfo(p, vd, vc4, ord_j, kind)


def _odd_conductor_primes(curve: CurveData) -> list[int]:
    if curve.conductor is None:
        raise ValueError("curve has no conductor attached")
    if curve.conductor % 2 == 0:
        raise ValueError("even conductor is out of scope")
    return [p for p, _ in factor(curve.conductor).factors]


def validate_conductor(curve: CurveData) -> list[str]:
    """Cheap sanity checks of the user-supplied conductor (odd scope).

    Checks that every conductor prime is a prime of bad reduction with the
    expected exponent (1 multiplicative; 2 additive for p >= 5, up to 5
    at p = 3), and, when Delta is small enough to factor, that no odd bad
    prime is missing from the conductor.
    """
    problems = []
    for p in _odd_conductor_primes(curve):
        info = reduction_at(curve, p)
        vn = _valuation(curve.conductor, p)
        if info.kind == "good":
            problems.append(f"conductor prime {p} has good reduction")
        elif info.kind.startswith("multiplicative") and vn != 1:
            problems.append(f"multiplicative prime {p} should divide the conductor once")
        elif info.kind == "additive":
            if p >= 5 and vn != 2:
                problems.append(f"additive prime {p} >= 5 should have conductor exponent 2")
            if p == 3 and not 2 <= vn <= 5:
                problems.append("additive prime 3 should have conductor exponent 2..5")
    if abs(curve.delta) <= FACTOR_LIMIT:
        for p, _ in factor(abs(curve.delta)).factors:
            if p == 2 or curve.conductor % p == 0:
                continue
            if reduction_at(curve, p).ord_delta > 0:
                problems.append(f"odd prime {p} of bad reduction missing from conductor")
    return problems


def frey_sets(curve: CurveData) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """The three subsets of odd conductor primes entering the criterion:

    obstructed = {p : p = -1 mod ell, ell does not divide ord_p(Delta)};
    t_plus     = {p : ord_p(j) < 0 and not a Tate curve};
    t_minus    = {p not in t_plus : p = 3 mod 4}.
    """
    if curve.ell is None:
        raise ValueError("curve has no torsion order ell attached")
    primes = _odd_conductor_primes(curve)
    ell = curve.ell
    obstructed = set()
    t_plus = set()
    for p in primes:
        info = reduction_at(curve, p)
        if p % ell == ell - 1 and info.ord_delta % ell != 0:
            obstructed.add(p)
        if info.ord_j < 0 and not info.is_tate_curve():
            t_plus.add(p)
    t_minus = {p for p in primes if p not in t_plus and p % 4 == 3}
    return frozenset(obstructed), frozenset(t_plus), frozenset(t_minus)


@dataclass(frozen=True)
class FreyBreakdown:
    d: int
    ok: bool
    parity_applies: bool
    parity_ok: bool
    ell_symbol_applies: bool
    ell_symbol: int | None
    prime_symbols: tuple[tuple[int, int, int], ...]  # (p, required, actual)

    def failing_primes(self) -> list[int]:
        return [p for p, req, act in self.prime_symbols if req != act]


def frey_condition(curve: CurveData, d: int) -> FreyBreakdown:
    """Frey's symbol conditions for the negative squarefree twisting
    integer d, evaluated literally:

    (1) d = 3 mod 4 when the conductor is even (vacuous here: odd scope);
    (2) (d | ell) = -1 when ord_ell(j) < 0;
    (3) for each odd conductor prime p, (d | p) must be -1 when
        ord_p(j) >= 0, -1 when ord_p(j) < 0 at a Tate curve, +1 otherwise.

    Every symbol is evaluated at d itself and recorded in the breakdown.
    """
    if d >= 0:
        raise ValueError("twisting integer must be negative")
    f, _ = squarefree_decompose(-d)
    if f != 1:
        raise ValueError(f"twisting integer {d} is not squarefree")
    if curve.ell is None:
        raise ValueError("curve has no torsion order ell attached")
    primes = _odd_conductor_primes(curve)
    if math.gcd(-d, curve.ell * curve.conductor) != 1:
        raise ValueError(f"{d} is not coprime to ell * conductor")
    parity_applies = curve.conductor % 2 == 0
    parity_ok = (d % 4 == 3) if parity_applies else True
    ell_applies = _ord_p_of_j(curve, curve.ell) < 0
    ell_symbol = kronecker(d, curve.ell) if ell_applies else None
    ok = parity_ok and (not ell_applies or ell_symbol == -1)
    rows = []
    for p in primes:
        info = reduction_at(curve, p)
        if info.ord_j >= 0:
            required = -1
        elif info.is_tate_curve():
            required = -1
        else:
            required = 1
        actual = kronecker(d, p)
        rows.append((p, required, actual))
        ok = ok and required == actual
    return FreyBreakdown(d, ok, parity_applies, parity_ok,
                         ell_applies, ell_symbol, tuple(rows))


class TwistHypothesisError(ValueError):
    """The twist-enumeration hypotheses do not hold; carries the failures."""

    def __init__(self, failures: list[str]):
        super().__init__("; ".join(failures))
        self.failures = failures


def verify_twist_hypotheses(curve: CurveData) -> list[str]:
    """All unmet hypotheses of the rank-0 twist enumeration (empty = go)."""
    failures = []
    if curve.conductor is None:
        return ["no conductor attached"]
    if curve.conductor % 2 == 0:
        return ["conductor is even"]
    if curve.ell is None:
        return ["no torsion order ell attached"]
    if curve.ell < 5:
        failures.append(f"ell = {curve.ell} is below 5")
    if not curve.torsion_hypothesis_asserted:
        failures.append("torsion point hypothesis (order ell, nontrivial reduction "
                        "mod ell) has not been asserted")
    bad = validate_conductor(curve)
    failures.extend(bad)
    obstructed, t_plus, t_minus = frey_sets(curve)
    if obstructed:
        failures.append(f"obstructed primes present: {sorted(obstructed)} "
                        f"(p = -1 mod {curve.ell} with ord_p(Delta) not divisible)")
    for p in sorted(t_plus | t_minus):
        if p % curve.ell == 1:
            failures.append(f"prime {p} = 1 mod {curve.ell} in t_plus/t_minus")
    ord_ell_j = _ord_p_of_j(curve, curve.ell)
    if ord_ell_j < 0:
        failures.append(f"ord_{curve.ell}(j) = {ord_ell_j} < 0")
    return failures


@dataclass(frozen=True)
class TwistCertificate:
    discriminant: int
    h: int
    d_evaluated: int
    symbols: tuple[tuple[int, int], ...]  # (p, kronecker(d, p))
    even_discriminant: bool


def rank_zero_twists(curve: CurveData, x: int, threads: int = 1,
                     enforce_hypotheses: bool = True) -> list[TwistCertificate]:
    """Fundamental D with |D| <= x, squarefree part coprime to ell * N,
    passing Frey's conditions and with ell not dividing h(D).

    Under the criterion these twists have trivial ell-Selmer group and
    rank 0.  Hypothesis failures normally refuse the run; pass
    enforce_hypotheses=False to enumerate anyway (the certificates are
    then conditional on the unmet hypotheses).
    """
    failures = verify_twist_hypotheses(curve)
    if failures and enforce_hypotheses:
        raise TwistHypothesisError(failures)
    if curve.ell is None or curve.conductor is None or curve.conductor % 2 == 0:
        # missing data and even conductors are not bypassable hypotheses
        raise TwistHypothesisError(failures)
    ell, n_e = curve.ell, curve.conductor
    table = class_number_table(x, threads=threads)
    out = []
    for n in range(3, x + 1):
        if not table.fundamental[n]:
            continue
        d = -n if n % 4 != 0 else -(n // 4)
        if math.gcd(-d, ell * n_e) != 1:
            continue
        if int(table.h[n]) % ell == 0:
            continue
        verdict = frey_condition(curve, d)
        if verdict.ok:
            out.append(TwistCertificate(
                -n, int(table.h[n]), d,
                tuple((p, act) for p, _, act in verdict.prime_symbols),
                n % 4 == 0))
    return out
