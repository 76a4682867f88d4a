"""Truncated q-expansions with twisting, U/V operators and shadow tracking.

The central object is the weight-3/2 Eisenstein series of Zagier whose
holomorphic coefficients are the Hurwitz class numbers H(n) and whose
nonholomorphic part is supported on exponents -n^2.  Because every
operator used here (character twists, U(d), V(d), linear combinations)
acts diagonally on exponents, the nonholomorphic part never needs to be
evaluated: it is enough to carry one exact rational weight per exponent
slot -n^2 (with a distinguished slot for the constant term) and watch
those weights cancel.  A sieve composition is correct exactly when the
final shadow map is empty, and build_h_sigma enforces that as a hard
invariant.

Holomorphic coefficients are exact Fractions.  Intermediate sieve stages
produce halves of Hurwitz values, so denominators beyond 12 occur mid
composition; every finished sieve output is back to denominator | 12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arithmetic import is_prime, kronecker
from .classnumbers import hurwitz_table
from .conditions import LocalConditions, effective_conditions


class ResidualShadowError(RuntimeError):
    """A sieve that must annihilate the nonholomorphic part failed to."""


@dataclass
class QSeries:
    """A q-expansion known exactly for exponents 0..truncation.

    holo maps exponents to nonzero rational coefficients.  shadow maps a
    slot n >= 0 to the rational weight of the nonholomorphic term at
    exponent -n^2 (slot 0 is the constant-term slot); transcendental
    factors are never stored since all operators act diagonally.  level
    is an upper-bound bookkeeping of the congruence level, multiplied
    according to the standard rules at each operator.
    """

    truncation: int
    holo: dict[int, Fraction] = field(default_factory=dict)
    shadow: dict[int, Fraction] = field(default_factory=dict)
    level: int = 1

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be positive")
        self.holo = {n: Fraction(c) for n, c in self.holo.items() if c}
        self.shadow = {n: Fraction(w) for n, w in self.shadow.items() if w}
        for n in self.holo:
            if not 0 <= n <= self.truncation:
                raise ValueError(f"holo exponent {n} outside truncation")
        for n in self.shadow:
            if n < 0 or n * n > self.truncation:
                raise ValueError(f"shadow slot {n} outside truncation")

    def coefficient(self, n: int) -> Fraction:
        if not 0 <= n <= self.truncation:
            raise ValueError(f"exponent {n} outside truncation")
        return self.holo.get(n, Fraction(0))

    def support(self) -> list[int]:
        return sorted(self.holo)

    def has_same_terms(self, other: "QSeries") -> bool:
        """Equal coefficients and shadow, ignoring the level bookkeeping."""
        return (self.truncation == other.truncation and self.holo == other.holo
                and self.shadow == other.shadow)

    def csv_lines(self):
        yield "n,numerator,denominator"
        for n in self.support():
            c = self.holo[n]
            yield f"{n},{c.numerator},{c.denominator}"


@dataclass(frozen=True)
class DirichletTwist:
    """The quadratic symbol mod an odd prime p, or its square.

    The square acts as the indicator of coprimality to p; both evaluate
    to 0 at 0, which is what kills the constant shadow slot under any
    twist.
    """

    modulus: int
    squared: bool = False

    def __post_init__(self):
        if self.modulus % 2 == 0 or not is_prime(self.modulus):
            raise ValueError("twist modulus must be an odd prime")

    def __call__(self, n: int) -> int:
        if self.squared:
            return 0 if n % self.modulus == 0 else 1
        return kronecker(n, self.modulus)


def quadratic_symbol(p: int) -> DirichletTwist:
    return DirichletTwist(p)


def squared_symbol(p: int) -> DirichletTwist:
    return DirichletTwist(p, squared=True)


def zagier_series(truncation: int, threads: int = 1) -> QSeries:
    """Hurwitz class numbers as holomorphic coefficients, constant -1/12,
    shadow weight 2 on every slot n >= 1 (the n and -n terms land on the
    same exponent -n^2) and weight 1 on the constant slot."""
    table = hurwitz_table(truncation, threads=threads)
    holo = {n: Fraction(int(table.values[n]), 12)
            for n in range(truncation + 1) if table.values[n]}
    shadow = {0: Fraction(1)}
    for n in range(1, math.isqrt(truncation) + 1):
        shadow[n] = Fraction(2)
    return QSeries(truncation, holo, shadow, level=4)


def twist(series: QSeries, chi: DirichletTwist) -> QSeries:
    """Multiply the coefficient at each exponent by chi(exponent).

    Shadow slot n lives at exponent -n^2, so its weight picks up
    chi(-n^2); the constant slot picks up chi(0) = 0 and dies.
    """
    holo = {n: c * chi(n) for n, c in series.holo.items()}
    shadow = {n: w * chi(-n * n) for n, w in series.shadow.items()}
    return QSeries(series.truncation, holo, shadow,
                   series.level * chi.modulus**2)


def u_operator(series: QSeries, d: int) -> QSeries:
    """coefficient(n) <- coefficient(d*n); truncation shrinks to T // d.

    A shadow slot survives only if its exponent -n^2 maps to another
    representable exponent -m^2 = -n^2/d; integral images that are not
    negative squares leave the representable class and are dropped (every
    sieve kills such slots by a squared twist before they could matter).
    """
    if d < 1:
        raise ValueError("d must be positive")
    new_t = series.truncation // d
    if new_t < 1:
        raise ValueError(f"u_operator({d}) would empty a truncation-{series.truncation} series")
    holo = {n // d: c for n, c in series.holo.items() if n % d == 0 and n // d <= new_t}
    shadow: dict[int, Fraction] = {}
    for n, w in series.shadow.items():
        if n == 0:
            shadow[0] = shadow.get(0, Fraction(0)) + w
            continue
        if (n * n) % d:
            continue
        m2 = n * n // d
        m = math.isqrt(m2)
        if m * m == m2 and m2 <= new_t:
            shadow[m] = shadow.get(m, Fraction(0)) + w
    return QSeries(new_t, holo, shadow, series.level * d)


def v_operator(series: QSeries, d: int) -> QSeries:
    """coefficient(d*n) <- coefficient(n); truncation unchanged, entries
    pushed beyond it are dropped.  Shadow exponents -n^2 map to -d*n^2,
    representable only when d is a perfect square."""
    if d < 1:
        raise ValueError("d must be positive")
    t = series.truncation
    holo = {n * d: c for n, c in series.holo.items() if n * d <= t}
    shadow: dict[int, Fraction] = {}
    root = math.isqrt(d)
    for n, w in series.shadow.items():
        if n == 0:
            shadow[0] = shadow.get(0, Fraction(0)) + w
        elif root * root == d and (n * root) ** 2 <= t:
            shadow[n * root] = shadow.get(n * root, Fraction(0)) + w
    return QSeries(t, holo, shadow, series.level * d)


def truncate(series: QSeries, truncation: int) -> QSeries:
    """Restrict to a smaller truncation (drops entries beyond it)."""
    if truncation > series.truncation:
        raise ValueError("cannot extend a truncated series")
    holo = {n: c for n, c in series.holo.items() if n <= truncation}
    shadow = {n: w for n, w in series.shadow.items() if n * n <= truncation}
    return QSeries(truncation, holo, shadow, series.level)


def linear_combination(terms: list[tuple[Fraction, QSeries]]) -> QSeries:
    """Exact rational combination; all truncations must agree."""
    if not terms:
        raise ValueError("empty combination")
    t = terms[0][1].truncation
    if any(series.truncation != t for _, series in terms):
        raise ValueError("truncation mismatch in linear combination")
    holo: dict[int, Fraction] = {}
    shadow: dict[int, Fraction] = {}
    for scalar, series in terms:
        scalar = Fraction(scalar)
        for n, c in series.holo.items():
            holo[n] = holo.get(n, Fraction(0)) + scalar * c
        for n, w in series.shadow.items():
            shadow[n] = shadow.get(n, Fraction(0)) + scalar * w
    level = math.lcm(*(series.level for _, series in terms))
    return QSeries(t, holo, shadow, level)


def sieve_inert(series: QSeries, p: int) -> QSeries:
    """Keep exactly the exponents n with (-n | p) = -1.

    Combination (F - (-1|p) F_chi)/2 zeroes the split exponents, halves
    the multiples of p, and cancels the shadow away from multiples of p;
    the squared twist then removes everything at multiples of p,
    including what was left of the shadow.
    """
    eps = kronecker(-1, p)
    combo = linear_combination([
        (Fraction(1, 2), series),
        (Fraction(-eps, 2), twist(series, quadratic_symbol(p))),
    ])
    return twist(combo, squared_symbol(p))


def sieve_split(series: QSeries, p: int) -> QSeries:
    """Keep exactly the exponents n with (-n | p) = +1 (sign-flipped twin
    of sieve_inert; this one does not cancel the shadow by itself)."""
    eps = kronecker(-1, p)
    combo = linear_combination([
        (Fraction(1, 2), series),
        (Fraction(eps, 2), twist(series, quadratic_symbol(p))),
    ])
    return twist(combo, squared_symbol(p))


def sieve_ramified(series: QSeries, ramified: frozenset[int] | set[int]) -> QSeries:
    """Keep exponents divisible exactly once by every prime of the set.

    Acts as U(d), one squared twist per prime, then V(d), for d the
    product of the set.  The three steps are applied as one support
    transform so the full truncation is retained: the U/V round trip
    through truncated operators would needlessly shrink it to T // d.
    An empty set is the identity.
    """
    if not ramified:
        return series
    d = math.prod(sorted(ramified))
    holo = {}
    for n, c in series.holo.items():
        if n and n % d == 0 and math.gcd(n // d, d) == 1:
            holo[n] = c
    # U(d) maps a slot exponent -n^2 to -n^2/d, never a negative square
    # for squarefree d > 1, and the squared twists kill the constant slot.
    level = series.level * d**2
    for q in ramified:
        level *= q**2
    return QSeries(series.truncation, holo, {}, level)


def build_h_sigma(lc: LocalConditions, truncation: int, threads: int = 1) -> QSeries:
    """The sieved weight-3/2 form: coefficient H(n) on the integers meeting
    the local conditions, 0 elsewhere, and provably no nonholomorphic part.

    An empty inert set is replaced by {q_sigma} so that at least one inert
    sieve runs (that is the step that annihilates the shadow).  A nonempty
    residual shadow is an implementation bug, reported as a hard error.
    """
    lc.require_valid()
    eff = effective_conditions(lc)
    series = zagier_series(truncation, threads=threads)
    for p in sorted(eff.inert):
        series = sieve_inert(series, p)
    for p in sorted(eff.split):
        series = sieve_split(series, p)
    series = sieve_ramified(series, eff.ramified)
    if series.shadow:
        raise ResidualShadowError(
            f"shadow slots {sorted(series.shadow)} survived the sieve")
    return series


def build_F(lc: LocalConditions, p: int, truncation: int, threads: int = 1) -> QSeries:
    """U(p) minus p * V(p) applied to the sieved form, at truncation // p.

    This is the auxiliary form whose first coefficient not divisible by
    ell locates a usable discriminant divisible by p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == lc.ell or p in effective_conditions(lc).all_primes():
        raise ValueError(f"p = {p} collides with the condition primes")
    h_sigma = build_h_sigma(lc, truncation, threads=threads)
    contracted = u_operator(h_sigma, p)
    dilated = truncate(v_operator(h_sigma, p), contracted.truncation)
    return linear_combination([(Fraction(1), contracted), (Fraction(-p), dilated)])


def ord_ell(series: QSeries, ell: int) -> int | None:
    """Smallest n >= 1 with coefficient not divisible by ell, or None if
    every coefficient up to the truncation is (a truncation-limited
    answer, not a proof of vanishing).

    Coefficients must have denominator dividing 12, and ell >= 5 keeps 12
    invertible mod ell, so divisibility is read off 12 * a(n) mod ell.
    The constant term is excluded: the sieved series this is applied to
    have none, and a raw constant would make the answer vacuously 0.
    """
    if ell in (2, 3):
        raise ValueError("ord_ell requires ell >= 5")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    for n in series.support():
        if n == 0:
            continue
        c = 12 * series.holo[n]
        if c.denominator != 1:
            raise ValueError(f"coefficient at {n} has denominator beyond 12")
        if c.numerator % ell:
            return n
    return None


def theta_cube(truncation: int) -> QSeries:
    """sum r(n) q^n with r(n) the number of lattice points on x^2+y^2+z^2=n,
    by direct enumeration (convolving the 1-squares counts twice)."""
    counts = three_squares_counts(truncation)
    holo = {n: Fraction(int(counts[n])) for n in range(truncation + 1) if counts[n]}
    return QSeries(truncation, holo, {}, level=4)


def three_squares_counts(limit: int) -> np.ndarray:
    """r(n) for 0 <= n <= limit as exact int64 counts."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    root = math.isqrt(limit)
    one = np.zeros(limit + 1, dtype=np.int64)
    one[0] = 1
    for x in range(1, root + 1):
        one[x * x] = 2
    two = np.zeros(limit + 1, dtype=np.int64)
    for x in range(root + 1):
        xx = x * x
        if xx > limit:
            break
        two[xx:] += (1 if x == 0 else 2) * one[: limit + 1 - xx]
    three = np.zeros(limit + 1, dtype=np.int64)
    for x in range(root + 1):
        xx = x * x
        if xx > limit:
            break
        three[xx:] += (1 if x == 0 else 2) * two[: limit + 1 - xx]
    return three


def gauss_check(truncation: int, threads: int = 1) -> bool:
    """Verify r(n) against Hurwitz class numbers for every n <= truncation:
    r(n) = 12 H(4n) for n = 1, 2 mod 4; r(n) = 24 H(n) for n = 3 mod 8;
    r(n) = r(n/4) for n = 0 mod 4; r(n) = 0 for n = 7 mod 8."""
    r = three_squares_counts(truncation)
    table = hurwitz_table(4 * truncation, threads=threads)
    n = np.arange(truncation + 1)
    idx = n[(n % 4 == 1) | (n % 4 == 2)]
    if not np.array_equal(r[idx], table.values[4 * idx]):
        return False
    idx = n[n % 8 == 3]
    if not np.array_equal(r[idx], 2 * table.values[idx]):
        return False
    idx = n[(n % 4 == 0) & (n > 0)]
    if not np.array_equal(r[idx], r[idx // 4]):
        return False
    idx = n[n % 8 == 7]
    return not r[idx].any()
