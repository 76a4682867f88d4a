"""Class numbers h(D) and Hurwitz class numbers H(n), singly and in batch.

Single values come from direct enumeration of reduced binary quadratic
forms.  Batch tables come from one global sweep over all reduced triples
(a, b, c) with 4ac - b^2 <= X: for each pair (a, b) the discriminants
-(4ac - b^2), c = a, a+1, ..., form an arithmetic progression with step
4a, so the whole sweep is a modest number of strided array additions.
The sweep counts forms of every discriminant at once (O(X^{3/2}) element
updates total), after which primitive counts fall out by Moebius
inversion over square divisors and H(n) follows from the class-number
formula with mu, the Kronecker symbol and sigma_1.

Hurwitz values are always handled as the integers 12*H(n); 12 clears
every denominator (w(D) ties only 2, 3) and stays invertible mod any
prime ell >= 5.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from .arithmetic import (
    factor,
    fundamental_discriminant_of,
    is_fundamental_discriminant,
    kronecker,
    moebius,
)

TABLE_CEILING = 10**7


@dataclass(frozen=True)
class ReducedForm:
    """A primitive reduced positive definite form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.discriminant() >= 0 or self.a <= 0:
            raise ValueError("form is not positive definite")
        if not (abs(self.b) <= self.a <= self.c):
            raise ValueError("form is not reduced")
        if self.b < 0 and (abs(self.b) == self.a or self.a == self.c):
            raise ValueError("form is not reduced (sign convention)")
        if math.gcd(math.gcd(self.a, abs(self.b)), self.c) != 1:
            raise ValueError("form is not primitive")

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


def reduced_forms(d: int) -> list[ReducedForm]:
    """All primitive reduced forms of fundamental discriminant d < 0."""
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a negative fundamental discriminant")
    n = -d
    forms = []
    a = 1
    while 3 * a * a <= n:
        for b in range(-a, a + 1):
            if (b - d) % 2:
                continue
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                forms.append(ReducedForm(a, b, c))
        a += 1
    return forms


def class_number(d: int) -> int:
    """h(d) for a negative fundamental discriminant, by form enumeration."""
    return len(reduced_forms(d))


def unit_count_half(d: int) -> int:
    """Half the number of units of the ring of integers of Q(sqrt(d))."""
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a negative fundamental discriminant")
    if d == -3:
        return 3
    if d == -4:
        return 2
    return 1


def hurwitz(n: int) -> int:
    """12*H(n) as an exact integer (H(0) = -1/12 gives -1)."""
    if n < 0:
        raise ValueError("hurwitz requires n >= 0")
    if n == 0:
        return -1
    if n % 4 in (1, 2):
        return 0
    d = fundamental_discriminant_of(n)
    f = math.isqrt(n // -d)
    assert f * f * -d == n
    total = 0
    for dd in _divisors(f):
        mu = moebius(dd)
        if mu:
            total += mu * kronecker(d, dd) * _sigma1_of(f // dd)
    return (12 // unit_count_half(d)) * class_number(d) * total


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def _sigma1_of(n: int) -> int:
    total = 1
    for p, e in factor(n).factors:
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


# --- batch sweep -----------------------------------------------------------

def _a_range(limit: int, worker: int, workers: int) -> range:
    # interleaved split of the outer a-loop; merge is exact integer addition
    return range(1 + worker, math.isqrt(limit // 3) + 1, workers)


def _count_forms_chunk(args: tuple[int, int, int]) -> np.ndarray:
    """Count all reduced forms (primitive or not) per discriminant value."""
    limit, worker, workers = args
    counts = np.zeros(limit + 1, dtype=np.int64)
    for a in _a_range(limit, worker, workers):
        a4 = 4 * a
        aa4 = a4 * a
        for b in range(a + 1):
            start = aa4 - b * b  # c = a
            if start > limit:
                continue
            if b == 0 or b == a:
                counts[start::a4] += 1
            else:
                # (a, +-b, c) are distinct reduced forms when c > a,
                # but only (a, b, a) is reduced when c = a
                counts[start::a4] += 2
                counts[start] -= 1
    return counts


def _weighted_forms_chunk(args: tuple[int, int, int]) -> np.ndarray:
    """12-scaled Hurwitz weights: forms count 12 each, except the shapes
    a(x^2 + y^2) and a(x^2 + xy + y^2) which count 6 and 4."""
    limit, worker, workers = args
    weights = np.zeros(limit + 1, dtype=np.int64)
    for a in _a_range(limit, worker, workers):
        a4 = 4 * a
        aa4 = a4 * a
        for b in range(a + 1):
            start = aa4 - b * b
            if start > limit:
                continue
            if b == 0:
                weights[start::a4] += 12
                weights[start] -= 6  # (a, 0, a)
            elif b == a:
                weights[start::a4] += 12
                weights[start] -= 8  # (a, a, a)
            else:
                weights[start::a4] += 24
                weights[start] -= 12  # only one form at c = a
    return weights


def _run_sweep(chunk_fn, limit: int, threads: int) -> np.ndarray:
    if threads <= 1:
        return chunk_fn((limit, 0, 1))
    with multiprocessing.Pool(threads) as pool:
        parts = pool.map(chunk_fn, [(limit, w, threads) for w in range(threads)])
    total = parts[0]
    for part in parts[1:]:
        total += part
    return total


def _moebius_sieve(limit: int) -> np.ndarray:
    # flip sign once per prime factor, zero on square factors
    mu = np.ones(limit + 1, dtype=np.int64)
    primes = np.ones(limit + 1, dtype=bool)
    primes[:2] = False
    for p in range(2, limit + 1):
        if primes[p]:
            primes[p * p :: p] = False
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu


def _squarefree_mask(limit: int) -> np.ndarray:
    sf = np.ones(limit + 1, dtype=bool)
    for p in range(2, math.isqrt(limit) + 1):
        sf[p * p :: p * p] = False
    return sf


def _fundamental_mask(limit: int) -> np.ndarray:
    """mask[n] is true iff -n is a fundamental discriminant, n <= limit."""
    sf = _squarefree_mask(limit)
    n = np.arange(limit + 1)
    mask = (n % 4 == 3) & sf
    quarters = n[(n % 4 == 0) & (n > 0)] // 4
    ok4 = (quarters % 4 == 1) | (quarters % 4 == 2)
    ok4 &= sf[quarters]
    mask[(n % 4 == 0) & (n > 0)] |= ok4
    mask[0] = False
    return mask


@dataclass(frozen=True)
class ClassNumberTable:
    """h(-n) for every fundamental -n with n <= limit (0 elsewhere)."""

    limit: int
    h: np.ndarray = field(repr=False)
    fundamental: np.ndarray = field(repr=False)

    def h_of(self, d: int) -> int:
        if not (0 < -d <= self.limit and self.fundamental[-d]):
            raise ValueError(f"{d} is not fundamental or out of range")
        return int(self.h[-d])

    def is_fundamental(self, d: int) -> bool:
        return 0 < -d <= self.limit and bool(self.fundamental[-d])


def class_number_table(limit: int, threads: int = 1, ceiling: int = TABLE_CEILING) -> ClassNumberTable:
    """Batch h(D) for all fundamental |D| <= limit via the global form sweep."""
    if limit > ceiling:
        raise ValueError(f"limit {limit} exceeds ceiling {ceiling}")
    counts = _run_sweep(_count_forms_chunk, limit, threads)
    # total(n) = sum over g^2 | n of primitive(n / g^2); invert by Moebius
    prim = counts.copy()
    groot = math.isqrt(limit)
    mu = _moebius_sieve(groot)
    for g in range(2, groot + 1):
        m = int(mu[g])
        if m:
            gg = g * g
            k = limit // gg
            prim[gg :: gg] += m * counts[1 : k + 1]
    fundamental = _fundamental_mask(limit)
    h = np.where(fundamental, prim, 0)
    return ClassNumberTable(limit, h, fundamental)


@dataclass(frozen=True)
class HurwitzTable:
    """12*H(n) for 0 <= n <= max_n as exact integers."""

    max_n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        assert self.values[0] == -1
        n = np.arange(self.max_n + 1)
        assert not self.values[(n % 4 == 1) | (n % 4 == 2)].any()
        assert (self.values[1:] >= 0).all()

    def twelve_h(self, n: int) -> int:
        return int(self.values[n])

    def csv_lines(self):
        yield "n,twelve_H"
        for n in range(self.max_n + 1):
            yield f"{n},{int(self.values[n])}"


def _sigma1_sieve(limit: int) -> np.ndarray:
    sig = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        sig[d::d] += d
    return sig


def _spf_sieve(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    return spf


def hurwitz_table(max_n: int, threads: int = 1, ceiling: int = TABLE_CEILING) -> HurwitzTable:
    """12*H(n) for all n <= max_n via batch class numbers plus the formula."""
    if max_n < 1:
        raise ValueError("max_n must be positive")
    if max_n > ceiling:
        raise ValueError(f"max_n {max_n} exceeds ceiling {ceiling}")
    table = class_number_table(max_n, threads=threads, ceiling=ceiling)
    out = np.zeros(max_n + 1, dtype=np.int64)
    out[0] = -1
    froot = math.isqrt(max_n // 3) if max_n >= 3 else 1
    sig = _sigma1_sieve(max(froot, 1))
    spf = _spf_sieve(max(froot, 1))
    for n0 in np.nonzero(table.fundamental)[0].tolist():
        h_d = int(table.h[n0])
        d = -n0
        w12 = {3: 4, 4: 6}.get(n0, 12)
        out[n0] = w12 * h_d  # f = 1
        f = 2
        kron_at: dict[int, int] = {}
        while n0 * f * f <= max_n:
            # squarefree divisors dd of f: mu(dd), kronecker(d, dd) by
            # multiplicativity over the distinct primes of f
            divs = [(1, 1, 1)]
            m = f
            while m > 1:
                p = int(spf[m])
                while m % p == 0:
                    m //= p
                kp = kron_at.get(p)
                if kp is None:
                    kp = kron_at.setdefault(p, kronecker(d, p))
                divs += [(dd * p, -mu, kr * kp) for dd, mu, kr in divs]
            total = 0
            for dd, mu, kr in divs:
                total += mu * kr * int(sig[f // dd])
            out[n0 * f * f] = w12 * h_d * total
            f += 1
    return HurwitzTable(max_n, out)


def hurwitz_table_by_weighted_forms(max_n: int, threads: int = 1,
                                    ceiling: int = TABLE_CEILING) -> HurwitzTable:
    """Independent route: 12*H(n) as the weighted count of ALL reduced forms
    of discriminant -n (weights 1/2 and 1/3 at the two special shapes)."""
    if max_n < 1:
        raise ValueError("max_n must be positive")
    if max_n > ceiling:
        raise ValueError(f"max_n {max_n} exceeds ceiling {ceiling}")
    weights = _run_sweep(_weighted_forms_chunk, max_n, threads)
    weights[0] = -1
    return HurwitzTable(max_n, weights)
