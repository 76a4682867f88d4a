"""Exact integer primitives: Kronecker symbols, factorization, discriminants.

Everything in this module is a pure function of plain Python integers, so
values are exact at any size the callers produce.  Factorization is trial
division over a 2-3-5 wheel followed by deterministic Miller-Rabin and
Brent-cycle splitting, which is exact for inputs below 2**63.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FACTOR_LIMIT = 2**63

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)  # increments between 7,11,13,17,19,23,29,31,37,...


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**63."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Return a nontrivial factor of composite odd n (Brent's cycle method)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed, seed, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


@dataclass(frozen=True)
class FactoredInteger:
    """An integer together with the prime factorization of its absolute value."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = 1
        for p, e in self.factors:
            assert e >= 1 and p > prev, "factors must be sorted with exponents >= 1"
            prev = p
            prod *= p**e
        assert prod == abs(self.value), "factorization does not multiply back"

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factor(n: int) -> FactoredInteger:
    """Complete factorization of n for 1 <= n <= 2**63."""
    if not 1 <= n <= FACTOR_LIMIT:
        raise ValueError(f"factor() accepts 1 <= n <= 2**63, got {n}")
    m = n
    found: dict[int, int] = {}
    for p in (2, 3, 5):
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    p, i = 7, 0
    while p * p <= m and p < _TRIAL_LIMIT:
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
        p += _WHEEL[i % 8]
        i += 1
    # Whatever survives trial division is 1, a prime, or has at most a few
    # large prime factors; split those with Brent's method.
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        d = _brent_rho(m)
        stack.append(d)
        stack.append(m // d)
    return FactoredInteger(n, tuple(sorted(found.items())))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers.

    Extends the Jacobi symbol by (a|2) = 0, 1, -1 for a even, a = +-1 (8),
    a = +-3 (8); (a|-1) = -1 exactly when a < 0; and (a|0) = 1 iff a = +-1.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def moebius(n: int) -> int:
    """mu(n): 0 unless n is squarefree, else (-1)^(number of prime factors)."""
    if n < 1:
        raise ValueError("moebius requires n >= 1")
    fac = factor(n)
    if any(e > 1 for _, e in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def sigma1(n: int) -> int:
    """Sum of the positive divisors of n."""
    if n < 1:
        raise ValueError("sigma1 requires n >= 1")
    total = 1
    for p, e in factor(n).factors:
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = f**2 * k with k squarefree; returns (f, k)."""
    if n < 1:
        raise ValueError("squarefree_decompose requires n >= 1")
    f = k = 1
    for p, e in factor(n).factors:
        f *= p ** (e // 2)
        if e % 2:
            k *= p
    return f, k


def is_fundamental_discriminant(d: int) -> bool:
    """True iff d < 0 is the discriminant of an imaginary quadratic field."""
    if d >= 0:
        raise ValueError("only negative discriminants are supported")
    if d % 4 == 1:
        _, k = squarefree_decompose(-d)
        return k == -d
    if d % 4 == 0:
        m = d // 4
        if m % 4 not in (2, 3):
            return False
        _, k = squarefree_decompose(-m)
        return k == -m
    return False


def fundamental_discriminant_of(n: int) -> int:
    """Discriminant of the field Q(sqrt(-n)) for n >= 1."""
    if n < 1:
        raise ValueError("fundamental_discriminant_of requires n >= 1")
    _, k = squarefree_decompose(n)
    return -k if (-k) % 4 == 1 else -4 * k


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit, ascending."""
    if limit < 2:
        return []
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].tolist()


def prime_count_below(x: int) -> int:
    """Number of primes strictly below x (sieve of the odd residues)."""
    if x <= 2:
        return 0
    if x == 3:
        return 1
    limit = x - 1  # largest candidate
    half = (limit - 1) // 2  # index i <-> odd number 2i+1, i >= 1
    sieve = np.ones(half + 1, dtype=bool)
    sieve[0] = False  # 1 is not prime
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p // 2]:
            sieve[p * p // 2 :: p] = False
    return 1 + int(np.count_nonzero(sieve))
