"""Naive reference implementations used as independent oracles.

Everything here is deliberately written the slow, obvious way, without
importing the package internals, so tests can compare two genuinely
different computations of the same quantity.
"""

from __future__ import annotations

import math
import random


def legendre_by_squares(a: int, p: int) -> int:
    """(a | p) for an odd prime p by listing the squares mod p."""
    a %= p
    if a == 0:
        return 0
    squares = {x * x % p for x in range(1, p)}
    return 1 if a in squares else -1


def trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def naive_moebius(n: int) -> int:
    fac = trial_factor(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def naive_is_squarefree(n: int) -> bool:
    return all(e == 1 for e in trial_factor(n).values())


def naive_is_fundamental(d: int) -> bool:
    if d >= 0:
        return False
    if d % 4 == 1:
        return naive_is_squarefree(-d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and naive_is_squarefree(-m)
    return False


def naive_primes(limit: int) -> list[int]:
    return [n for n in range(2, limit + 1)
            if all(n % d for d in range(2, math.isqrt(n) + 1))]


def naive_class_number(d: int) -> int:
    """h(d) by the b-outer enumeration of primitive reduced forms."""
    assert naive_is_fundamental(d)
    n = -d
    count = 0
    for b in range(d % 2, math.isqrt(n // 3) + 1, 2):
        m4 = b * b + n
        if m4 % 4:
            continue
        m = m4 // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    # (a, -b, c) is a second reduced form unless b = 0,
                    # b = a or a = c
                    count += 1 if (b == 0 or b == a or a == c) else 2
            a += 1
    return count


def naive_hurwitz_scaled(n: int) -> int:
    """12*H(n) as the weighted count of all reduced forms of disc -n."""
    if n == 0:
        return -1
    total = 0
    for b in range(n % 2, math.isqrt(n // 3) + 1, 2):
        m4 = b * b + n
        if m4 % 4:
            continue
        m = m4 // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if b == 0 and a == c:
                    total += 6
                elif b == a and a == c:
                    total += 4
                else:
                    total += 12 if (b == 0 or b == a or a == c) else 24
            a += 1
    return total


def naive_three_squares(n: int) -> int:
    count = 0
    s = math.isqrt(n)
    for x in range(-s, s + 1):
        for y in range(-s, s + 1):
            r = n - x * x - y * y
            if r < 0:
                continue
            z = math.isqrt(r)
            if z * z == r:
                count += 1 if z == 0 else 2
    return count


def random_conditions(rng: random.Random, require_inert: bool = False,
                      prime_pool=(3, 5, 7, 11, 13), ells=(5, 7, 11)):
    """A random admissible set of local conditions over small primes."""
    from quadclass.conditions import LocalConditions

    while True:
        ell = rng.choice(ells)
        ramified, split, inert = set(), set(), set()
        for q in prime_pool:
            if q == ell:
                continue
            bucket = rng.choice(("none", "ramified", "split", "inert"))
            if bucket == "ramified" and q % ell != 1:
                ramified.add(q)
            elif bucket == "split" and q % ell != ell - 1:
                split.add(q)
            elif bucket == "inert" and not (q % ell == 1 and q % 4 == 3):
                inert.add(q)
        if require_inert and not inert:
            continue
        lc = LocalConditions(ell, frozenset(ramified), frozenset(split),
                             frozenset(inert))
        if not lc.violations():
            return lc
