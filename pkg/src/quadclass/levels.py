"""Level, index and Sturm-bound arithmetic for the sieved class-number forms.

The congruence-subgroup index [Gamma_0(1) : Gamma_0(N)] = N * prod(1 + 1/p)
drives everything here: the working level N_Sigma = 4 Q^6 prod q^6 attached
to a set of local conditions, the generic Sturm bound (k/12) * index, and
the derived constants M_Sigma = index/8 and r_Sigma (odd primes below
M_Sigma, the given ell excluded).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .arithmetic import factor, is_prime, prime_count_below

if TYPE_CHECKING:  # import for annotations only; conditions.py imports us
    from .conditions import LocalConditions

M_SIGMA_CEILING = 2**63 // 1000
PRIME_COUNT_CEILING = 10**8


def gamma0_index(n: int) -> int:
    """[Gamma_0(1) : Gamma_0(n)] = n * prod_{p | n} (1 + 1/p), exactly."""
    if n < 1:
        raise ValueError("level must be positive")
    index = n
    for p, _ in factor(n).factors:
        index = index // p * (p + 1)
    return index


def sturm_bound(weight_times_two: int, n: int) -> Fraction:
    """(k/12) * [Gamma_0(1) : Gamma_0(n)] for weight k, passed as 2k."""
    if weight_times_two < 1 or n < 1:
        raise ValueError("weight and level must be positive")
    return Fraction(weight_times_two, 24) * gamma0_index(n)


def q_sigma(lc: "LocalConditions") -> int:
    """1 when inert conditions are already present; otherwise the smallest
    odd prime, outside the condition sets and distinct from ell, that is
    admissible as an inert prime (not both 1 mod ell and 3 mod 4)."""
    if lc.inert:
        return 1
    used = lc.all_primes()
    q = 3
    while True:
        if is_prime(q) and q not in used and q != lc.ell:
            if not (q % lc.ell == 1 and q % 4 == 3):
                return q
        q += 2


@dataclass(frozen=True)
class BoundReport:
    q_sigma: int
    n_sigma: int
    index: int
    m_sigma: Fraction
    r_sigma: int | None
    note: str | None = None


def bound_report(lc: "LocalConditions",
                 m_sigma_ceiling: int = M_SIGMA_CEILING,
                 prime_count_ceiling: int = PRIME_COUNT_CEILING) -> BoundReport:
    """Q, N_Sigma = 4 Q^6 prod q^6, the index, M_Sigma = index/8 and r_Sigma.

    M_Sigma beyond m_sigma_ceiling is reported as astronomically large;
    r_sigma is computed by an actual prime sieve and is therefore only
    attempted below prime_count_ceiling.
    """
    lc.require_valid()
    q = q_sigma(lc)
    n_sig = 4 * q**6
    for p in sorted(lc.all_primes()):
        n_sig *= p**6
    # n_sig's prime support is known by construction, so the index never
    # needs a factorization (n_sig routinely exceeds the factoring range)
    support = {2} | lc.all_primes() | ({q} if q > 1 else set())
    index = n_sig
    for p in sorted(support):
        index = index // p * (p + 1)
    m_sig = Fraction(index, 8)
    note = None
    if m_sig > m_sigma_ceiling:
        note = "bounds astronomically large: m_sigma exceeds ceiling"
        return BoundReport(q, n_sig, index, m_sig, None, note)
    r_sig = None
    if m_sig <= prime_count_ceiling:
        # largest integer strictly below m_sig
        top = (m_sig.numerator - 1) // m_sig.denominator
        odd_primes = prime_count_below(top + 1) - (1 if top >= 2 else 0)
        r_sig = odd_primes - (1 if lc.ell < m_sig else 0)
    else:
        note = "r_sigma not sieved: m_sigma exceeds prime-count ceiling"
    return BoundReport(q, n_sig, index, m_sig, r_sig, note)
