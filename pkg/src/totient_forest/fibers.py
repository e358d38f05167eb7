"""Totient fibers: every n with phi(n) == m."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import DomainError, check_u64, divisors, is_prime, phi_sieve

# Largest scan limit the brute-force oracle will allocate (see core.SIEVE_MAX).
BRUTEFORCE_BUDGET = 20_000_000


class BudgetExceeded(MemoryError):
    def __init__(self, limit: int, budget: int):
        super().__init__(f"brute-force scan to {limit} exceeds budget {budget}")
        self.limit = limit
        self.budget = budget


@dataclass(frozen=True)
class TotientFiber:
    m: int
    members: tuple[int, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.members


def _fiber_members(m: int, order: str) -> tuple[int, ...]:
    found = set()
    if m == 1:
        found.add(1)
    # (n', phi(n')) pairs built from distinct primes processed so far
    candidates = [(1, 1)]
    for d in divisors(m, order):
        p = d + 1
        if not is_prime(p):
            continue
        grown = []
        for base, base_phi in candidates:
            n, t = base * p, base_phi * d
            while m % t == 0:
                if t == m:
                    found.add(n)
                    if n & 1:
                        found.add(2 * n)
                else:
                    grown.append((n, t))
                n *= p
                t *= p
        candidates.extend(grown)
    return tuple(sorted(found))


@lru_cache(maxsize=1 << 18)
def _fiber_cached(m: int, order: str) -> tuple[int, ...]:
    return _fiber_members(m, order)


def totient_fiber(m: int, order: str = "descending") -> TotientFiber:
    """Complete sorted preimage of m under Euler's phi.

    Candidates are products of prime powers p**k with p - 1 dividing m,
    grown one prime at a time while phi of the product still divides m.
    ``order`` sets the divisor iteration order; it never changes the result.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    check_u64(m, "m")
    if order in ("asc", "desc"):
        order = {"asc": "ascending", "desc": "descending"}[order]
    return TotientFiber(m, _fiber_cached(m, order))


def totient_fiber_bruteforce(m: int, budget: int = BRUTEFORCE_BUDGET) -> TotientFiber:
    """Scan every n <= 2*m*m with a sieve; complete since phi(n) >= sqrt(n/2)."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    limit = max(2 * m * m, 2)
    if limit > budget:
        raise BudgetExceeded(limit, budget)
    return _bucket_lookup(limit, m)


def bruteforce_fibers(m_max: int, budget: int = BRUTEFORCE_BUDGET) -> dict[int, TotientFiber]:
    """Brute-force fibers for every m <= m_max from one shared sieve."""
    import numpy as np

    if m_max < 1:
        raise DomainError(f"m_max must be >= 1, got {m_max}")
    limit = max(2 * m_max * m_max, 2)
    if limit > budget:
        raise BudgetExceeded(limit, budget)
    phi = phi_sieve(limit)
    idx = np.flatnonzero((phi >= 1) & (phi <= m_max))
    vals = phi[idx]
    order = np.argsort(vals, kind="stable")
    idx, vals = idx[order], vals[order]
    bounds = np.searchsorted(vals, np.arange(1, m_max + 2))
    return {
        m: TotientFiber(m, tuple(idx[bounds[m - 1] : bounds[m]].tolist()))
        for m in range(1, m_max + 1)
    }


def _bucket_lookup(limit: int, m: int) -> TotientFiber:
    import numpy as np

    phi = phi_sieve(limit)
    return TotientFiber(m, tuple(np.flatnonzero(phi == m).tolist()))
