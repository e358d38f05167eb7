"""Exact arithmetic kernels: totient, primality, factorization, divisors.

Everything works on Python ints but refuses inputs outside the unsigned
64-bit range, so results never depend on arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from . import _fast

U64_MAX = (1 << 64) - 1

# Bases that make Miller-Rabin deterministic below 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))]


class DomainError(ValueError):
    """Argument outside the domain of an arithmetic function."""


def check_u64(n: int, what: str = "value") -> int:
    if n < 0 or n > U64_MAX:
        raise OverflowError(f"{what} {n} is outside the unsigned 64-bit range")
    return n


def _positive(n: int, name: str) -> None:
    if n < 1:
        raise DomainError(f"{name} must be >= 1, got {n}")
    check_u64(n, name)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ``(prime, exponent)`` pairs in ascending prime order."""

    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for every n < 2**64."""
    check_u64(n, "n")
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:12]:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while not d & 1:
        d >>= 1
        s += 1
    for a in _MR_BASES:
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


def _brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (Brent's variant of rho)."""
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
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
                g = gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


def _factor_into(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _factor_into(r, out)
        _factor_into(r, out)
        return
    d = _brent(n)
    _factor_into(d, out)
    _factor_into(n // d, out)


def _factor_dict(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    else:
        if n > 1:
            _factor_into(n, out)
        return out
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=1 << 16)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(_factor_dict(n).items()))


def factorize(n: int) -> Factorization:
    """Factor n >= 1; ``factorize(1)`` has no factors."""
    _positive(n, "n")
    return Factorization(_factor_cached(n))


def euler_phi(n: int) -> int:
    """Euler's totient of n, via the product formula over the factorization."""
    _positive(n, "n")
    if n < _fast.FAST_LIMIT:
        return _fast.phi(n)
    return euler_phi_reference(n)


def euler_phi_reference(n: int) -> int:
    """Pure-Python totient for the whole 64-bit range (no compiled kernel)."""
    _positive(n, "n")
    result = n
    for p, _ in _factor_cached(n):
        result = result // p * (p - 1)
    return result


def divisors(n: int, order: str = "ascending") -> list[int]:
    """All divisors of n, generated from its factorization and sorted by ``order``."""
    _positive(n, "n")
    if order not in ("ascending", "descending"):
        raise ValueError(f"order must be 'ascending' or 'descending', not {order!r}")
    divs = [1]
    for p, e in _factor_cached(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    divs.sort(reverse=order == "descending")
    return divs


# Hard ceiling for phi_sieve; an int64 table of this length is ~1.6 GB.
SIEVE_MAX = 200_000_000


def phi_sieve(limit: int) -> np.ndarray:
    """Totients of 0..limit as an int64 array; index i holds phi(i), index 0 is 0.

    Memory is 8 bytes per entry; ``limit`` above ``SIEVE_MAX`` raises MemoryError.
    """
    if limit < 1:
        raise DomainError(f"limit must be >= 1, got {limit}")
    if limit > SIEVE_MAX:
        raise MemoryError(f"sieve limit {limit} exceeds SIEVE_MAX={SIEVE_MAX}")
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in np.flatnonzero(is_p).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi
