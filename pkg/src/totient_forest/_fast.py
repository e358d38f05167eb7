"""Compiled kernels for totients of integers below 2**50.

The modular product uses a float quotient estimate, which stays exact while
the modulus is below 2**50; callers must route larger inputs elsewhere.
"""

from __future__ import annotations

import numpy as np
from numba import njit

FAST_LIMIT = 1 << 50

_PRIMES = np.array([p for p in range(3, 1000) if all(p % q for q in range(2, int(p**0.5) + 1))], dtype=np.int64)
_MR_BASES = np.array([2, 3, 5, 7, 11, 13, 17, 19, 23], dtype=np.int64)


@njit(cache=True)
def _mulmod(a, b, n):
    q = np.int64(np.float64(a) * np.float64(b) / np.float64(n))
    r = np.int64(np.uint64(a) * np.uint64(b) - np.uint64(q) * np.uint64(n))
    while r < 0:
        r += n
    while r >= n:
        r -= n
    return r


@njit(cache=True)
def _powmod(a, e, n):
    r = np.int64(1)
    a = a % n
    while e > 0:
        if e & 1:
            r = _mulmod(r, a, n)
        a = _mulmod(a, a, n)
        e >>= 1
    return r


@njit(cache=True)
def _is_prime_odd(n, bases):
    # n odd, n > 1000, no factor below 1000
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        x = _powmod(a, d, n)
        if x == 1 or x == n - 1:
            continue
        composite = True
        for _ in range(s - 1):
            x = _mulmod(x, x, n)
            if x == n - 1:
                composite = False
                break
        if composite:
            return False
    return True


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _rho(n):
    c = np.int64(1)
    while True:
        y = np.int64(2)
        x = y
        ys = y
        r = 1
        q = np.int64(1)
        g = np.int64(1)
        m = 64
        while g == 1:
            x = y
            for _ in range(r):
                y = (_mulmod(y, y, n) + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (_mulmod(y, y, n) + c) % n
                    q = _mulmod(q, abs(x - y), n)
                g = _gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (_mulmod(ys, ys, n) + c) % n
                g = _gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


@njit(cache=True)
def _isqrt(n):
    r = np.int64(np.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@njit(cache=True)
def _phi_rough(n, primes, bases):
    """phi of n > 1 with no prime factor below 1000 (so at most few factors)."""
    if n < 1_000_000 or _is_prime_odd(n, bases):
        return n - 1
    stack = np.empty(64, dtype=np.int64)
    found = np.empty(64, dtype=np.int64)
    nfound = 0
    top = 0
    stack[0] = n
    top = 1
    while top > 0:
        top -= 1
        m = stack[top]
        if m < 1_000_000 or _is_prime_odd(m, bases):
            found[nfound] = m
            nfound += 1
            continue
        s = _isqrt(m)
        if s * s == m:
            stack[top] = s
            stack[top + 1] = s
            top += 2
            continue
        d = _rho(m)
        stack[top] = d
        stack[top + 1] = m // d
        top += 2
    result = n
    for i in range(nfound):
        p = found[i]
        seen = False
        for j in range(i):
            if found[j] == p:
                seen = True
                break
        if not seen:
            result = result // p * (p - 1)
    return result


@njit(cache=True)
def _phi(n, primes, bases):
    result = n
    if n % 2 == 0:
        result -= result // 2
        while n % 2 == 0:
            n //= 2
    for p in primes:
        if p * p > n:
            break
        if n % p == 0:
            result -= result // p
            while n % p == 0:
                n //= p
    if n > 1:
        if n < 1_000_000:
            result -= result // n
        else:
            result = result // n * _phi_rough(n, primes, bases)
    return result


@njit(cache=True)
def _walks(terms, n_lo, n_hi, limit, primes, bases):
    out = np.empty(n_hi - n_lo + 1, dtype=np.int64)
    for n in range(n_lo, n_hi + 1):
        y = np.int64(0)
        for k in range(n, 0, -1):
            z = terms[k - 1] + y
            if z >= limit:
                return out, n
            y = _phi(z, primes, bases)
        out[n - n_lo] = y
    return out, -1


@njit(cache=True)
def _trace(terms, n, limit, primes, bases):
    out = np.zeros(n + 1, dtype=np.int64)
    y = np.int64(0)
    for k in range(n, 0, -1):
        z = terms[k - 1] + y
        if z >= limit:
            return out, False
        y = _phi(z, primes, bases)
        out[k - 1] = y
    return out, True


def phi(n: int) -> int:
    """Totient of 1 <= n < 2**50."""
    return int(_phi(np.int64(n), _PRIMES, _MR_BASES))


def walks(terms: np.ndarray, n_lo: int, n_hi: int) -> np.ndarray | None:
    """Scoreboard values for n_lo..n_hi given terms[j-1] = a_j; None if any argument reaches 2**50."""
    out, bad = _walks(terms, n_lo, n_hi, FAST_LIMIT, _PRIMES, _MR_BASES)
    return None if bad >= 0 else out


def trace(terms: np.ndarray, n: int) -> np.ndarray | None:
    out, ok = _trace(terms, n, FAST_LIMIT, _PRIMES, _MR_BASES)
    return out if ok else None
