"""Integer and elementary analytic primitives.

Everything that touches field arithmetic uses Python ints (unbounded).
Sieve tables are numpy arrays indexed by machine words.
"""

from __future__ import annotations

import math
import os

import numpy as np
from scipy.special import expi

from .errors import DomainError, ResourceBudgetError

# Largest table a sieve may allocate (entries); override with D4_SIEVE_LIMIT.
SIEVE_LIMIT = int(os.environ.get("D4_SIEVE_LIMIT", 500_000_000))

# li(2) = Ei(log 2), 40 digits.
LI2 = 1.045163780117492784844588889194613136522615578151


def _check_budget(n: int, limit: int | None) -> None:
    limit = SIEVE_LIMIT if limit is None else limit
    if n > limit:
        raise ResourceBudgetError(f"sieve size {n} exceeds budget {limit}")


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of |n| by trial division."""
    n = abs(n)
    if n == 0:
        raise DomainError("0 has no factorization")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_squarefree(n: int) -> bool:
    if n == 0:
        raise DomainError("is_squarefree is undefined at 0")
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        p += 1 if p == 2 else 2
    return True


def squarefree_part(n: int) -> int:
    """Signed square-free kernel: n = squarefree_part(n) * k**2."""
    if n == 0:
        raise DomainError("square-free part of 0 is undefined")
    sign = -1 if n < 0 else 1
    n = abs(n)
    core = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e & 1:
            core *= p
        p += 1 if p == 2 else 2
    return sign * core * n


def check_squarefree_int(c: int, name: str = "value") -> int:
    """Validate c as a square-free integer outside {0, 1}."""
    c = int(c)
    if c in (0, 1):
        raise DomainError(f"{name} must not be 0 or 1, got {c}")
    if not is_squarefree(c):
        raise DomainError(f"{name}={c} is not square-free")
    return c


def fundamental_discriminant(c: int) -> int:
    """Discriminant of Q(sqrt(c)) for square-free c: c if c = 1 mod 4, else 4c."""
    check_squarefree_int(c, "c")
    return c if c % 4 == 1 else 4 * c


def euler_phi(q: int) -> int:
    result = q
    for p in prime_factors(q):
        result = result // p * (p - 1)
    return result


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n), extended to all integers n."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if d % 2 == 0:
            return 0
        if v & 1 and d % 8 in (3, 5):
            result = -result
    # n odd positive: Jacobi symbol with reciprocity
    a = d % n
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


def prime_sieve(x: int, limit: int | None = None) -> np.ndarray:
    """All primes <= x, ascending, as int64."""
    x = int(x)
    if x < 2:
        raise DomainError("prime_sieve needs x >= 2")
    _check_budget(x // 2, limit)
    # odd-only: index i stands for 2i + 1
    size = (x - 1) // 2 + 1
    odd = np.ones(size, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(x) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    primes = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate([np.array([2], dtype=np.int64), primes])


def moebius_sieve(Z: int, limit: int | None = None) -> np.ndarray:
    """mu(m) for 0 <= m <= Z as int8 (mu[0] = 0)."""
    Z = int(Z)
    if Z < 1:
        raise DomainError("moebius_sieve needs Z >= 1")
    _check_budget(Z, limit)
    mu = np.ones(Z + 1, dtype=np.int8)
    mu[0] = 0
    if Z >= 2:
        for p in prime_sieve(Z, limit).tolist():
            mu[p::p] *= -1
            if p * p <= Z:
                mu[p * p :: p * p] = 0
    return mu


def powmod_batch(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base**exp % mod for int64 arrays; needs mod < 2**31."""
    base = np.asarray(base, dtype=np.int64) % mod
    exp = np.asarray(exp, dtype=np.int64).copy()
    result = np.ones_like(base) % mod
    while np.any(exp):
        odd = (exp & 1).astype(bool)
        result = np.where(odd, result * base % mod, result)
        base = base * base % mod
        exp >>= 1
    return result


def legendre_batch(d: int, primes: np.ndarray) -> np.ndarray:
    """(d/p) for an array of odd primes p < 2**31, via Euler's criterion."""
    primes = np.asarray(primes, dtype=np.int64)
    r = powmod_batch(np.full_like(primes, 0) + (d % primes), (primes - 1) // 2, primes)
    out = np.zeros(primes.shape, dtype=np.int8)
    out[r == 1] = 1
    out[r == primes - 1] = -1
    return out


def log_integral(x: float) -> float:
    """Li(x) = integral from 2 to x of dt / log t."""
    if x < 2:
        raise DomainError("log_integral is defined for x >= 2")
    if x < 2.5:
        # Taylor expansion of 1/log t about 2 avoids cancellation near x = 2.
        return _li_near_two(x)
    return float(expi(math.log(x))) - LI2


def _li_near_two(x: float) -> float:
    # integrate f(t) = 1/log t on [2, x] with 16-point Gauss-Legendre
    nodes, weights = np.polynomial.legendre.leggauss(16)
    half = (x - 2.0) / 2.0
    t = 2.0 + half * (nodes + 1.0)
    return float(half * np.sum(weights / np.log(t)))
