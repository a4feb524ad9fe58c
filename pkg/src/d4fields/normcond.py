"""Norm criteria for a biquadratic pair (a, b) and the canonical generator triple.

``b`` is a norm from Q(sqrt(a)) exactly when the conic g^2 - a h^2 = b n^2 has a
nontrivial rational point. By Hasse-Minkowski that is decided by the Hilbert
symbols (a, b)_v at v = infinity and at the primes dividing 2ab.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from enum import Enum

from .arith import check_squarefree_int, is_square, kronecker, prime_factors
from .errors import DomainError, EmptyFamilyError, SearchBudgetError, UnsolvableError

DEFAULT_MAX_N = 10_000
DEFAULT_MAX_H_STEPS = 5_000_000


class Subfamily(str, Enum):
    """Which norm equation a generator triple satisfies."""

    GHNN = "ghnn"  # g^2 - h^2 a = n^2 b
    SUB1 = "sub1"  # g^2 - h^2 a = n^2 ab/xi^2
    SUB2 = "sub2"  # g^2 - h^2 b = n^2 ab/xi^2


@dataclass(frozen=True)
class NormCriterionResult:
    co1: bool
    co2: bool
    co3: bool

    @property
    def condition1234(self) -> bool:
        return self.co1 or self.co2 or self.co3

    def as_dict(self) -> dict:
        return {**asdict(self), "condition1234": self.condition1234}


@dataclass(frozen=True)
class GeneratorTriple:
    g0: int
    h0: int
    n0: int
    subfamily: Subfamily
    base: int
    target: int

    def residual(self) -> int:
        """g0^2 - h0^2 base - n0^2 target; zero for a valid triple."""
        return self.g0**2 - self.h0**2 * self.base - self.n0**2 * self.target

    def as_dict(self) -> dict:
        return {
            "g0": self.g0,
            "h0": self.h0,
            "n0": self.n0,
            "subfamily": self.subfamily.value,
            "base": self.base,
            "target": self.target,
        }


def third_quadratic(a: int, b: int) -> int:
    """ab / gcd(|a|, |b|)^2, square-free whenever a and b are."""
    xi = math.gcd(abs(a), abs(b))
    return a * b // (xi * xi)


def _valuation(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers; p = -1 means the real place."""
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol needs nonzero arguments")
    if p == -1:
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = _valuation(a, p)
    beta, v = _valuation(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker(u, p) ** beta * kronecker(v, p) ** alpha


def is_norm(b: int, a: int) -> bool:
    """True iff b is the norm of an element of Q(sqrt(a))."""
    a = check_squarefree_int(a, "a")
    b = check_squarefree_int(b, "b")
    if a == b:
        raise DomainError("a and b must be distinct")
    places = [-1] + sorted(set(prime_factors(2 * a * b)))
    return all(hilbert_symbol(a, b, p) == 1 for p in places)


def check_condition_1234(a: int, b: int) -> NormCriterionResult:
    a = check_squarefree_int(a, "a")
    b = check_squarefree_int(b, "b")
    if a == b:
        raise DomainError("a and b must be distinct")
    # -b = a is a legitimate input to is_norm only when -b != a
    co2 = _is_norm_any(-b, a)
    co3 = _is_norm_any(-a, b)
    return NormCriterionResult(co1=is_norm(b, a), co2=co2, co3=co3)


def _is_norm_any(c: int, a: int) -> bool:
    """Norm test allowing c = a, c = 1 (trivially a norm) or c = -1."""
    if c == 1:
        return True
    if c == a:
        # a = -(-sqrt(a))(sqrt(a)) up to sign: a is a norm iff -1 is
        return _is_norm_any(-1, a)
    places = [-1] + sorted(set(prime_factors(2 * a * c)))
    return all(hilbert_symbol(a, c, p) == 1 for p in places)


def pell_fundamental(d: int) -> tuple[int, int]:
    """Least x, y > 0 with x^2 - d y^2 = 1, from the continued fraction of sqrt(d)."""
    if d <= 0 or is_square(d):
        raise DomainError(f"Pell equation needs a positive non-square, got {d}")
    a0 = math.isqrt(d)
    m, q, a = 0, 1, a0
    p_prev, p_cur = 1, a0
    q_prev, q_cur = 0, 1
    while p_cur * p_cur - d * q_cur * q_cur != 1:
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
    return p_cur, q_cur


def _h_bounds(a: int, N: int, pell: tuple[int, int] | None) -> tuple[int, int]:
    """Range of h that must contain the least positive h with g^2 - a h^2 = N."""
    if a < 0:
        # g^2 = N - |a| h^2 >= 0
        return 1, math.isqrt(N // -a) if N > 0 else 0
    x1, y1 = pell
    # Nagell's bounds on the fundamental solution of each class
    if N > 0:
        hi = math.isqrt(y1 * y1 * N // (2 * (x1 + 1))) + 1
        return 1, hi
    lo = max(1, math.isqrt(-N // a))
    hi = math.isqrt(y1 * y1 * -N // (2 * (x1 - 1))) + 1
    return lo, hi


def minimal_triple(
    a: int,
    target: int,
    subfamily: Subfamily = Subfamily.GHNN,
    max_n: int = DEFAULT_MAX_N,
    max_h_steps: int = DEFAULT_MAX_H_STEPS,
) -> GeneratorTriple:
    """Least n > 0, then least h > 0, then g >= 0 with g^2 - h^2 a = n^2 target."""
    a = check_squarefree_int(a, "a")
    target = check_squarefree_int(target, "target")
    if a == target or not is_norm(target, a):
        raise UnsolvableError(f"{target} is not a norm from Q(sqrt({a}))")
    pell = pell_fundamental(a) if a > 0 else None
    steps = 0
    for n in range(1, max_n + 1):
        N = n * n * target
        lo, hi = _h_bounds(a, N, pell)
        for h in range(lo, hi + 1):
            g2 = a * h * h + N
            if g2 >= 0:
                g = math.isqrt(g2)
                if g * g == g2:
                    return GeneratorTriple(g, h, n, subfamily, a, target)
        steps += max(hi - lo + 1, 0)
        if steps > max_h_steps:
            raise SearchBudgetError(
                f"h-search budget {max_h_steps} exhausted at n={n} for a={a}, target={target}"
            )
    raise SearchBudgetError(f"no solution with n <= {max_n} for a={a}, target={target}")


def phi(a: int, b: int, **budget) -> GeneratorTriple:
    """The canonical generator triple for the ordered pair (a, b)."""
    a = check_squarefree_int(a, "a")
    b = check_squarefree_int(b, "b")
    if a == b:
        raise DomainError("a and b must be distinct")
    c3 = third_quadratic(a, b)
    if is_norm(b, a):
        return minimal_triple(a, b, Subfamily.GHNN, **budget)
    if is_norm(c3, a):
        return minimal_triple(a, c3, Subfamily.SUB1, **budget)
    if is_norm(c3, b):
        return minimal_triple(b, c3, Subfamily.SUB2, **budget)
    raise EmptyFamilyError(f"(a, b) = ({a}, {b}) fails Condition 1234")
