"""The explicit family K_[m], m square-free and coprime to ab, and its counting function."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import euler_phi, moebius_sieve, prime_factors, squarefree_part
from .errors import EmptyFamilyError
from .normcond import GeneratorTriple, is_norm, phi
from .quartic import BiquadraticContext, D4Field, build_field

ZETA2 = math.pi**2 / 6


@dataclass(frozen=True)
class FamilySlice:
    ctx: BiquadraticContext
    triple: GeneratorTriple
    X: float
    m_bound: int
    members: tuple[D4Field, ...]

    def __len__(self) -> int:
        return len(self.members)


def m_bound(ctx: BiquadraticContext, triple: GeneratorTriple, X: float) -> int:
    """Largest m with 256 |a|^3 |b|^3 n0^2 m^2 <= X."""
    X = int(X) if float(X).is_integer() else X
    if isinstance(X, int):
        # exact: floor(sqrt(X / (n0^2 C_ab)))
        return math.isqrt(X // (triple.n0**2 * ctx.C_ab))
    return math.floor(math.sqrt(X) / (16 * triple.n0 * math.sqrt(abs(ctx.a) ** 3 * abs(ctx.b) ** 3)))


def admissible_ms(bound: int, q: int) -> list[int]:
    """Square-free m <= bound with gcd(m, q) = 1, ascending."""
    if bound < 1:
        return []
    mu = moebius_sieve(bound)
    ms = np.flatnonzero(mu)
    return [int(m) for m in ms if math.gcd(int(m), q) == 1]


def enumerate_family(
    ctx: BiquadraticContext, triple: GeneratorTriple | None = None, X: float = 1.0
) -> FamilySlice:
    """All K_[m] whose discriminant bound is at most X, ascending in m."""
    if triple is None:
        triple = phi(ctx.a, ctx.b)
    bound = m_bound(ctx, triple, X)
    members = tuple(build_field(ctx, triple, m) for m in admissible_ms(bound, abs(ctx.a * ctx.b)))
    return FamilySlice(ctx, triple, X, bound, members)


def squarefree_density(q: int) -> float:
    """phi(q)/(q zeta(2)) * prod_{p | q} (1 - p^-2)^-1."""
    dens = euler_phi(q) / (q * ZETA2)
    for p in prime_factors(q):
        dens /= 1 - p**-2
    return dens


@dataclass(frozen=True)
class SquarefreeCount:
    Z: float
    q: int
    count: int
    main_term: float

    @property
    def residual(self) -> float:
        return self.count - self.main_term


def _coprime_count(N: int, q_primes: list[int]) -> int:
    """#{1 <= m <= N : gcd(m, q) = 1} by inclusion-exclusion over the primes of q."""
    total = 0
    k = len(q_primes)
    for mask in range(1 << k):
        d, sign = 1, 1
        for i in range(k):
            if mask >> i & 1:
                d *= q_primes[i]
                sign = -sign
        total += sign * (N // d)
    return total


def count_squarefree_coprime(Z: float, q: int) -> SquarefreeCount:
    """|{m <= Z square-free, gcd(m, q) = 1}| via sum_{d^2 | m} mu(d), plus the main term."""
    if Z < 1:
        raise ValueError("Z must be >= 1")
    N = math.floor(Z)
    q_primes = prime_factors(q)
    D = math.isqrt(N)
    mu = moebius_sieve(max(D, 1))
    count = 0
    for d in np.flatnonzero(mu).tolist():
        if d > D or math.gcd(d, q) != 1:
            continue
        count += int(mu[d]) * _coprime_count(N // (d * d), q_primes)
    return SquarefreeCount(Z, q, count, squarefree_density(q) * Z)


@dataclass(frozen=True)
class LowerBoundRow:
    X: float
    m_bound: int
    count: int
    ratio: float


@dataclass(frozen=True)
class LowerBoundReport:
    ctx: BiquadraticContext
    triple: GeneratorTriple | None
    rows: tuple[LowerBoundRow, ...]
    limit: float | None
    empty: bool

    @property
    def nondecreasing(self) -> bool:
        ratios = [r.ratio for r in self.rows if r.count > 0]
        return all(x <= y for x, y in zip(ratios, ratios[1:]))


def limiting_ratio(ctx: BiquadraticContext, triple: GeneratorTriple) -> float:
    """lim |T(X)| / X^(1/2) = density(|ab|) / (16 n0 sqrt(|a|^3 |b|^3))."""
    scale = 16 * triple.n0 * math.sqrt(abs(ctx.a) ** 3 * abs(ctx.b) ** 3)
    return squarefree_density(abs(ctx.a * ctx.b)) / scale


def verify_lower_bound(ctx: BiquadraticContext, X_list) -> LowerBoundReport:
    try:
        triple = phi(ctx.a, ctx.b)
    except EmptyFamilyError:
        return LowerBoundReport(ctx, None, (), None, True)
    q = abs(ctx.a * ctx.b)
    rows = []
    for X in X_list:
        bound = m_bound(ctx, triple, X)
        count = count_squarefree_coprime(bound, q).count if bound >= 1 else 0
        rows.append(LowerBoundRow(X, bound, count, count / math.sqrt(X)))
    return LowerBoundReport(ctx, triple, tuple(rows), limiting_ratio(ctx, triple), False)


@dataclass(frozen=True)
class SubfamilyFlag:
    label: str
    quadratic_subfield: int
    extended: tuple[int, int]
    nonempty: bool


def six_decomposition(ctx: BiquadraticContext) -> tuple[SubfamilyFlag, ...]:
    """Nonemptiness of the six subfamilies F_{4,c}(u, v), each decided by its own norm test.

    F_{4,c}(u, v) is nonempty iff the other extended quadratic v' is a norm from Q(sqrt c).
    """
    a, b, c3 = ctx.a, ctx.b, ctx.c3
    specs = [
        ("F4,a(a,b)", a, (a, b), b),
        ("F4,b(a,b)", b, (a, b), a),
        ("F4,a(a,ab/xi^2)", a, (a, c3), c3),
        ("F4,ab/xi^2(a,ab/xi^2)", c3, (a, c3), a),
        ("F4,b(b,ab/xi^2)", b, (b, c3), c3),
        ("F4,ab/xi^2(b,ab/xi^2)", c3, (b, c3), b),
    ]
    return tuple(
        SubfamilyFlag(label, sub, ext, is_norm(other, sub)) for label, sub, ext, other in specs
    )


def member_key(K: D4Field) -> tuple[int, int]:
    """Canonical key for family members: K_[m1] = K_[m2] iff keys match.

    Radicands differ by the rational factor m2/m1, which is a square in Q(sqrt base)
    exactly when m1 m2 lies in Q*^2 or base Q*^2.
    """
    m = K.m if K.m is not None else 1
    return tuple(sorted((squarefree_part(m), squarefree_part(m * K.base))))

