"""Single quartic fields K = Q(sqrt(g + h sqrt(base))) inside a fixed biquadratic closure."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .arith import (
    check_squarefree_int,
    fundamental_discriminant,
    is_square,
    squarefree_part,
)
from .dihedral import ConjugacyClass
from .errors import DomainError, ReducibleQuarticError
from .normcond import GeneratorTriple, third_quadratic


class GaloisType(str, Enum):
    K4 = "K4"
    C4 = "C4"
    D4 = "D4"


@dataclass(frozen=True)
class BiquadraticContext:
    """Q(sqrt a, sqrt b) with its three quadratic subfields."""

    a: int
    b: int
    xi: int = field(init=False)
    c3: int = field(init=False)
    disc_a: int = field(init=False)
    disc_b: int = field(init=False)
    disc_c3: int = field(init=False)

    def __post_init__(self):
        a = check_squarefree_int(self.a, "a")
        b = check_squarefree_int(self.b, "b")
        if a == b:
            raise DomainError("a and b must be distinct")
        object.__setattr__(self, "xi", math.gcd(abs(a), abs(b)))
        object.__setattr__(self, "c3", third_quadratic(a, b))
        object.__setattr__(self, "disc_a", fundamental_discriminant(a))
        object.__setattr__(self, "disc_b", fundamental_discriminant(b))
        object.__setattr__(self, "disc_c3", fundamental_discriminant(self.c3))

    @property
    def quadratics(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c3)

    @property
    def q_max(self) -> int:
        return max(abs(self.disc_a), abs(self.disc_b), abs(self.disc_c3))

    @property
    def C_ab(self) -> int:
        return 256 * abs(self.a) ** 3 * abs(self.b) ** 3

    def disc(self, c: int) -> int:
        """Fundamental discriminant of Q(sqrt c) for c one of the three quadratics."""
        if c not in self.quadratics:
            raise DomainError(f"{c} is not a quadratic subfield of Q(sqrt {self.a}, sqrt {self.b})")
        return fundamental_discriminant(c)


def is_square_in_quadratic(u: int, v: int, d: int) -> bool:
    """Is u + v sqrt(d) a square in Q(sqrt d)? d square-free, not 1."""
    if v == 0:
        return u == 0 or is_square(u) or (u * d > 0 and is_square(u * d))
    norm = u * u - d * v * v
    if not is_square(norm):
        return False
    s = math.isqrt(norm)
    # x^2 = (u +- s)/2 for x the rational part of the square root
    return any(t > 0 and is_square(2 * t) for t in (u + s, u - s))


def classify_galois(base: int, g: int, h: int) -> GaloisType:
    """Galois group of the closure of Q(sqrt(g + h sqrt base)) by square tests on g^2 - h^2 base."""
    base = check_squarefree_int(base, "base")
    if h == 0:
        raise DomainError("h must be nonzero")
    if is_square_in_quadratic(g, h, base):
        raise ReducibleQuarticError(f"x^4 - {2 * g}x^2 + {g * g - h * h * base} is reducible")
    c = g * g - h * h * base
    if is_square(c):
        return GaloisType.K4
    if c % base == 0 and is_square(c // base):
        return GaloisType.C4
    return GaloisType.D4


@dataclass(frozen=True)
class D4Field:
    """K = Q(sqrt(g + h sqrt(base))) with g^2 - h^2 base = n^2 target."""

    ctx: BiquadraticContext
    base: int
    target: int
    g: int
    h: int
    n: int
    m: int | None = None

    def __post_init__(self):
        if self.h == 0 or self.n <= 0:
            raise DomainError("need h != 0 and n > 0")
        if self.base == self.target or {self.base, self.target} - set(self.ctx.quadratics):
            raise DomainError("base and target must be two distinct quadratics of the context")
        if self.g * self.g - self.h * self.h * self.base != self.n * self.n * self.target:
            raise DomainError(
                f"g^2 - h^2 base != n^2 target for (g, h, n) = ({self.g}, {self.h}, {self.n})"
            )

    @classmethod
    def from_generator(cls, ctx: BiquadraticContext, base: int, g: int, h: int) -> D4Field:
        """Recover target and n from g^2 - h^2 base."""
        if h == 0:
            raise DomainError("h must be nonzero")
        c = g * g - h * h * base
        if c == 0:
            raise ReducibleQuarticError("g^2 = h^2 base")
        target = squarefree_part(c)
        n = math.isqrt(c // target)
        if target not in ctx.quadratics or target == base:
            raise DomainError(
                f"Q(sqrt({g} + {h} sqrt {base})) does not have closure containing "
                f"Q(sqrt {ctx.a}, sqrt {ctx.b}) as a D4 field"
            )
        return cls(ctx, base, target, g, h, n)

    @property
    def third(self) -> int:
        """The quadratic subfield of the closure that K does not extend."""
        return squarefree_part(self.base * self.target)

    @property
    def poly(self) -> tuple[int, int, int, int, int]:
        """Coefficients c0..c4 of x^4 - 2g x^2 + (g^2 - h^2 base)."""
        return (self.g * self.g - self.h * self.h * self.base, 0, -2 * self.g, 0, 1)

    @property
    def disc_bound(self) -> int:
        """|256 base^2 (g^2 - h^2 base)|, an upper bound for |disc K|."""
        return 256 * self.base**2 * abs(self.target) * self.n**2

    @property
    def poly_discriminant(self) -> int:
        return 256 * self.h**4 * self.base**2 * self.n**2 * self.target

    @property
    def galois_type(self) -> GaloisType:
        return classify_galois(self.base, self.g, self.h)

    @property
    def discs(self) -> tuple[int, int, int]:
        """Fundamental discriminants of F1 (third), F2 (base), F3 (target)."""
        return tuple(fundamental_discriminant(c) for c in (self.third, self.base, self.target))

    def is_admissible(self, p: int) -> bool:
        return p != 2 and (2 * self.base * self.target * self.h * self.n) % p != 0

    def conjugate(self) -> D4Field:
        """Q(sqrt(g - h sqrt base)), the other embedding of the same abstract field."""
        return D4Field(self.ctx, self.base, self.target, self.g, -self.h, self.n, self.m)

    def as_dict(self) -> dict:
        return {
            "a": self.ctx.a,
            "b": self.ctx.b,
            "base": self.base,
            "target": self.target,
            "g": self.g,
            "h": self.h,
            "n": self.n,
            "m": self.m,
            "poly": list(self.poly),
            "disc_bound": self.disc_bound,
            "galois_type": self.galois_type.value,
        }


def build_field(ctx: BiquadraticContext, triple: GeneratorTriple, m: int = 1) -> D4Field:
    """K_[m] = Q(sqrt(g0 m + h0 m sqrt base))."""
    if m < 1 or not _squarefree_positive(m):
        raise DomainError(f"m={m} must be a positive square-free integer")
    if math.gcd(m, abs(ctx.a * ctx.b)) != 1:
        raise DomainError(f"m={m} is not coprime to |ab|={abs(ctx.a * ctx.b)}")
    return D4Field(
        ctx, triple.base, triple.target, triple.g0 * m, triple.h0 * m, triple.n0 * m, m
    )


def _squarefree_positive(m: int) -> bool:
    return m == 1 or squarefree_part(m) == m


def extended_quadratics(K: D4Field) -> tuple[int, int]:
    if K.galois_type is not GaloisType.D4:
        raise DomainError("extended quadratic fields are defined for D4 fields only")
    return (K.base, K.target)


def _product(K1: D4Field, K2: D4Field, conj: bool) -> tuple[int, int]:
    d = K1.base
    h2 = -K2.h if conj else K2.h
    return (K1.g * K2.g + d * K1.h * h2, K1.g * h2 + K2.g * K1.h)


def _check_comparable(K1: D4Field, K2: D4Field) -> None:
    if K1.base != K2.base:
        raise DomainError("incomparable: fields have different quadratic subfields")


def is_same_field(K1: D4Field, K2: D4Field) -> bool:
    """Equality as subfields of Q-bar: the two radicands differ by a square of Q(sqrt base)."""
    _check_comparable(K1, K2)
    return is_square_in_quadratic(*_product(K1, K2, conj=False), K1.base)


def is_isomorphic(K1: D4Field, K2: D4Field) -> bool:
    """Equality up to isomorphism: K2 equals K1 or its conjugate."""
    _check_comparable(K1, K2)
    return is_same_field(K1, K2) or is_square_in_quadratic(*_product(K1, K2, conj=True), K1.base)


@dataclass(frozen=True)
class FieldLattice:
    quartics: dict[str, str]
    quadratics: dict[str, str]
    group_labels: dict[str, str]


def field_lattice(K: D4Field) -> FieldLattice:
    """Subfields of the Galois closure with their fixing subgroups of <r, s>."""
    g, h, n, d, t = K.g, K.h, K.n, K.base, K.target
    quartics = {
        "K": f"Q(sqrt({g} + {h}*sqrt({d})))",
        "K_conj": f"Q(sqrt({g} - {h}*sqrt({d})))",
        "K_rs": f"Q(sqrt({2 * g} - {2 * n}*sqrt({t})))",
        "K_r3s": f"Q(sqrt({2 * g} + {2 * n}*sqrt({t})))",
    }
    quadratics = {
        "F1": f"Q(sqrt({K.third}))",
        "F2": f"Q(sqrt({d}))",
        "F3": f"Q(sqrt({t}))",
    }
    group_labels = {
        "K": "<r^2 s>",
        "K_conj": "<s>",
        "K_rs": "<rs>",
        "K_r3s": "<r^3 s>",
        "Q": "<r^2>",
        "F1": "<r>",
        "F2": "<r^2, s>",
        "F3": "<r^2, rs>",
    }
    return FieldLattice(quartics, quadratics, group_labels)


# Exponents of p in disc(F1), disc(F2), disc(F3) by class of an inertia generator (odd p).
_TAME_TABLE = {
    ConjugacyClass.ID: (0, 0, 0),
    ConjugacyClass.R2: (0, 0, 0),
    ConjugacyClass.S: (1, 0, 1),
    ConjugacyClass.RS: (1, 1, 0),  # the table's [r^3 s]
    ConjugacyClass.R: (0, 1, 1),
}

# exp_p(D_K) and exp_p(D_Ktilde) columns, carried as reference data only
TAME_REFERENCE_FULL = {
    ConjugacyClass.ID: (0, 0),
    ConjugacyClass.R2: (2, 4),
    ConjugacyClass.S: (1, 4),
    ConjugacyClass.RS: (2, 4),
    ConjugacyClass.R: (3, 6),
}


def tame_profile(K: D4Field | None, cls: ConjugacyClass) -> tuple[int, int, int]:
    """Predicted (exp_p D_F1, exp_p D_F2, exp_p D_F3) for a tamely ramified odd p."""
    return _TAME_TABLE[ConjugacyClass(cls)]
