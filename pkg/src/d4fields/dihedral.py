"""The dihedral group of order 8 acting on the four roots of x^4 - 2g x^2 + c.

Roots are labelled 0..3 for sqrt(g + h sqrt d), sqrt(g - h sqrt d), and
their negatives, in that order. Then r = (0 1 2 3) and s = (0 2), and
products compose right to left, so rs = (0 3)(1 2).

Quadratic subfields of the Galois closure line up with subgroups as
    F1 = Q(sqrt(base * target))   fixed by <r>
    F2 = Q(sqrt(base))            fixed by <r^2, s>
    F3 = Q(sqrt(target))          fixed by <r^2, rs>
"""

from __future__ import annotations

from enum import Enum
from itertools import product

import numpy as np

Perm = tuple[int, ...]

IDENTITY: Perm = (0, 1, 2, 3)
R: Perm = (1, 2, 3, 0)
S: Perm = (2, 1, 0, 3)


def compose(sigma: Perm, tau: Perm) -> Perm:
    """sigma after tau."""
    return tuple(sigma[tau[i]] for i in range(4))


def power(sigma: Perm, k: int) -> Perm:
    out = IDENTITY
    for _ in range(k % 4):  # every element order divides 4
        out = compose(sigma, out)
    return out


def order(sigma: Perm) -> int:
    k, cur = 1, sigma
    while cur != IDENTITY:
        cur = compose(sigma, cur)
        k += 1
    return k


def element(i: int, j: int) -> Perm:
    """r^i s^j."""
    return compose(power(R, i), S if j % 2 else IDENTITY)


def word(sigma: Perm) -> tuple[int, int]:
    """(i, j) with sigma = r^i s^j."""
    for i, j in product(range(4), range(2)):
        if element(i, j) == sigma:
            return i, j
    raise ValueError(f"{sigma} is not in D4")


def cycle_type(sigma: Perm) -> tuple[int, ...]:
    seen, lengths = set(), []
    for start in range(4):
        if start in seen:
            continue
        k, cur = 0, start
        while cur not in seen:
            seen.add(cur)
            cur = sigma[cur]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths))


ELEMENTS: tuple[Perm, ...] = tuple(element(i, j) for j in range(2) for i in range(4))


class ConjugacyClass(str, Enum):
    ID = "ID"
    R2 = "R2"
    R = "R"
    S = "S"
    RS = "RS"

    @property
    def members(self) -> tuple[Perm, ...]:
        return _MEMBERS[self]

    @property
    def representative(self) -> Perm:
        return self.members[0]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def fixed_points(self) -> int:
        return sum(1 for i in range(4) if self.representative[i] == i)

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return cycle_type(self.representative)

    @property
    def order(self) -> int:
        return order(self.representative)

    @property
    def symbol_pattern(self) -> tuple[int, int, int]:
        """Values of the characters cut out by F1, F2, F3 on this class."""
        i, j = word(self.representative)
        return ((-1) ** j, (-1) ** i, (-1) ** (i + j))

    def power(self, k: int) -> ConjugacyClass:
        return class_of(power(self.representative, k))


_MEMBERS = {
    ConjugacyClass.ID: (element(0, 0),),
    ConjugacyClass.R2: (element(2, 0),),
    ConjugacyClass.R: (element(1, 0), element(3, 0)),
    ConjugacyClass.S: (element(0, 1), element(2, 1)),
    ConjugacyClass.RS: (element(1, 1), element(3, 1)),
}

CLASSES = tuple(ConjugacyClass)


def class_of(sigma: Perm) -> ConjugacyClass:
    for cls, members in _MEMBERS.items():
        if sigma in members:
            return cls
    raise ValueError(f"{sigma} is not in D4")


def class_from_pattern(pattern: tuple[int, int, int], splits: bool) -> ConjugacyClass:
    """Class with the given (chi1, chi2, chi3); ``splits`` separates ID from R2."""
    if pattern == (1, 1, 1):
        return ConjugacyClass.ID if splits else ConjugacyClass.R2
    for cls in (ConjugacyClass.R, ConjugacyClass.S, ConjugacyClass.RS):
        if cls.symbol_pattern == pattern:
            return cls
    raise ValueError(f"{pattern} is not a D4 symbol pattern")


# Faithful 2-dimensional representation: r a quarter turn, s a reflection.
_RHO_R = np.array([[0, -1], [1, 0]], dtype=np.int64)
_RHO_S = np.array([[1, 0], [0, -1]], dtype=np.int64)


def rho(sigma: Perm) -> np.ndarray:
    i, j = word(sigma)
    return np.linalg.matrix_power(_RHO_R, i) @ np.linalg.matrix_power(_RHO_S, j)


def _linear_character(name: str):
    exps = {"trivial": (0, 0), "chi1": (0, 1), "chi2": (1, 0), "chi3": (1, 1)}[name]

    def chi(sigma: Perm) -> int:
        i, j = word(sigma)
        return (-1) ** (exps[0] * i + exps[1] * j)

    return chi


CHARACTER_NAMES = ("trivial", "chi1", "chi2", "chi3", "rho")
CHARACTER_DIMS = {"trivial": 1, "chi1": 1, "chi2": 1, "chi3": 1, "rho": 2}


def character_table() -> dict[str, dict[ConjugacyClass, int]]:
    table = {}
    for name in CHARACTER_NAMES[:4]:
        chi = _linear_character(name)
        table[name] = {cls: chi(cls.representative) for cls in CLASSES}
    table["rho"] = {cls: int(np.trace(rho(cls.representative))) for cls in CLASSES}
    return table


def rho_charpoly(cls: ConjugacyClass) -> list[int]:
    """Coefficients of det(1 - rho(g) T), ascending in T."""
    m = rho(cls.representative)
    det = int(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return [1, -int(np.trace(m)), det]


def linear_character(name: str, sigma: Perm) -> int:
    return _linear_character(name)(sigma)
