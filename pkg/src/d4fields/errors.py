"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: ``DomainError`` -> 3,
``ResourceBudgetError`` -> 4. Anything else is a bug.
"""


class D4Error(Exception):
    """Base class for all library errors."""


class DomainError(D4Error, ValueError):
    """Input is well formed but mathematically outside the supported domain."""


class EmptyFamilyError(DomainError):
    """Condition 1234 fails, so the family of D4 fields is empty."""


class UnsolvableError(DomainError):
    """A norm equation has no solution."""


class ReducibleQuarticError(DomainError):
    """The defining quartic x^4 - 2g x^2 + (g^2 - h^2 d) is reducible over Q."""


class InadmissiblePrimeError(DomainError):
    """Prime divides 2 * base * target * h * n, so Frobenius is not computed."""


class NotSquarefreeError(DomainError):
    """Polynomial over F_p shares a factor with its derivative."""


class IngestError(DomainError):
    """Class-group CSV violates the schema or references unknown fields."""


class ResourceBudgetError(D4Error):
    """A sieve or search would exceed its configured budget."""


class SearchBudgetError(ResourceBudgetError):
    """Generator-triple search exhausted its bound on n or h."""


class InconsistentFrobeniusError(D4Error, AssertionError):
    """Kronecker-pattern class disagrees with the factorization pattern mod p."""
