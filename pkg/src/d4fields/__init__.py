"""Explicit families of D4 quartic fields with a prescribed biquadratic closure.

Norm-criterion tests and minimal generators, enumeration by discriminant bound,
Frobenius classes, Chebotarev statistics, local zeta factorizations and the
parameter formulas of the effective Chebotarev bound.
"""

from .errors import (
    D4Error,
    DomainError,
    EmptyFamilyError,
    InadmissiblePrimeError,
    IngestError,
    InconsistentFrobeniusError,
    NotSquarefreeError,
    ReducibleQuarticError,
    ResourceBudgetError,
    SearchBudgetError,
    UnsolvableError,
)
from .normcond import check_condition_1234, is_norm, minimal_triple, phi
from .quartic import BiquadraticContext, D4Field, build_field, classify_galois
from .family import count_squarefree_coprime, enumerate_family, verify_lower_bound
from .frobenius import artin_symbol, scan_primes
from .lseries import chebotarev_report, local_euler_check, rho_coefficients
from .analytic import AnalyticConfig, ev_split_count, ingest_class_groups, thresholds

__version__ = "0.1.0"
