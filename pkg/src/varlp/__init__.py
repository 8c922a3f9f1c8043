"""Variable-exponent Lebesgue spaces, maximal and Hardy operators, and two-weight criteria."""

from .exponents import (
    DomainError,
    ExponentFunction,
    InvalidExponentError,
    check_constant_outside,
    check_ineq_1_1,
    check_log_holder,
    conjugate,
    inf_sup_on,
)
from .spaces import (
    AlignmentError,
    GridFunction,
    NormOverflowError,
    holder_check,
    luxemburg_norm,
    modular,
    weighted_norm,
)
from .weights import Weight, check_doubling, sigma, weight_norm

__version__ = "0.1.0"
