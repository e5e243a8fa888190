"""Superoscillations and supershifts over Clifford algebras.

Paravectors ``x = x0 + x1 e1 + ... + xn en`` live in the real Clifford
algebra with ``ei^2 = -1``.  Functions are evaluated either slice-wise
(``x = u + j v``) or as monogenic Fueter series.
"""

from .clifford import Multivector, Paravector, geometric_product, paravector_inverse, slice_split
from .combinatorics import MultiIndex, c_k_constant, multi_indices, perm_sum_e
from .errors import (
    BudgetError,
    CliffordError,
    ConfigError,
    ConsistencyError,
    DimensionError,
    DomainError,
    SingularityError,
    TruncationError,
)
from .fueter import fueter_eval, fueter_eval_direct, fueter_partial, fueter_table
from .harness import ConvergenceRow, ExperimentConfig, emit, run_cauchy, run_convergence
from .monogenic import (
    CliffordPolynomial,
    FueterSeries,
    ck_extend,
    ck_product,
    derivative_moment,
    fueter_polynomial,
    monogenic_exp,
)
from .slice import (
    GrowthFit,
    SliceSeries,
    cauchy_kernel_left,
    cauchy_reconstruct,
    exp_paravector,
    exp_series,
    star_product_left,
    star_product_right,
)
from .superosc import (
    SuperoscSpec,
    a1_norm_estimate,
    binomial_coeffs,
    error_bound_slice,
    eval_FN_monogenic,
    eval_FN_slice,
    lagrange_coeffs,
)
from .supershift import (
    EntireMonogenicFn,
    EntireSliceFn,
    FrequencyProfile,
    multifreq_exponent,
    operator_U_monogenic,
    operator_V_monogenic,
    operator_V_slice,
    supershift_monogenic,
    supershift_multifreq_monogenic,
    supershift_multifreq_slice,
    supershift_slice,
)
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
