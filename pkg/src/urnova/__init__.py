"""Exact rational engine for symmetric statistics of exchangeable urn
sequences: conditional calculus, orthogonal degenerate decompositions,
weak-independence checking and tilted weak copies."""

from .models import (
    Alphabet,
    MixtureModel,
    RNG_ALGORITHM,
    Symbol,
    UrnModel,
    as_fraction,
    urn_model,
)
from .kernels import (
    SymmetricKernel,
    builtin_kernel,
    constant_kernel,
    expectation,
    from_table,
    indicator_kernel,
    max_cond_closed_form,
    max_mean_closed_form,
    symmetrize,
    ustatistic,
    zero_kernel,
)
from .conditional import (
    DiagonalFamily,
    cond_expectation,
    diagonal_family,
    expand_conditional,
    nested_conditional,
    nested_conditional_at,
    nested_conditional_sum,
    symmetrized_offdiagonal,
)
from .coefficients import (
    CoefficientTable,
    assumption_check,
    gamma_coeff,
    level_weight,
    pair_covariance_factor,
    phi_coeff,
    psi_coeff,
    theta_table,
)
from .decomposition import (
    HoeffdingDecomposition,
    covariance_levels,
    decompose,
    degenerate_cov,
    extract_kernel,
    is_degenerate,
    project_degenerate_ustat,
    project_level,
    ustat_norm_lower_constant,
    ustat_square_norm,
    wor_level_variance_derived,
    wor_level_variance_printed,
)
from .weak_independence import (
    DegeneracyReport,
    check_weak_independence,
    degenerate_basis,
    witness_conditional_closed_form,
    witness_kernel,
    witness_report,
)
from .weak_copy import (
    TiltedModel,
    build_weak_copy,
    dirichlet_moment,
    verify_weak_copy,
)

__version__ = "0.1.0"
