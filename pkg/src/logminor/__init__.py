"""Sampling log-determinants of principal submatrices, with a priori error bounds.

The mean differential entropy of k-variable subsystems of a Gaussian system
with covariance ``M`` is an affine function of the mean log-minor
``E[log det M_I]`` over uniformly random k-subsets ``I``. This package
estimates it by sampling, bounds the error from the condition number alone,
and checks everything against exhaustive enumeration where that is feasible.
"""

from .bounds import (
    BoundContext,
    bound_set,
    cv_bounds,
    plan_sample_size,
    se_bounds,
    tail_bound_thm1,
    tail_chebyshev,
    var_bound_thm1,
    var_bound_thm2,
    var_bound_thm3,
)
from .exact import conjecture_search, enumerate_exact, two_level_moments
from .generators import (
    GeneratorSpec,
    gen_e1,
    gen_e2,
    gen_e3,
    gen_e4,
    gen_haar_orthogonal,
    gen_two_level_diagonal,
    gen_wishart,
    generate,
)
from .linalg import IndexSet, SpdMatrix, Spectrum, eigenvalues_sym, log_det, make_spd, principal_submatrix
from .sampling import (
    SamplePlan,
    empirical_tail,
    estimate_mean_entropy,
    histogram,
    sample_index_set,
    sample_logminors,
)

__version__ = "0.1.0"
