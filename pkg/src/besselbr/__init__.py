"""Extremes of squared Bessel and Brownian scalar-product processes.

A simulation and numerical-verification toolkit: exact-increment path
simulation, the norming constants and locally rescaled processes whose maxima
converge to the Brown-Resnick process, a truncation-controlled simulator of
that limit, the closed-form tail asymptotics of the product laws involved,
and the empirical machinery that turns the convergence statements into
desk-scale statistical checks.
"""

__version__ = "0.1.0"

from .brown_resnick import (
    BRTruncationSpec,
    HRParams,
    TruncationError,
    extremal_coefficient,
    gumbel_cdf,
    gumbel_quantile,
    hr_bivariate_cdf,
    hr_lambda,
    sample_br,
    sample_br_batch,
)
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureError,
    QuadratureSpec,
    StreamKey,
    integrate,
    ln_gamma,
    reg_gamma_upper,
    std_normal_cdf,
    std_normal_quantile,
    std_normal_sample,
    std_normal_tail,
)
from .paths import (
    SamplePath,
    TimeGrid,
    make_dyadic_grid,
    sample_bm,
    sample_scalar_product,
    sample_squared_bessel,
)
from .rescale import (
    NormingConstants,
    bessel_constants,
    generic_constants,
    local_bessel_batch,
    local_bessel_split_batch,
    local_bessel_times,
    local_scalar_batch,
    local_scalar_times,
    max_process,
    sample_local_bessel,
    sample_local_scalar,
    scalar_constants,
)
from .stats import (
    EmpiricalSample,
    SweepRecord,
    SweepReport,
    bivariate_cdf_diff,
    fdd_check,
    ks_statistic,
    marginal_gumbel_sweep,
    two_sample_ks,
)
from .tails import (
    TailFunction,
    TailParams,
    check_condition_kk,
    check_gumbel_intensity,
    chi_square_density,
    chi_square_tail,
    chi_square_tail_asymptotic,
    chi_square_tail_fn,
    chi_square_tail_params,
    laplace_tail_fn,
    product_tail_oracle,
    scalar_product_tail_asymptotic,
    scalar_product_tail_params,
    weibull_product_density,
    weibull_product_tail,
)
