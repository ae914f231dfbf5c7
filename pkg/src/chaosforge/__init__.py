"""chaosforge: exact polynomial-chaos algebra for normal approximation.

Finite-dimensional Wiener chaos with exact moments, Malliavin-style
operators, Stein-equation certificates, fourth-moment variance
inequalities, Laguerre/Wiener Dirichlet structures, and the quadratic
variation of fractional Brownian motion with its exact total-variation
convergence rates.
"""

__version__ = "0.1.0"

from .corpus import (
    element_pair_corpus,
    kernel_pair_corpus,
    random_element,
    random_kernel,
    random_laguerre_eigenfunction,
    random_laguerre_element,
    random_polynomial,
    rng_from,
    spawn_rngs,
    unit_variance_element,
)
from .dirichlet import (
    LaguerreElement,
    LaguerreStructure,
    SpectralCertificate,
    WienerStructure,
    eigen_project_laguerre,
    laguerre_carre_du_champ,
    laguerre_generator,
    verify_h1_h2,
)
from .fbm import (
    FbmIncrementModel,
    QuadraticVariationStatistic,
    autocovariance,
    breuer_major_sigma_sq,
    exact_tv_bound,
    monte_carlo_distance,
    rate_table,
)
from .fourth_moment import (
    DirichletBoundReport,
    FourthMomentReport,
    contraction_fourth_cumulant,
    contraction_variance,
    dirichlet_fourth_moment_bound,
    moment_route_fourth_cumulant,
    moment_route_variance,
    variance_inequality_report,
)
from .gaussian_algebra import (
    GaussianPolynomial,
    HermiteTable,
    LaguerreTable,
    gamma_expectation,
    gaussian_expectation,
    hermite_eval,
    laguerre_eval,
)
from .kernels import BACKEND
from .malliavin import (
    HValuedChaos,
    carre_du_champ,
    derivative,
    divergence,
    duality_residual,
    ou_generator,
    ou_pseudo_inverse,
    stein_kernel_term,
)
from .stein import (
    BoundCheck,
    CltBound,
    DistanceReport,
    SteinSolution,
    clt_bound_independent_sum,
    dkw_epsilon,
    kolmogorov_distance,
    malliavin_stein_tv_bound,
    solution_certificate,
    tv_partition_distance,
    wasserstein_distance,
)
from .symmetric_tensor import (
    PlainTensor,
    SymmetricKernel,
    contract,
    kernel_inner,
    kernel_norm_sq,
    sym_contract,
    symmetrize,
)
from .wiener_chaos import (
    ChaosElement,
    chaos_product,
    evaluate,
    expectation,
    expectation_of_product,
    from_polynomial,
    max_abs_coefficient,
    moment,
    multiple_integral,
    sample,
    second_moment,
    to_polynomial,
    variance,
)

__all__ = [
    "BACKEND",
    "BoundCheck",
    "ChaosElement",
    "CltBound",
    "DirichletBoundReport",
    "DistanceReport",
    "FbmIncrementModel",
    "FourthMomentReport",
    "GaussianPolynomial",
    "HValuedChaos",
    "HermiteTable",
    "LaguerreElement",
    "LaguerreStructure",
    "LaguerreTable",
    "PlainTensor",
    "QuadraticVariationStatistic",
    "SpectralCertificate",
    "SteinSolution",
    "SymmetricKernel",
    "WienerStructure",
    "autocovariance",
    "breuer_major_sigma_sq",
    "carre_du_champ",
    "chaos_product",
    "clt_bound_independent_sum",
    "contract",
    "contraction_fourth_cumulant",
    "contraction_variance",
    "derivative",
    "dirichlet_fourth_moment_bound",
    "divergence",
    "dkw_epsilon",
    "duality_residual",
    "eigen_project_laguerre",
    "element_pair_corpus",
    "evaluate",
    "exact_tv_bound",
    "expectation",
    "expectation_of_product",
    "from_polynomial",
    "gamma_expectation",
    "gaussian_expectation",
    "hermite_eval",
    "kernel_inner",
    "kernel_norm_sq",
    "kernel_pair_corpus",
    "kolmogorov_distance",
    "laguerre_carre_du_champ",
    "laguerre_eval",
    "laguerre_generator",
    "malliavin_stein_tv_bound",
    "max_abs_coefficient",
    "moment",
    "moment_route_fourth_cumulant",
    "moment_route_variance",
    "monte_carlo_distance",
    "multiple_integral",
    "ou_generator",
    "ou_pseudo_inverse",
    "random_element",
    "random_kernel",
    "random_laguerre_eigenfunction",
    "random_laguerre_element",
    "random_polynomial",
    "rate_table",
    "rng_from",
    "sample",
    "second_moment",
    "solution_certificate",
    "spawn_rngs",
    "stein_kernel_term",
    "sym_contract",
    "symmetrize",
    "to_polynomial",
    "tv_partition_distance",
    "unit_variance_element",
    "variance",
    "variance_inequality_report",
    "verify_h1_h2",
    "wasserstein_distance",
]
