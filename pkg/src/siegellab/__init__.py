"""siegellab: exact arithmetic tables, convolution identities, L-values, and
primes-in-progressions statistics for real quadratic characters."""

__version__ = "0.1.0"

from .bounds import (
    BoundsReport,
    dickman_rho,
    munshi_beta,
    munshi_verify,
    shiu_ratio,
    smooth_count,
    tau_shift_bound_demo,
)
from .characters import (
    RealCharacter,
    chi_eval,
    chi_table,
    is_fundamental_discriminant,
    kronecker,
)
from .convolution import (
    ConvolutionPlan,
    build_lambda,
    build_lambda_prime,
    build_nu,
    dirichlet_convolve,
    verify_vonmangoldt_identity,
)
from .errors import CapacityError, ConfigError, NonConvergenceError, SiegelLabError
from .lvalues import (
    LValueResult,
    curly_l,
    exceptionality_score,
    l_one,
    l_one_class_number,
)
from .progressions import (
    DiscrepancyStats,
    LabTables,
    ProgressionReport,
    Theorem2Result,
    build_lab_tables,
    chebyshev_psi,
    coprime_sum,
    lemma_discrepancy_profile,
    main_term,
    prime_power_correction,
    progression_sum,
    theorem1_scan,
    theorem2_aggregate,
)
from .rough import (
    SiegelParams,
    default_R,
    rough_restrict,
    split_pm,
    squarefree_restrict,
    verify_rough_prime_support,
)
from .sieve import (
    sieve_gpf,
    sieve_mu,
    sieve_spf,
    sieve_square_part,
    sieve_tau_k,
    sieve_totient,
    sieve_vonmangoldt,
)
from .tables import ArithTable, SpfTable, TableCache

__all__ = [
    "ArithTable",
    "BoundsReport",
    "CapacityError",
    "ConfigError",
    "ConvolutionPlan",
    "DiscrepancyStats",
    "LValueResult",
    "LabTables",
    "NonConvergenceError",
    "ProgressionReport",
    "RealCharacter",
    "SiegelLabError",
    "SiegelParams",
    "SpfTable",
    "TableCache",
    "Theorem2Result",
    "build_lab_tables",
    "build_lambda",
    "build_lambda_prime",
    "build_nu",
    "chebyshev_psi",
    "chi_eval",
    "chi_table",
    "coprime_sum",
    "curly_l",
    "default_R",
    "dickman_rho",
    "dirichlet_convolve",
    "exceptionality_score",
    "is_fundamental_discriminant",
    "kronecker",
    "l_one",
    "l_one_class_number",
    "lemma_discrepancy_profile",
    "main_term",
    "munshi_beta",
    "munshi_verify",
    "prime_power_correction",
    "progression_sum",
    "rough_restrict",
    "shiu_ratio",
    "sieve_gpf",
    "sieve_mu",
    "sieve_spf",
    "sieve_square_part",
    "sieve_tau_k",
    "sieve_totient",
    "sieve_vonmangoldt",
    "smooth_count",
    "split_pm",
    "squarefree_restrict",
    "tau_shift_bound_demo",
    "theorem1_scan",
    "theorem2_aggregate",
    "verify_rough_prime_support",
    "verify_vonmangoldt_identity",
]
