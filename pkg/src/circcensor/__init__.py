"""Nonparametric density estimation for arc-censored circular data."""

__version__ = "0.1.0"

from .exceptions import *  # noqa: F401,F403
from .geometry import TWO_PI, Arc, arc_contains, arc_length, in_window, normalize_angle
from .sampling import (
    REFERENCE_MODELS,
    CensoredObservation,
    CensoredSample,
    Deterministic,
    IndependentPair,
    Mixture,
    PointMass,
    UniformAnchorFixedArc,
    UniformCircle,
    VonMises,
    bessel_i0,
    density,
    draw_censoring_arc,
    generate_sample,
    sample,
    vonmises_pdf,
)
from .sieve import (
    CoverageFunction,
    DensityEstimate,
    SieveFit,
    build_coverage,
    calibrate_kappa,
    contrast_value,
    density_eval,
    estimate_density,
    fit_coefficients,
    fit_sieve,
    penalty_value,
    psi_hat_eval,
    select_model,
    trig_basis_eval,
)
from .evaluation import (
    PUBLISHED_RECOVERY,
    GridSpec,
    MiseReport,
    VonMisesRecovery,
    ise,
    mise_monte_carlo,
    parameter_recovery_study,
    rate_diagnostic,
    recover_vonmises,
    replication_rng,
)
from .io import read_sample, write_sample
