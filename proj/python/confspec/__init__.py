"""Dirichlet eigenvalues of conformally flat metrics and universal inequality checks."""

from ._confspec import (
    ConfigError,
    ConfspecError,
    ConvergenceError,
    DimensionError,
    Domain,
    DomainError,
    IndexError,
    MarginError,
    Model,
    ModelMismatch,
    NoRealRoot,
    Spectrum,
    analytic_box_spectrum,
    bound_next_eigenvalue,
    check_sequence,
    coordinate,
    half_space_weighted,
    hyperbolic_ball_cross_chart,
    radial_weighted,
    riemannian_volume,
    run_config,
    solve,
    weyl_estimate,
)

__all__ = [
    "ConfigError",
    "ConfspecError",
    "ConvergenceError",
    "DimensionError",
    "Domain",
    "DomainError",
    "IndexError",
    "MarginError",
    "Model",
    "ModelMismatch",
    "NoRealRoot",
    "Spectrum",
    "analytic_box_spectrum",
    "bound_next_eigenvalue",
    "check_sequence",
    "coordinate",
    "half_space_weighted",
    "hyperbolic_ball_cross_chart",
    "radial_weighted",
    "riemannian_volume",
    "run_config",
    "solve",
    "weyl_estimate",
]
