"""Toeplitz algebras of spherical isometries."""

from ._core import (  # noqa: F401
    ConditioningError,
    Error,
    ParseError,
    PreconditionError,
    ResourceError,
    Symbol,
    ToeplitzElement,
    UsageError,
    __version__,
    check_ids,
    commutant_class,
    cross_section_norms,
    explain,
    gamma_residual,
    is_toeplitz,
    phi_map,
    project,
    run_scenario,
    semicommutator,
    sphere_fixed_point_residual,
    sphere_moment,
    spectrum_membership,
    symbol_eval,
    symbol_map,
    szego_defect,
    weighted_toeplitz,
)
