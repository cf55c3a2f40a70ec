"""Networked SIS epidemic model with distancing control."""

from ._core import (
    Error,
    EpidemicParams,
    Network,
    Trajectory,
    build_system_matrices,
    classify_regime,
    endemic_closed_form,
    endemic_fixed_point,
    find_diagonal_lyapunov,
    generate_geometric_network,
    is_strongly_connected,
    lyapunov_margin,
    rho_M_closed_form,
    run_scenario,
    simulate,
    spectral_radius,
    step_basic,
    step_controlled,
    uniqueness_probe,
    validate_assumptions,
    verify_dfe_descent,
    verify_half_bound,
    build_endemic_audit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
