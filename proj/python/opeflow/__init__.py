"""Operator-product calculus and critical observables for the deformed
current-algebra model of the integer quantum Hall plateau transition."""

from ._core import (  # noqa: F401
    CouplingState,
    beta_eval,
    beta_system,
    blowup_time,
    classify_stability,
    closed_form,
    delta_q,
    g_star,
    g_star_dual,
    g_star_half_integer,
    green_analytic,
    integrate,
    kt_free_energy,
    kt_vortex_energy,
    ope_product,
    scaling_dimension_m,
    sigma_xx_star,
    square_deviation_check,
    tree_conductance_analytic,
    tree_conductance_numeric,
    verify_all,
    vortex_count_action,
)

__all__ = [
    "CouplingState",
    "beta_eval",
    "beta_system",
    "blowup_time",
    "classify_stability",
    "closed_form",
    "delta_q",
    "g_star",
    "g_star_dual",
    "g_star_half_integer",
    "green_analytic",
    "integrate",
    "kt_free_energy",
    "kt_vortex_energy",
    "ope_product",
    "scaling_dimension_m",
    "sigma_xx_star",
    "square_deviation_check",
    "tree_conductance_analytic",
    "tree_conductance_numeric",
    "verify_all",
    "vortex_count_action",
]
