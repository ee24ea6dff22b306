"""Non-equilibrium Casimir force and radiative heat flux between two
finite-thickness dissipative plates in one spatial dimension.

Natural units throughout: hbar = c = k_B = 1, lengths in nm, so frequencies
and temperatures are nm^-1 and pressures/fluxes are nm^-2.
"""

from .contributions import (
    ForceResult,
    Geometry,
    HeatResult,
    MixedHeatResult,
    Scenario,
    Temperatures,
    casimir_force,
    coth_factor,
    force_bath_integrand,
    force_ic_integrand,
    free_pressure_integrand,
    heat_bath_integrand,
    heat_flux,
    heat_ic_integrand,
    heat_kernels,
    heat_total_mixed,
    occupation,
)
from .limits import (
    LimitReport,
    halfspace_bath_pressure,
    identical_plates_heat,
    landauer_heat_halfspace,
    lifshitz_eq_force,
    lifshitz_noneq_force,
    make_limit_report,
    stefan_flux,
)
from .material import Material, refractive_index, susceptibility
from .quadrature import (
    QuadratureConfig,
    QuadratureError,
    brute_force_oracle,
    find_cutoff,
    integrate_semi_infinite,
)
from .slab_optics import interface_reflection, slab_absorption, slab_coefficients

__all__ = [
    "ForceResult", "Geometry", "HeatResult", "LimitReport", "Material",
    "MixedHeatResult", "QuadratureConfig", "QuadratureError", "Scenario",
    "Temperatures", "brute_force_oracle", "casimir_force", "coth_factor",
    "find_cutoff", "force_bath_integrand", "force_ic_integrand",
    "free_pressure_integrand", "halfspace_bath_pressure",
    "heat_bath_integrand", "heat_flux", "heat_ic_integrand", "heat_kernels",
    "heat_total_mixed", "identical_plates_heat", "integrate_semi_infinite",
    "interface_reflection", "landauer_heat_halfspace", "lifshitz_eq_force",
    "lifshitz_noneq_force", "make_limit_report", "occupation",
    "refractive_index", "slab_absorption", "slab_coefficients",
    "stefan_flux", "susceptibility",
]
