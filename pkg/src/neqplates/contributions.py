"""Assembly of the force and heat-flux observables for a two-plate scenario.

A Scenario holds two dissipative slabs (materials + thicknesses), the gap a,
and four temperatures: T_phi_L/R occupy the right/left-moving field modes
prepared far outside the cavity, T_B_L/R are the internal-bath temperatures
of the plates.

Force: total = free_term - ic_term - bath_term.  The free and initial-
condition pressures each diverge like the zero-point integral of k; only
their difference is integrated (its integrand decays once the materials turn
transparent).  The stored free_term is the zero-point-subtracted free
radiation pressure (pi^2/3)(T_phi_L^2 + T_phi_R^2)/(4 pi), and ic_term is
defined as free_term minus the combined integral, so the decomposition
identity holds exactly with every piece finite.

Heat: total = q_ic + q_b with no regularization needed.  The
temperature-independent (vacuum) pieces of the two contributions cancel
pointwise through the kernel identity

    [K_ic_L - K_ic_R] + [K_b_L - K_b_R] = 0,

where K_ic_X = |t_X|^2 (1-|r_Y|^2)/|denom|^2 and
K_b_X = A_X (1-|r_Y|^2)/|denom|^2 (A_X the slab absorptivity), so q_ic and
q_b are reported as their thermal (occupation-weighted) parts.  The total is
integrated as a single grouped integrand whose equilibrium null holds
pointwise to rounding.

All outputs are in natural units (hbar = c = k_B = 1): pressures and fluxes
in inverse length squared when lengths are in nm.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .material import Material, refractive_index
from .quadrature import (
    CHI_TRANSPARENCY_TOL,
    QuadratureConfig,
    QuadratureError,
    build_breakpoints,
    find_cutoff,
    integrate_breakpoints,
    rotated_vacuum_integral,
)
from .slab_optics import slab_absorption, slab_coefficients

# occupation numbers below exp(-60) are dropped from thermal integrals
THERMAL_CUTOFF_FACTOR = 60.0


@dataclass(frozen=True)
class Geometry:
    """Gap width and plate thicknesses (lengths; thickness may be 0 or inf)."""

    a: float
    d_L: float
    d_R: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("gap width a must be > 0")
        if self.d_L < 0 or self.d_R < 0:
            raise ValueError("thicknesses must be >= 0")


@dataclass(frozen=True)
class Temperatures:
    """Field (mode) temperatures and plate-bath temperatures, all >= 0."""

    T_phi_L: float
    T_phi_R: float
    T_B_L: float
    T_B_R: float

    def __post_init__(self):
        for v in (self.T_phi_L, self.T_phi_R, self.T_B_L, self.T_B_R):
            if v < 0:
                raise ValueError("temperatures must be >= 0")

    def as_tuple(self):
        return (self.T_phi_L, self.T_phi_R, self.T_B_L, self.T_B_R)


@dataclass(frozen=True)
class Scenario:
    geom: Geometry
    mat_L: Material
    mat_R: Material
    temps: Temperatures

    def swapped(self):
        """Mirror image: L and R materials, thicknesses, temperatures."""
        g, t = self.geom, self.temps
        return Scenario(
            Geometry(g.a, g.d_R, g.d_L),
            self.mat_R,
            self.mat_L,
            Temperatures(t.T_phi_R, t.T_phi_L, t.T_B_R, t.T_B_L),
        )


@dataclass(frozen=True)
class ForceResult:
    """total = free_term - ic_term - bath_term (pressures, 1/length^2)."""

    total: float
    free_term: float
    ic_term: float
    bath_term: float
    quad_error: float


@dataclass(frozen=True)
class HeatResult:
    """total = q_ic + q_b within quad_error (fluxes, 1/length^2)."""

    total: float
    q_ic: float
    q_b: float
    quad_error: float


@dataclass(frozen=True)
class MixedHeatResult:
    """Landauer-style regrouping of the heat flux.

    terms = (phi_L, phi_R, bath) with occupation differences taken against
    the right bath; total = phi_L - phi_R + bath = HeatResult.total.
    """

    total: float
    terms: tuple
    quad_error: float


def occupation(T, omega):
    """Bose occupation N = 1/(exp(omega/T) - 1); 0 for T = 0."""
    if T <= 0.0:
        return np.zeros_like(np.asarray(omega, dtype=float))
    x = np.asarray(omega, dtype=float) / T
    with np.errstate(over="ignore"):
        return np.where(x < 700.0, 1.0 / np.expm1(np.minimum(x, 700.0)), 0.0)


def coth_factor(T, omega):
    """coth(omega/(2T)) = 1 + 2N; returns 1 for T = 0.

    Computed through expm1, which reproduces the small-omega Laurent series
    2T/omega + omega/(6T) + ... to full precision.
    """
    return 1.0 + 2.0 * occupation(T, omega)


def _slab_quantities(sc, omega):
    """r, t, absorptivity for both plates and the cavity denominator."""
    w = np.asarray(omega, dtype=float)
    n_L = refractive_index(sc.mat_L, w)
    n_R = refractive_index(sc.mat_R, w)
    r_L, t_L = slab_coefficients(n_L, sc.geom.d_L, w)
    r_R, t_R = slab_coefficients(n_R, sc.geom.d_R, w)
    A_L = slab_absorption(n_L, sc.geom.d_L, w)
    A_R = slab_absorption(n_R, sc.geom.d_R, w)
    D = np.abs(1.0 - r_L * r_R * np.exp(2j * w * sc.geom.a)) ** 2
    return r_L, t_L, A_L, r_R, t_R, A_R, D


def heat_kernels(sc, omega):
    """Transmission kernels (K_ic_L, K_ic_R, K_b_L, K_b_R).

    K_ic_X filters radiation crossing the cavity from side X; K_b_X filters
    radiation emitted by plate X's internal bath.  They obey the pointwise
    identity (K_ic_L - K_ic_R) + (K_b_L - K_b_R) = 0.
    """
    r_L, t_L, A_L, r_R, t_R, A_R, D = _slab_quantities(sc, omega)
    x_L = np.abs(r_L) ** 2
    x_R = np.abs(r_R) ** 2
    k_ic_l = np.abs(t_L) ** 2 * (1.0 - x_R) / D
    k_ic_r = np.abs(t_R) ** 2 * (1.0 - x_L) / D
    k_b_l = A_L * (1.0 - x_R) / D
    k_b_r = A_R * (1.0 - x_L) / D
    return k_ic_l, k_ic_r, k_b_l, k_b_r


def free_pressure_integrand(temps, k):
    """Unconfined radiation pressure density k [coth_L + coth_R]."""
    k = np.asarray(k, dtype=float)
    return k * (coth_factor(temps.T_phi_L, k) + coth_factor(temps.T_phi_R, k))


def force_ic_integrand(sc, k):
    """Pressure density of the mode (initial-condition) contribution:
    k [coth_phi_L |t_L|^2 (1+|r_R|^2) + coth_phi_R |t_R|^2 (1+|r_L|^2)] / |denom|^2.
    """
    k = np.asarray(k, dtype=float)
    r_L, t_L, _, r_R, t_R, _, D = _slab_quantities(sc, k)
    ic_l = np.abs(t_L) ** 2 * (1.0 + np.abs(r_R) ** 2) / D
    ic_r = np.abs(t_R) ** 2 * (1.0 + np.abs(r_L) ** 2) / D
    return k * (
        coth_factor(sc.temps.T_phi_L, k) * ic_l
        + coth_factor(sc.temps.T_phi_R, k) * ic_r
    )


def _bath_brackets(sc, omega):
    """B_L = (1+|r_R|^2) A_L / |denom|^2 and its mirror."""
    r_L, _, A_L, r_R, _, A_R, D = _slab_quantities(sc, omega)
    b_l = (1.0 + np.abs(r_R) ** 2) * A_L / D
    b_r = (1.0 + np.abs(r_L) ** 2) * A_R / D
    return b_l, b_r


def _require_dissipative(sc, what):
    for side, mat in (("left", sc.mat_L), ("right", sc.mat_R)):
        if mat.dissipationless:
            raise ValueError(
                f"{what} is identically zero for the dissipationless {side} "
                "material (no absorption, A = 0); use the analytic zero "
                "instead of integrating."
            )


def force_bath_integrand(sc, omega):
    """Pressure density radiated by the plate baths:
    omega [coth_B_L B_L + coth_B_R B_R], B_X = (1+|r_Y|^2) A_X / |denom|^2.
    """
    _require_dissipative(sc, "the bath force contribution")
    w = np.asarray(omega, dtype=float)
    b_l, b_r = _bath_brackets(sc, w)
    return w * (
        coth_factor(sc.temps.T_B_L, w) * b_l
        + coth_factor(sc.temps.T_B_R, w) * b_r
    )


def heat_ic_integrand(sc, omega):
    """Flux density of the mode contribution:
    omega [coth_phi_L K_ic_L - coth_phi_R K_ic_R]."""
    w = np.asarray(omega, dtype=float)
    k_ic_l, k_ic_r, _, _ = heat_kernels(sc, w)
    return w * (
        coth_factor(sc.temps.T_phi_L, w) * k_ic_l
        - coth_factor(sc.temps.T_phi_R, w) * k_ic_r
    )


def heat_bath_integrand(sc, omega):
    """Flux density of the bath contribution:
    omega [coth_B_L K_b_L - coth_B_R K_b_R]."""
    _require_dissipative(sc, "the bath heat contribution")
    w = np.asarray(omega, dtype=float)
    _, _, k_b_l, k_b_r = heat_kernels(sc, w)
    return w * (
        coth_factor(sc.temps.T_B_L, w) * k_b_l
        - coth_factor(sc.temps.T_B_R, w) * k_b_r
    )


def _check_finite_thickness(sc):
    if not (math.isfinite(sc.geom.d_L) and math.isfinite(sc.geom.d_R)):
        raise ValueError(
            "infinite plate thickness: use the half-space expressions in the "
            "limits module"
        )


def _breakpoints(sc, cfg, w_hi, include_thermal=True):
    mats_d = [(sc.mat_L, sc.geom.d_L), (sc.mat_R, sc.geom.d_R)]
    bps = build_breakpoints(mats_d, sc.geom.a, 0.0, w_hi, cfg)
    tmax = max(sc.temps.as_tuple())
    if include_thermal and tmax > 0.0:
        # resolve the occupation-number scale near omega = 0
        th = np.linspace(0.0, min(THERMAL_CUTOFF_FACTOR * tmax, w_hi), 257)
        bps = np.unique(np.concatenate([bps, th]))
    return bps


def casimir_force(sc, quad=None):
    """Regularized radiation pressure on the cavity, three-term breakdown.

    The total is integrated as a single grouped integrand with all large
    cancellations performed algebraically beforehand:

        4 k (|u|^2 - Re u)/|denom|^2
          + 2 k [N_phi_L (1 - IC_L) + N_phi_R (1 - IC_R)]
          - 2 w [N_B_L B_L + N_B_R B_R],       u = r_L r_R e^{2i k a},

    which is pointwise identical to [free - ic - bath] through the identity
    2 - IC_L - IC_R - B_L - B_R = 4(|u|^2 - Re u)/|denom|^2 (a consequence of
    |t|^2 + A = 1 - |r|^2).  The temperature-independent first term is
    evaluated on the imaginary frequency axis (see rotated_vacuum_integral),
    where it is smooth and positive; the occupation-weighted remainder decays
    exponentially and is integrated over the thermal window on the real axis.
    The bath term is integrated separately only to provide the breakdown;
    ic_term is defined as free_term minus (total + bath), so
    total = free_term - ic_term - bath_term is exact.  The overall
    normalization is 1/(4 pi); at zero temperature with near-perfect mirrors
    the total tends to the perfect-mirror attraction magnitude pi/(24 a^2).
    """
    quad = quad or QuadratureConfig()
    _check_finite_thickness(sc)
    t = sc.temps
    wc = quad.cutoff_factor * find_cutoff(
        [sc.mat_L, sc.mat_R], t.as_tuple(), CHI_TRANSPARENCY_TOL
    )
    a = sc.geom.a
    mats_d = [(sc.mat_L, sc.geom.d_L), (sc.mat_R, sc.geom.d_R)]
    tmax = max(t.as_tuple())

    vac, e_vac = rotated_vacuum_integral(mats_d, a, quad)

    def thermal_part(k):
        k = np.asarray(k, dtype=float)
        r_L, t_L, A_L, r_R, t_R, A_R, D = _slab_quantities(sc, k)
        x_L = np.abs(r_L) ** 2
        x_R = np.abs(r_R) ** 2
        ic_l = np.abs(t_L) ** 2 * (1.0 + x_R) / D
        ic_r = np.abs(t_R) ** 2 * (1.0 + x_L) / D
        b_l = (1.0 + x_R) * A_L / D
        b_r = (1.0 + x_L) * A_R / D
        out = 2.0 * k * (
            occupation(t.T_phi_L, k) * (1.0 - ic_l)
            + occupation(t.T_phi_R, k) * (1.0 - ic_r)
        )
        out -= 2.0 * k * (
            occupation(t.T_B_L, k) * b_l + occupation(t.T_B_R, k) * b_r
        )
        return out

    if tmax > 0.0:
        w_th = min(THERMAL_CUTOFF_FACTOR * tmax, wc)
        try:
            th, e_th = integrate_breakpoints(
                thermal_part, _breakpoints(sc, quad, w_th), quad
            )
        except QuadratureError as exc:
            th, e_th = exc.value, exc.error
    else:
        th, e_th = 0.0, 0.0
    tot, e_tot = vac + th, e_vac + e_th

    if sc.mat_L.dissipationless and sc.mat_R.dissipationless:
        bath, e_bath = 0.0, 0.0
    else:
        def bath_f(w):
            w = np.asarray(w, dtype=float)
            b_l, b_r = _bath_brackets(sc, w)
            out = np.zeros_like(w)
            if not sc.mat_L.dissipationless:
                out += w * coth_factor(t.T_B_L, w) * b_l
            if not sc.mat_R.dissipationless:
                out += w * coth_factor(t.T_B_R, w) * b_r
            return out

        # absorption makes this integrand positive and slowly (log-like)
        # converging: no oscillatory tail bound applies, integrate the full
        # range up to the transparency cutoff
        try:
            bath, e_bath = integrate_breakpoints(
                bath_f, _breakpoints(sc, quad, wc), quad
            )
        except QuadratureError as exc:
            bath, e_bath = exc.value, exc.error

    norm = 1.0 / (4.0 * math.pi)
    total = tot * norm
    free_term = (math.pi**2 / 3.0) * (t.T_phi_L**2 + t.T_phi_R**2) * norm
    bath_term = bath * norm
    ic_term = free_term - total - bath_term
    return ForceResult(total, free_term, ic_term, bath_term, (e_tot + e_bath) * norm)


def _thermal_window(sc):
    tmax = max(sc.temps.as_tuple())
    return THERMAL_CUTOFF_FACTOR * tmax


def heat_flux(sc, quad=None):
    """Net energy flux from left to right across the gap.

    q_ic and q_b are the occupation-weighted (thermal) parts of the mode and
    bath contributions; their temperature-independent parts cancel pointwise
    by the kernel identity and are omitted.  The total is integrated as one
    grouped integrand, so the all-temperatures-equal null holds to rounding.
    """
    quad = quad or QuadratureConfig()
    _check_finite_thickness(sc)
    t = sc.temps
    w_hi = _thermal_window(sc)
    if w_hi == 0.0:
        return HeatResult(0.0, 0.0, 0.0, 0.0)
    bps = _breakpoints(sc, quad, w_hi)

    def parts(w):
        w = np.asarray(w, dtype=float)
        k_ic_l, k_ic_r, k_b_l, k_b_r = heat_kernels(sc, w)
        ic = 2.0 * w * (
            occupation(t.T_phi_L, w) * k_ic_l - occupation(t.T_phi_R, w) * k_ic_r
        )
        b = 2.0 * w * (
            occupation(t.T_B_L, w) * k_b_l - occupation(t.T_B_R, w) * k_b_r
        )
        return ic, b

    def _soft(f):
        # tiny fluxes can put the relative target below the floating-point
        # floor of the error estimator: keep the value, report the error
        try:
            return integrate_breakpoints(f, bps, quad)
        except QuadratureError as exc:
            return exc.value, exc.error

    q_ic, e_ic = _soft(lambda w: parts(w)[0])
    q_b, e_b = _soft(lambda w: parts(w)[1])
    # near equilibrium the grouped total is pointwise ~0, so a relative
    # target is meaningless: floor the tolerance at the contribution scale
    tcfg = dataclasses.replace(
        quad,
        abs_tol=max(quad.abs_tol, quad.rel_tol * (abs(q_ic) + abs(q_b))),
    )
    try:
        total, e_t = integrate_breakpoints(lambda w: sum(parts(w)), bps, tcfg)
    except QuadratureError as exc:
        total, e_t = exc.value, exc.error
    return HeatResult(total, q_ic, q_b, e_ic + e_b + e_t)


def heat_total_mixed(sc, quad=None):
    """Heat flux regrouped into Landauer-style occupation differences.

    total = integral of 2 omega [ (N_phi_L - N_B_R) K_ic_L
                                 - (N_phi_R - N_B_R) K_ic_R
                                 + (N_B_L  - N_B_R) K_b_L ],
    equal to heat_flux(sc).total; the three terms carry genuinely different
    transmission kernels, which is what breaks a single-kernel Landauer
    description of the general configuration.
    """
    quad = quad or QuadratureConfig()
    _check_finite_thickness(sc)
    t = sc.temps
    w_hi = _thermal_window(sc)
    if w_hi == 0.0:
        return MixedHeatResult(0.0, (0.0, 0.0, 0.0), 0.0)
    bps = _breakpoints(sc, quad, w_hi)

    def term(w, t_hot, t_ref, which):
        w = np.asarray(w, dtype=float)
        kern = heat_kernels(sc, w)[which]
        return 2.0 * w * (occupation(t_hot, w) - occupation(t_ref, w)) * kern

    out, err = [], 0.0
    for t_hot, which in ((t.T_phi_L, 0), (t.T_phi_R, 1), (t.T_B_L, 2)):
        if t_hot == t.T_B_R:
            out.append(0.0)
            continue
        v, e = integrate_breakpoints(
            lambda w, th=t_hot, wh=which: term(w, th, t.T_B_R, wh), bps, quad
        )
        out.append(v)
        err += e
    total = out[0] - out[1] + out[2]
    return MixedHeatResult(total, tuple(out), err)
