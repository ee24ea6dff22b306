"""Closed-form limiting cases: zero thickness, half-spaces, equilibrium.

These serve both as user-facing results and as convergence oracles for the
finite-thickness engine.  All half-space expressions use the single-interface
reflection coefficient rho = (1-n)/(1+n); the thick-slab limit |q| -> 0 of
the slab coefficients reduces to it.

Cancellation note: the non-equilibrium half-space pressure integrand is the
bracket coth * (1 - (1-x_L)(1+x_R)/|1-w|^2) with w = rho_L rho_R e^{2i w a}
and x = |rho|^2.  Expanded exactly (using |w|^2 = x_L x_R) the bracket is
(x_L - x_R - 2 Re w + 2 x_L x_R)/|1-w|^2, which vanishes smoothly as the
materials turn transparent instead of as a difference of near-equal terms;
that exact regrouping is what is integrated.
"""

import math
from dataclasses import dataclass

import numpy as np

from .material import refractive_index
from .quadrature import (
    CHI_TRANSPARENCY_TOL,
    QuadratureConfig,
    build_breakpoints,
    find_cutoff,
    integrate_breakpoints,
    rotated_vacuum_integral,
)
from .slab_optics import interface_reflection, slab_absorption, slab_coefficients


@dataclass(frozen=True)
class LimitReport:
    """Finite-engine value against a closed-form limit."""

    finite_value: float
    limit_value: float
    relative_gap: float
    regime_label: str  # one of d_zero, d_infinite, equilibrium, identical_plates


def make_limit_report(finite_value, limit_value, regime_label, floor=1e-300):
    gap = abs(finite_value - limit_value) / max(abs(limit_value), floor)
    return LimitReport(finite_value, limit_value, gap, regime_label)


def stefan_flux(T_L, T_R):
    """Blackbody flux between the two mode temperatures: pi^2/3 (T_L^2 - T_R^2)."""
    if T_L < 0 or T_R < 0:
        raise ValueError("temperatures must be >= 0")
    return (math.pi**2 / 3.0) * (T_L**2 - T_R**2)


def _occupation(T, omega):
    if T <= 0.0:
        return np.zeros_like(omega)
    x = omega / T
    with np.errstate(over="ignore", divide="ignore"):
        return np.where(x < 700.0, 1.0 / np.expm1(np.minimum(x, 700.0)), 0.0)


def _interface_quantities(mat_L, mat_R, a, omega):
    rho_L = interface_reflection(refractive_index(mat_L, omega))
    rho_R = interface_reflection(refractive_index(mat_R, omega))
    w = rho_L * rho_R * np.exp(2j * omega * a)
    D = np.abs(1.0 - w) ** 2
    return np.abs(rho_L) ** 2, np.abs(rho_R) ** 2, w, D


def _halfspace_breakpoints(mat_L, mat_R, a, temps, cfg):
    """Breakpoints for the occupation-weighted (thermal window) integrals."""
    wc = cfg.cutoff_factor * find_cutoff([mat_L, mat_R], temps, CHI_TRANSPARENCY_TOL)
    tmax = max(temps) if temps else 0.0
    w_hi = min(60.0 * tmax, wc) if tmax > 0.0 else wc
    # infinite thickness: interface reflection governs the resonance seeding
    bps = build_breakpoints([(mat_L, math.inf), (mat_R, math.inf)], a, 0.0, w_hi, cfg)
    if tmax > 0.0:
        bps = np.unique(np.concatenate([bps, np.linspace(0.0, w_hi, 257)]))
    return bps


def _halfspace_vacuum(mat_L, mat_R, a, cfg):
    v, _ = rotated_vacuum_integral([(mat_L, math.inf), (mat_R, math.inf)], a, cfg)
    return v


def lifshitz_noneq_force(a, mat_L, mat_R, T_L, T_R, quad=None):
    """Thick-plate (d -> infinity) radiation pressure out of equilibrium.

    (1/4pi) * integral of omega [ 4(|w|^2 - Re w)/|1-w|^2
        + 2 N_L (x_L - x_R - 2 Re w + 2 x_L x_R)/|1-w|^2 + (L <-> R) ].
    The temperature-independent first term is evaluated on the imaginary
    axis (rotated_vacuum_integral); the occupation-weighted remainder is
    integrated over the thermal window.  Reduces to the equilibrium Lifshitz
    pressure at T_L = T_R.
    """
    quad = quad or QuadratureConfig()
    val = _halfspace_vacuum(mat_L, mat_R, a, quad)
    if max(T_L, T_R) > 0.0:
        bps = _halfspace_breakpoints(mat_L, mat_R, a, (T_L, T_R), quad)

        def f(omega):
            x_L, x_R, w, D = _interface_quantities(mat_L, mat_R, a, omega)
            wre = w.real
            ww = np.abs(w) ** 2
            br_l = (x_L - x_R - 2.0 * wre + 2.0 * ww) / D
            br_r = (x_R - x_L - 2.0 * wre + 2.0 * ww) / D
            return 2.0 * omega * (
                _occupation(T_L, omega) * br_l
                + _occupation(T_R, omega) * br_r
            )

        th, _ = integrate_breakpoints(f, bps, quad)
        val += th
    return val / (4.0 * math.pi)


def lifshitz_eq_force(a, mat_L, mat_R, T, quad=None, d_L=None, d_R=None):
    """Equilibrium Lifshitz-form pressure (1/pi) * int k coth(k/2T) (|w|^2 - Re w)/|1-w|^2.

    With d_L/d_R given, w is built from the finite-thickness slab reflection
    coefficients instead of the single-interface ones, which is the form the
    assembled three-term force must reproduce at full equilibrium.  The
    zero-point part of coth (the 1 in 1 + 2N) is evaluated on the imaginary
    axis; the occupation part over the thermal window.
    """
    quad = quad or QuadratureConfig()
    dd_L = math.inf if d_L is None else d_L
    dd_R = math.inf if d_R is None else d_R
    slabs = d_L is not None or d_R is not None

    def _refl(mat, d, k):
        n = refractive_index(mat, k)
        if slabs:
            r, _ = slab_coefficients(n, d, k)
            return r
        return interface_reflection(n)

    vac, _ = rotated_vacuum_integral([(mat_L, dd_L), (mat_R, dd_R)], a, quad)
    val = vac / 4.0
    if T > 0.0:
        wc = quad.cutoff_factor * find_cutoff(
            [mat_L, mat_R], (T,), CHI_TRANSPARENCY_TOL
        )
        w_hi = min(60.0 * T, wc)
        bps = build_breakpoints(
            [(mat_L, dd_L), (mat_R, dd_R)], a, 0.0, w_hi, quad
        )
        bps = np.unique(np.concatenate([bps, np.linspace(0.0, w_hi, 257)]))

        def f(k):
            w = _refl(mat_L, dd_L, k) * _refl(mat_R, dd_R, k) * np.exp(2j * k * a)
            D = np.abs(1.0 - w) ** 2
            return 2.0 * k * _occupation(T, k) * (np.abs(w) ** 2 - w.real) / D

        th, _ = integrate_breakpoints(f, bps, quad)
        val += th
    return val / math.pi


def halfspace_bath_pressure(a, mat_L, mat_R, T_BL, T_BR, quad=None):
    """Thick-plate bath pressure, zero-point subtracted.

    (1/4pi) * [ integral 2 omega (N_BL c_L + N_BR c_R)
                - integral 4 omega (|w|^2 - Re w)/|1-w|^2 ],
    c_L = (1-x_L)(1+x_R)/|1-w|^2.  Equals the thermal free pressure at the
    bath temperatures minus lifshitz_noneq_force(T_BL, T_BR) identically.
    """
    quad = quad or QuadratureConfig()
    val = -_halfspace_vacuum(mat_L, mat_R, a, quad)
    if max(T_BL, T_BR) > 0.0:
        bps = _halfspace_breakpoints(mat_L, mat_R, a, (T_BL, T_BR), quad)

        def f(omega):
            x_L, x_R, w, D = _interface_quantities(mat_L, mat_R, a, omega)
            c_l = (1.0 - x_L) * (1.0 + x_R) / D
            c_r = (1.0 - x_R) * (1.0 + x_L) / D
            return 2.0 * omega * (
                _occupation(T_BL, omega) * c_l
                + _occupation(T_BR, omega) * c_r
            )

        th, _ = integrate_breakpoints(f, bps, quad)
        val += th
    return val / (4.0 * math.pi)


def landauer_heat_halfspace(a, mat_L, mat_R, T_BL, T_BR, quad=None):
    """Thick-plate total heat: single-kernel Landauer form.

    integral of 2 omega (N_BL - N_BR) (1-x_L)(1-x_R)/|1-w|^2.
    """
    quad = quad or QuadratureConfig()
    if T_BL == T_BR:
        return 0.0
    bps = _halfspace_breakpoints(mat_L, mat_R, a, (T_BL, T_BR), quad)

    def f(omega):
        x_L, x_R, _, D = _interface_quantities(mat_L, mat_R, a, omega)
        dn = _occupation(T_BL, omega) - _occupation(T_BR, omega)
        return 2.0 * omega * dn * (1.0 - x_L) * (1.0 - x_R) / D

    val, _ = integrate_breakpoints(f, bps, quad)
    return val


def identical_plates_heat(a, d, mat, T_L, T_R, quad=None):
    """Heat flux for identical plates with matched per-side temperatures.

    Returns (q_ic, q_b, total); the total uses the single closed kernel
    (1-|r|^2)^2/|1-r^2 e^{2i w a}|^2 (a Landauer form), the breakdown uses
    |t|^2(1-|r|^2) and A(1-|r|^2) kernels.
    """
    quad = quad or QuadratureConfig()
    if T_L == T_R:
        return (0.0, 0.0, 0.0)
    tmax = max(T_L, T_R)
    bps = build_breakpoints([(mat, d), (mat, d)], a, 0.0, 60.0 * tmax, quad)
    bps = np.unique(np.concatenate([bps, np.linspace(0.0, 60.0 * tmax, 257)]))

    def pieces(omega):
        n = refractive_index(mat, omega)
        r, t = slab_coefficients(n, d, omega)
        A = slab_absorption(n, d, omega)
        x = np.abs(r) ** 2
        D = np.abs(1.0 - r * r * np.exp(2j * omega * a)) ** 2
        dn = 2.0 * omega * (_occupation(T_L, omega) - _occupation(T_R, omega))
        return (
            dn * np.abs(t) ** 2 * (1.0 - x) / D,
            dn * A * (1.0 - x) / D,
            dn * (1.0 - x) ** 2 / D,
        )

    q_ic, _ = integrate_breakpoints(lambda w: pieces(w)[0], bps, quad)
    q_b, _ = integrate_breakpoints(lambda w: pieces(w)[1], bps, quad)
    total, _ = integrate_breakpoints(lambda w: pieces(w)[2], bps, quad)
    return (q_ic, q_b, total)
