"""Dissipative dielectric response of the plate material.

A single Lorentz oscillator with Ohmic damping describes each plate:

    chi(w) = omega_pl**2 / (omega_0**2 - w**2 - 1j*gamma*w)

All frequencies are in natural units (inverse nanometers, hbar = c = kB = 1).
The complex refractive index n = sqrt(1 + chi) is taken on the branch with
Im(n) >= 0 so that waves decay while propagating into the medium.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Material:
    """Lorentz-oscillator plate material.

    omega_pl : plasma frequency (nm^-1); sets the overall coupling strength.
    omega_0  : oscillator resonance frequency (nm^-1).
    gamma    : Ohmic damping rate (nm^-1); gamma = 0 means a dissipationless
               (bath-decoupled) material.
    """

    omega_pl: float
    omega_0: float
    gamma: float

    def __post_init__(self):
        if self.omega_pl < 0:
            raise ValueError("omega_pl must be >= 0")
        if self.omega_0 <= 0:
            raise ValueError("omega_0 must be > 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")

    @property
    def dissipationless(self):
        return self.gamma == 0.0

    @property
    def plasma_wavelength(self):
        """lambda_pl = 2*pi/omega_pl, the screening thickness scale."""
        return 2.0 * np.pi / self.omega_pl


def susceptibility(mat, omega):
    """chi(omega) for omega >= 0 (scalar or ndarray), complex.

    Also accepts complex omega (used on the positive imaginary axis, where
    chi(i xi) is real and positive).
    """
    w = np.asarray(omega)
    if not np.iscomplexobj(w):
        w = w.astype(float)
    return mat.omega_pl**2 / (mat.omega_0**2 - w**2 - 1j * mat.gamma * w)


def refractive_index(mat, omega):
    """n(omega) = sqrt(1 + chi) on the Im(n) >= 0 branch.

    For gamma > 0 this gives Im(n) > 0 at every omega > 0.  For gamma = 0 the
    index is real outside the band omega_0 < omega < sqrt(omega_0^2 +
    omega_pl^2) and purely imaginary (evanescent) inside it.
    """
    n = np.sqrt(1.0 + susceptibility(mat, omega))
    return np.where(n.imag < 0.0, -n, n)


def transparency_frequency(mat, tol):
    """Frequency above which |chi| stays below tol.

    |chi| ~ omega_pl^2/omega^2 at large omega; the returned value solves that
    asymptotic relation and is clipped from below by the band edge.
    """
    band_edge = np.sqrt(mat.omega_0**2 + mat.omega_pl**2)
    if mat.omega_pl == 0.0:
        return band_edge
    return max(mat.omega_pl / np.sqrt(tol), 2.0 * band_edge)
