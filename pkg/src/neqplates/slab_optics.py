"""Reflection, transmission and absorption of a single homogeneous slab.

All Laplace-domain expressions are evaluated at s = -1j*omega, so the slab
round-trip factor reads q = exp(2j*omega*n*d), which decays for Im(n) > 0.
Every function is vectorized over omega (and n).
"""

import numpy as np


def interface_reflection(n):
    """Fresnel reflection of a vacuum/half-space interface, rho = (1-n)/(1+n)."""
    return (1.0 - n) / (1.0 + n)


def slab_coefficients(n, d, omega):
    """Reflection r and transmission t of a slab of thickness d.

    r = rho (1 - q) / (1 - rho^2 q),   t = (1 - rho^2) e^{i w n d} / (1 - rho^2 q)

    with q = e^{2j w n d}.  |q| <= 1 on the Im(n) >= 0 branch, so the forms
    are overflow-safe for arbitrarily thick slabs.  omega may be complex
    (imaginary-axis evaluation); |q| <= 1 still holds in the first quadrant.
    """
    w = np.asarray(omega)
    if not np.iscomplexobj(w):
        w = w.astype(float)
    rho = interface_reflection(n)
    q = np.exp(2j * w * n * d)
    den = 1.0 - rho**2 * q
    r = rho * (1.0 - q) / den
    t = (1.0 - rho**2) * np.exp(1j * w * n * d) / den
    return r, t


def slab_absorption(n, d, omega):
    """Absorbed fraction A = 1 - |r|^2 - |t|^2 of a unit flux hitting the slab.

    Evaluated in a cancellation-free form: A equals the slab's thermal-bath
    emissivity bracket reduced to

        A = 4 X / (|1+n|^4 |1 - rho^2 q|^2)

        X = Re(n)|1+n|^2 (1-|q|) + Re(n)|1-n|^2 |q| (1-|q|)
            + 2 Im(n) |q| Im[ (1+n)* (n-1) (e^{2j theta} - 1) ],

    theta = omega Re(n) d.  Every term vanishes identically for a
    dissipationless material (real or purely imaginary n), including inside
    the evanescent band where Re(n) = 0 and theta = 0.
    """
    w = np.asarray(omega, dtype=float)
    rho = interface_reflection(n)
    q = np.exp(2j * w * n * d)
    den2 = np.abs(1.0 - rho**2 * q) ** 2
    absq = np.abs(q)
    theta = w * n.real * d
    cross = (np.conj(1.0 + n) * (n - 1.0) * (np.exp(2j * theta) - 1.0)).imag
    x = (
        n.real * np.abs(1.0 + n) ** 2 * (1.0 - absq)
        + n.real * np.abs(1.0 - n) ** 2 * absq * (1.0 - absq)
        + 2.0 * n.imag * absq * cross
    )
    return 4.0 * x / (np.abs(1.0 + n) ** 4 * den2)
