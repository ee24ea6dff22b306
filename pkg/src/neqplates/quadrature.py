"""Adaptive Gauss-Kronrod integration for oscillatory cavity integrands.

The physical integrands oscillate on two scales (cavity round trip 2*w*a and
slab round trip 2*w*Re(n)*d) and develop narrow resonance peaks when the
mirrors are good.  The integrator therefore takes an explicit list of initial
breakpoints; helpers below build phase-resolved breakpoints and seed extra
points around cavity resonances m*pi/a.

Evaluation is batched: each refinement round evaluates the 15 Kronrod nodes
of many intervals in a single vectorized call.  The final sum is accumulated
with math.fsum over intervals sorted by position, so results are
deterministic for a fixed configuration.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .material import refractive_index, susceptibility, transparency_frequency
from .slab_optics import interface_reflection

# 15-point Kronrod nodes/weights with embedded 7-point Gauss rule on [-1, 1].
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])


# |chi| level below which a material counts as transparent; cfg.cutoff_factor
# scales the resulting truncation frequency.
CHI_TRANSPARENCY_TOL = 1e-6
# cap on initial phase-resolved breakpoints; the adaptive stage refines the rest
MAX_INITIAL_SEGMENTS = 250000
# intervals refined per adaptive round (vectorized batch size)
REFINE_BATCH = 4096


@dataclass
class QuadratureConfig:
    """Tolerances and budgets for the adaptive integrator."""

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_subdivisions: int = 400000
    cutoff_factor: float = 1.0
    resonance_splitting: bool = True

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


class QuadratureError(RuntimeError):
    """Raised when the error estimate cannot be brought under tolerance.

    Carries the best value and the achieved error estimate.
    """

    def __init__(self, value, error):
        super().__init__(
            f"quadrature did not converge: value={value:.6e}, "
            f"error estimate={error:.2e}"
        )
        self.value = value
        self.error = error


def _gk_batch(f, lo, hi):
    """GK15 integral and error estimate on each [lo_i, hi_i]."""
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    x = (c[:, None] + h[:, None] * _XK[None, :]).ravel()
    y = np.asarray(f(x), dtype=float).reshape(len(lo), 15)
    ik = h * (y @ _WK)
    ig = h * (y[:, 1::2] @ _WG)
    # QUADPACK-style scaled error estimate
    mean = ik / np.where(h != 0.0, 2.0 * h, 1.0)
    resasc = h * (np.abs(y - mean[:, None]) @ _WK)
    e = np.abs(ik - ig)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * e / np.where(resasc > 0, resasc, 1.0)) ** 1.5)
    err = np.where((e > 0) & (resasc > 0), scaled, e)
    return ik, err


def integrate_breakpoints(f, breakpoints, cfg):
    """Adaptive GK15 over the union of [b_i, b_{i+1}] intervals.

    Returns (value, error_estimate).  Raises QuadratureError when the
    subdivision budget is exhausted above tolerance.
    """
    bps = np.asarray(breakpoints, dtype=float)
    lo, hi = bps[:-1], bps[1:]
    ii, ee = _gk_batch(f, lo, hi)
    used = len(lo)
    while True:
        total = ii.sum()
        tol = max(cfg.rel_tol * abs(total), cfg.abs_tol)
        etot = ee.sum()
        if etot <= tol:
            break
        if used >= cfg.max_subdivisions:
            order = np.argsort(lo, kind="stable")
            raise QuadratureError(math.fsum(ii[order]), etot)
        idx = np.argsort(ee)[::-1][:REFINE_BATCH]
        idx = idx[ee[idx] > tol / (4.0 * len(lo))]
        if len(idx) == 0:
            break
        l, h = lo[idx], hi[idx]
        m = 0.5 * (l + h)
        nl = np.concatenate([l, m])
        nh = np.concatenate([m, h])
        ni, ne = _gk_batch(f, nl, nh)
        used += len(idx)
        keep = np.ones(len(lo), dtype=bool)
        keep[idx] = False
        lo = np.concatenate([lo[keep], nl])
        hi = np.concatenate([hi[keep], nh])
        ii = np.concatenate([ii[keep], ni])
        ee = np.concatenate([ee[keep], ne])
    order = np.argsort(lo, kind="stable")
    return math.fsum(ii[order]), ee.sum()


def integrate_semi_infinite(f, cfg, hints):
    """Integrate f over (0, cutoff] with hint-driven initial breakpoints.

    ``hints`` is a ScaleHints instance; the domain is truncated at
    hints.cutoff, beyond which the integrand must be negligible (dissipative
    response and thermal occupation both decay super-polynomially there).
    """
    bps = hints.breakpoints
    if bps is None:
        n = max(64, min(4096, int(20.0 * hints.cutoff * hints.a)))
        bps = np.linspace(0.0, hints.cutoff, n + 1)
        bps[0] = hints.cutoff * 1e-12
    return integrate_breakpoints(f, bps, cfg)


@dataclass
class ScaleHints:
    """Length/frequency scales steering the initial subdivision."""

    a: float
    thermal_wavelength: float
    cutoff: float
    breakpoints: object = None


def find_cutoff(mats, temps, tol):
    """Upper truncation frequency for semi-infinite integrals.

    Returns omega_c with |chi(omega_c)| < tol for every material and
    omega_c >= 50 * max(T), so both the dielectric response and the thermal
    occupation are negligible beyond it.
    """
    wc = max(transparency_frequency(m, tol) for m in mats)
    tmax = max(temps) if temps else 0.0
    return max(wc, 50.0 * tmax)


def brute_force_oracle(f, omega_max, n_points):
    """Composite trapezoid on a uniform grid; independent test reference."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    x = np.linspace(omega_max / n_points, omega_max, n_points)
    return np.trapezoid(f(x), x)


def phase_breakpoints(mats_and_thicknesses, a, w_lo, w_hi, pilot=8192):
    """Breakpoints equidistant in accumulated oscillation phase.

    The local phase density is 2a (cavity round trip) plus 2 d Re(n) for
    every slab that is not yet opaque at that frequency (attenuation
    2 w Im(n) d < 45).  Segments are capped at MAX_INITIAL_SEGMENTS; the
    adaptive stage refines whatever the cap leaves unresolved.
    """
    w = np.linspace(w_lo, w_hi, pilot)
    dens = 2.0 * a * np.ones_like(w)
    for mat, d in mats_and_thicknesses:
        if d <= 0.0 or not np.isfinite(d):
            continue
        n = refractive_index(mat, w)
        transparent = 2.0 * w * n.imag * d < 45.0
        dens += 2.0 * d * n.real * transparent
    phase = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(w))])
    nseg = int(min(max(phase[-1] / np.pi, 8.0), MAX_INITIAL_SEGMENTS))
    targets = np.linspace(0.0, phase[-1], nseg + 1)
    return np.unique(np.interp(targets, phase, w))


def _reflection(mat, d, w):
    n = refractive_index(mat, w)
    if d <= 0.0:
        return np.zeros_like(w, dtype=complex)
    if not np.isfinite(d):
        return interface_reflection(n)
    from .slab_optics import slab_coefficients

    r, _ = slab_coefficients(n, d, w)
    return r


def rotated_vacuum_integral(mats_and_thicknesses, a, cfg):
    """Temperature-independent pressure integral, evaluated on the imaginary axis.

    int_0^inf dk 4 k (|u|^2 - Re u)/|1-u|^2 with u = r_L r_R e^{2ika} equals
    -4 Re int_0^inf dk k u/(1-u), and k u/(1-u) is analytic in the first
    quadrant: the passive-slab r(w) has its poles and the branch points of
    n(w) below the real axis, |u| < 1 there (e^{2iwa} decays upward), and the
    integrand falls off on the arc.  Rotating the contour onto the positive
    imaginary axis w = i xi gives

        int_0^inf dxi 4 xi u(i xi) / (1 - u(i xi)),

    where n(i xi) > 1 is real, u(i xi) in (0, 1) real, and the integrand is
    smooth, positive and decays like e^{-2 xi a}: the dense cavity-resonance
    structure of the real axis disappears.  For perfect mirrors the value is
    pi^2/(6 a^2).  Returns (value, error_estimate).
    """
    (mat_l, d_l), (mat_r, d_r) = mats_and_thicknesses
    xi_max = 40.0 / a

    def f(xi):
        xi = np.asarray(xi, dtype=float)
        w = 1j * xi
        u = (_reflection(mat_l, d_l, w) * _reflection(mat_r, d_r, w)
             * np.exp(-2.0 * xi * a))
        return 4.0 * xi * (u / (1.0 - u)).real

    bps = np.linspace(0.0, xi_max, 257)
    return integrate_breakpoints(f, bps, cfg)


def resonance_breakpoints(mats_and_thicknesses, a, bps, min_product=0.7):
    """Geometric point clusters around the true cavity resonances.

    A resonance sits where the round-trip phase 2 w a + arg(r_L r_R) crosses
    a multiple of 2 pi; the reflection phase of a thick slab shifts it well
    away from the bare-cavity positions m pi/a.  The phase is unwrapped on an
    8x refinement of the phase-equidistant breakpoints; only crossings with
    reflectivity product above min_product are seeded.  Around each crossing
    a geometric ladder of points runs from the Lorentzian half-width
    (1-|u|^2)/Phi' out to the local resonance spacing, mimicking the graded
    panels adaptive bisection would eventually produce.
    """
    (mat_l, d_l), (mat_r, d_r) = mats_and_thicknesses
    refine = 8
    w = np.linspace(bps[:-1], bps[1:], refine, axis=1, endpoint=False).ravel()
    w = np.append(w[w > 0.0], bps[-1])
    u = _reflection(mat_l, d_l, w) * _reflection(mat_r, d_r, w) * np.exp(2j * w * a)
    mag = np.abs(u)
    phi = np.unwrap(np.angle(u))
    k = np.floor(phi / (2.0 * np.pi))
    hit = np.nonzero(np.diff(k) != 0)[0]
    if len(hit) == 0:
        return np.empty(0)
    # linear interpolation of the crossing inside each bracketing cell
    target = 2.0 * np.pi * np.maximum(k[hit], k[hit + 1])
    frac = (target - phi[hit]) / (phi[hit + 1] - phi[hit])
    w0 = w[hit] + frac * (w[hit + 1] - w[hit])
    prod = mag[hit] + frac * (mag[hit + 1] - mag[hit])
    dphi = (phi[hit + 1] - phi[hit]) / (w[hit + 1] - w[hit])  # local Phi'
    keep = (prod > min_product) & (dphi > 0.0)
    if not np.any(keep):
        return np.empty(0)
    w0, prod, dphi = w0[keep], prod[keep], dphi[keep]
    width = np.maximum((1.0 - prod**2) / dphi, 1e-15 * np.maximum(w0, 1e-300))
    half_gap = np.pi / dphi
    n_oct = int(np.ceil(np.log2(np.max(half_gap / width)))) + 1
    offsets = np.minimum(
        width[:, None] * 2.0 ** np.arange(n_oct)[None, :], half_gap[:, None]
    )
    pts = np.concatenate([
        (w0[:, None] - offsets).ravel(),
        w0,
        (w0[:, None] + offsets).ravel(),
    ])
    return np.unique(pts[(pts > bps[0]) & (pts < bps[-1])])


def build_breakpoints(mats_and_thicknesses, a, w_lo, w_hi, cfg):
    """Phase-resolved breakpoints plus resonance seeds for one window."""
    bps = phase_breakpoints(mats_and_thicknesses, a, w_lo, w_hi)
    if cfg.resonance_splitting and len(mats_and_thicknesses) == 2:
        extra = resonance_breakpoints(mats_and_thicknesses, a, bps)
        if len(extra):
            bps = np.unique(np.concatenate([bps, extra]))
    return bps


# total GK panels allowed for the octave tail extension of one integral
TAIL_PANEL_BUDGET = 1200000


def oscillation_envelope(mats, a, omega):
    """Upper envelope of the oscillatory vacuum integrand, 16 w |rho_L rho_R|.

    Slab interference can enhance each reflection to at most 2|rho|, hence
    the factor 16 on the interface product; used for the analytic tail bound
    |integral from w to infinity| <= envelope(w)/(2a) (one integration by
    parts against the slowest phase 2 w a).
    """
    w = np.asarray(omega, dtype=float)
    prod = np.abs(
        interface_reflection(refractive_index(mats[0], w))
        * interface_reflection(refractive_index(mats[1], w))
    )
    return 16.0 * w * prod


def integrate_with_tail(f, mats_and_thicknesses, a, w_head, w_cut, cfg,
                        thermal_points=None):
    """Head window plus octave tail extension for force-like integrands.

    [0, w_head] (band structure, thermal scale, cavity resonances) is
    integrated on fully phase-resolved breakpoints.  Beyond it only the
    oscillatory vacuum part with envelope ~ 16 w |rho_L rho_R| survives, and
    is integrated octave by octave until the analytic remainder bound
    envelope/(2a) drops under tolerance, the transparency cutoff w_cut is
    reached, or the panel budget runs out; the remainder bound is then added
    to the reported error estimate instead of raising.
    """
    mats = [m for m, _ in mats_and_thicknesses]
    w_head = min(w_head, w_cut)
    bps = build_breakpoints(mats_and_thicknesses, a, 0.0, w_head, cfg)
    if thermal_points is not None:
        bps = np.unique(np.concatenate([bps, thermal_points]))
    try:
        acc, err = integrate_breakpoints(f, bps, cfg)
    except QuadratureError as exc:
        # budget exhausted above the requested tolerance: keep the best
        # estimate and report the achieved error instead of aborting
        acc, err = exc.value, exc.error
    panels = len(bps)
    w1 = w_head

    def tail_bound(w):
        return float(oscillation_envelope(mats, a, np.array([w]))[0]) / (2.0 * a)

    while True:
        if w1 >= w_cut:
            break
        if tail_bound(w1) <= max(0.5 * cfg.rel_tol * abs(acc), cfg.abs_tol):
            break
        if panels > TAIL_PANEL_BUDGET:
            break
        w2 = min(2.0 * w1, w_cut)
        obps = build_breakpoints(mats_and_thicknesses, a, w1, w2, cfg)
        # octave tolerance is relative to the accumulated value, not to the
        # (possibly near-cancelling) octave alone
        ocfg = dataclasses.replace(
            cfg, abs_tol=max(cfg.abs_tol, 0.25 * cfg.rel_tol * abs(acc))
        )
        try:
            v, e = integrate_breakpoints(f, obps, ocfg)
        except QuadratureError as exc:
            acc += exc.value
            err += exc.error
            w1 = w2
            break
        acc += v
        err += e
        panels += len(obps)
        w1 = w2
    return acc, err + tail_bound(w1)
