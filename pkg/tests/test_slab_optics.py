"""Slab scattering coefficients against an independent transfer-matrix oracle."""

import numpy as np
import pytest

import neqplates as nq
from neqplates.material import refractive_index
from neqplates.slab_optics import (
    interface_reflection,
    slab_absorption,
    slab_coefficients,
)


def tm_slab_oracle(n, d, w):
    """Reflection/transmission by direct boundary matching (4x4 solve).

    Field A e^{ikx} + B e^{-ikx} in each region; value and derivative
    continuous at x = 0 and x = d; unit wave incident from the left.
    Returns (r, t) with t phase-referenced face to face (t_out e^{i w d}).
    """
    k0, k1 = w, w * n
    M = np.array(
        [
            [-1, 1, 1, 0],
            [k0, k1, -k1, 0],
            [0, np.exp(1j * k1 * d), np.exp(-1j * k1 * d), -np.exp(1j * k0 * d)],
            [0, k1 * np.exp(1j * k1 * d), -k1 * np.exp(-1j * k1 * d),
             -k0 * np.exp(1j * k0 * d)],
        ],
        dtype=complex,
    )
    b = np.array([1, k0, 0, 0], dtype=complex)
    r, _, _, t_out = np.linalg.solve(M, b)
    return r, t_out * np.exp(1j * w * d)


CASES = [
    (nq.Material(0.3, 0.2, 0.05), 37.0, 0.15),
    (nq.Material(0.3, 0.2, 0.05), 120.0, 0.35),
    (nq.Material(0.05, 0.1, 0.02), 500.0, 0.08),
    (nq.Material(2.0, 0.01, 0.1), 5.0, 1.5),
    (nq.Material(0.1, 0.1, 1e-3), 1000.0, 0.11),
]


@pytest.mark.parametrize("mat,d,w", CASES)
def test_slab_coefficients_match_transfer_matrix(mat, d, w):
    n = complex(refractive_index(mat, w))
    r, t = slab_coefficients(n, d, w)
    r_o, t_o = tm_slab_oracle(n, d, w)
    assert abs(r - r_o) < 1e-12 * max(1.0, abs(r_o))
    assert abs(t - t_o) < 1e-12 * max(1.0, abs(t_o))


@pytest.mark.parametrize("mat,d,w", CASES)
def test_absorption_matches_flux_deficit(mat, d, w):
    n = complex(refractive_index(mat, w))
    r, t = slab_coefficients(n, d, w)
    direct = 1.0 - abs(r) ** 2 - abs(t) ** 2
    A = float(slab_absorption(n, d, w))
    assert A == pytest.approx(direct, abs=1e-12)
    assert 0.0 <= A <= 1.0


def test_absorption_cancellation_free_in_opaque_regime():
    # deep in the opaque regime |t| underflows and the direct difference
    # 1 - |r|^2 - |t|^2 loses all significance; the closed form must still
    # satisfy |t|^2 + A = 1 - |r|^2 exactly
    m = nq.Material(0.3, 0.2, 0.05)
    w = 0.21
    n = complex(refractive_index(m, w))
    for d in (1e4, 1e6, 1e8):
        r, t = slab_coefficients(n, d, w)
        A = float(slab_absorption(n, d, w))
        assert abs(t) ** 2 + A == pytest.approx(1.0 - abs(r) ** 2, rel=1e-12)


def test_absorption_zero_without_dissipation():
    m = nq.Material(0.4, 0.3, 0.0)
    for w in (0.1, 0.35, 0.45, 2.0):  # outside and inside the band
        n = complex(refractive_index(m, w))
        assert abs(slab_absorption(n, 300.0, w)) < 1e-14


def test_thick_slab_reduces_to_interface():
    m = nq.Material(0.3, 0.2, 0.05)
    w = 0.25
    n = complex(refractive_index(m, w))
    r, t = slab_coefficients(n, 1e7, w)
    assert r == pytest.approx(complex(interface_reflection(n)), abs=1e-12)
    assert abs(t) < 1e-12


def test_zero_thickness_is_transparent():
    m = nq.Material(0.3, 0.2, 0.05)
    w = 0.25
    n = complex(refractive_index(m, w))
    r, t = slab_coefficients(n, 0.0, w)
    assert r == 0.0
    assert t == 1.0


def test_omega_zero_limit():
    m = nq.Material(0.3, 0.2, 0.05)
    n = refractive_index(m, 0.0)
    r, t = slab_coefficients(n, 50.0, 0.0)
    assert r == 0.0
    assert t == pytest.approx(1.0, abs=1e-14)
