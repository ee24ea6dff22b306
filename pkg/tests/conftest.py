"""Shared fixtures: materials and scenarios used across the test modules."""

import pytest

import neqplates as nq
from neqplates.cli import kelvin_to_natural


@pytest.fixture(scope="session")
def soft_pair():
    """Two distinct moderately lossy materials (resonances near 0.1 nm^-1)."""
    return nq.Material(0.05, 0.1, 0.02), nq.Material(0.08, 0.15, 0.03)


@pytest.fixture(scope="session")
def baseline_material():
    """omega_pl = omega_0 = 10/a, gamma = 0.1/a at a = 100 nm."""
    return nq.Material(0.1, 0.1, 1e-3)


@pytest.fixture(scope="session")
def T300():
    return kelvin_to_natural(300.0)


@pytest.fixture(scope="session")
def T600():
    return kelvin_to_natural(600.0)


def scenario(a, d_L, d_R, mat_L, mat_R, T_phi_L, T_phi_R, T_B_L=None, T_B_R=None):
    if T_B_L is None:
        T_B_L = T_phi_L
    if T_B_R is None:
        T_B_R = T_phi_R
    return nq.Scenario(
        nq.Geometry(a, d_L, d_R), mat_L, mat_R,
        nq.Temperatures(T_phi_L, T_phi_R, T_B_L, T_B_R),
    )
