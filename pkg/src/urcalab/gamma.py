"""Gamma matrices in the standard (Dirac) representation.

Metric signature (+, -, -, -); gamma^0 = diag(1, 1, -1, -1), gamma^i built
from the Pauli matrices, gamma5 = off-diagonal identity.  Lowered indices are
gamma_a = eta_aa gamma^a (no sum).
"""

from __future__ import annotations

import numpy as np

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA1, SIGMA2, SIGMA3)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

GAMMA0 = np.block([[I2, np.zeros((2, 2))], [np.zeros((2, 2)), -I2]]).astype(complex)
GAMMA5 = np.block([[np.zeros((2, 2)), I2], [I2, np.zeros((2, 2))]]).astype(complex)


def _gamma_spatial(sigma: np.ndarray) -> np.ndarray:
    z = np.zeros((2, 2), dtype=complex)
    return np.block([[z, sigma], [-sigma, z]])


GAMMA = (GAMMA0,) + tuple(_gamma_spatial(s) for s in PAULI)
ALPHA = tuple(np.block([[np.zeros((2, 2), dtype=complex), s], [s, np.zeros((2, 2))]]) for s in PAULI)
BETA = GAMMA0
METRIC_SIGNS = (1.0, -1.0, -1.0, -1.0)


def gamma_upper(a: int) -> np.ndarray:
    return GAMMA[a]


def gamma_lower(a: int) -> np.ndarray:
    return METRIC_SIGNS[a] * GAMMA[a]


def hadronic_matrices(g_a: float) -> tuple[np.ndarray, ...]:
    """gamma^0 gamma^a (1 - g_A gamma5) for a = 0..3, ready for bilinears."""
    proj = I4 - g_a * GAMMA5
    return tuple(GAMMA0 @ GAMMA[a] @ proj for a in range(4))


def leptonic_matrices() -> tuple[np.ndarray, ...]:
    """gamma^0 gamma_a (1 - gamma5) for a = 0..3; the metric is folded in here."""
    proj = I4 - GAMMA5
    return tuple(GAMMA0 @ gamma_lower(a) @ proj for a in range(4))


def operator_norm(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False)[0])


def vertex_sup_norms(g_a: float) -> tuple[float, float]:
    """(sup_a |gamma^a (1 - g_A gamma5)|, sup_a |gamma_a (1 - gamma5)|) via SVD."""
    proj_h = I4 - g_a * GAMMA5
    proj_l = I4 - GAMMA5
    sup_h = max(operator_norm(GAMMA[a] @ proj_h) for a in range(4))
    sup_l = max(operator_norm(gamma_lower(a) @ proj_l) for a in range(4))
    return sup_h, sup_l
