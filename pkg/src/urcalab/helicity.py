"""Helicity spinors for the neutral particles (neutron and neutrino).

Momentum-space plane-wave spinors in the Dirac basis, normalized to
u^dag u = 1.  Helicity labels are carried as lam in {-1, +1}, twice the
physical helicity +-1/2.  The neutrino is massless and purely left handed:
its physical particle spinor is U(p, -1) and the antiparticle coefficient
on the same label space is W(p) = V(-p, +1).
"""

from __future__ import annotations

import numpy as np

from .gamma import PAULI

# relative tolerance for the p parallel to +e3 degenerate ray
_RAY_TOL = 1e-14


def helicity_basis(p) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal Pauli spinors h+, h- with (sigma . p) h+- = +-|p| h+-.

    Raises on |p| = 0 where helicity is undefined; callers that need a
    basis there must choose their own convention.
    """
    p = np.asarray(p, dtype=float)
    pmag = float(np.linalg.norm(p))
    if pmag == 0.0:
        raise ValueError("helicity basis undefined at p = 0")
    gap = pmag - p[2]
    if gap <= _RAY_TOL * pmag:
        # p along +e3: the canonical spin-up/down pair diagonalizes sigma3
        return np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)
    den = np.sqrt(2.0 * pmag * gap)
    h_plus = np.array([p[0] - 1j * p[1], gap], dtype=complex) / den
    h_minus = np.array([p[2] - pmag, p[0] + 1j * p[1]], dtype=complex) / den
    return h_plus, h_minus


def _h(p, lam: int) -> np.ndarray:
    h_plus, h_minus = helicity_basis(p)
    if lam == +1:
        return h_plus
    if lam == -1:
        return h_minus
    raise ValueError("helicity label must be -1 or +1")


def neutron_spinors(p, lam: int, mass: float) -> tuple[np.ndarray, np.ndarray]:
    """(U, V) for a massive neutral fermion at momentum p, helicity lam/2.

    U carries energy +E(p), V energy -E(p), E = sqrt(|p|^2 + m^2).
    At p = 0 helicity degenerates and the canonical sigma3 pair is used.
    """
    p = np.asarray(p, dtype=float)
    pmag = float(np.linalg.norm(p))
    if pmag == 0.0:
        h = np.array([1.0, 0.0], dtype=complex) if lam == +1 else np.array([0.0, 1.0], dtype=complex)
    else:
        h = _h(p, lam)
    energy = np.sqrt(pmag * pmag + mass * mass)
    a_plus = np.sqrt(0.5 * (1.0 + mass / energy))
    a_minus = np.sqrt(0.5 * (1.0 - mass / energy))
    u = np.concatenate([a_plus * h, lam * a_minus * h])
    v = np.concatenate([-lam * a_minus * h, a_plus * h])
    return u, v


def neutrino_u(p, lam: int) -> np.ndarray:
    h = _h(p, lam)
    return np.concatenate([h, lam * h]) / np.sqrt(2.0)


def neutrino_v(p, lam: int) -> np.ndarray:
    h = _h(p, lam)
    return np.concatenate([-lam * h, h]) / np.sqrt(2.0)


def neutrino_spinors(p) -> tuple[np.ndarray, np.ndarray]:
    """(U, W) for the massless left-handed neutrino at momentum p.

    U = U(p, -1) annihilates the particle; W = V(-p, +1) multiplies the
    creator in the field expansion at the same mode label.
    """
    p = np.asarray(p, dtype=float)
    return neutrino_u(p, -1), neutrino_v(-p, +1)


def free_dirac_matrix(p, mass: float) -> np.ndarray:
    """4x4 momentum-space Dirac Hamiltonian [[m, sigma.p], [sigma.p, -m]]."""
    p = np.asarray(p, dtype=float)
    sp = p[0] * PAULI[0] + p[1] * PAULI[1] + p[2] * PAULI[2]
    top = np.hstack([mass * np.eye(2), sp])
    bot = np.hstack([sp, -mass * np.eye(2)])
    return np.vstack([top, bot]).astype(complex)


def conjugation_phase(p, lam: int) -> complex:
    """Phase z with C V(p, lam) = z U(-p, lam) for the neutral spinors.

    z = -(p1 + i lam p2) / |p_perp|; undefined on the p_perp = 0 ray.
    """
    p = np.asarray(p, dtype=float)
    perp = np.hypot(p[0], p[1])
    if perp <= _RAY_TOL * np.linalg.norm(p):
        raise ValueError("conjugation phase undefined for p along the field axis")
    return -(p[0] + 1j * lam * p[1]) / perp
