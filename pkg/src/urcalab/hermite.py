"""Hermite polynomials, Landau mode functions and Gauss-Hermite quadrature.

Conventions: physicists' Hermite polynomials H_n (orthogonal against the
weight e^{-x^2}); transverse Landau mode functions

    I_n(xi) = (sqrt(eB) / (n! 2^n sqrt(pi)))^(1/2) exp(-xi^2/2) H_n(xi),
    I_{-1}(xi) = 0,

with xi = sqrt(eB) (x2 - center), normalized so the square of I_n integrates
to one over the transverse coordinate x2.  Evaluation runs the three-term
recurrence on the normalized functions themselves, so no factorial is ever
formed and orders up to a few hundred stay finite in double precision.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

MAX_QUAD_ORDER = 512


class QuadratureRule(NamedTuple):
    """Gauss-Hermite rule: sum(weights * f(nodes)) integrates f * exp(-x^2)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int


def hermite_poly(n: int, x):
    """H_n(x) by the recurrence H_{k+1} = 2 x H_k - 2 k H_{k-1}.

    Overflows around n ~ 150 for large |x|; use the normalized mode functions
    when the Gaussian envelope belongs to the integrand.
    """
    if n < 0:
        raise ValueError("Hermite order must be non-negative")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if h.ndim else float(h)


def hermite_functions(n_max: int, xi, bare: bool = False) -> np.ndarray:
    """Normalized Hermite functions phi_0..phi_{n_max} at the points xi.

    phi_n(xi) = H_n(xi) exp(-xi^2/2) / sqrt(2^n n! sqrt(pi)).  With bare=True
    the Gaussian envelope is dropped (the caller absorbs the product of two
    envelopes into a quadrature weight; the recurrence is identical because
    the envelope is a common factor).
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.empty((n_max + 1,) + xi.shape)
    seed = np.pi ** (-0.25)
    out[0] = seed if bare else seed * np.exp(-0.5 * xi * xi)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * xi * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def landau_mode(n: int, xi, eB: float):
    """I_n(xi) for field strength eB > 0; n = -1 returns 0."""
    if eB <= 0:
        raise ValueError("eB must be positive")
    if n < -1:
        raise ValueError("Landau index must be >= -1")
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if n == -1:
        res = np.zeros_like(xi_arr)
    else:
        res = eB**0.25 * hermite_functions(n, xi_arr)[n]
    return res if np.ndim(xi) else float(res[0])


def landau_modes(n_max: int, xi, eB: float, bare: bool = False) -> np.ndarray:
    """All of I_0..I_{n_max} at once, shape (n_max+1, len(xi))."""
    if eB <= 0:
        raise ValueError("eB must be positive")
    return eB**0.25 * hermite_functions(n_max, xi, bare=bare)


def landau_mode_dx2(n: int, xi, eB: float):
    """d/dx2 of I_n(xi(x2)) for xi = sqrt(eB) (x2 - center).

    Exact on the Landau basis:
    d/dx2 I_n = sqrt(eB) (sqrt(n/2) I_{n-1} - sqrt((n+1)/2) I_{n+1}).
    """
    if n == -1:
        z = np.zeros_like(np.atleast_1d(np.asarray(xi, dtype=float)))
        return z if np.ndim(xi) else 0.0
    table = landau_modes(n + 1, xi, eB)
    lower = table[n - 1] if n >= 1 else np.zeros_like(table[0])
    res = np.sqrt(eB) * (np.sqrt(n / 2.0) * lower - np.sqrt((n + 1) / 2.0) * table[n + 1])
    return res if np.ndim(xi) else float(res[0])


@lru_cache(maxsize=32)
def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite nodes and weights by the Golub-Welsch eigenvalue method.

    The Jacobi matrix for the e^{-x^2} weight is tridiagonal with zero
    diagonal and off-diagonal entries sqrt(k/2); its eigenvalues are the
    nodes, and the weights are sqrt(pi) times the squared first components
    of the eigenvectors.
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if order > MAX_QUAD_ORDER:
        raise ValueError(f"quadrature order {order} exceeds maximum {MAX_QUAD_ORDER}")
    if order == 1:
        return QuadratureRule(np.zeros(1), np.array([np.sqrt(np.pi)]), 1)
    off = np.sqrt(np.arange(1, order) / 2.0)
    nodes, vecs = eigh_tridiagonal(np.zeros(order), off)
    weights = np.sqrt(np.pi) * vecs[0] ** 2
    return QuadratureRule(nodes, weights, order)
