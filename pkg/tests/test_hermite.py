"""Hermite function and Gauss-Hermite quadrature checks."""

import math

import numpy as np
import pytest

from urcalab.hermite import (
    MAX_QUAD_ORDER,
    gauss_hermite,
    hermite_functions,
    hermite_poly,
    landau_mode,
    landau_mode_dx2,
    landau_modes,
)


def test_hermite_functions_match_polynomial_form():
    # phi_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))
    x = np.linspace(-4.0, 4.0, 101)
    phi = hermite_functions(8, x)
    for n in range(9):
        norm = np.sqrt(2.0 ** n * math.factorial(n) * np.sqrt(np.pi))
        ref = hermite_poly(n, x) * np.exp(-0.5 * x * x) / norm
        assert np.abs(phi[n] - ref).max() < 1e-12


def test_hermite_functions_orthonormal_under_quadrature():
    rule = gauss_hermite(40)
    phi = hermite_functions(12, rule.nodes, bare=True)
    gram = np.einsum("k,ik,jk->ij", rule.weights, phi, phi)
    assert np.abs(gram - np.eye(13)).max() < 1e-12


def test_gauss_hermite_polynomial_exactness():
    # order n integrates monomials up to degree 2n-1 against exp(-x^2)
    rule = gauss_hermite(7)
    from scipy.special import gamma

    for k in range(0, 14):
        terms = rule.weights * rule.nodes ** k
        got = np.sum(terms)
        want = 0.0 if k % 2 else gamma((k + 1) / 2.0)
        # roundoff scales with the term magnitudes, not the (possibly zero) sum
        assert abs(got - want) < 1e-14 * max(1.0, np.abs(terms).sum())


def test_gauss_hermite_order_one():
    rule = gauss_hermite(1)
    assert rule.nodes.shape == (1,)
    assert abs(rule.nodes[0]) < 1e-15
    assert abs(rule.weights[0] - np.sqrt(np.pi)) < 1e-14


def test_gauss_hermite_rejects_oversize():
    with pytest.raises(ValueError):
        gauss_hermite(MAX_QUAD_ORDER + 1)


def test_landau_mode_scaling():
    # I_n(x2) = (eB)^(1/4) phi_n(sqrt(eB) x2 shifted), here evaluated in xi
    eB = 2.3
    xi = np.linspace(-3.0, 3.0, 41)
    phi = hermite_functions(5, xi)
    for n in range(6):
        assert np.abs(landau_mode(n, xi, eB) - eB ** 0.25 * phi[n]).max() < 1e-13


def test_landau_mode_negative_index_is_zero():
    xi = np.linspace(-2.0, 2.0, 11)
    assert np.all(landau_mode(-1, xi, 1.7) == 0.0)


def test_landau_mode_x2_derivative():
    # d/dx2 I_n = sqrt(eB) (sqrt(n/2) I_{n-1} - sqrt((n+1)/2) I_{n+1})
    eB = 1.9
    x2 = np.linspace(-3.0, 3.0, 601)
    xi = np.sqrt(eB) * x2
    for n in range(5):
        vals = landau_mode(n, xi, eB)
        got = landau_mode_dx2(n, xi, eB)
        num = np.gradient(vals, x2)
        # interior points only, the one-sided edge stencils are first order
        assert np.abs(got[5:-5] - num[5:-5]).max() < 2e-3


def test_landau_modes_stack_matches_single():
    eB = 0.7
    xi = np.linspace(-2.0, 2.0, 31)
    stack = landau_modes(6, xi, eB)
    for n in range(7):
        assert np.array_equal(stack[n], landau_mode(n, xi, eB))
