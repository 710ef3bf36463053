"""Occupation bitmask Fock space: ladders, CAR, enumeration."""

import numpy as np
import pytest

from urcalab.fock import (
    FockBasis,
    apply_ladder,
    enumerate_basis,
    iter_bits,
    ladder_matrix,
    number_operator,
)
from urcalab.modes import build_grid

TOY = dict(m_e=1.0, m_p=2.0, m_n=2.2, eB=1.0)


def _full_basis(**overrides):
    grid = build_grid(**TOY, **overrides)
    return enumerate_basis(grid, mode="product"), grid


def test_apply_ladder_signs():
    # state 0b101, create at position 1: one bit below, sign -1
    out = apply_ladder(0b101, 1, True)
    assert out == (0b111, -1)
    # annihilate empty position gives None
    assert apply_ladder(0b101, 1, False) is None
    # double creation gives None
    assert apply_ladder(0b101, 0, True) is None
    out = apply_ladder(0b111, 2, False)
    assert out == (0b011, +1)


def test_iter_bits():
    assert list(iter_bits(0b10110)) == [1, 2, 4]
    assert list(iter_bits(0)) == []


class TestCanonicalAnticommutation:
    """Exact CAR on the full product basis of a 12 mode grid."""

    basis, grid = _full_basis(
        neutrino_radii=(0.5, 1.0, 2.0, 3.0),
        neutron_radii=(1.0, 2.0),
        neutron_helicities="both",
    )

    def test_mode_count(self):
        # charged species one mode each, neutron 2 radii x 2 helicities,
        # neutrino 4 radii single helicity: 12 modes, 4096 states
        assert self.grid.total() == 12
        assert self.basis.dim == 4096

    def test_car_relations_exact(self):
        import scipy.sparse as sp

        m = self.basis.mode_count
        ann = [ladder_matrix(self.basis, i, False, dtype=np.int64) for i in range(m)]
        cre = [a.T.tocsr() for a in ann]
        eye = sp.identity(self.basis.dim, dtype=np.int64, format="csr")
        for i in range(m):
            for j in range(i, m):
                anti = ann[i] @ cre[j] + cre[j] @ ann[i]
                if i == j:
                    anti = anti - eye
                assert anti.nnz == 0 or abs(anti).max() == 0
                pair = ann[i] @ ann[j] + ann[j] @ ann[i]
                assert pair.nnz == 0 or abs(pair).max() == 0

    def test_creation_is_adjoint(self):
        a = ladder_matrix(self.basis, 1, False)
        c = ladder_matrix(self.basis, 1, True)
        assert (abs(a.T - c)).max() == 0.0


def test_car_needs_full_basis():
    """On a truncated basis the projected ladders fail the CAR, as they must."""
    grid = build_grid(**TOY)
    basis = enumerate_basis(grid, mode="closure", seeds="vacuum", depth=2)
    assert basis.dim < 2 ** grid.total()
    a = ladder_matrix(basis, 4, False, dtype=np.int64)
    c = a.T
    anti = (a @ c + c @ a).toarray()
    assert not np.array_equal(anti, np.eye(basis.dim, dtype=np.int64))


def test_number_operator_diagonal():
    basis, grid = _full_basis()
    n_nu = number_operator(basis, "neutrino")
    assert (abs(n_nu - n_nu.T)).max() == 0.0
    dense = n_nu.toarray()
    assert np.abs(dense - np.diag(np.diag(dense))).max() == 0.0
    n_all = number_operator(basis)
    # weighted by quadrature volumes, so eigenvalues are sums of weights
    vac = basis.vacuum_index
    assert dense[vac, vac] == 0.0
    assert n_all[vac, vac] == 0.0


def test_number_operator_counts_occupancy():
    # discrete ladders absorb sqrt(weight), so the plain occupancy count is
    # already the quadrature of the continuum number density
    basis, grid = _full_basis()
    n_nu = number_operator(basis, "neutrino").toarray()
    for i, st in enumerate(basis.states):
        assert n_nu[i, i] == float(basis.species_count(st, "neutrino"))


def test_product_enumeration_with_caps():
    grid = build_grid(**TOY, neutrino_radii=(0.5, 1.0, 2.0))
    basis = enumerate_basis(grid, caps={"neutrino": 1}, mode="product")
    # charged 2^4, neutron both helicities 2^2, neutrino empty or one of 3
    assert basis.dim == 2 ** 4 * 2 ** 2 * 4
    for st in basis.states:
        assert basis.species_count(st, "neutrino") <= 1


def test_closure_enumeration_minimal_grid():
    grid = build_grid(**TOY, neutron_helicities="plus")
    basis = enumerate_basis(grid, mode="closure", seeds="vacuum", depth=4)
    # vacuum -> full quartet -> charged pairs replace the neutrals
    assert basis.dim == 3
    assert basis.vacuum_index is not None


def test_closure_subset_of_product():
    grid = build_grid(**TOY, neutrino_radii=(0.5, 1.0))
    full = enumerate_basis(grid, mode="product")
    closed = enumerate_basis(grid, mode="closure", seeds="vacuum", depth=6)
    assert set(closed.states) <= set(full.states)
    assert closed.dim < full.dim


def test_max_dim_guard():
    grid = build_grid(**TOY, neutrino_radii=(0.5, 1.0, 2.0), p1_count=2, p3_count=2)
    with pytest.raises(ValueError):
        enumerate_basis(grid, mode="product", max_dim=100)


def test_state_energy_additive():
    basis, grid = _full_basis()
    flat = grid.flat()
    for st in basis.states[: min(20, basis.dim)]:
        want = sum(flat[i].energy for i in iter_bits(st))
        assert abs(basis.state_energy(st) - want) < 1e-12
