"""Desk-scale Fock-space laboratory for the magnetized Urca pair nu + n <-> e- + p.

The model lives in a uniform magnetic field along the third axis: charged
species occupy relativistic Landau levels, neutral species are plane waves in
a helicity basis, and the four-fermion contact interaction is assembled as a
sparse operator on a truncated fermionic Fock space.  Everything is sized for
a desk: small mode grids, exact CAR bookkeeping, dense or Lanczos spectra, and
an experiment battery that checks the structural facts of the model (relative
bounds, infrared spectral gaps, pull-through identities, soft-mode number
bounds, ground-state simplicity) at explicit tolerances.
"""

__version__ = "0.1.0"

from .hermite import gauss_hermite, hermite_poly, landau_mode
from .landau import ChargedMode, charge_conjugate, landau_energy, spinor_U, spinor_V
from .helicity import helicity_basis, neutrino_spinors, neutron_spinors
from .kernels import KernelSpec, derive_constants, ir_cutoff_factor, sigma_sequence
from .config import RunConfig, physical_config, toy_config

__all__ = [
    "ChargedMode",
    "KernelSpec",
    "RunConfig",
    "charge_conjugate",
    "derive_constants",
    "gauss_hermite",
    "helicity_basis",
    "hermite_poly",
    "ir_cutoff_factor",
    "landau_energy",
    "landau_mode",
    "neutrino_spinors",
    "neutron_spinors",
    "physical_config",
    "sigma_sequence",
    "spinor_U",
    "spinor_V",
    "toy_config",
]
