"""Landau-level eigenspinors of charged Dirac particles in a uniform field.

Conventions (hbar = c = 1): the magnetic field B > 0 points along the third
axis in the gauge A = (-x2 B, 0, 0), so the transverse problem is a shifted
oscillator in x2.  For a particle of signed charge q (in units of e > 0) the
kinetic x2-coefficient in the fiber Dirac operator is p1 + q eB x2, and the
oscillator variable is

    negative charge:  xi  = sqrt(eB) (x2 - p1 / eB)      (electron form)
    positive charge:  xi~ = sqrt(eB) (x2 + p1 / eB)      (proton form),

i.e. the Gaussian center is -q p1 / eB.  Energies are

    E_n(p3) = sqrt(m^2 + p3^2 + 2 n eB),  n = 0, 1, 2, ...

Exactly one spin label survives at n = 0 for each species; the forbidden
(s, n=0) combinations evaluate to the zero spinor:

    particle U:       s = +1 zero for negative charge, s = -1 for positive
    particle V:       s = +1 zero for negative charge, s = -1 for positive
    antiparticle W:   s = -1 zero on the electron label, s = +1 on the proton label

The antiparticle coefficient spinor on a particle label space is
W_s(n, p1, p3) = V_{-s}(n, -p1, -p3) of the same species family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermite import gauss_hermite, landau_mode_dx2, landau_modes

SPECIES_NAMES = ("electron", "positron", "proton", "antiproton")

# signed charge in units of e; the spinor family follows the sign
_CHARGE_SIGN = {"electron": -1, "positron": +1, "proton": +1, "antiproton": -1}


@dataclass(frozen=True)
class ChargedSpecies:
    name: str
    mass: float
    charge_sign: int


@dataclass(frozen=True)
class ChargedMode:
    """Mode label (s, n, p1, p3) of a charged register; s in {-1, +1}."""

    s: int
    n: int
    p1: float
    p3: float


@dataclass(frozen=True)
class SpinorProfile:
    """Symbolic form of a Landau spinor: component j = coeff[j] * I_index[j](xi).

    index -1 marks an absent Landau factor (I_{-1} = 0); center is the
    Gaussian center of xi in the x2 coordinate; energy is E_n(p3) > 0
    regardless of the particle/antiparticle branch.
    """

    coeff: tuple[float, float, float, float]
    index: tuple[int, int, int, int]
    center: float
    energy: float

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coeff)


def species_set(m_e: float, m_p: float) -> dict[str, ChargedSpecies]:
    return {
        "electron": ChargedSpecies("electron", m_e, -1),
        "positron": ChargedSpecies("positron", m_e, +1),
        "proton": ChargedSpecies("proton", m_p, +1),
        "antiproton": ChargedSpecies("antiproton", m_p, -1),
    }


def landau_energy(mass: float, n: int, p3: float, eB: float) -> float:
    if n < 0:
        raise ValueError("Landau index must be >= 0")
    return float(np.sqrt(mass * mass + p3 * p3 + 2.0 * n * eB))


def xi_center(charge_sign: int, p1: float, eB: float) -> float:
    return -charge_sign * p1 / eB


def _zero_profile(center: float, energy: float) -> SpinorProfile:
    return SpinorProfile((0.0, 0.0, 0.0, 0.0), (-1, -1, -1, -1), center, energy)


def spinor_profile(species: ChargedSpecies, kind: str, mode: ChargedMode, eB: float) -> SpinorProfile:
    """Coefficient table of U, V or W for the given species and mode label.

    U and V are the positive/negative frequency eigenspinors of the fiber
    Dirac operator; W is the antiparticle expansion coefficient on this
    label space, W_s = V_{-s} at reflected momenta.
    """
    if kind == "W":
        flipped = ChargedMode(-mode.s, mode.n, -mode.p1, -mode.p3)
        return spinor_profile(species, "V", flipped, eB)
    if kind not in ("U", "V"):
        raise ValueError(f"unknown spinor kind {kind!r}")
    if mode.s not in (-1, +1):
        raise ValueError("spin label must be -1 or +1")
    if mode.n < 0:
        raise ValueError("Landau index must be >= 0")

    m, q, n = species.mass, species.charge_sign, mode.n
    energy = landau_energy(m, n, mode.p3, eB)
    center = xi_center(q, mode.p1, eB)
    nrm = np.sqrt((energy + m) / (2.0 * energy))
    al = mode.p3 / (energy + m)
    be = np.sqrt(2.0 * n * eB) / (energy + m)

    if q < 0:  # electron form
        if kind == "U":
            if mode.s == +1:
                if n == 0:
                    return _zero_profile(center, energy)
                coeff = (nrm, 0.0, nrm * al, -nrm * be)
                index = (n - 1, -1, n - 1, n)
            else:
                coeff = (0.0, nrm, -nrm * be, -nrm * al)
                index = (-1, n, n - 1, n)
        else:
            if mode.s == +1:
                if n == 0:
                    return _zero_profile(center, energy)
                coeff = (-nrm * al, nrm * be, nrm, 0.0)
                index = (n - 1, n, n - 1, -1)
            else:
                coeff = (nrm * be, nrm * al, 0.0, nrm)
                index = (n - 1, n, -1, n)
    else:  # proton form
        if kind == "U":
            if mode.s == +1:
                coeff = (nrm, 0.0, nrm * al, nrm * be)
                index = (n, -1, n, n - 1)
            else:
                if n == 0:
                    return _zero_profile(center, energy)
                coeff = (0.0, nrm, nrm * be, -nrm * al)
                index = (-1, n - 1, n, n - 1)
        else:
            if mode.s == +1:
                coeff = (-nrm * al, -nrm * be, nrm, 0.0)
                index = (n, n - 1, n, -1)
            else:
                if n == 0:
                    return _zero_profile(center, energy)
                coeff = (-nrm * be, nrm * al, 0.0, nrm)
                index = (n, n - 1, -1, n - 1)

    return SpinorProfile(coeff, index, center, energy)


def eval_profile(profile: SpinorProfile, x2, eB: float, bare: bool = False) -> np.ndarray:
    """Evaluate the four components at x2 (scalar or array), shape (4, npts).

    bare=True strips the Gaussian envelope from the Landau factors, for
    callers that absorb the product of envelopes into a quadrature weight.
    """
    x2_arr = np.atleast_1d(np.asarray(x2, dtype=float))
    xi = np.sqrt(eB) * (x2_arr - profile.center)
    out = np.zeros((4,) + xi.shape)
    n_max = max(profile.index)
    if n_max >= 0 and not profile.is_zero:
        table = landau_modes(n_max, xi, eB, bare=bare)
        for j in range(4):
            if profile.index[j] >= 0 and profile.coeff[j] != 0.0:
                out[j] = profile.coeff[j] * table[profile.index[j]]
    return out


def eval_profile_xi(profile: SpinorProfile, xi, eB: float, bare: bool = False) -> np.ndarray:
    """Same as eval_profile but with the oscillator variable given directly."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.zeros((4,) + xi_arr.shape)
    n_max = max(profile.index)
    if n_max >= 0 and not profile.is_zero:
        table = landau_modes(n_max, xi_arr, eB, bare=bare)
        for j in range(4):
            if profile.index[j] >= 0 and profile.coeff[j] != 0.0:
                out[j] = profile.coeff[j] * table[profile.index[j]]
    return out


def spinor_U(species: ChargedSpecies, mode: ChargedMode, x2, eB: float) -> np.ndarray:
    return eval_profile(spinor_profile(species, "U", mode, eB), x2, eB)


def spinor_V(species: ChargedSpecies, mode: ChargedMode, x2, eB: float) -> np.ndarray:
    return eval_profile(spinor_profile(species, "V", mode, eB), x2, eB)


def field_spinor_W(species: ChargedSpecies, mode: ChargedMode, x2, eB: float) -> np.ndarray:
    return eval_profile(spinor_profile(species, "W", mode, eB), x2, eB)


def profile_inner(a: SpinorProfile, b: SpinorProfile, eB: float, order: int = 128) -> float:
    """L2 inner product over x2 of two profiles with a common center.

    The joint Gaussian envelope is exactly the Gauss-Hermite weight, so
    the quadrature is exact for the Landau polynomial content.
    """
    if abs(a.center - b.center) > 1e-12:
        raise ValueError("profiles must share a Gaussian center")
    rule = gauss_hermite(order)
    pa = eval_profile_xi(a, rule.nodes, eB, bare=True)
    pb = eval_profile_xi(b, rule.nodes, eB, bare=True)
    return float(np.sum(rule.weights * np.sum(pa * pb, axis=0)) / np.sqrt(eB))


def charge_conjugate(psi: np.ndarray) -> np.ndarray:
    """C psi = (psi4*, -psi3*, -psi2*, psi1*), an involution."""
    psi = np.asarray(psi)
    out = np.empty_like(psi, dtype=complex)
    out[0] = np.conj(psi[3])
    out[1] = -np.conj(psi[2])
    out[2] = -np.conj(psi[1])
    out[3] = np.conj(psi[0])
    return out


def reduced_dirac_apply(
    mass: float,
    charge_sign: int,
    p1: float,
    p3: float,
    eB: float,
    profile: SpinorProfile,
    x2,
) -> np.ndarray:
    """Apply the transverse-fiber Dirac operator to a profile at points x2.

    The operator is [[m, K], [K, -m]] on 2+2 components with
    K = sigma1 (p1 + q eB x2) - i sigma2 d/dx2 + sigma3 p3, and the x2
    derivative is taken exactly on the Landau basis (no finite differences).
    Returns the (4, npts) image; eigenspinors satisfy H psi = +/- E psi.
    """
    x2_arr = np.atleast_1d(np.asarray(x2, dtype=float))
    xi = np.sqrt(eB) * (x2_arr - profile.center)
    comps = np.zeros((4,) + x2_arr.shape)
    dcomps = np.zeros((4,) + x2_arr.shape)
    for j in range(4):
        nj = profile.index[j]
        cj = profile.coeff[j]
        if nj >= 0 and cj != 0.0:
            comps[j] = cj * landau_modes(nj, xi, eB)[nj]
            dcomps[j] = cj * landau_mode_dx2(nj, xi, eB)
    a = p1 + charge_sign * eB * x2_arr

    def k_block(f, g, df, dg):
        return (p3 * f + a * g - dg, a * f + df - p3 * g)

    k_lower = k_block(comps[2], comps[3], dcomps[2], dcomps[3])
    k_upper = k_block(comps[0], comps[1], dcomps[0], dcomps[1])
    out = np.empty_like(comps)
    out[0] = mass * comps[0] + k_lower[0]
    out[1] = mass * comps[1] + k_lower[1]
    out[2] = k_upper[0] - mass * comps[2]
    out[3] = k_upper[1] - mass * comps[3]
    return out


def thresholds(mass: float, eB: float, n_max: int) -> np.ndarray:
    """Landau thresholds sqrt(m^2 + 2 n eB), n = 0..n_max, strictly increasing."""
    n = np.arange(n_max + 1)
    return np.sqrt(mass * mass + 2.0 * n * eB)


def threshold_union(m_e: float, m_p: float, m_n: float, eB: float, n_max: int) -> np.ndarray:
    """Sorted union of charged Landau thresholds and neutron mass multiples."""
    neutron = m_n * np.arange(1, n_max + 1)
    allv = np.concatenate([thresholds(m_e, eB, n_max), thresholds(m_p, eB, n_max), neutron])
    return np.unique(np.round(allv, 12))
