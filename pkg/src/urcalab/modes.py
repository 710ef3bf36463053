"""Finite mode grids for the six registers.

Charged registers get cell-centered uniform grids in (p1, p3) tensored
with Landau indices and spins; the spin that has no n = 0 eigenspinor is
dropped there.  Neutral registers get radial shells times a rotated
Fibonacci direction set; each mode carries the volume of its shell cell
divided by the number of directions.  Weights are quadrature weights for
the continuum label integrals, so discrete ladder operators b_i =
sqrt(w_i) b(xi_i) satisfy exact anticommutation relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .landau import ChargedMode, landau_energy

SPECIES_ORDER = ("electron", "positron", "proton", "antiproton", "neutron", "neutrino")
CHARGED_SPECIES = SPECIES_ORDER[:4]
NEUTRAL_SPECIES = SPECIES_ORDER[4:]

# spin label with no surviving n = 0 spinor, per species
_EXCLUDED_ZERO_SPIN = {"electron": +1, "positron": -1, "proton": -1, "antiproton": +1}

MAX_MODES_PER_SPECIES = 64


@dataclass(frozen=True)
class ChargedGridMode:
    species: str
    s: int
    n: int
    p1: float
    p3: float
    weight: float
    energy: float

    @property
    def mode(self) -> ChargedMode:
        return ChargedMode(self.s, self.n, self.p1, self.p3)


@dataclass(frozen=True)
class NeutralGridMode:
    species: str
    lam: int
    p: tuple[float, float, float]
    weight: float
    energy: float

    @property
    def pvec(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def pmag(self) -> float:
        return math.sqrt(self.p[0] ** 2 + self.p[1] ** 2 + self.p[2] ** 2)


@dataclass(frozen=True)
class ModeGrid:
    eB: float
    modes: dict

    def species_modes(self, name: str) -> tuple:
        return self.modes[name]

    def counts(self) -> dict[str, int]:
        return {name: len(self.modes[name]) for name in SPECIES_ORDER}

    def total(self) -> int:
        return sum(len(self.modes[name]) for name in SPECIES_ORDER)

    def offsets(self) -> dict[str, int]:
        out, acc = {}, 0
        for name in SPECIES_ORDER:
            out[name] = acc
            acc += len(self.modes[name])
        return out

    def flat(self) -> tuple:
        out = []
        for name in SPECIES_ORDER:
            out.extend(self.modes[name])
        return tuple(out)

    def restrict_neutrino(self, pmin: float) -> "ModeGrid":
        """Drop neutrino modes with |p| < pmin; other registers unchanged."""
        kept = tuple(m for m in self.modes["neutrino"] if m.pmag >= pmin - 1e-12)
        new_modes = dict(self.modes)
        new_modes["neutrino"] = kept
        return replace(self, modes=new_modes)


def centered_grid(extent: float, count: int) -> tuple[np.ndarray, float]:
    """Cell-centered uniform nodes on [-extent, extent] and the cell width."""
    if count < 1:
        raise ValueError("grid count must be >= 1")
    if not extent > 0.0:
        raise ValueError("grid extent must be positive")
    h = 2.0 * extent / count
    nodes = -extent + h * (np.arange(count) + 0.5)
    return nodes, h


def fibonacci_directions(count: int) -> np.ndarray:
    """count unit vectors, near-uniform on the sphere, rotated off all axes."""
    if count < 1:
        raise ValueError("need at least one direction")
    i = np.arange(count)
    z = (2.0 * i + 1.0) / count - 1.0
    phi = 2.0 * math.pi * i / ((1.0 + math.sqrt(5.0)) / 2.0)
    rperp = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    dirs = np.stack([rperp * np.cos(phi), rperp * np.sin(phi), z], axis=1)
    a, b = 0.35, 0.55
    ry = np.array([[math.cos(b), 0.0, math.sin(b)], [0.0, 1.0, 0.0], [-math.sin(b), 0.0, math.cos(b)]])
    rz = np.array([[math.cos(a), -math.sin(a), 0.0], [math.sin(a), math.cos(a), 0.0], [0.0, 0.0, 1.0]])
    out = dirs @ (rz @ ry).T
    # keep every direction clear of the field axis and the p_perp = 0 ray
    perp = np.hypot(out[:, 0], out[:, 1])
    if perp.min() < 1e-6:
        raise RuntimeError("direction set degenerate against the field axis")
    return out


def shell_weights(radii) -> np.ndarray:
    """Radial volume per shell from geometric-mean cell edges."""
    r = np.asarray(radii, dtype=float)
    if r.ndim != 1 or len(r) < 1:
        raise ValueError("need a 1d list of shell radii")
    if not np.all(r > 0.0):
        raise ValueError("shell radii must be positive")
    if not np.all(np.diff(r) > 0.0):
        raise ValueError("shell radii must be strictly increasing")
    if len(r) == 1:
        edges = np.array([r[0] / math.sqrt(2.0), r[0] * math.sqrt(2.0)])
    else:
        inner = np.sqrt(r[:-1] * r[1:])
        edges = np.empty(len(r) + 1)
        edges[1:-1] = inner
        edges[0] = r[0] ** 2 / inner[0]
        edges[-1] = r[-1] ** 2 / inner[-1]
    return (4.0 * math.pi / 3.0) * np.diff(edges**3)


def _charged_modes(species: str, mass: float, eB: float, n_landau: int, p1_nodes, w1, p3_nodes, w3):
    out = []
    for n in range(n_landau + 1):
        for s in (+1, -1):
            if n == 0 and s == _EXCLUDED_ZERO_SPIN[species]:
                continue
            for p1 in p1_nodes:
                for p3 in p3_nodes:
                    out.append(
                        ChargedGridMode(
                            species=species,
                            s=s,
                            n=n,
                            p1=float(p1),
                            p3=float(p3),
                            weight=float(w1 * w3),
                            energy=landau_energy(mass, n, float(p3), eB),
                        )
                    )
    return tuple(out)


def _neutral_modes(species: str, mass: float, radii, n_directions: int, lams) -> tuple:
    dirs = fibonacci_directions(n_directions)
    vols = shell_weights(radii)
    out = []
    for r, vol in zip(np.asarray(radii, dtype=float), vols):
        for d in dirs:
            p = (float(r * d[0]), float(r * d[1]), float(r * d[2]))
            energy = math.sqrt(r * r + mass * mass) if mass > 0.0 else float(r)
            # helicity is a discrete label: each lam copy carries the full cell volume
            for lam in lams:
                out.append(
                    NeutralGridMode(
                        species=species,
                        lam=lam,
                        p=p,
                        weight=float(vol / n_directions),
                        energy=energy,
                    )
                )
    return tuple(out)


def build_grid(
    m_e: float,
    m_p: float,
    m_n: float,
    eB: float,
    n_landau: int = 0,
    p1_extent: float = 1.0,
    p1_count: int = 1,
    p3_extent: float = 1.0,
    p3_count: int = 1,
    neutron_radii=(1.0,),
    neutron_directions: int = 1,
    neutron_helicities: str = "both",
    neutrino_radii=(1.0,),
    neutrino_directions: int = 1,
    sigma_guard=None,
    guard_tol: float = 1e-9,
) -> ModeGrid:
    """Assemble the six-register grid.

    sigma_guard, when given, is a list of infrared cutoff scales; any
    neutrino shell radius within guard_tol of one of them is rejected so
    that restriction to |p| >= sigma never bisects a shell ambiguously.
    """
    if not eB > 0.0:
        raise ValueError("eB must be positive")
    lam_table = {"both": (+1, -1), "plus": (+1,), "minus": (-1,)}
    if neutron_helicities not in lam_table:
        raise ValueError("neutron_helicities must be 'both', 'plus' or 'minus'")
    if sigma_guard is not None:
        for r in neutrino_radii:
            for s in sigma_guard:
                if abs(r - s) < guard_tol * max(1.0, abs(s)):
                    raise ValueError(f"neutrino shell radius {r} collides with cutoff scale {s}")

    p1_nodes, w1 = centered_grid(p1_extent, p1_count)
    p3_nodes, w3 = centered_grid(p3_extent, p3_count)
    modes = {
        "electron": _charged_modes("electron", m_e, eB, n_landau, p1_nodes, w1, p3_nodes, w3),
        "positron": _charged_modes("positron", m_e, eB, n_landau, p1_nodes, w1, p3_nodes, w3),
        "proton": _charged_modes("proton", m_p, eB, n_landau, p1_nodes, w1, p3_nodes, w3),
        "antiproton": _charged_modes("antiproton", m_p, eB, n_landau, p1_nodes, w1, p3_nodes, w3),
        "neutron": _neutral_modes("neutron", m_n, neutron_radii, neutron_directions, lam_table[neutron_helicities]),
        "neutrino": _neutral_modes("neutrino", 0.0, neutrino_radii, neutrino_directions, (-1,)),
    }
    for name, ms in modes.items():
        if len(ms) > MAX_MODES_PER_SPECIES:
            raise ValueError(f"{name} grid has {len(ms)} modes, cap is {MAX_MODES_PER_SPECIES}")
    return ModeGrid(eB=eB, modes=modes)
