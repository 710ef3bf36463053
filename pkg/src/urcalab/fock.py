"""Truncated Fock space over a mode grid.

A basis state is a Python int bitmask over the flat mode list (species
blocks in fixed order).  Ladder operators use the Jordan-Wigner sign
(-1)^(occupied modes below), which makes the anticommutation relations
exact identities of the matrix representation on the full product basis.

Two enumeration modes:

    product:  all per-species occupations up to a cap, tensored
    closure:  breadth-first sweep from seed states under the four
              interaction patterns, so the basis is exactly the subspace
              the Hamiltonian can reach

Both sort states ascending, so basis order is reproducible.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .modes import ModeGrid, SPECIES_ORDER

# (register, create?) per slot, slots applied right to left: xi4, xi3, xi2, xi1
PROCESS_PATTERNS = {
    1: (("electron", True), ("proton", True), ("neutron", False), ("neutrino", False)),
    2: (("electron", False), ("proton", False), ("neutron", True), ("neutrino", True)),
    3: (("positron", True), ("antiproton", True), ("neutron", True), ("neutrino", True)),
    4: (("positron", False), ("antiproton", False), ("neutron", False), ("neutrino", False)),
}


def apply_ladder(state: int, i: int, create: bool) -> tuple[int, int] | None:
    """Apply b*_i (create) or b_i to a bitmask state.

    Returns (new_state, sign) with sign in {-1, +1}, or None when the
    operator annihilates the state.
    """
    bit = 1 << i
    occupied = bool(state & bit)
    if create == occupied:
        return None
    sign = -1 if (state & (bit - 1)).bit_count() & 1 else 1
    return state ^ bit, sign


def iter_bits(state: int):
    while state:
        low = state & -state
        yield low.bit_length() - 1
        state ^= low


class FockBasis:
    """Ordered state list plus mode bookkeeping for one grid."""

    def __init__(self, grid: ModeGrid, states):
        self.grid = grid
        self.states = tuple(sorted(set(int(s) for s in states)))
        self.index = {s: k for k, s in enumerate(self.states)}
        self.mode_list = grid.flat()
        offs = grid.offsets()
        counts = grid.counts()
        self.species_range = {name: range(offs[name], offs[name] + counts[name]) for name in SPECIES_ORDER}
        self.mode_energy = np.array([m.energy for m in self.mode_list])
        self.mode_weight = np.array([m.weight for m in self.mode_list])

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def mode_count(self) -> int:
        return len(self.mode_list)

    @property
    def vacuum_index(self) -> int | None:
        return self.index.get(0)

    def state_energy(self, state: int) -> float:
        return float(sum(self.mode_energy[i] for i in iter_bits(state)))

    def energies(self) -> np.ndarray:
        return np.array([self.state_energy(s) for s in self.states])

    def species_count(self, state: int, species: str) -> int:
        rng = self.species_range[species]
        block = (state >> rng.start) & ((1 << len(rng)) - 1)
        return block.bit_count()


def ladder_matrix(basis: FockBasis, i: int, create: bool, dtype=np.float64) -> sp.csr_matrix:
    """Matrix of b*_i or b_i on the basis; images outside it are dropped."""
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis.states):
        hit = apply_ladder(state, i, create)
        if hit is None:
            continue
        new_state, sign = hit
        row = basis.index.get(new_state)
        if row is None:
            continue
        rows.append(row)
        cols.append(col)
        vals.append(sign)
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=dtype)
    return mat.tocsr()


def number_operator(basis: FockBasis, species: str | None = None, dtype=np.float64) -> sp.csr_matrix:
    """Diagonal occupation count, either one species block or all modes."""
    if species is None:
        diag = np.array([state.bit_count() for state in basis.states], dtype=dtype)
    else:
        diag = np.array([basis.species_count(state, species) for state in basis.states], dtype=dtype)
    return sp.diags(diag, format="csr", dtype=dtype)


def _species_subset_masks(offset: int, count: int, cap: int) -> list[int]:
    masks = []
    for k in range(min(cap, count) + 1):
        for combo in combinations(range(count), k):
            m = 0
            for pos in combo:
                m |= 1 << (offset + pos)
            masks.append(m)
    return masks


def _apply_pattern(basis_ranges: dict, state: int, pattern, caps: dict) -> list[int]:
    """All states reachable from one state under one interaction pattern."""
    slots = []
    for species, create in pattern:
        rng = basis_ranges[species]
        if create:
            avail = [i for i in rng if not state & (1 << i)]
        else:
            avail = [i for i in rng if state & (1 << i)]
        if not avail:
            return []
        slots.append((species, create, avail))
    out = []

    def rec(k: int, st: int):
        if k == len(slots):
            out.append(st)
            return
        species, create, avail = slots[k]
        for i in avail:
            hit = apply_ladder(st, i, create)
            if hit is None:
                continue
            rec(k + 1, hit[0])

    rec(0, state)
    if caps:
        counts = {name: len(rng) for name, rng in basis_ranges.items()}
        filtered = []
        for st in out:
            ok = True
            for name, cap in caps.items():
                rng = basis_ranges[name]
                block = (st >> rng.start) & ((1 << counts[name]) - 1)
                if block.bit_count() > cap:
                    ok = False
                    break
            if ok:
                filtered.append(st)
        return filtered
    return out


def enumerate_basis(
    grid: ModeGrid,
    caps: dict[str, int] | None = None,
    mode: str = "product",
    seeds: str = "vacuum",
    depth: int = 3,
    max_dim: int = 200_000,
) -> FockBasis:
    """Build the state list for a grid.

    caps bounds the occupation of each species block (default: no bound
    beyond the mode count).  In closure mode the four process patterns are
    applied breadth-first for `depth` sweeps starting from the vacuum or
    from the vacuum plus all single-mode states.
    """
    offs = grid.offsets()
    counts = grid.counts()
    caps = dict(caps or {})
    for name in SPECIES_ORDER:
        caps.setdefault(name, counts[name])

    if mode == "product":
        per_species = []
        total = 1
        for name in SPECIES_ORDER:
            masks = _species_subset_masks(offs[name], counts[name], caps[name])
            per_species.append(masks)
            total *= len(masks)
            if total > max_dim:
                raise ValueError(f"product basis would exceed max_dim = {max_dim}")
        states = [0]
        for masks in per_species:
            states = [s | m for s in states for m in masks]
        return FockBasis(grid, states)

    if mode != "closure":
        raise ValueError("mode must be 'product' or 'closure'")

    ranges = {name: range(offs[name], offs[name] + counts[name]) for name in SPECIES_ORDER}
    if seeds == "vacuum":
        seen = {0}
    elif seeds == "vacuum+singles":
        seen = {0}
        for i in range(grid.total()):
            seen.add(1 << i)
    else:
        raise ValueError("seeds must be 'vacuum' or 'vacuum+singles'")
    frontier = set(seen)
    for _ in range(depth):
        nxt = set()
        for state in frontier:
            for pattern in PROCESS_PATTERNS.values():
                for new_state in _apply_pattern(ranges, state, pattern, caps):
                    if new_state not in seen:
                        nxt.add(new_state)
        if not nxt:
            break
        seen |= nxt
        if len(seen) > max_dim:
            raise ValueError(f"closure basis would exceed max_dim = {max_dim}")
        frontier = nxt
    return FockBasis(grid, seen)
