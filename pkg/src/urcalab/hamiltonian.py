"""Hamiltonian assembly on a truncated Fock basis.

H = H0 + g HI with H0 the diagonal sum of mode energies and HI the sum of
the four process monomials with quadrature-weighted vertex amplitudes.
Processes 2 and 4 are assembled from their own amplitude tables, never by
transposing 1 and 3; the hermiticity defect of the result is a diagnostic
for the whole amplitude pipeline and is checked against a hard tolerance.

Amplitude tables are cached without the infrared cutoff; a cutoff only
rescales each table along the neutrino axis, so sweeps over sigma reuse
every x2 quadrature.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .fock import PROCESS_PATTERNS, FockBasis, apply_ladder
from .kernels import KernelSpec, ModelConstants, ir_cutoff_factor
from .modes import ModeGrid
from .operators import SparseOperator, as_csr
from .vertex import VertexContext, amplitude

# registers feeding slots (xi1, xi2, xi3, xi4) of each process
PROCESS_REGISTERS = {
    1: ("electron", "proton", "neutron", "neutrino"),
    2: ("electron", "proton", "neutron", "neutrino"),
    3: ("positron", "antiproton", "neutron", "neutrino"),
    4: ("positron", "antiproton", "neutron", "neutrino"),
}

# slot application sequence (rightmost factor of the monomial first)
_APPLY_ORDER = {1: (3, 2, 1, 0), 2: (0, 1, 2, 3), 3: (0, 1, 2, 3), 4: (0, 1, 2, 3)}

DROP_TOL = 1e-14
HERMITICITY_TOL = 1e-12


class VertexCache:
    """Per-grid store of raw amplitude tables, one 4d array per process."""

    def __init__(self, grid: ModeGrid, spec: KernelSpec, ctx: VertexContext, check: bool = False):
        self.grid = grid
        self.spec = spec
        self.ctx = ctx
        self.check = check
        self._tables: dict[int, np.ndarray] = {}

    def table(self, process: int) -> np.ndarray:
        """Amplitudes without cutoff or weights, shape (n1, n2, n3, n4)."""
        if process in self._tables:
            return self._tables[process]
        regs = PROCESS_REGISTERS[process]
        m1 = self.grid.species_modes(regs[0])
        m2 = self.grid.species_modes(regs[1])
        m3 = self.grid.species_modes(regs[2])
        m4 = self.grid.species_modes(regs[3])
        arr = np.zeros((len(m1), len(m2), len(m3), len(m4)), dtype=complex)
        for i1, ge in enumerate(m1):
            for i2, gp in enumerate(m2):
                for i3, gn in enumerate(m3):
                    for i4, gv in enumerate(m4):
                        arr[i1, i2, i3, i4] = amplitude(
                            process,
                            ge.mode,
                            gp.mode,
                            gn.lam,
                            gn.pvec,
                            gv.pvec,
                            self.spec,
                            self.ctx,
                            sigma=None,
                            check=self.check,
                        )
        self._tables[process] = arr
        return arr

    def weighted_table(self, process: int, sigma: float | None) -> np.ndarray:
        """Table with sqrt-weight factors and the sigma cutoff folded in."""
        regs = PROCESS_REGISTERS[process]
        sw = [np.sqrt([m.weight for m in self.grid.species_modes(r)]) for r in regs]
        cut = np.array(
            [ir_cutoff_factor(m.pmag, sigma) for m in self.grid.species_modes(regs[3])]
        )
        out = self.table(process) * sw[0][:, None, None, None]
        out = out * sw[1][None, :, None, None]
        out = out * sw[2][None, None, :, None]
        out = out * (sw[3] * cut)[None, None, None, :]
        return out


def assemble_H0(basis: FockBasis) -> SparseOperator:
    return SparseOperator(sp.diags(basis.energies(), format="csr"), name="H0")


def assemble_HI(
    basis: FockBasis,
    spec: KernelSpec,
    ctx: VertexContext,
    sigma: float | None = None,
    cache: VertexCache | None = None,
    drop_tol: float = DROP_TOL,
    hermiticity_tol: float = HERMITICITY_TOL,
    check: bool = False,
) -> SparseOperator:
    """Interaction operator at unit coupling.

    Raises if the assembled matrix fails the hermiticity gate; that
    failure mode flags a conjugation or ordering bug upstream, never
    something a caller should tolerate.
    """
    if cache is None:
        cache = VertexCache(basis.grid, spec, ctx, check=check)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []

    for process in (1, 2, 3, 4):
        wt = cache.weighted_table(process, sigma)
        if not np.any(wt):
            continue
        pattern = PROCESS_PATTERNS[process]
        regs = PROCESS_REGISTERS[process]
        ranges = [basis.species_range[r] for r in regs]
        order = _APPLY_ORDER[process]
        chosen = [0, 0, 0, 0]

        for col, state in enumerate(basis.states):

            def walk(k: int, st: int, sgn: int):
                if k == 4:
                    a = wt[chosen[0], chosen[1], chosen[2], chosen[3]]
                    if a == 0.0:
                        return
                    row = basis.index.get(st)
                    if row is None:
                        return
                    rows.append(row)
                    cols.append(col)
                    vals.append(sgn * a)
                    return
                slot = order[k]
                _, create = pattern[slot]
                rng = ranges[slot]
                for j, gidx in enumerate(rng):
                    hit = apply_ladder(st, gidx, create)
                    if hit is None:
                        continue
                    chosen[slot] = j
                    walk(k + 1, hit[0], sgn * hit[1])

            walk(0, state, 1)

    if not vals:
        mat = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
        return SparseOperator(mat, name="HI", meta={"sigma": sigma})

    arr = np.asarray(vals)
    peak = float(np.abs(arr).max())
    keep = np.abs(arr) >= drop_tol * peak
    mat = sp.coo_matrix(
        (arr[keep], (np.asarray(rows)[keep], np.asarray(cols)[keep])),
        shape=(basis.dim, basis.dim),
    ).tocsr()
    mat.sum_duplicates()
    op = SparseOperator(mat, name="HI", meta={"sigma": sigma})
    defect = op.hermiticity_defect()
    if defect > hermiticity_tol * max(1.0, peak):
        raise RuntimeError(f"interaction operator hermiticity defect {defect:.3e} exceeds gate")
    return op


def assemble_H(
    basis: FockBasis,
    spec: KernelSpec,
    ctx: VertexContext,
    g: float,
    sigma: float | None = None,
    cache: VertexCache | None = None,
    check: bool = False,
) -> SparseOperator:
    h0 = assemble_H0(basis)
    hi = assemble_HI(basis, spec, ctx, sigma=sigma, cache=cache, check=check)
    mat = (h0.matrix + g * hi.matrix).tocsr()
    return SparseOperator(mat, name="H", meta={"g": g, "sigma": sigma})


def assemble_commutator_v(
    basis: FockBasis,
    spec: KernelSpec,
    ctx: VertexContext,
    k_local: int,
    sigma: float | None = None,
    cache: VertexCache | None = None,
) -> SparseOperator:
    """[b_k, HI] for neutrino mode k: the two three-leg remainder operators.

    Process 2 contributes b*_n b_p b_e, process 3 contributes
    b*_n b*_pbar b*_ebar, both evaluated at xi4 = k with that mode's
    sqrt-weight and cutoff factor kept in place.
    """
    if cache is None:
        cache = VertexCache(basis.grid, spec, ctx)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []

    for process in (2, 3):
        wt3 = cache.weighted_table(process, sigma)[:, :, :, k_local]
        if not np.any(wt3):
            continue
        pattern = PROCESS_PATTERNS[process][:3]
        regs = PROCESS_REGISTERS[process][:3]
        ranges = [basis.species_range[r] for r in regs]
        chosen = [0, 0, 0]

        for col, state in enumerate(basis.states):

            def walk(k: int, st: int, sgn: int):
                if k == 3:
                    a = wt3[chosen[0], chosen[1], chosen[2]]
                    if a == 0.0:
                        return
                    row = basis.index.get(st)
                    if row is None:
                        return
                    rows.append(row)
                    cols.append(col)
                    vals.append(sgn * a)
                    return
                _, create = pattern[k]
                rng = ranges[k]
                for j, gidx in enumerate(rng):
                    hit = apply_ladder(st, gidx, create)
                    if hit is None:
                        continue
                    chosen[k] = j
                    walk(k + 1, hit[0], sgn * hit[1])

            walk(0, state, 1)

    mat = sp.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=complex).tocsr()
    return SparseOperator(mat, name=f"V_{k_local}", meta={"sigma": sigma, "mode": k_local})


def discrete_coupling_norms(grid: ModeGrid, spec: KernelSpec) -> dict:
    """Grid-quadrature kernel norms next to their continuum values."""
    out = {"channels": []}
    k_disc = 0.0
    for ch in spec.channels:
        f2 = 0.0
        for gp in grid.species_modes("proton"):
            for gn in grid.species_modes("neutron"):
                f2 += gp.weight * gn.weight * float(ch.proton_leg.eval(gp.n, gp.p1, gp.p3)) ** 2 * float(
                    ch.neutron_leg.eval(gn.pmag)
                ) ** 2
        g2 = 0.0
        for ge in grid.species_modes("electron"):
            for gv in grid.species_modes("neutrino"):
                g2 += ge.weight * gv.weight * float(ch.electron_leg.eval(ge.n, ge.p1, ge.p3)) ** 2 * float(
                    ch.neutrino_leg.eval(gv.pmag)
                ) ** 2
        f_disc, g_disc = np.sqrt(f2), np.sqrt(g2)
        k_disc += f_disc * g_disc
        out["channels"].append(
            {
                "hadronic_discrete": float(f_disc),
                "hadronic_continuum": ch.hadronic_norm(),
                "leptonic_discrete": float(g_disc),
                "leptonic_continuum": ch.leptonic_norm(),
            }
        )
    out["coupling_norm_discrete"] = float(k_disc)
    out["coupling_norm_continuum"] = spec.coupling_norm()
    return out


def relative_bound_check(
    h0,
    hi,
    constants: ModelConstants,
    trials: int = 1000,
    seed: int = 1066,
) -> dict:
    """Check |HI psi| <= K (C |H0 psi| + B |psi|) on columns and random vectors.

    The continuum-kernel K is the weaker, safe gate; ratios are reported so
    a caller can see the margin.
    """
    H0 = as_csr(h0)
    HI = as_csr(hi)
    dim = H0.shape[0]
    kappa, c_rel, b_rel = constants.kappa, constants.c_rel, constants.b_rel

    diag = np.real(H0.diagonal())
    col_hi = np.sqrt(np.asarray(abs(HI).multiply(abs(HI)).sum(axis=0)).ravel())
    rhs = kappa * (c_rel * np.abs(diag) + b_rel)
    ratios = col_hi / rhs
    max_ratio = float(ratios.max()) if dim else 0.0
    violations = int(np.sum(ratios > 1.0))

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        psi /= np.linalg.norm(psi)
        lhs = float(np.linalg.norm(HI @ psi))
        bound = kappa * (c_rel * float(np.linalg.norm(H0 @ psi)) + b_rel)
        r = lhs / bound
        if r > max_ratio:
            max_ratio = r
        if r > 1.0:
            violations += 1
    return {
        "max_ratio": max_ratio,
        "violations": violations,
        "n_checked": dim + trials,
        "kappa": kappa,
        "c_rel": c_rel,
        "b_rel": b_rel,
    }
