"""Acceptance battery: one criterion per test, one printed verdict per line.

Each test prints `criterion NN <name>: PASS` or `: FAIL` before asserting,
so a full run leaves a readable scorecard in the captured output.
"""

import json

import numpy as np
import pytest

from urcalab.cli import main as cli_main
from urcalab.config import (
    build_constants,
    build_context,
    build_grid_from,
    build_kernel_spec,
    toy_config,
)
from urcalab.fock import FockBasis, enumerate_basis, ladder_matrix
from urcalab.hamiltonian import (
    assemble_H,
    assemble_H0,
    assemble_HI,
    relative_bound_check,
)
from urcalab.helicity import conjugation_phase, neutrino_u, neutrino_v, neutron_spinors
from urcalab.kernels import check_hypothesis_61
from urcalab.landau import (
    ChargedMode,
    charge_conjugate,
    eval_profile,
    profile_inner,
    reduced_dirac_apply,
    species_set,
    spinor_profile,
)
from urcalab.modes import build_grid
from urcalab.spectra import (
    degeneracy_check,
    dense_spectrum,
    ground_energy_curve,
    ground_state,
    ir_gap_study,
    lanczos_lowest,
    pull_through_residual,
    soft_number_scaling,
)

CFG = toy_config()
SPEC = build_kernel_spec(CFG)
CTX = build_context(CFG)
CONSTANTS = build_constants(CFG)
TOY = dict(m_e=1.0, m_p=2.0, m_n=2.2, eB=1.0)


def _verdict(label: str, ok: bool) -> bool:
    print(f"criterion {label}: {'PASS' if ok else 'FAIL'}")
    return ok


def test_01_spinor_exactness():
    species = species_set(1.0, 2.0)
    rng = np.random.default_rng(1905)
    x2 = np.linspace(-9.0, 9.0, 121)
    worst_rel = 0.0
    for name in ("electron", "positron", "proton", "antiproton"):
        sp = species[name]
        for kind, branch in (("U", +1.0), ("V", -1.0)):
            for n in range(7):
                for _ in range(20):
                    p1, p3 = rng.uniform(-1.5, 1.5, 2)
                    s = int(rng.choice([-1, 1]))
                    prof = spinor_profile(sp, kind, ChargedMode(s, n, float(p1), float(p3)), 1.0)
                    if prof.is_zero:
                        continue
                    psi = eval_profile(prof, x2, 1.0)
                    img = reduced_dirac_apply(sp.mass, sp.charge_sign, float(p1), float(p3), 1.0, prof, x2)
                    target = branch * prof.energy * psi
                    rel = np.linalg.norm(img - target) / np.linalg.norm(target)
                    worst_rel = max(worst_rel, float(rel))
    worst_gram = 0.0
    for name in ("electron", "positron", "proton", "antiproton"):
        profs = []
        for kind in ("U", "V"):
            for s in (-1, +1):
                for n in range(5):
                    prof = spinor_profile(species[name], kind, ChargedMode(s, n, 0.37, -0.21), 1.0)
                    if not prof.is_zero:
                        profs.append(prof)
        gram = np.array([[profile_inner(a, b, 1.0) for b in profs] for a in profs])
        worst_gram = max(worst_gram, float(np.abs(gram - np.eye(len(profs))).max()))
    ok = worst_rel < 1e-6 and worst_gram < 1e-10
    assert _verdict("01 spinor exactness", ok), (worst_rel, worst_gram)


def test_02_charge_conjugation():
    species = species_set(1.0, 2.0)
    rng = np.random.default_rng(1906)
    x2 = np.linspace(-7.0, 7.0, 61)
    worst = 0.0
    pairs = (
        ("electron", "positron"),
        ("positron", "electron"),
        ("proton", "antiproton"),
        ("antiproton", "proton"),
    )
    for part, anti in pairs:
        for _ in range(13):
            n = int(rng.integers(0, 4))
            s = int(rng.choice([-1, 1]))
            p1, p3 = rng.uniform(-1.3, 1.3, 2)
            v = spinor_profile(species[part], "V", ChargedMode(s, n, float(p1), float(p3)), 1.0)
            if v.is_zero:
                continue
            u = spinor_profile(species[anti], "U", ChargedMode(-s, n, float(-p1), float(-p3)), 1.0)
            lhs = charge_conjugate(eval_profile(v, x2, 1.0))
            rhs = -s * eval_profile(u, x2, 1.0)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    count = 0
    while count < 50:
        p = rng.uniform(-1.5, 1.5, 3)
        if np.hypot(p[0], p[1]) < 1e-2:
            continue
        count += 1
        for lam in (-1, +1):
            z = conjugation_phase(p, lam)
            _, v_n = neutron_spinors(p, lam, 2.2)
            u_n, _ = neutron_spinors(-p, lam, 2.2)
            worst = max(worst, float(np.abs(charge_conjugate(v_n) - z * u_n).max()))
            v_l = neutrino_v(p, lam)
            u_l = neutrino_u(-p, lam)
            worst = max(worst, float(np.abs(charge_conjugate(v_l) - z * u_l).max()))
    ok = worst < 1e-12
    assert _verdict("02 charge conjugation", ok), worst


def test_03_car_exactness():
    grids = [
        build_grid(**TOY, neutron_helicities="both"),  # 7 modes
        build_grid(
            **TOY,
            neutron_helicities="both",
            neutron_radii=(1.0, 2.0),
            neutrino_radii=(0.5, 1.0, 2.0, 3.0),
        ),  # 12 modes
    ]
    worst = 0
    for grid in grids:
        assert grid.total() <= 12
        basis = enumerate_basis(grid, mode="product")
        m = grid.total()
        ann = [ladder_matrix(basis, i, False, dtype=np.int64) for i in range(m)]
        cre = [a.T.tocsr() for a in ann]
        import scipy.sparse as sp

        eye = sp.identity(basis.dim, dtype=np.int64, format="csr")
        for i in range(m):
            for j in range(m):
                anti = ann[i] @ cre[j] + cre[j] @ ann[i]
                if i == j:
                    anti = anti - eye
                if anti.nnz:
                    worst = max(worst, int(abs(anti).max()))
                pair = ann[i] @ ann[j] + ann[j] @ ann[i]
                if pair.nnz:
                    worst = max(worst, int(abs(pair).max()))
    ok = worst == 0
    assert _verdict("03 CAR exactness", ok), worst


def test_04_hermiticity_dense_oracle():
    grid = build_grid_from(CFG, CONSTANTS)
    basis = enumerate_basis(grid, mode="product")
    assert basis.dim == 64
    hi = assemble_HI(basis, SPEC, CTX)
    defect = hi.hermiticity_defect()
    h = assemble_H(basis, SPEC, CTX, CONSTANTS.g0)
    want = dense_spectrum(h)
    got = lanczos_lowest(h, k=basis.dim, seed=CFG.seed)
    dev = float(np.abs(want.values - got.values).max())
    ok = defect <= 1e-12 and dev < 1e-10
    assert _verdict("04 hermiticity and dense oracle", ok), (defect, dev)


def test_05_relative_bound():
    # ten modes, product dimension 1024
    grid = build_grid(**TOY, p3_count=2, neutron_helicities="plus")
    basis = enumerate_basis(grid, mode="product")
    assert basis.dim >= 1000
    h0 = assemble_H0(basis)
    hi = assemble_HI(basis, SPEC, CTX)
    out = relative_bound_check(h0, hi, CONSTANTS, trials=1000, seed=CFG.seed)
    ok = out["violations"] == 0 and out["n_checked"] >= 1000
    assert _verdict("05 relative bound", ok), out


def test_06_ground_state_energy():
    grid = build_grid_from(CFG, CONSTANTS)
    basis = enumerate_basis(grid, mode="product")
    free = ground_state(assemble_H(basis, SPEC, CTX, 0.0))
    exact_zero = free.values[0] == 0.0 and free.method == "diagonal"
    vec = free.vectors[:, 0]
    vacuum_vector = abs(abs(vec[basis.vacuum_index]) - 1.0) < 1e-12
    couplings = [CONSTANTS.g0 * f for f in (0.2, 0.4, 0.6, 0.8, 1.0)]
    rows = ground_energy_curve(basis, SPEC, CTX, couplings, seed=CFG.seed)
    signs = all(r["e0"] <= 1e-14 for r in rows)
    bounds = all(abs(r["e0"]) <= CONSTANTS.energy_bound(r["g"]) for r in rows)
    ok = exact_zero and vacuum_vector and signs and bounds
    assert _verdict("06 ground state energy", ok), rows


def test_07_ir_gap():
    cfg = toy_config(neutrino_shells="auto:5")
    grid = build_grid_from(cfg, CONSTANTS, guard=True)
    g = CONSTANTS.g2 / 4.0

    def make_basis(sigma):
        return enumerate_basis(grid.restrict_neutrino(sigma), mode="product")

    study = ir_gap_study(make_basis, SPEC, CTX, CONSTANTS, g, n_list=(1, 2, 3, 4), seed=CFG.seed)
    gaps = all(r["gap"] >= r["bound"] > 0.0 for r in study["rows"])
    simple = all(r["multiplicity"] == 1 for r in study["rows"])
    ok = study["passed"] and gaps and simple and not study["warnings"]
    assert _verdict("07 infrared gap", ok), study["rows"]


def test_08_pull_through():
    cfg = toy_config(neutrino_shells="auto:3")
    grid = build_grid_from(cfg, CONSTANTS, guard=True)
    basis = enumerate_basis(grid, mode="product")
    g = CONSTANTS.g0 / 4.0
    sigma = CONSTANTS.sigmas[1]
    out = pull_through_residual(basis, SPEC, CTX, g, sigma, constants=CONSTANTS, seed=CFG.seed)
    resid = out["max_residual"] <= 1e-8
    bound = all(r["scaled_occupation"] <= r["per_mode_bound"] for r in out["rows"])
    ok = resid and bound
    assert _verdict("08 pull-through identity", ok), out


def test_09_soft_neutrino_scaling():
    grid = build_grid_from(CFG, CONSTANTS)
    basis = enumerate_basis(grid, mode="product")
    couplings = [CONSTANTS.g0 / 8.0, CONSTANTS.g0 / 4.0, CONSTANTS.g0 / 2.0]
    out = soft_number_scaling(basis, SPEC, CTX, couplings, seed=CFG.seed)
    ok = out["slope"] >= 1.9 and np.isfinite(out["soft_constant_sq"]) and out["soft_constant_sq"] > 0.0
    assert _verdict("09 soft neutrino scaling", ok), out


def test_10_simplicity():
    hyp = check_hypothesis_61(SPEC)["passed"]
    grid = build_grid_from(CFG, CONSTANTS)
    basis = enumerate_basis(grid, mode="product")
    h = assemble_H(basis, SPEC, CTX, CONSTANTS.g2 / 2.0)
    res = ground_state(h, seed=CFG.seed)
    simple = degeneracy_check(res.values)["multiplicity"] == 1
    # negative control: two directions on a single shell share |p|
    ctrl_grid = build_grid(**TOY, neutrino_radii=(0.5,), neutrino_directions=2, neutron_helicities="plus")
    off = ctrl_grid.offsets()["neutrino"]
    ctrl = FockBasis(ctrl_grid, [1 << (off + k) for k in range(2)])
    degenerate = degeneracy_check(ground_state(assemble_H0(ctrl)).values)["multiplicity"] == 2
    ok = hyp and simple and degenerate
    assert _verdict("10 ground state simplicity", ok), (hyp, simple, degenerate)


def test_11_determinism(tmp_path):
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        rc = cli_main(["-e", "invariants", "--seed", "7", "--out", str(out)])
        assert rc == 0
        lines = [l for l in (out / "report.json").read_text().splitlines() if '"timestamp"' not in l]
        outs.append(lines)
    ok = outs[0] == outs[1]
    assert _verdict("11 determinism", ok)
