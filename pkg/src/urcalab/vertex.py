"""Four-register interaction amplitudes.

Each elementary process couples the electron register (xi1), the proton
register (xi2), the neutron (xi3) and the neutrino (xi4) through a
current-current contraction sum_a B_had^a B_lep^a integrated over the
transverse coordinate x2.  The four processes:

    1  nu + n -> e- + p+      charged spinors U in the bra,  phase +r2
    2  e- + p+ -> nu + n      adjoint of 1,                  phase -r2
    3  vacuum -> e+ p- n nu   charged spinors W in the ket,  phase -r2
    4  e+ p- n nu -> vacuum   adjoint of 3,                  phase +r2

with r2 the sum of the second momentum components of the two neutral
particles.  Processes 2 and 4 are assembled independently of their
adjoints; hermiticity of the resulting operator is a check, not an input.

The x2 integral is Gauss-Hermite in the midpoint frame of the two charged
Gaussian centers: with xbar the mean center and u = sqrt(eB) (c_lep -
c_had) / 2, the joint envelope is exp(-t^2 - u^2), the t part is absorbed
into the quadrature weight and the profiles are evaluated bare.  This
avoids the overflow of weighting back by exp(+t^2) at high order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gamma import hadronic_matrices, leptonic_matrices
from .helicity import neutrino_u, neutron_spinors
from .hermite import MAX_QUAD_ORDER, gauss_hermite
from .kernels import KernelSpec, ir_cutoff_factor
from .landau import ChargedMode, ChargedSpecies, SpinorProfile, eval_profile_xi, species_set, spinor_profile

PROCESSES = (1, 2, 3, 4)


@dataclass(frozen=True)
class VertexContext:
    """Masses, couplings and field strength shared by all amplitudes."""

    m_e: float
    m_p: float
    m_n: float
    g_a: float = 1.27
    eB: float = 1.0
    quad_order: int = 128

    @cached_property
    def hadronic_mats(self) -> tuple[np.ndarray, ...]:
        return hadronic_matrices(self.g_a)

    @cached_property
    def leptonic_mats(self) -> tuple[np.ndarray, ...]:
        return leptonic_matrices()

    @cached_property
    def species(self) -> dict[str, ChargedSpecies]:
        return species_set(self.m_e, self.m_p)


def bilinear(bra: np.ndarray, mat: np.ndarray, ket: np.ndarray) -> complex:
    """Dirac bilinear bra-bar Gamma ket with gamma0 folded into mat."""
    return complex(np.vdot(bra, mat @ ket))


def overlap_x2(
    prof_had: SpinorProfile,
    neutral_had: np.ndarray,
    prof_lep: SpinorProfile,
    neutral_lep: np.ndarray,
    mats_had: tuple[np.ndarray, ...],
    mats_lep: tuple[np.ndarray, ...],
    conj_charged: bool,
    r2: float,
    sign: int,
    eB: float,
    order: int = 128,
    check: bool = False,
) -> complex:
    """x2 integral of the contracted bilinears against exp(i sign r2 x2).

    conj_charged True puts the charged profiles in the bra on both sides
    (processes 1 and 4); False puts them in the ket (2 and 3).  check=True
    recomputes at doubled order and raises if the two disagree.
    """
    if prof_had.is_zero or prof_lep.is_zero:
        return 0.0j
    root_eb = np.sqrt(eB)
    c_had, c_lep = prof_had.center, prof_lep.center
    cbar = 0.5 * (c_had + c_lep)
    u = 0.5 * root_eb * (c_lep - c_had)

    def run(n_quad: int) -> complex:
        rule = gauss_hermite(n_quad)
        t = rule.nodes
        psi_had = eval_profile_xi(prof_had, t + u, eB, bare=True).astype(complex)
        psi_lep = eval_profile_xi(prof_lep, t - u, eB, bare=True).astype(complex)
        phase = np.exp(1j * sign * r2 * (cbar + t / root_eb))
        total = np.zeros(t.shape, dtype=complex)
        for m_had, m_lep in zip(mats_had, mats_lep):
            if conj_charged:
                b_had = np.einsum("it,i->t", psi_had.conj(), m_had @ neutral_had)
                b_lep = np.einsum("it,i->t", psi_lep.conj(), m_lep @ neutral_lep)
            else:
                b_had = np.einsum("i,it->t", neutral_had.conj() @ m_had, psi_had)
                b_lep = np.einsum("i,it->t", neutral_lep.conj() @ m_lep, psi_lep)
            total += b_had * b_lep
        return complex(np.exp(-u * u) / root_eb * np.sum(rule.weights * phase * total))

    val = run(order)
    if check:
        refined = run(min(2 * order, MAX_QUAD_ORDER))
        if abs(val - refined) > 1e-10 * max(1.0, abs(val)):
            raise RuntimeError(f"x2 overlap not converged at quadrature order {order}")
    return val


def amplitude(
    process: int,
    mode_e: ChargedMode,
    mode_p: ChargedMode,
    lam_n: int,
    p_n: np.ndarray,
    p_nu: np.ndarray,
    spec: KernelSpec,
    ctx: VertexContext,
    sigma: float | None = None,
    check: bool = False,
) -> complex:
    """Coefficient of the process monomial at the given mode tuple.

    Grid weights are not included here; callers attach sqrt(w) factors
    when they discretize the ladder operators.
    """
    if process not in PROCESSES:
        raise ValueError(f"process must be one of {PROCESSES}")
    p_n = np.asarray(p_n, dtype=float)
    p_nu = np.asarray(p_nu, dtype=float)
    nu_mag = float(np.linalg.norm(p_nu))
    if nu_mag <= 0.0:
        raise ValueError("neutrino momentum must be nonzero")
    r2 = float(p_n[1] + p_nu[1])

    kind = "U" if process in (1, 2) else "W"
    prof_e = spinor_profile(ctx.species["electron"], kind, mode_e, ctx.eB)
    prof_p = spinor_profile(ctx.species["proton"], kind, mode_p, ctx.eB)
    u_n = neutron_spinors(p_n, lam_n, ctx.m_n)[0]
    u_nu = neutrino_u(p_nu, -1)

    conj_charged = process in (1, 4)
    sign = +1 if process in (1, 4) else -1
    ov = overlap_x2(
        prof_p,
        u_n,
        prof_e,
        u_nu,
        ctx.hadronic_mats,
        ctx.leptonic_mats,
        conj_charged,
        r2,
        sign,
        ctx.eB,
        order=ctx.quad_order,
        check=check,
    )
    if ov == 0.0:
        return 0.0j

    channel = spec.channels[0] if process in (1, 2) else spec.channels[min(1, len(spec.channels) - 1)]
    kern = (
        float(channel.proton_leg.eval(mode_p.n, mode_p.p1, mode_p.p3))
        * float(channel.neutron_leg.eval(np.linalg.norm(p_n)))
        * float(channel.electron_leg.eval(mode_e.n, mode_e.p1, mode_e.p3))
        * float(channel.neutrino_leg.eval(nu_mag))
        * float(ir_cutoff_factor(nu_mag, sigma))
    )
    if process in (2, 4):
        # adjoint processes carry the conjugate kernel; the overlap above is
        # already assembled in adjoint form and must not be conjugated again
        kern = float(np.conj(kern))
    return complex(kern * ov)
