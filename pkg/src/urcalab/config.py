"""Run configuration: one flat record, two presets, an INI loader.

Defaults describe the smallest interesting laboratory: one mode per
register (64 Fock states), unit field, toy masses 1 / 2 / 2.2.  The
physical preset switches to GeV-scale masses and the Fermi coupling; it
exists for realism of the constant chain, not for desk-scale spectra.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace

from .fock import FockBasis, enumerate_basis
from .kernels import ChargedLeg, KernelSpec, ModelConstants, NeutralLeg, SeparableKernel, derive_constants
from .modes import ModeGrid, build_grid
from .vertex import VertexContext

_CAP_SPECIES = ("electron", "positron", "proton", "antiproton", "neutron", "neutrino")


@dataclass(frozen=True)
class RunConfig:
    # model
    m_e: float = 1.0
    m_p: float = 2.0
    m_n: float = 2.2
    eB: float = 1.0
    g_a: float = 1.27
    delta: float | None = None
    n_sigma: int = 8
    coupling: float | None = None
    g_f: float | None = None
    cos_cabibbo: float | None = None
    # kernels (both channels share one leg family)
    charged_amp: float = 1.0
    charged_width: float = 1.0
    charged_rho: float = 0.5
    neutron_width: float = 1.0
    neutron_eta: float = 0.0
    neutrino_width: float = 1.0
    neutrino_eta: float = 1.0
    # grid
    n_landau: int = 0
    p1_extent: float = 1.0
    p1_count: int = 1
    p3_extent: float = 1.0
    p3_count: int = 1
    neutron_radii: tuple = (1.0,)
    neutron_directions: int = 1
    neutron_helicities: str = "plus"
    neutrino_shells: str = "0.5"
    neutrino_directions: int = 1
    # basis
    basis_mode: str = "product"
    caps: tuple = ()
    seeds: str = "vacuum"
    depth: int = 3
    max_dim: int = 200_000
    # numerics
    quad_order: int = 128
    dense_threshold: int = 2000
    seed: int = 1234

    @property
    def delta_value(self) -> float:
        return self.delta if self.delta is not None else self.m_e / 2.0

    def caps_dict(self) -> dict[str, int] | None:
        return dict(self.caps) if self.caps else None


def toy_config(**overrides) -> RunConfig:
    return replace(RunConfig(), **overrides) if overrides else RunConfig()


def physical_config(**overrides) -> RunConfig:
    m_e = 0.000511
    base = RunConfig(
        m_e=m_e,
        m_p=0.938272,
        m_n=0.939565,
        eB=m_e * m_e,
        g_a=1.27,
        g_f=1.16639e-5,
        cos_cabibbo=0.9751,
        coupling=1.16639e-5 * 0.9751 / 2.0**0.5,
        charged_width=m_e,
        neutron_width=m_e,
        neutrino_width=m_e,
        p1_extent=m_e,
        p3_extent=m_e,
        neutron_radii=(m_e,),
        neutrino_shells=f"{0.5 * m_e}",
    )
    return replace(base, **overrides) if overrides else base


def build_kernel_spec(cfg: RunConfig) -> KernelSpec:
    charged = ChargedLeg(amp=cfg.charged_amp, width=cfg.charged_width, rho=cfg.charged_rho)
    ch = SeparableKernel(
        proton_leg=charged,
        neutron_leg=NeutralLeg(width=cfg.neutron_width, eta=cfg.neutron_eta),
        electron_leg=charged,
        neutrino_leg=NeutralLeg(width=cfg.neutrino_width, eta=cfg.neutrino_eta),
    )
    return KernelSpec(channels=(ch, ch))


def build_context(cfg: RunConfig) -> VertexContext:
    return VertexContext(
        m_e=cfg.m_e,
        m_p=cfg.m_p,
        m_n=cfg.m_n,
        g_a=cfg.g_a,
        eB=cfg.eB,
        quad_order=cfg.quad_order,
    )


def build_constants(cfg: RunConfig) -> ModelConstants:
    return derive_constants(
        build_kernel_spec(cfg),
        m_e=cfg.m_e,
        m_p=cfg.m_p,
        m_n=cfg.m_n,
        g_a=cfg.g_a,
        delta=cfg.delta_value,
        n_sigma=cfg.n_sigma,
    )


def resolve_neutrino_radii(cfg: RunConfig, constants: ModelConstants | None = None) -> tuple[float, ...]:
    """Literal shell list, or auto:N meaning radii 2 sigma_m for m = 1..N.

    The doubled scales are never ambiguous against the cutoff sequence:
    restriction to |p| >= sigma_n keeps exactly the shells with m <= n+1.
    """
    text = cfg.neutrino_shells.strip()
    if text.startswith("auto:"):
        count = int(text.split(":", 1)[1])
        if constants is None:
            raise ValueError("auto neutrino shells need derived constants")
        if count + 1 > len(constants.sigmas):
            raise ValueError("auto shell count exceeds the sigma sequence; raise n_sigma")
        radii = [2.0 * constants.sigmas[m] for m in range(1, count + 1)]
    else:
        radii = [float(tok) for tok in text.split(",") if tok.strip()]
    return tuple(sorted(radii))


def build_grid_from(cfg: RunConfig, constants: ModelConstants | None = None, guard: bool = False) -> ModeGrid:
    radii = resolve_neutrino_radii(cfg, constants)
    return build_grid(
        m_e=cfg.m_e,
        m_p=cfg.m_p,
        m_n=cfg.m_n,
        eB=cfg.eB,
        n_landau=cfg.n_landau,
        p1_extent=cfg.p1_extent,
        p1_count=cfg.p1_count,
        p3_extent=cfg.p3_extent,
        p3_count=cfg.p3_count,
        neutron_radii=cfg.neutron_radii,
        neutron_directions=cfg.neutron_directions,
        neutron_helicities=cfg.neutron_helicities,
        neutrino_radii=radii,
        neutrino_directions=cfg.neutrino_directions,
        sigma_guard=(constants.sigmas if (constants is not None and guard) else None),
    )


def build_basis(cfg: RunConfig, grid: ModeGrid) -> FockBasis:
    return enumerate_basis(
        grid,
        caps=cfg.caps_dict(),
        mode=cfg.basis_mode,
        seeds=cfg.seeds,
        depth=cfg.depth,
        max_dim=cfg.max_dim,
    )


_FLOAT_KEYS = {
    "m_e",
    "m_p",
    "m_n",
    "eb",
    "g_a",
    "delta",
    "coupling",
    "g_f",
    "cos_cabibbo",
    "charged_amp",
    "charged_width",
    "charged_rho",
    "neutron_width",
    "neutron_eta",
    "neutrino_width",
    "neutrino_eta",
    "p1_extent",
    "p3_extent",
}
_INT_KEYS = {
    "n_sigma",
    "n_landau",
    "p1_count",
    "p3_count",
    "neutron_directions",
    "neutrino_directions",
    "depth",
    "max_dim",
    "quad_order",
    "dense_threshold",
    "seed",
}
_STR_KEYS = {"neutron_helicities", "neutrino_shells", "basis_mode", "seeds"}
_FIELD_NAMES = {"eb": "eB"}


def load_config(path) -> RunConfig:
    """Read an INI file; keys match RunConfig fields, sections are free-form.

    neutron_radii is a comma list; caps are given as cap_<species> keys.
    Unknown keys raise, so typos fail loudly instead of silently running
    the defaults.
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")
    updates: dict = {}
    caps: dict[str, int] = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = key.lower()
            if key in _FLOAT_KEYS:
                updates[_FIELD_NAMES.get(key, key)] = float(raw)
            elif key in _INT_KEYS:
                updates[key] = int(raw)
            elif key in _STR_KEYS:
                updates[key] = raw.strip()
            elif key == "neutron_radii":
                updates[key] = tuple(sorted(float(tok) for tok in raw.split(",") if tok.strip()))
            elif key.startswith("cap_") and key[4:] in _CAP_SPECIES:
                caps[key[4:]] = int(raw)
            else:
                raise ValueError(f"unknown config key {key!r} in section [{section}]")
    if caps:
        updates["caps"] = tuple(sorted(caps.items()))
    return replace(RunConfig(), **updates)


def config_summary(cfg: RunConfig) -> dict:
    out = {}
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if isinstance(val, tuple):
            val = list(val)
        out[f.name] = val
    return out
