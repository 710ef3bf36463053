"""Run configuration loading and derived builders."""

import pytest

from urcalab.config import (
    build_constants,
    build_grid_from,
    build_kernel_spec,
    load_config,
    physical_config,
    resolve_neutrino_radii,
    toy_config,
)


def test_toy_defaults():
    cfg = toy_config()
    assert cfg.m_e == 1.0 and cfg.m_p == 2.0 and cfg.m_n == 2.2
    assert cfg.eB == 1.0
    assert cfg.delta_value == 0.5  # default delta is m_e / 2
    grid = build_grid_from(cfg)
    assert grid.total() == 6


def test_physical_preset_scales():
    cfg = physical_config()
    assert cfg.m_e == pytest.approx(0.000511)
    assert cfg.m_p < cfg.m_n
    assert cfg.eB == pytest.approx(cfg.m_e ** 2)
    # Fermi constant times Cabibbo cosine over sqrt(2)
    assert cfg.coupling == pytest.approx(1.16639e-5 * 0.9751 / 2.0 ** 0.5)
    spec = build_kernel_spec(cfg)
    assert len(spec.channels) == 2


def test_constants_cache_consistency():
    cfg = toy_config()
    constants = build_constants(cfg)
    assert constants.den == pytest.approx(0.01)
    assert constants.g2 <= constants.g0


def test_auto_shells():
    cfg = toy_config(neutrino_shells="auto:3")
    constants = build_constants(cfg)
    radii = resolve_neutrino_radii(cfg, constants)
    want = tuple(sorted(2.0 * s for s in constants.sigmas[1:4]))
    assert radii == pytest.approx(want)


def test_auto_shells_need_constants():
    cfg = toy_config(neutrino_shells="auto:3")
    with pytest.raises(ValueError):
        resolve_neutrino_radii(cfg, None)


def test_explicit_shells_parse():
    cfg = toy_config(neutrino_shells="0.4, 1.2,0.9")
    assert resolve_neutrino_radii(cfg) == (0.4, 0.9, 1.2)


def test_load_config_roundtrip(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text(
        "[model]\n"
        "m_e = 0.8\n"
        "m_p = 1.9\n"
        "m_n = 2.1\n"
        "eB = 0.9\n"
        "[grid]\n"
        "p3_count = 2\n"
        "neutrino_shells = 0.5, 1.0\n"
        "neutron_radii = 1.5\n"
        "cap_neutrino = 1\n"
    )
    cfg = load_config(ini)
    assert cfg.m_e == 0.8
    assert cfg.eB == 0.9
    assert cfg.p3_count == 2
    assert cfg.neutron_radii == (1.5,)
    assert cfg.caps_dict() == {"neutrino": 1}


def test_load_config_unknown_key(tmp_path):
    ini = tmp_path / "bad.ini"
    ini.write_text("[model]\nm_ee = 1.0\n")
    with pytest.raises(ValueError):
        load_config(ini)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "absent.ini")


def test_grid_guard_flags_collision():
    # shell at exactly 2 sigma_2 = 1.0 equals... the guard compares against
    # the sigma values themselves, so place a shell on sigma_2 = 0.5
    cfg = toy_config(neutrino_shells="0.5")
    constants = build_constants(cfg)
    with pytest.raises(ValueError):
        build_grid_from(cfg, constants, guard=True)
    # ungated call accepts the same layout
    build_grid_from(cfg, constants, guard=False)
