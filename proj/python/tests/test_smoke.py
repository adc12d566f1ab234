import json
import math

import numpy as np
import pytest

import pdpsim


def constant_detector(strength):
    return pdpsim.DetectorSpec(
        pdpsim.DetectorProfile.indicator(-math.inf, math.inf, strength)
    )


def test_version():
    assert pdpsim.__version__


def test_gaussian_packet_is_normalized():
    grid = pdpsim.Grid1D(64, -8.0, 8.0)
    psi = pdpsim.gaussian_packet(grid, 0.0, 1.0, 0.5)
    assert psi.norm2() == pytest.approx(1.0, abs=1e-12)
    assert len(psi.values) == 64


def test_plane_wave_is_kinetic_eigenfunction():
    grid = pdpsim.Grid1D(64, -8.0, 8.0)
    psi = pdpsim.plane_wave(grid, 3)
    h = pdpsim.apply_hamiltonian(psi, pdpsim.PotentialSpec.zero(), 1.0)
    k = 2.0 * math.pi * 3 / 16.0
    ratio = h.values / psi.values
    assert np.allclose(ratio, k * k / 2.0, atol=1e-9)


def test_damped_evolution_decays_exponentially():
    grid = pdpsim.Grid1D(16, -1.0, 1.0)
    psi = pdpsim.gaussian_packet(grid, 0.0, 0.3, 0.0)
    det = constant_detector(1.0)
    out = psi
    for _ in range(100):
        out = pdpsim.evolve_damped(out, [det], pdpsim.PotentialSpec.zero(), math.inf, 0.01)
    assert out.norm2() == pytest.approx(math.exp(-1.0), rel=1e-8)


def test_jump_time_hits_ln2():
    grid = pdpsim.Grid1D(16, -1.0, 1.0)
    state = pdpsim.HybridState1D()
    state.psi = pdpsim.gaussian_packet(grid, 0.0, 0.3, 0.0)
    state.detectors = [constant_detector(1.0)]
    params = pdpsim.NonrelParams()
    params.mass = math.inf
    params.dt = 0.01
    clicked, t1, _psi = pdpsim.find_jump_time(state, params, 0.5, 50.0)
    assert clicked
    assert t1 == pytest.approx(math.log(2.0), abs=1e-6)


def test_trajectories_are_deterministic_and_exponential():
    cfg = pdpsim.NonrelConfig()
    cfg.grid = pdpsim.Grid1D(16, -1.0, 1.0)
    cfg.packet_width = 0.3
    cfg.detectors = [constant_detector(1.0)]
    cfg.mass = math.inf
    cfg.dt = 0.01
    cfg.horizon = 20.0

    a = pdpsim.run_trajectory(cfg, seed=9, stream_index=3)
    b = pdpsim.run_trajectory(cfg, seed=9, stream_index=3)
    assert [e.time for e in a.events] == [e.time for e in b.events]

    times = []
    for i in range(400):
        rec = pdpsim.run_trajectory(cfg, seed=123, stream_index=i)
        if not rec.no_click:
            times.append(rec.events[0].time)
    mean = sum(times) / len(times)
    assert abs(mean - 1.0) < 4.0 / math.sqrt(len(times))


def test_master_equation_conserves_trace():
    grid = pdpsim.Grid1D(16, -4.0, 4.0)
    psi = pdpsim.gaussian_packet(grid, 0.0, 0.8, 0.0)
    H = pdpsim.dense_hamiltonian_matrix(grid, pdpsim.PotentialSpec.harmonic(0.0, 1.0), 1.0)
    g = pdpsim.DetectorProfile.gaussian(1.0, 0.8, 1.0).evaluate(grid)
    states, drift, min_eig = pdpsim.run_master(psi, H, g, 0.005, [0.5, 1.0])
    assert drift < 1e-8
    assert min_eig > -1e-8
    assert states[-1].trace0() + states[-1].trace1() == pytest.approx(1.0, abs=1e-8)


def test_spinor_positivity_identity():
    grid = pdpsim.Grid2D(pdpsim.Grid1D(16, -4.0, 4.0), pdpsim.Grid1D(8, -2.0, 2.0))
    params = pdpsim.SpinorPacketParams()
    params.x_width = 0.8
    params.t_width = 0.6
    psi = pdpsim.spinor_packet(grid, params)
    assert pdpsim.indefinite_product(psi, psi).real == pytest.approx(1.0, abs=1e-10)

    det = pdpsim.DetectorSpec(pdpsim.DetectorProfile.gaussian(0.5, 0.7, 1.0))
    g_psi = pdpsim.apply_coupling(psi, det)
    expect = pdpsim.indefinite_product(psi, pdpsim.apply_coupling(g_psi, det)).real
    assert expect >= 0.0

    values = g_psi.values
    assert np.all(values[:, :, 2] == 0.0)
    assert np.all(values[:, :, 3] == 0.0)


def test_rel_trajectory_runs():
    grid = pdpsim.Grid2D(pdpsim.Grid1D(8, -2.0, 2.0), pdpsim.Grid1D(8, -2.0, 2.0))
    cfg = pdpsim.RelConfig()
    cfg.grid = grid
    cfg.dirac_mass = 0.0
    cfg.evolution_mass = 1.0
    packet = pdpsim.SpinorPacketParams()
    packet.x_width = 0.5
    packet.t_width = 0.5
    cfg.packet = packet
    cfg.detectors = [constant_detector(1.0)]
    cfg.dtau = 0.02
    cfg.horizon = 10.0
    rec = pdpsim.run_rel_trajectory(cfg, seed=7, stream_index=0)
    assert not rec.aborted
    assert not rec.no_click
    assert rec.events[0].tau > 0.0


def test_experiment_from_config(tmp_path):
    cfg_json = {
        "engine": "nonrel",
        "grid": {"n": 32, "x_min": -8.0, "x_max": 8.0},
        "packet": {"center": -1.0, "width": 1.0, "momentum": 0.8},
        "detectors": [{"shape": "gaussian", "center": 2.0, "width": 0.6, "strength": 1.0}],
        "dt": 0.01,
        "horizon": 6.0,
        "ensemble": 50,
        "seed": 42,
        "out_dir": str(tmp_path / "run"),
    }
    cfg = pdpsim.config_from_text(json.dumps(cfg_json))
    summary = pdpsim.run_experiment(cfg)
    assert summary["n_trajectories"] == 50
    assert (tmp_path / "run" / "trajectories.jsonl").exists()
    assert (tmp_path / "run" / "summary.json").exists()

    counts = sum(d["first_clicks"] for d in summary["per_detector"])
    assert counts + summary["no_click_count"] == 50


def test_invalid_config_reports_fields():
    bad = {"engine": "nonrel", "detectors": [{"shape": "gaussian", "strength": -2.0}]}
    with pytest.raises(Exception, match="strength"):
        pdpsim.config_from_text(json.dumps(bad))


def test_scenario_registry_and_gamma(tmp_path):
    names = [s["name"] for s in pdpsim.list_scenarios()]
    assert len(names) == 13
    out = pdpsim.run_scenario("gamma-algebra", out_dir=str(tmp_path))
    assert out["passed"]
