"""Smoke tests for the Python bindings and the command-line tool."""

import os
import subprocess
import sys

import pytest

import hslab


def test_solve_extremal_on_flat_half_ball():
    dom = hslab.make_domain(samples=12)
    res = hslab.solve_extremal(dom, p=3.5)
    assert res.converged
    assert res.positive
    assert 5.0 < res.mu < 15.0
    assert res.v.shape[0] == dom.mesh.num_nodes


def test_mesh_arrays():
    dom = hslab.make_domain(samples=10)
    nodes = dom.mesh.nodes
    cells = dom.mesh.cells
    assert nodes.shape[1] == 2
    assert cells.shape[1] == 3
    assert cells.max() < nodes.shape[0]
    assert dom.mesh.h > 0


def test_config_error_is_a_python_exception():
    with pytest.raises(hslab.ConfigError):
        hslab.make_domain(s=2.5)
    with pytest.raises(hslab.ConfigError):
        hslab.make_domain(family="frobnicate")


def test_greens_kernels():
    dom = hslab.make_domain(samples=14)
    poles = hslab.default_poles(dom.mesh, 3)
    kernels = hslab.greens_solve(dom.mesh, 1.0, poles)
    assert len(kernels) == 3
    for k in kernels:
        assert k.g.min() > -1e-10
        assert k.reproduction_error < 0.1
    consts = hslab.estimate_constants(dom.mesh, kernels)
    assert consts.c_kernel > 0


def test_halfspace_and_kelvin():
    bubble = hslab.solve_halfspace(s=1.0, n=3, R=12.0, samples=20)
    assert bubble.mu_s > 0
    image = hslab.kelvin_transform(bubble, samples=20)
    ok, hopf_min = hslab.hopf_check(image)
    assert ok
    assert hopf_min > 0


def test_config_round_trip(tmp_path):
    cfg = hslab.ExperimentConfig()
    cfg.experiment = "solve"
    cfg.set("geometry.samples", "10")
    cfg.set("solver.gap", "0.25")
    hslab.validate_config(cfg)
    h1 = cfg.config_hash()
    cfg.set("solver.gap", "0.3")
    assert cfg.config_hash() != h1
    with pytest.raises(hslab.ConfigError):
        cfg.set("no.such.key", "1")


def test_run_experiment_writes_ledger(tmp_path):
    cfg = hslab.ExperimentConfig()
    cfg.experiment = "solve"
    cfg.set("geometry.samples", "10")
    cfg.set("solver.gap", "0.3")
    cfg.out_dir = str(tmp_path)
    hslab.run_experiment(cfg)
    assert (tmp_path / "ledger.jsonl").is_file()
    assert (tmp_path / "solve.csv").is_file()


@pytest.mark.skipif("HSLAB_CLI" not in os.environ, reason="CLI path not set")
def test_cli_exit_codes(tmp_path):
    cli = os.environ["HSLAB_CLI"]
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("geometry.samples = 10\nsolver.gap = 0.3\n")
    out = tmp_path / "out"
    proc = subprocess.run([cli, "solve", "--config", str(cfg),
                           "--out", str(out)])
    assert proc.returncode == 0
    assert (out / "ledger.jsonl").is_file()

    bad = tmp_path / "bad.txt"
    bad.write_text("geometry.s = 2.5\n")
    proc = subprocess.run([cli, "solve", "--config", str(bad)],
                          capture_output=True)
    assert proc.returncode == 2

    proc = subprocess.run([cli, "solve", "--config", "/nonexistent"],
                          capture_output=True)
    assert proc.returncode == 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
