"""Command line behaviour: configs in, reports out, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

import wegner2p.cli as cli
from wegner2p import (
    DistributionSpec,
    ExperimentConfig,
    HamiltonianSpec,
    HamiltonianTemplate,
    InteractionSpec,
    PairPoint,
    RngStream,
    make_box,
    run_single_volume,
    sample_field,
)


def write_config(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SINGLE_CFG = {
    "dimension": 1,
    "radius": 1,
    "center": [[0], [0]],
    "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
    "energy": 0.0,
    "epsilon": 0.05,
    "trials": 60,
    "master_seed": 4001,
}

TWO_CFG = {
    "dimension": 1,
    "radius": 1,
    "center": [[0], [0]],
    "center_prime": [[100], [100]],
    "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
    "epsilon": 0.05,
    "trials": 40,
    "conditioning_rounds": 2,
    "master_seed": 4002,
}

HAM_CFG = {
    "dimension": 1,
    "radius": 1,
    "center": [[0], [2]],
    "interaction": {"entries": [[0, 1.0], [1, 0.5]]},
    "coupling": 1.0,
    "hopping_norm": "sup",
    "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
    "master_seed": 4003,
}


# ---------------------------------------------------------------------------
# usage errors
# ---------------------------------------------------------------------------


def test_no_arguments_is_usage_error(capsys):
    code, _, err = run_cli(capsys)
    assert code == 1
    assert "subcommand" in err


def test_unknown_subcommand(capsys):
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 1


def test_missing_config_flag(capsys):
    code, _, err = run_cli(capsys, "wegner-single")
    assert code == 1


def test_bad_json_config(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "wegner-single", "--config", str(path))
    assert code == 1
    assert "JSON" in err


def test_non_object_config(tmp_path, capsys):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    code, _, err = run_cli(capsys, "wegner-single", "--config", str(path))
    assert code == 1


def test_nonexistent_config(capsys):
    code, _, err = run_cli(capsys, "wegner-single", "--config", "/no/such/file.json")
    assert code == 1


def test_unknown_config_key(tmp_path, capsys):
    cfg = write_config(tmp_path, "c.json", {**SINGLE_CFG, "misterious": 1})
    code, _, err = run_cli(capsys, "wegner-single", "--config", cfg)
    assert code == 1
    assert "unknown keys" in err


def test_version_and_help(capsys):
    assert run_cli(capsys, "--version")[0] == 0
    assert run_cli(capsys, "--help")[0] == 0


# ---------------------------------------------------------------------------
# geometry-classify
# ---------------------------------------------------------------------------


def test_geometry_classify_json(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "g.json",
        {"dimension": 1, "radius": 1, "center": [[0], [0]], "center_prime": [[9], [20]]},
    )
    code, out, _ = run_cli(capsys, "geometry-classify", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "geometry"
    assert payload["separation_classes"] == [
        "completely_separated",
        "second_particle1_isolated",
        "second_particle2_isolated",
    ]
    assert payload["bound_choice"] == "condition_on_second"


def test_geometry_classify_csv(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "g.json",
        {"dimension": 1, "radius": 1, "center": [[0], [0]], "center_prime": [[100], [100]]},
    )
    code, out, _ = run_cli(capsys, "geometry-classify", "--config", cfg, "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["separation_class", "completely_separated"]


def test_geometry_classify_rejects_close_centres(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "g.json",
        {"dimension": 1, "radius": 1, "center": [[0], [0]], "center_prime": [[7], [0]]},
    )
    code, _, err = run_cli(capsys, "geometry-classify", "--config", cfg)
    assert code == 1


# ---------------------------------------------------------------------------
# build-hamiltonian and spectrum
# ---------------------------------------------------------------------------


def expected_matrix():
    spec = HamiltonianSpec(
        box=make_box(PairPoint.of((0,), (2,)), 1),
        interaction=InteractionSpec({0: 1.0, 1: 0.5}, r_max=1),
        coupling=1.0,
        hopping_norm="sup",
    )
    template = HamiltonianTemplate(spec)
    field = sample_field(
        template.sites, DistributionSpec.uniform(0.0, 1.0), RngStream(4003, 0)
    )
    return template, template.assemble(field)


def test_build_hamiltonian_matches_library(tmp_path, capsys):
    cfg = write_config(tmp_path, "h.json", HAM_CFG)
    code, out, _ = run_cli(capsys, "build-hamiltonian", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    template, want = expected_matrix()
    got = np.array(payload["matrix"])
    assert payload["dim"] == template.dim == 9
    assert np.array_equal(got, want)
    assert np.array_equal(got, got.T)
    assert payload["sites"] == [list(s) for s in template.sites]
    assert len(payload["field"]) == template.n_sites


def test_build_hamiltonian_csv_rows(tmp_path, capsys):
    cfg = write_config(tmp_path, "h.json", HAM_CFG)
    code, out, _ = run_cli(capsys, "build-hamiltonian", "--config", cfg, "--format", "csv")
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 9
    assert all(len(r.split(",")) == 9 for r in rows)


def test_spectrum_matches_matrix(tmp_path, capsys):
    cfg = write_config(tmp_path, "h.json", HAM_CFG)
    code, out, _ = run_cli(capsys, "spectrum", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    _, matrix = expected_matrix()
    want = np.linalg.eigvalsh(matrix)
    assert np.allclose(payload["eigenvalues"], want, atol=1e-14)
    assert payload["source_dim"] == 9
    diffs = np.diff(payload["eigenvalues"])
    assert np.all(diffs >= 0)


def test_interaction_cutoff_beyond_dimension_needs_r_max(tmp_path, capsys):
    # an entry at distance 2 exceeds the d=1 default cutoff unless r_max says so
    bad = {**HAM_CFG, "interaction": {"entries": [[2, 0.5]]}}
    cfg = write_config(tmp_path, "h.json", bad)
    code, out, _ = run_cli(capsys, "build-hamiltonian", "--config", cfg)
    assert code == 0  # cutoff stretches to cover the table
    explicit = {**HAM_CFG, "interaction": {"entries": [[2, 0.5]], "r_max": 1}}
    cfg = write_config(tmp_path, "h2.json", explicit)
    code, _, err = run_cli(capsys, "build-hamiltonian", "--config", cfg)
    assert code == 1
    assert "cutoff" in err


# ---------------------------------------------------------------------------
# wegner-single
# ---------------------------------------------------------------------------


def test_wegner_single_json_report(tmp_path, capsys):
    cfg = write_config(tmp_path, "w.json", SINGLE_CFG)
    code, out, _ = run_cli(capsys, "wegner-single", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "single_volume"
    assert payload["verdict"] == "holds"
    assert len(payload["per_trial_dist"]) == 60
    assert payload["config"]["master_seed"] == 4001
    # parsed floats match the in-memory run bit for bit
    report = run_single_volume(ExperimentConfig.from_dict(SINGLE_CFG))
    assert payload["per_trial_dist"] == [float(x) for x in report.per_trial_dist]
    assert payload["analytic_bound"] == report.analytic_bound


def test_wegner_single_seed_override(tmp_path, capsys):
    cfg = write_config(tmp_path, "w.json", SINGLE_CFG)
    code, out, _ = run_cli(capsys, "wegner-single", "--config", cfg, "--seed", "99")
    assert code == 0
    payload = json.loads(out)
    assert payload["config"]["master_seed"] == 99
    report = run_single_volume(
        ExperimentConfig.from_dict({**SINGLE_CFG, "master_seed": 99})
    )
    assert payload["per_trial_dist"] == [float(x) for x in report.per_trial_dist]


def test_wegner_single_csv(tmp_path, capsys):
    cfg = write_config(tmp_path, "w.json", SINGLE_CFG)
    code, out, _ = run_cli(capsys, "wegner-single", "--config", cfg, "--format", "csv")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "trial,distance"
    assert len(rows) == 61
    assert rows[1].startswith("1,")
    # repr round trip: every distance parses back to the exact double
    report = run_single_volume(ExperimentConfig.from_dict(SINGLE_CFG))
    for row, want in zip(rows[1:], report.per_trial_dist):
        assert float(row.split(",")[1]) == want


def test_wegner_single_out_file_and_threads_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, "w.json", {**SINGLE_CFG, "trials": 2100})
    out1 = tmp_path / "t1.json"
    out4 = tmp_path / "t4.json"
    code1, _, _ = run_cli(
        capsys, "wegner-single", "--config", cfg, "--out", str(out1), "--threads", "1"
    )
    code4, _, _ = run_cli(
        capsys, "wegner-single", "--config", cfg, "--out", str(out4), "--threads", "4"
    )
    assert code1 == code4 == 0
    assert out1.read_bytes() == out4.read_bytes()


def test_wegner_single_violation_exits_2(tmp_path, capsys):
    # no disorder, window around a real eigenvalue: hit every time while the
    # stated ceiling stays small, so the report must say violated
    violated = {
        **SINGLE_CFG,
        "coupling": 0.0,
        "hopping_norm": "l1",
        "epsilon": 1e-3,
        "trials": 120,
    }
    cfg = write_config(tmp_path, "v.json", violated)
    code, out, _ = run_cli(capsys, "wegner-single", "--config", cfg)
    assert code == 2
    payload = json.loads(out)
    assert payload["verdict"] == "violated"
    assert payload["empirical_probability"] == 1.0


def test_wegner_single_rejects_two_volume_config(tmp_path, capsys):
    cfg = write_config(tmp_path, "w.json", TWO_CFG)
    code, _, err = run_cli(capsys, "wegner-single", "--config", cfg)
    assert code == 1


# ---------------------------------------------------------------------------
# wegner-two
# ---------------------------------------------------------------------------


def test_wegner_two_json_report(tmp_path, capsys):
    cfg = write_config(tmp_path, "w2.json", TWO_CFG)
    code, out, _ = run_cli(capsys, "wegner-two", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "two_volume"
    assert payload["separation_classes"] == ["completely_separated"]
    assert payload["bound_choice"] == "condition_on_second"
    assert len(payload["rounds"]) == 2
    assert payload["verdict"] == "holds"


def test_wegner_two_csv_rows(tmp_path, capsys):
    cfg = write_config(tmp_path, "w2.json", TWO_CFG)
    code, out, _ = run_cli(capsys, "wegner-two", "--config", cfg, "--format", "csv")
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 3  # header plus one row per round
    assert rows[0].startswith("round_index,frozen_digest")


def test_wegner_two_rejects_single_volume_config(tmp_path, capsys):
    cfg = write_config(tmp_path, "w2.json", SINGLE_CFG)
    code, _, err = run_cli(capsys, "wegner-two", "--config", cfg)
    assert code == 1


def test_runtime_invariant_failure_exits_2(tmp_path, capsys, monkeypatch):
    # a dichotomy failure inside the runner must surface as exit 2
    def boom(config):
        raise RuntimeError("separation dichotomy failed")

    monkeypatch.setattr(cli, "run_two_volume", boom)
    cfg = write_config(tmp_path, "w2.json", TWO_CFG)
    code, _, err = run_cli(capsys, "wegner-two", "--config", cfg)
    assert code == 2
    assert "invariant violated" in err


# ---------------------------------------------------------------------------
# stollmann-check and dm-check
# ---------------------------------------------------------------------------


def test_stollmann_exact_identity(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "s.json",
        {
            "function": {"form": "sum", "arity": 1},
            "dist": {
                "kind": "discrete",
                "atoms": [[0.0, 0.25], [1.0, 0.25], [2.0, 0.25], [3.0, 0.25]],
            },
            "interval": [0.5, 1.5],
        },
    )
    code, out, _ = run_cli(capsys, "stollmann-check", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["probability"] == 0.25
    assert payload["bound"] == 0.25
    assert payload["holds"] is True


def test_stollmann_mc_mode(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "s.json",
        {
            "function": {"form": "max", "arity": 3},
            "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
            "interval": [0.5, 0.6],
            "mode": "mc",
            "trials": 5000,
            "master_seed": 11,
        },
    )
    code, out, _ = run_cli(capsys, "stollmann-check", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "stollmann_mc"
    assert payload["holds_within_3sigma"] is True
    assert 0.0 <= payload["estimate"] <= 1.0


def test_stollmann_mc_requires_trials(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "s.json",
        {
            "function": {"form": "max", "arity": 3},
            "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
            "interval": [0.5, 0.6],
            "mode": "mc",
        },
    )
    code, _, err = run_cli(capsys, "stollmann-check", "--config", cfg)
    assert code == 1


def test_stollmann_layers_mode(tmp_path, capsys):
    grid = [k / 10 for k in range(11)]
    cfg = write_config(
        tmp_path,
        "s.json",
        {
            "function": {"form": "sum", "arity": 2},
            "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
            "interval": [0.2, 0.5],
            "mode": "layers",
            "grid": grid,
        },
    )
    code, out, _ = run_cli(capsys, "stollmann-check", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True and payload["inclusion_failures"] == 0


def test_stollmann_layers_boundary_interval_exits_2(tmp_path, capsys):
    # an interval reaching below the grid gives an empty base set that cannot
    # swallow the target; the check reports the shortfall honestly
    cfg = write_config(
        tmp_path,
        "s.json",
        {
            "function": {"form": "sum", "arity": 1},
            "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
            "interval": [-0.5, 1.5],
            "mode": "layers",
            "grid": list(range(11)),
        },
    )
    code, out, _ = run_cli(capsys, "stollmann-check", "--config", cfg)
    assert code == 2
    payload = json.loads(out)
    assert payload["passed"] is False
    assert payload["inclusion_failures"] >= 1


def test_dm_check_function_target(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "d.json",
        {
            "function": {"form": "linear", "coeffs": [0.5, 0.75]},
            "domain": [-1.0, 1.0],
            "samples": 300,
            "master_seed": 3,
        },
    )
    code, out, _ = run_cli(capsys, "dm-check", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "dm_check"
    assert payload["passed"] is True
    assert payload["checks"] == 300


def test_dm_check_eigenvalue_target(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "d.json",
        {
            "target": "eigenvalues",
            "dimension": 1,
            "radius": 1,
            "center": [[0], [0]],
            "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
            "trials": 40,
            "master_seed": 5,
            "coupling": 2.0,
        },
    )
    code, out, _ = run_cli(capsys, "dm-check", "--config", cfg)
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert payload["worst_diagonal_defect"] <= payload["tolerance"]


def test_dm_check_unknown_target(tmp_path, capsys):
    cfg = write_config(tmp_path, "d.json", {"target": "matrices"})
    code, _, err = run_cli(capsys, "dm-check", "--config", cfg)
    assert code == 1


def test_unknown_function_form(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "s.json",
        {
            "function": {"form": "median", "arity": 3},
            "dist": {"kind": "uniform", "lo": 0.0, "hi": 1.0},
            "interval": [0.0, 1.0],
        },
    )
    code, _, err = run_cli(capsys, "stollmann-check", "--config", cfg)
    assert code == 1


# ---------------------------------------------------------------------------
# module and script entry points
# ---------------------------------------------------------------------------


def test_module_entry_point_runs(tmp_path):
    cfg = write_config(
        tmp_path,
        "g.json",
        {"dimension": 1, "radius": 1, "center": [[0], [0]], "center_prime": [[100], [100]]},
    )
    proc = subprocess.run(
        [sys.executable, "-m", "wegner2p.cli", "geometry-classify", "--config", cfg],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["separation_classes"] == ["completely_separated"]


def test_console_script_version():
    proc = subprocess.run(
        ["wegner2p", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "wegner2p" in proc.stdout
