import json

import pytest

import main as entry
from utils import parse_complex


@pytest.fixture(autouse=True)
def no_logging_setup(monkeypatch):
    monkeypatch.setattr(entry, "configure_logging", lambda verbose=False, quiet=False: None)


def run(capsys, *argv):
    code = entry.main(list(argv))
    return code, capsys.readouterr().out


def test_eval_modular_constant(capsys):
    code, out = run(capsys, "eval", "C", "--tau", "1.07i")
    assert code == 0
    assert parse_complex(out.strip()).real == pytest.approx(-88.82643960980423, rel=1e-6)


def test_eval_lambda_at_i(capsys):
    code, out = run(capsys, "eval", "lambda", "--tau", "i")
    assert code == 0
    assert parse_complex(out.strip()) == pytest.approx(0.5, abs=1e-12)


def test_eval_half_periods(capsys):
    code, out = run(capsys, "eval", "e_i", "--tau", "0.1+1.2i")
    values = [parse_complex(line) for line in out.split()]
    assert code == 0
    assert len(values) == 3
    assert abs(sum(values)) <= 1e-10


def test_eval_tau_inverts_lambda(capsys):
    code, out = run(capsys, "eval", "tau", "--t", "0.5")
    assert code == 0
    assert parse_complex(out.strip()) == pytest.approx(1j, abs=1e-9)


def test_eval_at_pole_is_numeric_failure(capsys):
    assert run(capsys, "eval", "wp", "--z", "0", "--tau", "i")[0] == 2


def test_eval_missing_argument(capsys):
    assert run(capsys, "eval", "wp", "--tau", "i")[0] == 1


@pytest.mark.parametrize("argv", [[], ["verify", "bogus"], ["eval", "zeta", "--tau", "i"], ["solve", "--tol", "x"]])
def test_usage_errors(capsys, argv):
    assert entry.main(argv) == 64


def test_missing_config_is_usage_error(capsys, tmp_path):
    assert entry.main(["eval", "lambda", "--config", str(tmp_path / "absent.json")]) == 64


def test_config_file_supplies_flags(capsys, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"tau": "i"}))
    code, out = run(capsys, "eval", "lambda", "--config", str(config))
    assert code == 0
    assert parse_complex(out.strip()) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("command, settings", [
    (["eval", "wp", "--z", "0.3", "--tau", "1.2i"], {"tol": "abc"}),
    (["eval", "wp", "--z", "0.3", "--tau", "1.2i"], {"tol": [1e-10]}),
    (["solve", "--params", "p2", "--state", "0.2+0.3i,0.1", "--path", "1i,1.05i"], {"max_steps": "many"}),
    (["solve", "--params", "p2", "--state", "0.2+0.3i,0.1", "--path", "1i,1.05i"], {"max_steps": 2.5}),
    (["verify", "elliptic"], {"jobs": "two"}),
    (["verify", "elliptic"], {"seed": "x"}),
    (["verify", "elliptic"], {"jobs": 0}),
])
def test_mistyped_config_value_is_input_error(capsys, tmp_path, command, settings):
    config = tmp_path / "run.json"
    config.write_text(json.dumps(settings))
    code, out = run(capsys, *command, "--config", str(config))
    assert code == 1
    assert out == ""


def test_config_file_sets_integrator_fields(capsys, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"sample_step": "0.01", "max_step": 0.005}))
    code, out = run(capsys, "solve", "--params", "p2", "--state", "0.2+0.3i,0.1", "--path", "1i,1.05i",
                    "--config", str(config))
    assert code == 0
    assert len(json.loads(out)["samples"]) == 6
    assert parse_complex(out.strip()) == pytest.approx(0.5, abs=1e-12)


def test_solve_writes_trajectory(capsys):
    code, out = run(capsys, "solve", "--params", "p2", "--state", "0.2+0.3i,0.1", "--path", "1i,1.05i")
    data = json.loads(out)
    assert code == 0
    assert data["chart"] == "elliptic"
    assert data["samples"][0]["base"] == [0.0, 1.0]
    assert data["samples"][-1]["base"] == pytest.approx([0.0, 1.05])


def test_solve_csv_to_file(capsys, tmp_path):
    target = tmp_path / "run.csv"
    code = entry.main(["solve", "--chart", "classical", "--params", "hitchin", "--state", "0.3+0.2i,0.1",
                       "--path", "0.4+0.1i,0.45+0.1i", "--format", "csv", "--out", str(target)])
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "base_re,base_im,X_re,X_im,Xdot_re,Xdot_im,err"
    assert len(lines) > 2


def test_solve_path_through_singular_base(capsys):
    assert run(capsys, "solve", "--chart", "classical", "--params", "p2", "--state", "0.3,0.1",
               "--path", "1,1.2")[0] == 1
    assert run(capsys, "solve", "--chart", "classical", "--params", "p2", "--state", "0.3,0.1",
               "--path", "0.5,1.5")[0] == 1


def test_solve_wrong_component_count(capsys):
    assert run(capsys, "solve", "--chart", "algebraic", "--params", "p2", "--state", "0.3,0.1",
               "--path", "0.5,0.6")[0] == 1


def test_solve_pole_approach_flushes_partial(capsys):
    code, out = run(capsys, "solve", "--params", "p2", "--state", "1e-8,0.1", "--path", "1i,1.05i")
    assert code == 3
    assert len(json.loads(out)["samples"]) == 1


def test_classify(capsys):
    code, out = run(capsys, "classify", "0", "0", "0", "1")
    data = json.loads(out)
    assert code == 0
    assert data["tag"] == "one_dim_family"
    assert data["witness"]


def test_classify_negative_entries(capsys):
    code, out = run(capsys, "classify", "-0.3", "0.7", "0", "0")
    assert code == 0
    assert json.loads(out)["tag"] == "hypergeometric_hyperplane"


def test_landin(capsys):
    code, out = run(capsys, "landin", "--params", "hitchin")
    data = json.loads(out)
    assert code == 0
    assert list(data["images"]) == ["forward"]
    assert data["images"]["forward"]["alphas"] == [[0.5, 0], [0.5, 0], [0, 0], [0, 0]]


def test_landin_without_pattern(capsys):
    assert run(capsys, "landin", "--params", "alphas:0.1,0.05,0.2,0.3")[0] == 1
    assert run(capsys, "landin", "--params", "hitchin", "--direction", "inverse")[0] == 1


def test_symmetry_lattice_shift(capsys):
    code, out = run(capsys, "symmetry", "--state", "0.2+0.3i,0.1", "--tau", "i", "--lattice", "1,0")
    data = json.loads(out)
    assert code == 0
    assert data["state"]["z"] == pytest.approx([0.2, 1.3])
    assert data["state"]["y"] == pytest.approx([1.1, 0])


def test_symmetry_half_period_relabels(capsys):
    code, out = run(capsys, "symmetry", "--state", "0.2+0.3i,0.1", "--tau", "i", "--half-period", "1",
                    "--params", "p2", "--invert")
    data = json.loads(out)
    assert code == 0
    assert data["state"]["z"] == pytest.approx([-0.7, -0.3])
    assert data["params"]["alphas"] == [[0.125, 0], [0.125, 0], [0, 0], [0, 0]]


def test_symmetry_needs_params_for_half_period(capsys):
    assert run(capsys, "symmetry", "--state", "0.2+0.3i,0.1", "--tau", "i", "--half-period", "2")[0] == 1


def test_symmetry_rejects_non_gamma2(capsys):
    assert run(capsys, "symmetry", "--state", "0.2+0.3i,0.1", "--tau", "i", "--gamma", "1,1,0,1")[0] == 1


@pytest.mark.slow
def test_verify_suite(capsys):
    code, out = run(capsys, "verify", "elliptic", "--quick", "--jobs", "2", "--seed", "7")
    data = json.loads(out)
    assert data["suite"] == "elliptic"
    assert {r["name"] for r in data["records"]} >= {"elliptic.modular_constant", "elliptic.heat_equation"}
    assert data["passed"]
    assert code == 0
