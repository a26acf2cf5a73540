"""Tests of the command line and of the files it writes."""

import csv
import json

import pytest

from emden.define import parse_config

from emden.functions import (
    EXIT_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
    run_cli,
    run_sweep,
    sweep_configs,
)

######################################################################

ALGEBRAIC = """\
problem:
  N: 3
  gamma: 1.0
  a: 2.0
  p: "{p}"
  q: 0
solver:
  h: 0.05
  radii: [5, 10]
output:
  formats: [csv, json]
"""

MANUFACTURED = """\
problem:
  N: 3
  gamma: 1.0
  a: 2.0
  p:
    family: manufactured
    q0: 0.0
  q: 0
solver:
  h: 0.05
  radii: [5, 10, 20, 40]
  cauchy_tol: 0.05
  tail_tol: 0.5
output:
  formats: [csv, json]
"""

def write_config(directory, text, name="run.yaml"):
    """Write a configuration file and return its path."""
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return str(path)

def read_csv(path):
    """Rows of a CSV file, header included."""
    with open(path, encoding="utf-8", newline='') as stream:
        return list(csv.reader(stream))

@pytest.fixture
def out_dir(tmp_path):
    return tmp_path / "out"

######################################################################

def test_check_of_a_convergent_potential(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r)^(-3)"))
    code = run_cli(["-o", str(out_dir), "check", path])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "convergent"
    assert float(lines[1].split()[1]) == pytest.approx(0.5, abs=1e-6)
    data = json.loads((out_dir / "check.json").read_text(encoding="utf-8"))
    assert data['classification'] == "convergent"

def test_check_of_a_divergent_potential(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r)^(-2)"))
    code = run_cli(["-o", str(out_dir), "check", path])
    assert code == EXIT_NEGATIVE
    assert capsys.readouterr().out.startswith("divergent")

def test_solve_of_a_divergent_potential(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r)^(-2)"))
    code = run_cli(["-o", str(out_dir), "solve", path])
    assert code == EXIT_NEGATIVE
    assert capsys.readouterr().out.startswith("divergent: ")

def test_missing_configuration_file(tmp_path, capsys):
    code = run_cli(["check", str(tmp_path / "absent.yaml")])
    assert code == EXIT_ERROR
    assert "Error: " in capsys.readouterr().err

def test_invalid_problem(tmp_path, out_dir, capsys):
    text = ALGEBRAIC.format(p="(1+r)^(-3)").replace("gamma: 1.0", "gamma: 0.0")
    code = run_cli(["-o", str(out_dir), "solve", write_config(tmp_path, text)])
    assert code == EXIT_ERROR
    assert "gamma" in capsys.readouterr().err

def test_configuration_error_names_the_line(tmp_path, capsys):
    text = ALGEBRAIC.format(p="(1+r)^(-3)").replace("gamma:", "gama:")
    code = run_cli(["check", write_config(tmp_path, text)])
    assert code == EXIT_ERROR
    assert "line 3: unknown key 'gama'" in capsys.readouterr().err

def test_too_small_ball_is_an_error(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r)^(-3)"))
    code = run_cli(["-o", str(out_dir), "eigen", "--radius", "0.1", path])
    assert code == EXIT_ERROR
    assert "interior nodes" in capsys.readouterr().err

def test_unwritable_output_directory_is_an_error(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r)^(-3)"))
    code = run_cli(["-o", str(blocker / "out"), "check", path])
    assert code == EXIT_ERROR
    assert "Error: " in capsys.readouterr().err

def test_sectioned_configuration_file(tmp_path, out_dir, capsys):
    text = (
        "[problem]\nN = 3\ngamma = 1\na = 2\np = (1+r)^(-3)\nq = 0\n"
        "[output]\nformats = [json]\n"
    )
    path = write_config(tmp_path, text, name="run.cfg")
    assert run_cli(["-o", str(out_dir), "check", path]) == EXIT_OK
    assert capsys.readouterr().out.startswith("convergent")
    assert (out_dir / "check.json").exists()

def test_subcommand_is_required(capsys):
    with pytest.raises(SystemExit):
        run_cli([])

######################################################################

def test_eigen(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r)^(-3)"))
    code = run_cli(["-o", str(out_dir), "eigen", "--radius", "3.141592653589793",
                    path])
    assert code == EXIT_OK
    line = capsys.readouterr().out.strip()
    assert line.startswith("lambda1 ")
    assert float(line.split()[1]) == pytest.approx(1.0, abs=1e-3)
    rows = read_csv(out_dir / "eigen.csv")
    assert rows[0] == ["r", "phi1"]
    assert float(rows[-1][1]) == 0.0
    data = json.loads((out_dir / "eigen.json").read_text(encoding="utf-8"))
    assert data['lambda1'] == pytest.approx(1.0, abs=1e-3)

def test_barrier(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r^2)^(-2)"))
    code = run_cli(["-o", str(out_dir), "barrier", path])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "supersolution holds" in out
    rows = read_csv(out_dir / "barrier.csv")
    assert rows[0] == ["r", "w", "v", "margin"]
    assert len(rows) == 1 + 101
    assert rows[-1][3] == ""
    assert float(rows[1][1]) == pytest.approx(0.5, abs=1e-6)
    data = json.loads((out_dir / "barrier.json").read_text(encoding="utf-8"))
    assert data['supersolution'] is True
    assert data['radius'] == 5.0

def test_barrier_on_another_radius(tmp_path, out_dir):
    path = write_config(tmp_path, ALGEBRAIC.format(p="exp(-r)"))
    code = run_cli(["-o", str(out_dir), "barrier", "--radius", "8", path])
    assert code == EXIT_OK
    rows = read_csv(out_dir / "barrier.csv")
    assert float(rows[-1][0]) == 8.0

def test_solve(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, MANUFACTURED)
    code = run_cli(["-o", str(out_dir), "solve", path])
    assert code == EXIT_OK
    assert capsys.readouterr().out.startswith("certified at R=")
    rows = read_csv(out_dir / "solution.csv")
    assert rows[0] == ["r", "u", "v"]
    assert float(rows[1][0]) == 0.0
    assert all(float(u) <= float(v) for _, u, v in rows[1:])
    report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
    assert report['certified'] is True
    assert report['config']['problem']['p']['family'] == "manufactured"
    assert not (out_dir / "solution.svg").exists()

def test_solve_output_is_deterministic(tmp_path):
    path = write_config(tmp_path, MANUFACTURED)
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert run_cli(["-o", str(first), "solve", path]) == EXIT_OK
    assert run_cli(["-o", str(second), "solve", path]) == EXIT_OK
    assert ((first / "solution.csv").read_bytes() ==
            (second / "solution.csv").read_bytes())

def test_uncertified_solve(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="(1+r^2)^(-2)"))
    code = run_cli(["-o", str(out_dir), "solve", path])
    assert code == EXIT_NEGATIVE
    assert capsys.readouterr().out.startswith("uncertified at R=10")

def test_verify(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, MANUFACTURED)
    code = run_cli(["-o", str(out_dir), "verify", "--radius", "10", path])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "order" in out
    data = json.loads((out_dir / "verify.json").read_text(encoding="utf-8"))
    assert data['spacings'] == [0.1, 0.05]
    assert data['order'] >= 1.7

def test_verify_needs_the_manufactured_source(tmp_path, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="exp(-r)"))
    assert run_cli(["verify", path]) == EXIT_ERROR

def test_probe_of_an_uncertified_run(tmp_path, out_dir, capsys):
    path = write_config(tmp_path, ALGEBRAIC.format(p="exp(-r)"))
    code = run_cli(["-o", str(out_dir), "probe", path])
    assert code == EXIT_NEGATIVE
    assert capsys.readouterr().out.strip() == "probe not applicable"
    data = json.loads((out_dir / "probe.json").read_text(encoding="utf-8"))
    assert data['applicable'] is False

######################################################################

def test_sweep_directories(tmp_path):
    config = parse_config(ALGEBRAIC.format(p="exp(-r)")).with_directory(
        str(tmp_path))
    configs = sweep_configs(config, [0.5, 1.0], [2.0, 1.5])
    directories = [c.output.directory for c in configs]
    assert directories == [
        str(tmp_path / "gamma=0.5_a=2"),
        str(tmp_path / "gamma=0.5_a=1.5"),
        str(tmp_path / "gamma=1_a=2"),
        str(tmp_path / "gamma=1_a=1.5"),
    ]
    assert [(c.problem.gamma, c.problem.a) for c in configs] == [
        (0.5, 2.0), (0.5, 1.5), (1.0, 2.0), (1.0, 1.5)]

def test_sweep_keeps_unswept_values(tmp_path):
    config = parse_config(ALGEBRAIC.format(p="exp(-r)"))
    configs = sweep_configs(config, None, [3.0])
    assert len(configs) == 1
    assert configs[0].problem.gamma == 1.0
    assert configs[0].problem.a == 3.0

def test_sweep_of_divergent_runs(tmp_path, capsys):
    config = parse_config(ALGEBRAIC.format(p="(1+r)^(-2)")).with_directory(
        str(tmp_path))
    code = run_sweep(sweep_configs(config, [0.5, 2.0], None), workers=2)
    assert code == EXIT_NEGATIVE
    lines = sorted(capsys.readouterr().out.splitlines())
    assert lines == [
        f"{tmp_path / 'gamma=0.5_a=2'}: exit 2",
        f"{tmp_path / 'gamma=2_a=2'}: exit 2",
    ]
