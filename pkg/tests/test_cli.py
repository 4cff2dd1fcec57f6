import json

import pytest

from symbreak import cli, config
from symbreak.errors import ConfigError
from symbreak.report import PersistenceReport


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def body(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def test_cylinder(tmp_path, capsys):
    assert run(tmp_path, "cylinder", "--n", "3", "--lambda", "0.05") == 0
    rep = PersistenceReport.from_json((tmp_path / "report.json").read_text())
    assert rep.orbits_found == 2 and rep.bound == 2 and rep.verdict == "satisfied"
    assert sorted(o.stability for o in rep.orbits) == ["stable", "unstable"]
    assert "tube" in rep.defaulted
    assert "orbits found 2" in capsys.readouterr().out
    assert (tmp_path / "report.txt").exists()
    assert (tmp_path / "equilibria.csv").read_text().startswith("# symbreak")


def test_report_json_round_trip(tmp_path):
    run(tmp_path, "pendulum", "--s", "1", "--lambda", "0.1")
    text = (tmp_path / "report.json").read_text()
    rep = PersistenceReport.from_json(text)
    assert rep.to_json() + "\n" == text
    assert rep.orbits_found == 1 and rep.bound == 1
    assert rep.flags == {"OPS": "assumed", "R": "holds", "G_mu_in_H_alpha": "holds"}
    assert PersistenceReport.from_dict(rep.to_dict()) == rep


def test_pendulum_outputs(tmp_path):
    assert run(tmp_path, "pendulum", "--s", "1", "--lambda", "0.1", "--samples", "50") == 0
    rows = body(tmp_path / "bifurcation.csv")
    assert rows[0] == "s,energy,momentum,label" and len(rows) == 1 + 50 + 2


@pytest.mark.parametrize("example", ["rigid-fluid-added", "rigid-fluid-shape"])
def test_fluid_examples(tmp_path, example):
    assert run(tmp_path, example, "--T", "1", "--dt", "0.01") == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["orbits_found"] == 2 and rep["extra"]["heteroclinic_connections"] == 4
    assert body(tmp_path / "trajectory.csv")[0] == "t,x,alpha1,alpha2,energy,casimir"
    assert len(body(tmp_path / "trajectory.csv")) == 1 + 101


def test_csv_bodies_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["rigid-fluid-added", "--T", "2", "--seed", "7", "--out", str(d)]) == 0
    for name in ("equilibria.csv", "trajectory.csv"):
        assert body(a / name) == body(b / name)
    cli.main(["sweep", "--example", "cylinder", "--lambda-grid", "0:0.1:3", "--out", str(a)])
    cli.main(["sweep", "--example", "cylinder", "--lambda-grid", "0:0.1:3", "--out", str(b)])
    assert body(a / "sweep.csv") == body(b / "sweep.csv")


@pytest.mark.parametrize(
    "args, verdict",
    [
        (["--subalgebra", "diag", "--chi", "0,0,1", "--rho", "0,0,2"], 0),
        (["--subalgebra", "rot", "--chi", "0,0,0", "--rho", "0,0,0"], 2),
        (["--subalgebra", "rot", "--chi", "1,0,0", "--rho", "0,1,0"], 0),
        (["--subalgebra", "rot", "--chi", "0,0,2", "--rho", "0,0,1"], 0),
        (["--subalgebra", "rot", "--chi", "0,0,1", "--rho", "0,0,1"], 2),
    ],
)
def test_regularity(tmp_path, args, verdict):
    assert run(tmp_path, "regularity-so4", *args) == verdict
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["R"] == ("holds" if verdict == 0 else "fails")


def test_regularity_with_non_commuting_velocity(tmp_path, capsys):
    assert run(tmp_path, "regularity-so4", "--subalgebra", "rot", "--chi", "1,0,0", "--rho", "0,0,0", "--xi", "0,1,0") == 1
    assert "not zero" in capsys.readouterr().err


def test_sweep(tmp_path):
    assert run(tmp_path, "sweep", "--example", "rigid-fluid-added", "--lambda-grid", "0:0.3:4") == 0
    rows = body(tmp_path / "sweep.csv")
    assert rows[0] == "lambda,points,orbits,bound,verdict,count_changed"
    assert rows[1].endswith("skipped,0")
    assert all(r.split(",")[1:3] == ["4", "2"] for r in rows[2:])
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["persists_until"] == pytest.approx(0.3) and rep["first_change"] is None


def test_sweep_requires_a_grid(tmp_path, capsys):
    assert run(tmp_path, "sweep", "--example", "cylinder", "--lambda-grid", "0:1:0") == 1
    assert "empty lambda grid" in capsys.readouterr().err
    assert run(tmp_path, "sweep", "--example", "cylinder") == 1


def test_every_bad_key_is_reported(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[cylinder]\nn = 2.5\nlambda = abc\ncolour = red\n")
    assert run(tmp_path, "cylinder", "--config", str(cfg), "--tube", "-1") == 1
    err = capsys.readouterr().err
    for word in ("'n'", "'lambda'", "'colour'", "'tube'"):
        assert word in err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[cylinder]\nn = 4\nlambda = 0.02\n")
    assert run(tmp_path, "cylinder", "--config", str(cfg), "--lambda", "0.07") == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["params"]["n"] == 4 and rep["lam"] == 0.07
    assert "n" not in rep["defaulted"] and "lambda" not in rep["defaulted"]


def test_config_validation():
    with pytest.raises(ConfigError) as exc:
        config.build("regularity-so4", {}, {})
    assert len(exc.value.problems) == 3
    with pytest.raises(ConfigError):
        config.build("rigid-fluid-added", {"A": "1", "B": "2"}, {})
    assert config.parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    for bad in ("1:2:3", "0:1", "0:-1:3"):
        with pytest.raises(ValueError):
            config.parse_grid(bad)


def test_unknown_section(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[cylindre]\nn = 3\n")
    with pytest.raises(ConfigError):
        config.read_section(cfg, "cylinder")
