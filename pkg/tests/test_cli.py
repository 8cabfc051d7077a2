import json

import pytest

from stokesleaf.cli import COMMANDS, RunConfig, UsageError, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_bracket_an3(capsys):
    code, out, _ = _run(capsys, "verify-bracket", "--family", "an", "--n", "3")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert len(doc["records"]) == 3
    assert all(r["tag"] for r in doc["records"])


def test_leaf_dim_cfp7(capsys):
    code, out, _ = _run(capsys, "leaf-dim", "--family", "cfp", "--n", "7", "--samples", "10", "--seed", "7")
    recs = json.loads(out)["records"]
    assert code == 0
    assert len(recs) == 10 and {r["leaf_dim"] for r in recs} == {14}


def test_missing_config(capsys, tmp_path):
    code, _, err = _run(capsys, "run", "--config", str(tmp_path / "missing.json"))
    assert code == 2 and "not found" in err


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unknown_command_in_config(capsys, tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"command": "frobnicate"}))
    assert _run(capsys, "run", "--config", str(p))[0] == 2


def test_config_matches_flags(capsys, tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"command": "markov", "samples": 4, "seed": 9}))
    a = _run(capsys, "run", "--config", str(p))
    b = _run(capsys, "markov", "--samples", "4", "--seed", "9")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]


def test_reruns_are_byte_identical(capsys):
    argv = ["char-identity", "--family", "cfp", "--n", "6", "--samples", "2", "--seed", "3"]
    assert _run(capsys, *argv)[1] == _run(capsys, *argv)[1]


def test_jobs_do_not_change_output(capsys):
    argv = ["jordan", "--family", "an", "--n", "5", "--samples", "3", "--seed", "1"]
    a = json.loads(_run(capsys, *argv)[1])
    b = json.loads(_run(capsys, *argv, "--jobs", "2")[1])
    assert a["records"] == b["records"]


def test_explicit_point_and_formats(capsys):
    code, out, _ = _run(capsys, "stokes", "--family", "an", "--n", "3", "--Z", "1,0,0", "--emit", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("G,") or "tag" in lines[0]
    assert len(lines) == 1 + 3 + 1
    code, out, _ = _run(capsys, "stokes", "--family", "an", "--n", "3", "--Z", "1,0,0", "--emit", "text")
    assert out.strip().splitlines()[-1] == "stokes: 4/4 passed"


def test_dump_symbolic(capsys):
    code, out, _ = _run(capsys, "stokes", "--family", "cfp", "--n", "4", "--dump-symbolic")
    recs = json.loads(out)["records"]
    assert code == 0 and recs[0]["G"].startswith("Z1,Z2,Z3,Z4,Y1,Y2\n")


def test_usage_errors(capsys):
    assert _run(capsys, "markov", "--family", "cfp", "--n", "4")[0] == 2
    assert _run(capsys, "markov", "--tol", "0.5")[0] == 2
    assert _run(capsys, "stokes", "--family", "an", "--n", "4", "--Z", "1,2")[0] == 2
    assert _run(capsys, "jordan", "--family", "cfp", "--n", "3")[0] == 2


def test_contract_failure_status(capsys):
    # a tolerance far below double precision rounding must fail the Minkowski check
    code, _, err = _run(capsys, "minkowski", "--family", "cfp", "--n", "5", "--samples", "2", "--tol", "1e-14")
    assert code == 1 and "first failure" in err


@pytest.mark.parametrize("cmd", ["isospectral", "pvi-check", "dual-monodromy", "casimir", "skein",
                                 "calibrate-incidence", "trace-bracket-calibration", "commutator-report",
                                 "rank", "flow"])
def test_commands_run(capsys, cmd):
    code, out, _ = _run(capsys, cmd, "--samples", "2", "--family", "an", "--n", "4")
    doc = json.loads(out)
    assert code == 0, doc
    assert doc["command"] == cmd and doc["records"]


def test_every_command_dispatches():
    from stokesleaf.cli import DISPATCH

    assert set(DISPATCH) == set(COMMANDS)


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig(command="markov", emit="xml")
    with pytest.raises(UsageError):
        RunConfig(command="markov", seed=-1)
    with pytest.raises(UsageError):
        RunConfig.from_dict({"command": "markov", "colour": 1})
