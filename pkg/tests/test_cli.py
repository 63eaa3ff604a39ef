import json

import pytest

from biharm import cli
from biharm.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from biharm.version import __version__

BUDGET = "order=16 angular_order=12 max_nodes=262144"


def run_json(capsys, *args):
    rv = main(list(args))
    out = capsys.readouterr().out
    return rv, json.loads(out) if out.strip() else None


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


@pytest.mark.parametrize("args", [[], ["wat"], ["verify", "--nope"]])
def test_usage(capsys, args):
    assert main(args) == EXIT_USAGE


def test_constants(capsys):
    rv, doc = run_json(capsys, "constants", "--dims", "4..6")
    assert rv == EXIT_OK
    assert doc["header"]["version"] == __version__
    assert doc["command"] == "constants"
    assert doc["passed"]
    tables = [r for r in doc["results"] if "quad_form_at_n_minus_4" in r]
    assert [t["n"] for t in tables] == [4, 5, 6]
    assert tables[0]["quad_form_at_n_minus_4"] == 16
    ranges = [r for r in doc["results"] if r.get("type") == "p-range"]
    assert [r["upper"] for r in ranges] == [6.0, 4.0, 4.0]


def test_constants_convex(capsys):
    rv, doc = run_json(capsys, "constants", "--dims", "5", "--convex")
    assert rv == EXIT_OK
    assert doc["results"][-1]["upper"] == "inf"
    assert doc["config"]["options"] == {"convex": True}


def test_constants_csv(capsys):
    assert main(["constants", "--dims", "8,9", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("n,quad_form_at_n_minus_4,alpha_n")
    assert len(lines) == 3
    assert lines[1].startswith("8,")


def test_constants_text(capsys):
    assert main(["constants", "--dims", "4", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "alpha_n=-" in out
    assert "p_upper=6.000000" in out


def test_bad_dims(capsys):
    assert main(["constants", "--dims", "4..x"]) == EXIT_USAGE


def test_binary_not_solve(capsys):
    assert main(["constants", "--format", "binary"]) == EXIT_USAGE


def test_verify_alpha_too_large(capsys, caplog):
    rv = main(["verify", "--dim", "8", "--alpha", "9", "--pole", "boundary"])
    assert rv == EXIT_USAGE
    assert "not admissible" in caplog.text
    assert capsys.readouterr().out == ""


def test_verify_unknown_identity(capsys):
    assert main(["verify", "--identity", "I9_99"]) == EXIT_USAGE


def verify_args(*extra):
    return [
        "verify",
        "--identity",
        "I2_13,hessian-form",
        "--domain",
        "ball",
        "--dim",
        "2",
        "--alpha",
        "1",
        "--pole",
        "exterior",
        "--budget",
        BUDGET,
    ] + list(extra)


def test_verify(capsys):
    rv, doc = run_json(capsys, *verify_args())
    assert rv == EXIT_OK
    assert doc["passed"]
    assert doc["config"]["identities"] == ["I2_13", "I3_3"]
    assert doc["config"]["budget"]["order"] == 16
    assert [r["identity"] for r in doc["results"]] == ["I2_13", "I3_3"]
    assert all(r["report"]["passed"] for r in doc["results"])


def test_verify_deterministic(capsys):
    docs = []
    for i in range(2):
        rv, doc = run_json(capsys, *verify_args("--seed", "42"))
        assert rv == EXIT_OK
        del doc["header"]
        docs.append(doc)
    assert docs[0] == docs[1]
    assert docs[0]["seed"] == 42


def test_verify_csv(capsys):
    assert main(verify_args("--format", "csv")) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("identity,variant,n,alpha")
    assert len(lines) == 3
    assert lines[1].startswith("I2_13,direct,2,1.0,exterior")


def test_output_file(capsys, tmp_path):
    out = tmp_path / "report.json"
    assert main(verify_args("-o", str(out))) == EXIT_OK
    assert capsys.readouterr().out == ""
    doc = json.loads(out.read_text())
    assert doc["config"]["output"] == str(out)


def test_config_file(capsys, tmp_path):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"dims": "4..5", "format": "csv"}))
    assert main(["constants", "--config", str(conf)]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 3

    # the command line wins
    args = ["constants", "--config", str(conf), "--dims", "6"]
    assert main(args) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 2


@pytest.mark.parametrize(
    "content", ['{"dims": [4], "wat": 1}', "[1, 2]", "{not json"]
)
def test_config_file_bad(capsys, tmp_path, content):
    conf = tmp_path / "run.json"
    conf.write_text(content)
    assert main(["constants", "--config", str(conf)]) == EXIT_USAGE


def test_config_missing(capsys, tmp_path):
    path = str(tmp_path / "nope.json")
    assert main(["constants", "--config", path]) == EXIT_USAGE


def test_workers_env(monkeypatch):
    monkeypatch.setenv(cli.WORKERS_ENV, "3")
    args = cli.make_parser().parse_args(["constants"])
    assert cli.make_config(args).workers == 3
    args = cli.make_parser().parse_args(["constants", "--workers", "2"])
    assert cli.make_config(args).workers == 2


def test_bad_budget(capsys):
    assert main(["constants", "--budget", "tol=2"]) == EXIT_USAGE
    assert main(["constants", "--budget", "wat=1"]) == EXIT_USAGE


def test_solve(capsys):
    rv, doc = run_json(
        capsys,
        "solve",
        "--polygon",
        "square",
        "--h",
        "0.125",
        "--field",
        "y^2",
        "--method",
        "direct",
    )
    assert rv == EXIT_OK
    (summary,) = doc["results"]
    assert summary["converged"]
    assert summary["method"] == "direct"
    assert summary["l2_error"] < 1e-8


def test_solve_binary(capsys, tmp_path):
    from biharm import adapt
    from biharm.enums import Format

    out = tmp_path / "grid.bin"
    args = ["solve", "--h", "0.25", "--field", "zero", "--format", "binary"]
    assert main(args + ["-o", str(out)]) == EXIT_OK
    vals = adapt.load(out.read_bytes(), Format.BINARY, tag="grid")
    assert vals.values.shape == (9, 9)

    # a binary report needs a file
    assert main(args) == EXIT_USAGE


def test_solve_bad(capsys):
    assert main(["solve", "--field", "wat"]) == EXIT_USAGE
    assert main(["solve", "--polygon", "[[0, 0"]) == EXIT_USAGE
    assert main(["solve", "--h", "0.3"]) == EXIT_FAILED


def test_decay_fixture(capsys):
    rv, doc = run_json(
        capsys, "decay", "--fixture", "xy^2", "--radius", "1", "--count", "6"
    )
    assert rv == EXIT_OK
    (fit,) = doc["results"]
    assert fit["exponent"] == pytest.approx(6.0, abs=0.05)


def test_caccioppoli(capsys):
    rv, doc = run_json(capsys, "caccioppoli")
    assert rv == EXIT_OK
    assert [r["fixture"] for r in doc["results"]] == ["y^2", "xy^2"]
    assert all(r["spread"] <= 0.01 for r in doc["results"])

    rv, doc = run_json(capsys, "caccioppoli", "--alpha", "0.5,1.5")
    assert rv == EXIT_OK
    assert len(doc["results"]) == 4


def test_caccioppoli_bad_alpha(capsys):
    assert main(["caccioppoli", "--alpha", "2.5"]) == EXIT_USAGE


@pytest.mark.slow
def test_convexity(capsys):
    rv, doc = run_json(
        capsys,
        "convexity",
        "--domain",
        "ball,cube",
        "--dim",
        "2,3",
        "--alpha",
        "0,1",
        "--budget",
        BUDGET,
    )
    assert rv == EXIT_OK
    pair = doc["results"][-1]
    assert pair["min_pair"] < 0
    assert all(r["surface"] >= -3 * r["error"] for r in doc["results"][:-1])


@pytest.mark.slow
def test_convexity_default_alphas(capsys):
    rv, doc = run_json(
        capsys,
        "convexity",
        "--domain",
        "ball",
        "--dim",
        "2,4",
        "--budget",
        BUDGET,
    )
    assert rv == EXIT_OK
    alphas = [(r["n"], r["alpha"]) for r in doc["results"][:-1]]
    assert alphas == [(2, 0.0), (2, 1.0), (4, 0.0), (4, 1.0), (4, 2.0)]
