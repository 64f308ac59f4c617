from __future__ import annotations

import json

import pytest
from hypothesis import given

from qgeom import cli, setfile
from qgeom._workers import pmap, worker_count
from qgeom.config import ExperimentConfig, parse_list, parse_q
from qgeom.errors import ConfigError, SizeTooLarge
from qgeom.generate import KINDS, generate_set, parse_gen
from qgeom.gf import field_of_order
from qgeom.report import Check
from qgeom.vecspace import PointSet, span

from .conftest import point_sets


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_q():
    assert parse_q("9") == (3, 2)
    assert parse_q("3^2") == (3, 2)
    assert parse_q("5", 2) == (5, 2)
    assert parse_q("2^20") == (2, 20)
    for bad in ("6", "abc", "4^2^1", "2^21", "1", "0"):
        with pytest.raises(ConfigError):
            parse_q(bad)
    with pytest.raises(ConfigError):
        parse_q("9", 3)


def test_parse_list():
    assert parse_list("1,2, 4") == [1, 2, 4]
    assert parse_list("2.5") == [2.5]
    assert parse_list(None) is None
    for bad in ("", "a,b"):
        with pytest.raises(ConfigError):
            parse_list(bad)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig("verify", p=3, e=1, n=13).validate()
    ExperimentConfig("verify", p=3, e=1, n=13, force=True).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("verify", p=2, n=2, k=3).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("verify", seed=2**64).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("verify", gen="random:2", set_path="x").validate()


def test_worker_count(monkeypatch):
    monkeypatch.delenv("QGEOM_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("QGEOM_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("QGEOM_THREADS", "0")
    assert worker_count() >= 1
    for bad in ("-1", "two"):
        monkeypatch.setenv("QGEOM_THREADS", bad)
        with pytest.raises(ConfigError):
            worker_count()


def test_pmap_preserves_order(monkeypatch):
    monkeypatch.setenv("QGEOM_THREADS", "2")
    assert pmap(abs, [-3, 1, -2, 5]) == [3, 1, 2, 5]


@given(point_sets())
def test_setfile_round_trip(E):
    assert setfile.loads(setfile.dumps(E)) == E


def test_setfile_format_and_errors(tmp_path):
    F9 = field_of_order(9)
    E = PointSet(F9, 2, [(8, 0), (0, 1)])
    text = setfile.dumps(E)
    assert text.splitlines()[0] == "q=3^2 n=2 count=2"
    assert text.splitlines()[1:] == ["0 1", "8 0"]
    path = tmp_path / "e.set"
    setfile.write(E, path)
    assert setfile.read(path) == E
    assert setfile.loads("# note\nq=3^1 n=1 count=1\n\n2\n") == PointSet(field_of_order(3), 1, [(2,)])
    bad = [
        "q=9 n=2 count=1\n0 0\n",
        "q=3^1 n=2 count=2\n0 0\n",
        "q=3^1 n=2 count=1\n0\n",
        "q=3^1 n=2 count=1\n0 3\n",
        "q=3^1 n=2 count=2\n0 1\n0 1\n",
    ]
    for t in bad:
        with pytest.raises(ConfigError):
            setfile.loads(t)


def test_generate_kinds_deterministic():
    F = field_of_order(4)
    for kind in KINDS:
        if kind == "complement-of-kakeya":
            continue
        a = generate_set(F, 2, kind, 1 if kind in ("subspace", "coset") else 5, seed=7)
        b = generate_set(F, 2, kind, 1 if kind in ("subspace", "coset") else 5, seed=7)
        assert a == b
    assert len(generate_set(F, 2, "random", 5, 3)) == 5
    assert len(generate_set(F, 2, "full", None, 0)) == 16
    assert len(generate_set(F, 3, "subspace", 2, 0)) == 16
    assert len(generate_set(field_of_order(5), 2, "complement-of-kakeya", None, 0)) == 25 - 17
    with pytest.raises(SizeTooLarge):
        generate_set(F, 2, "random", 17, 0)
    with pytest.raises(ConfigError):
        parse_gen("nonsense:2")


def test_random_subspace_is_subspace():
    F = field_of_order(3)
    E = generate_set(F, 3, "subspace", 2, 5)
    assert span(F, list(E)).k == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "gf", "--q", "8"],
    ["verify", "--suite", "character", "--q", "4", "--n", "2"],
    ["verify", "--suite", "moments", "--q", "3", "--n", "2"],
    ["scan-exceptional", "--q", "3", "--n", "3", "--k", "1", "--gen", "random:9", "--seed", "11", "--format", "json"],
    ["salem", "--q", "5", "--n", "2", "--gen", "random:7"],
    ["sharpness", "few", "--q", "3", "--n", "2"],
    ["sharpness", "kakeya", "--q", "5", "--n", "2"],
    ["sharpness", "many", "--q", "3", "--n", "3", "--k", "1"],
    ["sharpness", "refute", "--q", "3"],
])
def test_commands_exit_zero_and_are_reproducible(capsys, argv):
    code, out1, _ = _run(capsys, *argv, "--no-timestamp")
    assert code == 0
    code, out2, _ = _run(capsys, *argv, "--no-timestamp")
    assert out1 == out2
    rep = json.loads(out1)
    assert {"command", "config", "generator", "checks", "passed"} <= rep.keys()
    assert "timestamp" not in rep and rep["passed"] is True
    for c in rep["checks"]:
        assert {"name", "paper_ref", "holds", "lhs", "rhs", "ratio", "mode"} <= c.keys()


def test_timestamp_present_by_default(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "gf", "--q", "2")
    assert code == 0 and "timestamp" in json.loads(out)


def test_refute_report(capsys):
    _, out, _ = _run(capsys, "sharpness", "refute", "--q", "3", "--no-timestamp")
    rep = json.loads(out)
    assert rep["refuted"] is True
    assert rep["checks"][0]["lhs"] == 1210


def test_scan_csv_schema(capsys, tmp_path):
    out = tmp_path / "scan.csv"
    code, _, _ = _run(capsys, "scan-exceptional", "--q", "4", "--n", "2", "--k", "1", "--gen", "random:6",
                      "--u-list", "1,2,4", "--p-list", "2,3", "--format", "csv", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[1] == "u,p,C,theta,bound,ratio,holds,admissible"
    assert len(lines) == 2 + 6
    for line in lines[2:]:
        assert line.split(",")[6] in ("true", "false")


def test_generate_writes_set_file(capsys, tmp_path):
    path = tmp_path / "g.set"
    code, _, _ = _run(capsys, "generate", "--q", "3^2", "--n", "2", "--gen", "random:10", "--seed", "4",
                      "--out", str(path))
    assert code == 0
    E = setfile.read(path)
    assert len(E) == 10 and E.q == 9
    code, out, _ = _run(capsys, "salem", "--q", "9", "--n", "2", "--set", str(path), "--no-timestamp")
    assert code == 0 and json.loads(out)["set_size"] == 10


@pytest.mark.parametrize("argv", [
    ["verify", "--q", "6"],
    ["verify", "--q", "3", "--n", "13"],
    ["sharpness", "kakeya", "--q", "4", "--n", "2"],
    ["sharpness", "nothing"],
    ["scan-exceptional", "--q", "3", "--n", "2"],
    ["scan-exceptional", "--q", "3", "--n", "2", "--k", "1", "--p-list", "1"],
    ["salem", "--q", "3", "--n", "2", "--gen", "random:0"],
    ["generate", "--q", "3", "--n", "2", "--gen", "random:100"],
    ["verify", "--bogus"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2 and err.startswith("qgeom:")


def test_bad_set_file_exits_two(capsys, tmp_path):
    path = tmp_path / "dup.set"
    path.write_text("q=3^1 n=2 count=2\n0 1\n0 1\n")
    assert _run(capsys, "salem", "--q", "3", "--n", "2", "--set", str(path))[0] == 2
    path.write_text("q=5^1 n=2 count=1\n0 1\n")
    assert _run(capsys, "salem", "--q", "3", "--n", "2", "--set", str(path))[0] == 2


def test_failing_check_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda name, cfg: [Check("x", "y", False, 2, 1, 2.0)])
    code, out, _ = _run(capsys, "verify", "--suite", "gf", "--no-timestamp")
    assert code == 1 and json.loads(out)["passed"] is False
