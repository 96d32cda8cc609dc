import bz2
import json
import sys

import pytest

from unitsat.cli import main

from conftest import SEQUENCE_NET

C5_CREL = "places 5\n1 2\n1 5\n2 3\n3 4\n4 5\n"

PARALLEL_NET = (
    "place p0 initial\nplace p1\nplace p2 initial\nplace p3\n"
    "trans t0\nin p0 t0\nout t0 p1\ntrans t1\nin p2 t1\nout t1 p3\n"
)


@pytest.fixture
def c5_crel(tmp_path):
    path = tmp_path / "c5.crel"
    path.write_text(C5_CREL)
    return path


def test_explore(tmp_path, capsys):
    net = tmp_path / "seq.snet"
    net.write_text(SEQUENCE_NET)
    assert main(["explore", "--net", str(net)]) == 0
    out = capsys.readouterr().out
    assert out == "# 2 reachable markings\nm p0\nm p1\n"


def test_relation(tmp_path):
    net = tmp_path / "par.snet"
    net.write_text(PARALLEL_NET)
    out = tmp_path / "par.crel"
    assert main(["relation", "--net", str(net), "--out", str(out)]) == 0
    assert out.read_text() == "places 4\n1 3\n1 4\n2 3\n2 4\n"


def test_encode_header_and_metadata(tmp_path, c5_crel):
    out = tmp_path / "c5_3.cnf"
    assert main(["encode", "--relation", str(c5_crel), "--units", "3", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    meta = [line for line in lines if line.startswith("c ")]
    assert any(line.startswith("c generator unitsat") for line in meta)
    assert "c places 5" in meta and "c units 3" in meta and "c symmetry on" in meta
    header = next(line for line in lines if line.startswith("p "))
    assert header == "p cnf 15 20"
    assert sum(1 for line in lines if not line.startswith(("c ", "p "))) == 20


def test_encode_missing_file_is_usage_error(tmp_path, capsys):
    out = tmp_path / "x.cnf"
    code = main(["encode", "--relation", str(tmp_path / "nope.crel"), "--units", "3", "--out", str(out)])
    assert code == 2
    assert "no such file" in capsys.readouterr().err


def test_encode_compress(tmp_path, c5_crel):
    out = tmp_path / "c5_3.cnf"
    code = main(
        ["encode", "--relation", str(c5_crel), "--units", "3", "--out", str(out),
         "--compress", "bzip2 -kf {input}"]
    )
    assert code == 0
    packed = tmp_path / "c5_3.cnf.bz2"
    assert packed.exists()
    assert bz2.decompress(packed.read_bytes()) == out.read_bytes()


def test_solve_decode_verify_pipeline(tmp_path, c5_crel, capsys):
    cnf = tmp_path / "c5_3.cnf"
    main(["encode", "--relation", str(c5_crel), "--units", "3", "--out", str(cnf)])

    model = tmp_path / "model.txt"
    assert main(["solve", "--cnf", str(cnf), "--out", str(model)]) == 0
    text = model.read_text()
    assert text.startswith("s SATISFIABLE\nv ")
    assert text.rstrip().endswith(" 0")

    partition = tmp_path / "c5.units"
    assert main(["decode", "--model", str(model), "--cnf", str(cnf), "--out", str(partition)]) == 0
    assert len(partition.read_text().splitlines()) == 5

    assert main(["verify", "--relation", str(c5_crel), "--partition", str(partition)]) == 0
    assert capsys.readouterr().out == "ok\n"


def test_solve_unsat(tmp_path, c5_crel, capsys):
    cnf = tmp_path / "c5_2.cnf"
    main(["encode", "--relation", str(c5_crel), "--units", "2", "--out", str(cnf)])
    assert main(["solve", "--cnf", str(cnf)]) == 0
    assert capsys.readouterr().out == "s UNSATISFIABLE\n"


def test_decode_needs_geometry(tmp_path, capsys):
    model = tmp_path / "m.txt"
    model.write_text("s SATISFIABLE\nv 1 0\n")
    assert main(["decode", "--model", str(model)]) == 2
    assert main(["decode", "--model", str(model), "--places", "1", "--units", "1"]) == 0
    assert capsys.readouterr().out.endswith("1 1\n")


def test_verify_reports_violations(tmp_path, c5_crel, capsys):
    partition = tmp_path / "bad.units"
    partition.write_text("1 1\n2 1\n3 1\n4 1\n5 1\n")
    assert main(["verify", "--relation", str(c5_crel), "--partition", str(partition)]) == 1
    out = capsys.readouterr().out
    assert "violation: places 1 and 2 share unit 1" in out


def test_chromatic_methods(tmp_path, c5_crel, capsys):
    for method in ("sat", "brute", "greedy"):
        assert main(["chromatic", "--relation", str(c5_crel), "--method", method]) == 0
    assert capsys.readouterr().out == "3\n3\n3\n"


def test_sweep_csv(tmp_path, c5_crel):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--relation", str(c5_crel), "--units", "1..5", "--out", str(out)]) == 0
    assert out.read_text() == "n,verdict\n1,U\n2,U\n3,S\n4,S\n5,S\n"


def test_sweep_with_times_column(tmp_path, c5_crel):
    out = tmp_path / "sweep.csv"
    main(["sweep", "--relation", str(c5_crel), "--units", "1..3", "--times", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0] == "n,verdict,seconds"
    assert all(len(line.split(",")) == 3 for line in lines[1:])


def test_sweep_bad_range(tmp_path, c5_crel, capsys):
    assert main(["sweep", "--relation", str(c5_crel), "--units", "5..1"]) == 2


def test_sweep_external_solver(tmp_path, c5_crel):
    portfolio = _write_portfolio(tmp_path, ["unsat"])
    out = tmp_path / "sweep.csv"
    code = main(
        ["sweep", "--relation", str(c5_crel), "--units", "1..2", "--solver", "s0",
         "--portfolio", str(portfolio), "--out", str(out)]
    )
    assert code == 0
    assert out.read_text() == "n,verdict\n1,U\n2,U\n"


def test_sweep_unknown_solver_name(tmp_path, c5_crel, capsys):
    portfolio = _write_portfolio(tmp_path, ["unsat"])
    code = main(
        ["sweep", "--relation", str(c5_crel), "--units", "1..2", "--solver", "nope",
         "--portfolio", str(portfolio)]
    )
    assert code == 2
    assert "not in portfolio" in capsys.readouterr().err


def _write_portfolio(tmp_path, script_behaviors):
    solvers = []
    for i, behavior in enumerate(script_behaviors):
        script = tmp_path / f"s{i}.py"
        if behavior == "unsat":
            script.write_text("import sys\nprint('s UNSATISFIABLE')\nsys.exit(20)\n")
        else:
            script.write_text("import sys\nsys.exit(3)\n")
        solvers.append(
            {"name": f"s{i}", "command": f"{sys.executable} {script} {{input}}", "timeout_seconds": 10}
        )
    path = tmp_path / "portfolio.json"
    path.write_text(json.dumps({"solvers": solvers}))
    return path


def test_bench_and_report(tmp_path, c5_crel):
    cnf = tmp_path / "c5_2.cnf"
    main(["encode", "--relation", str(c5_crel), "--units", "2", "--out", str(cnf)])
    portfolio = _write_portfolio(tmp_path, ["unsat", "unsat", "error"])

    records = tmp_path / "records.csv"
    code = main(
        ["bench", "--portfolio", str(portfolio), "--cnf", str(cnf), "--no-times",
         "--out", str(records)]
    )
    assert code == 0
    lines = records.read_text().splitlines()
    assert lines[0].startswith("formula,variables,clauses,type,difficulty")
    assert lines[1].startswith("c5_2,10,15,UNSAT,1")

    report = tmp_path / "dispersion.csv"
    assert main(["report", "--records", str(records), "--out", str(report)]) == 0
    assert report.read_text() == "variables,clauses,type,difficulty\n10,15,UNSAT,1\n"


def test_bench_env_portfolio(tmp_path, c5_crel, monkeypatch):
    cnf = tmp_path / "c5_1.cnf"
    main(["encode", "--relation", str(c5_crel), "--units", "1", "--out", str(cnf)])
    portfolio = _write_portfolio(tmp_path, ["unsat"])
    monkeypatch.setenv("UNITSAT_PORTFOLIO", str(portfolio))
    records = tmp_path / "records.csv"
    assert main(["bench", "--cnf", str(cnf), "--no-times", "--out", str(records)]) == 0


def test_domain_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.snet"
    bad.write_text("place p\nplace p\n")
    assert main(["explore", "--net", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["explore"])  # missing --net
    assert err.value.code == 2


def test_bad_numeric_arguments_are_usage_errors(tmp_path, c5_crel, capsys):
    out = tmp_path / "x.cnf"
    assert main(["encode", "--relation", str(c5_crel), "--units", "0", "--out", str(out)]) == 2
    main(["encode", "--relation", str(c5_crel), "--units", "2", "--out", str(out)])
    assert main(["solve", "--cnf", str(out), "--max-decisions", "-1"]) == 2


def test_outputs_are_deterministic(tmp_path, c5_crel):
    a, b = tmp_path / "a.cnf", tmp_path / "b.cnf"
    main(["encode", "--relation", str(c5_crel), "--units", "4", "--out", str(a)])
    main(["encode", "--relation", str(c5_crel), "--units", "4", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
