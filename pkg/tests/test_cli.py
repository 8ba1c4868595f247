import csv
import json
import shutil
import subprocess
import sys
import time

import pytest

from conftest import expected_verdict
from dpsynth import cli
from dpsynth.cnf import RUNNING_EXAMPLE


@pytest.fixture
def example_file(tmp_path):
    f = tmp_path / "running.qdimacs"
    f.write_text(RUNNING_EXAMPLE)
    return f


def write(tmp_path, name, text):
    f = tmp_path / name
    f.write_text(text)
    return f


def test_plan_both_planners(example_file, tmp_path, capsys):
    for planner in ("treedecomp", "bucket"):
        dot = tmp_path / f"{planner}.dot"
        js = tmp_path / f"{planner}.json"
        code = cli.main(["plan", str(example_file), "--planner", planner, "--dot", str(dot),
                         "--json", str(js)])
        out = capsys.readouterr().out
        assert code == 0
        assert "valid: yes" in out and "width: 4" in out
        assert dot.read_text().startswith("digraph")
        assert json.loads(js.read_text())["root"] is not None


def test_plan_malformed(tmp_path, capsys):
    f = write(tmp_path, "bad.qdimacs", "a 1 0\n")
    assert cli.main(["plan", str(f)]) == 2
    assert "MalformedHeader" in capsys.readouterr().err


def test_solve_running_example(example_file, tmp_path, capsys):
    wf, sf = tmp_path / "w.json", tmp_path / "s.json"
    code = cli.main(["solve", str(example_file), "--witnesses", str(wf), "--stats", str(sf),
                     "--verify"])
    assert code == 0
    assert len(json.loads(wf.read_text())["witnesses"]) == 3
    stats = json.loads(sf.read_text())
    assert stats["verdict"] == "fully" and stats["verified"] == "ok"
    assert stats["width"] == 4
    for key in ("plan_ms", "compile_ms", "realizability_ms", "synthesis_ms", "total_ms"):
        assert stats[key] >= 0
    phases = sum(stats[k] for k in ("plan_ms", "compile_ms", "realizability_ms", "synthesis_ms"))
    assert stats["total_ms"] >= phases - 1.0
    assert "verdict: fully" in capsys.readouterr().out


def test_solve_partial(tmp_path):
    f = write(tmp_path, "p.qdimacs", "p cnf 2 2\na 1 0\ne 2 0\n1 0\n2 0\n")
    wf, sf = tmp_path / "w.json", tmp_path / "s.json"
    assert cli.main(["solve", str(f), "--witnesses", str(wf), "--stats", str(sf)]) == 10
    assert list(json.loads(wf.read_text())["witnesses"]) == ["2"]
    assert json.loads(sf.read_text())["verdict"] == "partially"


def test_solve_nullary_writes_no_witnesses(tmp_path):
    f = write(tmp_path, "n.qdimacs", "p cnf 1 2\ne 1 0\n1 0\n-1 0\n")
    wf = tmp_path / "w.json"
    assert cli.main(["solve", str(f), "--witnesses", str(wf)]) == 20
    assert not wf.exists()


def test_solve_errors(tmp_path):
    assert cli.main(["solve", str(tmp_path / "missing.qdimacs")]) == 2
    f = write(tmp_path, "u.qdimacs", "p cnf 1 1\ne 1 0\n2 0\n")
    assert cli.main(["solve", str(f)]) == 2


def test_solve_timeout(example_file, monkeypatch):
    def slow(*a, **k):
        time.sleep(2)
    monkeypatch.setattr(cli, "solve", slow)
    assert cli.main(["solve", str(example_file), "--timeout", "0.05"]) == 30


def test_solve_baseline(example_file, tmp_path):
    sf = tmp_path / "s.json"
    assert cli.main(["solve", str(example_file), "--engine", "baseline", "--verify",
                     "--stats", str(sf)]) == 0
    stats = json.loads(sf.read_text())
    assert stats["engine"] == "baseline" and stats["verified"] == "ok"


def test_fixture_exit_codes(fixtures_dir):
    codes = {"fully": 0, "partially": 10, "nullary": 20}
    seen = set()
    for f in sorted(fixtures_dir.glob("*.qdimacs")):
        want = expected_verdict(f)
        if want is None:
            continue
        seen.add(want)
        for planner in ("treedecomp", "bucket"):
            for engine in ("dpsynth", "baseline"):
                args = ["solve", str(f), "--planner", planner, "--engine", engine, "--verify"]
                assert cli.main(args) == codes[want], (f.name, planner, engine)
    assert seen == set(codes)


def test_outputs_are_byte_identical(example_file, tmp_path):
    blobs = []
    for run in range(2):
        wf, dot = tmp_path / f"w{run}.json", tmp_path / f"t{run}.dot"
        cli.main(["solve", str(example_file), "--witnesses", str(wf)])
        cli.main(["plan", str(example_file), "--dot", str(dot)])
        blobs.append((wf.read_bytes(), dot.read_bytes()))
    assert blobs[0] == blobs[1]


def test_bench_corpus(bench_dir, tmp_path):
    out = tmp_path / "bench.csv"
    assert cli.main(["bench", str(bench_dir), "--csv", str(out), "--timeout", "60"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    header = out.read_text().splitlines()[0].split(",")
    assert header == cli.bench_columns(("dpsynth", "baseline"))
    for r in rows:
        for e in ("dpsynth", "baseline"):
            assert r[f"{e}_verdict"] in ("fully", "partially", "nullary")
            assert int(r[f"{e}_width"]) >= 0 and int(r[f"{e}_peak_nodes"]) >= 2
            assert float(r[f"{e}_total_ms"]) >= 0
        assert r["dpsynth_verdict"] == r["baseline_verdict"]


def test_bench_empty_dir(tmp_path, capsys):
    d = tmp_path / "empty"
    d.mkdir()
    assert cli.main(["bench", str(d)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == [",".join(cli.bench_columns(("dpsynth", "baseline")))]


def test_bench_marks_timeouts_and_parse_errors(tmp_path, monkeypatch):
    write(tmp_path, "a.qdimacs", RUNNING_EXAMPLE)
    write(tmp_path, "b.qdimacs", "not a header\n")
    real = cli.solve

    def maybe_slow(p, engine="dpsynth", **kw):
        if engine == "baseline":
            time.sleep(2)
        return real(p, engine=engine, **kw)

    monkeypatch.setattr(cli, "solve", maybe_slow)
    rows = cli.run_bench(str(tmp_path), timeout=0.1)
    by_name = {r["instance"]: r for r in rows}
    assert by_name["a.qdimacs"]["dpsynth_verdict"] == "fully"
    assert by_name["a.qdimacs"]["baseline_verdict"] == "timeout"
    assert "baseline_width" not in by_name["a.qdimacs"]
    assert by_name["b.qdimacs"]["dpsynth_verdict"] == "parse-error"


def test_module_entry_point(example_file):
    r = subprocess.run([sys.executable, "-m", "dpsynth", "solve", str(example_file)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "verdict: fully" in r.stdout
    exe = shutil.which("dpsynth")
    if exe:
        r = subprocess.run([exe, "plan", str(example_file)], capture_output=True, text=True)
        assert r.returncode == 0
