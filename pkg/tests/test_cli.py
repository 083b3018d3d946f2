import io
import json

import numpy as np
import pytest

from pcmflow import bench
from pcmflow.cli import analyze_report, gen_files, main, solve_report
from pcmflow.pcm import format_matrix_csv, is_consistent, read_matrix_csv, validate_pcm

from oracles import SEGMENT_4X4

SEGMENT_CSV = """# the four-variant example
1,3,2/7,11/10
1/3,1,1/7,9/10
7/2,7,1,5
10/11,10/9,1/5,1
"""


@pytest.fixture
def segment_file(tmp_path):
    p = tmp_path / "segment.csv"
    p.write_text(SEGMENT_CSV)
    return p


@pytest.fixture
def consistent_file(tmp_path):
    p = tmp_path / "cons.csv"
    p.write_text("1,2,4\n1/2,1,2\n1/4,1/2,1\n")
    return p


def run(argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


def test_segment_file_parses(segment_file):
    np.testing.assert_allclose(read_matrix_csv(segment_file).entries, SEGMENT_4X4, rtol=1e-15)


def test_solve_json(segment_file):
    code, out = run(["solve", segment_file, "--output", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["n"] == 4
    assert rep["z_opt"] == pytest.approx(0.5, abs=1e-6)
    assert rep["levels"][1] == pytest.approx(0.4756, abs=1e-4)
    assert rep["unique"] is False
    assert rep["dimension"] == 1
    assert rep["weights"][3] == pytest.approx(0.63468, abs=1e-5)
    assert rep["refine_iterations"] == 2
    assert len(rep["deviations"]) == 12
    assert all(min(c) >= 1 for c in rep["cycles"])


def test_solve_text(segment_file):
    code, out = run(["solve", segment_file, "--method", "bisection"])
    assert code == 0
    assert "z_opt = 0.5" in out
    assert "unique = false" in out
    assert "v4 = 0.6346" in out


def test_solve_no_refine(segment_file):
    code, out = run(["solve", segment_file, "--no-refine", "--output", "json"])
    rep = json.loads(out)
    assert code == 0
    assert rep["dimension"] is None
    assert rep["levels"] == [rep["z_opt"]]


def test_solve_consistent(consistent_file):
    code, out = run(["solve", consistent_file, "--output", "json", "--normalize", "sum"])
    rep = json.loads(out)
    assert rep["z_opt"] == 0
    assert rep["unique"] is True
    np.testing.assert_allclose(rep["weights"], np.array([4, 2, 1]) / 7, rtol=1e-12)


def test_solve_report_matches_cli(segment_file):
    rep = solve_report(read_matrix_csv(segment_file), 1e-6, "cycle-cancel", True)
    code, out = run(["solve", segment_file, "--output", "json"])
    assert json.loads(out)["weights"] == pytest.approx(rep["weights"])


@pytest.mark.parametrize(
    "text",
    ["1,2\n1/2\n", "1,2,3\n1/2,1,1\n1/3,2,1\n", "1,x\n1,1\n", "1,-2\n-1/2,1\n", ""],
)
def test_malformed_input(tmp_path, text, capsys):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    code, out = run(["solve", p])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert run(["solve", tmp_path / "nope.csv"])[0] == 1


def test_bad_arguments(segment_file):
    assert run(["solve", segment_file, "--epsilon", "0"])[0] == 2
    assert run(["gen", "--n", "0", "--a-max", "5"])[0] == 2
    assert run(["bench", "--trials", "0"])[0] == 2
    with pytest.raises(SystemExit):
        run(["solve", segment_file, "--method", "simplex"])


def test_analyze(segment_file):
    code, out = run(["analyze", segment_file, "--output", "json"])
    rep = json.loads(out)
    assert code == 0
    assert not rep["consistent"]
    assert set(rep["methods"]) == {"geometric_mean", "eigenvector", "lwae"}
    ginf = {k: m["ginf"] for k, m in rep["methods"].items()}
    assert ginf["lwae"] == pytest.approx(0.5, abs=1e-6)
    assert ginf["lwae"] <= min(ginf.values()) + 1e-9
    code, out = run(["analyze", segment_file])
    assert "lambda_max" in out


def test_analyze_a3(a3):
    rep = analyze_report(a3)
    assert rep["lambda_max"] == pytest.approx(3.0182947072896, abs=1e-10)


def test_gen_deterministic(tmp_path):
    a = gen_files(5, 9, 42, 3, tmp_path / "a")
    b = gen_files(5, 9, 42, 3, tmp_path / "b")
    assert [p.name for p in a] == ["pcm_n5_a9_s42_0.csv", "pcm_n5_a9_s42_1.csv", "pcm_n5_a9_s42_2.csv"]
    for p, q in zip(a, b):
        assert p.read_bytes() == q.read_bytes()
        validate_pcm(read_matrix_csv(p))
    c = gen_files(5, 9, 43, 1, tmp_path / "c")
    assert c[0].read_bytes() != a[0].read_bytes()


def test_gen_cli_roundtrip(tmp_path):
    code, out = run(["gen", "--n", "4", "--a-max", "5", "--seed", "1", "--count", "2", "--out-dir", tmp_path])
    assert code == 0
    paths = out.split()
    assert len(paths) == 2
    A = read_matrix_csv(paths[0])
    assert format_matrix_csv(A).splitlines()[-4:] == open(paths[0]).read().splitlines()[-4:]


def test_gen_n2_consistent(tmp_path):
    for p in gen_files(2, 9, 0, 5, tmp_path):
        A = read_matrix_csv(p)
        assert is_consistent(A)
        code, out = run(["solve", p, "--output", "json"])
        assert json.loads(out)["z_opt"] == 0


def test_bench_json_and_records(tmp_path):
    rec_path = tmp_path / "rec.json"
    code, out = run(["bench", "--n", "4", "5", "--a-max", "3", "9", "--trials", "4", "--output", "json", "--records", rec_path])
    assert code == 0
    summaries = bench.summaries_from_json(out)
    assert [(s.n, s.a_max) for s in summaries] == [(4, 3), (4, 9), (5, 3), (5, 9)]
    records = json.loads(rec_path.read_text())
    assert len(records) == 16
    for s in summaries:
        cell = [r for r in records if r["n"] == s.n and r["a_max"] == s.a_max]
        lw = np.array([r["lw"] for r in cell], dtype=float)
        assert s.lw.avg == pytest.approx(lw.mean())
        assert s.lw.dev == pytest.approx(lw.std(ddof=1))
        assert s.lw.min == lw.min() and s.lw.max == lw.max()
        assert s.time_cancel.max == max(r["time_cancel"] for r in cell)


def test_bench_text_roundtrip():
    summaries, _ = bench.run_bench([4], [5], trials=3, seed=9)
    text = bench.format_table(summaries)
    back = bench.parse_table(text)
    assert back == summaries
    assert bench.summaries_from_json(bench.summaries_to_json(summaries)) == summaries


def test_bench_cells_reproducible():
    _, r1 = bench.run_bench([5], [3, 9], trials=3, seed=2)
    _, r2 = bench.run_bench([5], [9], trials=3, seed=2)
    assert [r["z_opt"] for r in r1 if r["a_max"] == 9] == [r["z_opt"] for r in r2]


def test_stats_single_value():
    s = bench.Stats.of([2.0])
    assert (s.avg, s.dev, s.min, s.max) == (2.0, 0.0, 2.0, 2.0)


def test_module_entry_point(segment_file):
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "pcmflow", "solve", str(segment_file), "--output", "json"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["n"] == 4
