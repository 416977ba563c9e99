import hashlib
import json

import numpy as np
import pytest

from pareto_lens import ApproximationSet, maximise_specs, write_set
from pareto_lens import momkp
from pareto_lens.cli import main
from pareto_lens.core import read_set

from conftest import EXAMPLE19


def _digest(root):
    return {
        str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(root.rglob("*")) if p.is_file()
    }


@pytest.fixture
def example_csv(tmp_path):
    path = tmp_path / "example19.csv"
    write_set(ApproximationSet.from_values(EXAMPLE19, maximise_specs(3)), path)
    return path


def test_generate(tmp_path):
    out = tmp_path / "inst"
    assert main(["generate", "--kind", "C", "--n", "100", "--count", "5", "--seed", "7", "--out-dir", str(out)]) == 0
    files = sorted(out.iterdir())
    assert len(files) == 5
    insts = [momkp.read_instance(f) for f in files]
    assert len({i.seed for i in insts}) == 5
    for inst in insts:
        inst.check()
        assert inst.kind.value == "C" and inst.n == 100


def test_generate_defaults(tmp_path):
    assert main(["generate", "--kind", "X", "--count", "1", "--out-dir", str(tmp_path)]) == 0
    inst = momkp.read_instance(next(tmp_path.iterdir()))
    assert (inst.n, inst.m, inst.p) == (1000, 4, 4)
    assert inst.capacities.tolist() == [50000] * 4


def test_generate_bad_kind_writes_nothing(tmp_path, capsys):
    assert main(["generate", "--kind", "Z", "--out-dir", str(tmp_path / "o")]) == 2
    assert not (tmp_path / "o").exists()
    assert main(["generate", "--kind", "B", "--p", "3", "--out-dir", str(tmp_path / "o")]) == 2
    assert not (tmp_path / "o").exists()


def test_solve_and_stage(tmp_path, capsys):
    main(["generate", "--kind", "A", "--n", "30", "--count", "1", "--out-dir", str(tmp_path)])
    inst = next(tmp_path.glob("*.momkp"))
    out = tmp_path / "set.csv"
    args = ["solve", "--instance", str(inst), "--seed", "3", "--budget", "200", "--population", "10", "--quiet"]
    assert main(args + ["--out", str(out)]) == 0
    first = out.read_bytes()
    assert main(args + ["--out", str(out)]) == 0
    assert out.read_bytes() == first
    aset = read_set(out)
    assert aset.m == 4 and len(aset) >= 1
    assert "# master_seed: 3" in out.read_text()
    masked = tmp_path / "masked.csv"
    assert main(args + ["--mask", "1,3", "--out", str(masked)]) == 0
    assert "# mask: 1,3" in masked.read_text()
    assert main(args + ["--stage", "list"]) == 0
    assert "seeded-moead:2" in capsys.readouterr().out
    assert main(args + ["--stage", "nsga2:0-1", "--out", str(tmp_path / "st.csv")]) == 0
    assert main(args + ["--stage", "nope"]) == 2
    assert main(args + ["--mask", "1"]) == 2
    assert main(args + ["--mask", "1,9"]) == 2
    assert main(args[:-1] + ["--population", "7"]) == 2


def test_report_on_example19(tmp_path, example_csv):
    out = tmp_path / "rep"
    assert main(["report", str(example_csv), "--out-dir", str(out)]) == 0
    corr = json.loads((out / "example19" / "corr.json").read_text())
    assert [round(p["tau"], 6) for p in corr["pairs"]] == [round(-70 / 171, 6), round(-39 / 171, 6), round(-44 / 171, 6)]
    meta = json.loads((out / "example19" / "meta.json").read_text())
    assert meta["threshold"]["level"] == 0.47
    assert meta["version"] and meta["threshold_semantics"]
    assert any("automatically" in n for n in meta["notes"])
    scatter = (out / "example19" / "scatter.csv").read_text().splitlines()
    assert len(scatter) == 1 + 2 * 19
    for name in ("corr.json", "ranges.json", "regionmap.json", "regionmap.svg", "sweep.csv", "scatter.svg"):
        assert (out / "example19" / name).exists()
    html = (out / "index.html").read_text()
    assert 'href="example19/regionmap.svg"' in html
    first = _digest(out)
    assert main(["report", str(example_csv), "--out-dir", str(out)]) == 0
    assert _digest(out) == first


def test_report_many_inputs(tmp_path):
    paths = []
    rng = np.random.default_rng(0)
    for k in range(5):
        rows = rng.integers(0, 100, (15, 4))
        p = tmp_path / f"s{k}.csv"
        write_set(ApproximationSet.from_values(rows.tolist(), maximise_specs(4)), p)
        paths.append(str(p))
    out = tmp_path / "rep"
    assert main(["report", *paths, "--out-dir", str(out), "--pivot", "2", "--threshold-policy", "mean"]) == 0
    freq = json.loads((out / "frequency.json").read_text())
    assert freq["instance_total"] == 5
    assert (out / "frequency.svg").exists()
    meta = json.loads((out / "s0" / "meta.json").read_text())
    assert meta["pivot"] == "Z2" and meta["threshold"]["policy"] == "mean"


def test_report_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("# objectives: a:max,b:max\n1,2\n3\n")
    assert main(["report", str(bad), "--out-dir", str(tmp_path / "r")]) == 1
    assert "line 3" in capsys.readouterr().err


def test_report_wide_set_falls_back_to_table(tmp_path):
    p = tmp_path / "six.csv"
    write_set(ApproximationSet.from_values([(1, 2, 3, 4, 5, 6), (6, 5, 4, 3, 2, 1), (3, 3, 3, 3, 3, 3)], maximise_specs(6)), p)
    assert main(["report", str(p), "--out-dir", str(tmp_path / "r")]) == 0
    payload = json.loads((tmp_path / "r" / "six" / "regionmap.json").read_text())
    assert len(payload["table"]) == 64
    assert not (tmp_path / "r" / "six" / "regionmap.svg").exists()


def test_analyze_steps(tmp_path, example_csv, capsys):
    o = str(tmp_path / "a")
    assert main(["analyze", "corr", str(example_csv), "--out-dir", o, "--tau-variant", "b"]) == 0
    assert "independent" in capsys.readouterr().out
    assert main(["analyze", "ranges", str(example_csv), "--out-dir", o]) == 0
    rng = json.loads((tmp_path / "a" / "example19" / "ranges.json").read_text())
    assert rng["objectives"][0]["range"] == 94
    assert main(["analyze", "regionmap", str(example_csv), "--out-dir", o, "--threshold", "50"]) == 0
    rm = json.loads((tmp_path / "a" / "example19" / "regionmap.json").read_text())
    assert rm["counts"][0] == 0 and rm["counts"][4] == 4
    assert main(["analyze", "sweep", str(example_csv), "--out-dir", o, "--alpha", "50"]) == 0
    assert "0.48" in capsys.readouterr().out
    svg = tmp_path / "plot.svg"
    assert main(["analyze", "scatter", str(example_csv), "--pivot", "Z1", "--out", str(svg)]) == 0
    assert svg.exists() and svg.with_suffix(".csv").exists()
    assert main(["analyze", "scatter", str(example_csv), "--pivot", "9", "--out-dir", o]) == 2
    assert main(["analyze", "regionmap", str(example_csv), "--threshold-policy", "fixed:2"]) == 2
    assert main(["analyze", "regionmap", str(example_csv), "--out-dir", o, "--threshold", "1,2"]) == 2
    assert main(["analyze", "ranges", str(tmp_path / "missing.csv")]) == 1


def test_config_file(tmp_path, example_csv):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 10}))
    o = tmp_path / "o"
    assert main(["--config", str(cfg), "analyze", "sweep", str(example_csv), "--out-dir", str(o)]) == 0
    assert len((o / "sweep.csv").read_text().splitlines()) == 2 + 9
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["--config", str(cfg), "analyze", "sweep", str(example_csv)]) == 2
