import json
import re
from pathlib import Path

import pytest

from surfacekz.cli import RunConfig, main


def _strip_timestamp(text):
    return re.sub(r'"timestamp": "[^"]*"', '"timestamp": "T"', text)


def test_run_algebra_suite(tmp_path):
    out = tmp_path / "reports"
    code = main(["run", "--suite", "algebra", "--g", "1", "--n", "2",
                 "--out", str(out), "--no-figures"])
    assert code == 0
    report = out / "report_algebra.jsonl"
    lines = report.read_text().strip().splitlines()
    objs = [json.loads(l) for l in lines]
    assert objs[-1]["summary"] and objs[-1]["ok"]
    assert all(o.get("ok") for o in objs[:-1])


def test_reproducible_reports(tmp_path):
    args = ["run", "--suite", "algebra", "--g", "1", "--n", "2",
            "--seed", "7", "--no-figures"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    t1 = _strip_timestamp((out1 / "report_algebra.jsonl").read_text())
    t2 = _strip_timestamp((out2 / "report_algebra.jsonl").read_text())
    assert t1 == t2


def test_dims_command(tmp_path):
    out = tmp_path / "d"
    assert main(["dims", "--g", "1", "--n", "1", "--out", str(out),
                 "--no-figures"]) == 0
    rows = (out / "dims.csv").read_text().strip().splitlines()
    assert rows[0] == "g,n,p,q,dim"
    table = {(int(p), int(q)): int(d) for _, _, p, q, d in
             (r.split(",") for r in rows[1:])}
    assert table[(1, 0)] == 1 and table[(0, 1)] == 1 and table[(1, 1)] == 0
    payload = json.loads((out / "dims.json").read_text())
    assert payload["module_dims"]["M"] == [1, 0, 0, 0]


def test_dims_figure(tmp_path):
    out = tmp_path / "fig"
    assert main(["dims", "--g", "1", "--n", "2", "--out", str(out)]) == 0
    assert (out / "dims_heatmap.png").stat().st_size > 0


def test_invalid_bounds_usage_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["run", "--suite", "algebra", "--pmax", "0", "--out", str(tmp_path)])
    assert err.value.code == 2


def test_invalid_suite_rejected():
    with pytest.raises(SystemExit):
        main(["run", "--suite", "nonsense"])


def test_config_file_and_overrides(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"g": 1, "n": 2, "seed": 3, "suite": "algebra"}))
    cfg = RunConfig.load(str(cfgfile), {"n": 3, "out": str(tmp_path)})
    assert cfg.g == 1 and cfg.n == 3 and cfg.seed == 3
    assert cfg.word_cutoff == 8


def test_env_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("SURFACE_KZ_THREADS", "1")
    out = tmp_path / "r"
    assert main(["run", "--suite", "algebra", "--g", "1", "--n", "2",
                 "--out", str(out), "--no-figures"]) == 0
