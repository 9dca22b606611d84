import json
import subprocess
import sys

from heisquat.cli import main

RUN = [sys.executable, "-m", "heisquat.cli"]


def run_cli(args, **kw):
    return subprocess.run(RUN + args, capture_output=True, text=True, **kw)


def test_count_basic(tmp_path):
    out = tmp_path / "count.json"
    rc = main(["count", "--order", "hurwitz", "--s-grid", "1,2,4",
               "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["rows"][0] == {"s": "1", "count": 24}
    assert data["rows"][1]["count"] == 96
    assert data["reference_symbolic"] == "54*pi^-8"


def test_count_smax_below_one(tmp_path):
    out = tmp_path / "c.json"
    rc = main(["count", "--order", "hurwitz", "--s-max", "1/2", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["rows"] == [{"s": "1/2", "count": 0}]


def test_count_missing_order_file_exit2():
    proc = run_cli(["count", "--order", "/nonexistent/order.json", "--s-max", "1"])
    assert proc.returncode == 2
    assert "invalid order" in proc.stderr


def test_count_flag_conflicts():
    proc = run_cli(["count", "--order", "hurwitz"])
    assert proc.returncode == 2
    proc = run_cli(["count", "--order", "hurwitz", "--s-grid", "4,2,1"])
    assert proc.returncode == 2


def test_count_byte_identical_and_thread_independent(tmp_path):
    outs = []
    for idx, threads in enumerate(("1", "2", "1")):
        out = tmp_path / f"c{idx}.json"
        rc = main(["count", "--order", "hurwitz", "--s-grid", "1,2,3",
                   "--threads", threads, "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_count_csv_roundtrip(tmp_path):
    js = tmp_path / "c.json"
    cs = tmp_path / "c.csv"
    main(["count", "--order", "hurwitz", "--s-grid", "1,2", "--out", str(js)])
    main(["count", "--order", "hurwitz", "--s-grid", "1,2", "--format", "csv",
          "--out", str(cs)])
    data = json.loads(js.read_text())
    lines = [l.split(",") for l in cs.read_text().strip().splitlines()]
    assert lines[0][:2] == ["s", "count"]
    got = {row[0]: int(row[1]) for row in lines[1:]}
    assert got == {r["s"]: r["count"] for r in data["rows"]}


def test_count_checkpoint_resume(tmp_path):
    cache = tmp_path / "cache"
    args = ["count", "--order", "hurwitz", "--s-grid", "1,2", "--cache",
            str(cache)]
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(args + ["--out", str(out1)]) == 0
    ckpts = list(cache.glob("*.jsonl"))
    assert len(ckpts) == 1 and ckpts[0].read_text().strip()
    assert main(args + ["--out", str(out2)]) == 0  # resumes from checkpoint
    assert out1.read_bytes() == out2.read_bytes()


def test_cache_env_var(tmp_path, monkeypatch):
    cache = tmp_path / "envcache"
    monkeypatch.setenv("HEIS_MERTENS_CACHE", str(cache))
    out = tmp_path / "c.json"
    assert main(["count", "--order", "hurwitz", "--s-grid", "1", "--out",
                 str(out)]) == 0
    assert list(cache.glob("*.jsonl"))


def test_equidist(tmp_path):
    out = tmp_path / "eq.json"
    rc = main(["equidist", "--order", "hurwitz", "--s", "4", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["cells"] == 128
    assert sum(data["observed"]) == data["total"] == 3264


def test_constants_table(tmp_path):
    out = tmp_path / "k.json"
    rc = main(["constants", "--da", "2", "--units", "24", "--no-quadrature",
               "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert "1/23040" in text
    assert json.loads(text)["assembly_identity_holds"] is True


def test_constants_bad_da():
    proc = run_cli(["constants", "--da", "4", "--units", "24"])
    assert proc.returncode == 2


def test_geom_selftest(tmp_path):
    out = tmp_path / "g.json"
    rc = main(["geom-selftest", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["pass"] is True


def test_oracle(tmp_path):
    out = tmp_path / "o.json"
    rc = main(["oracle", "--order", "hurwitz", "--s", "2", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["all_match"] is True
    assert data["rows"][0]["psi"] == 24


def test_order_spec_via_file(tmp_path):
    from heisquat.orders import builtin_order
    hur = builtin_order("hurwitz")
    spec = {"name": "filehurwitz", "a": -1, "b": -1,
            "basis": [[[x.numerator, x.denominator] for x in row]
                      for row in hur.basis]}
    path = tmp_path / "hur.json"
    path.write_text(json.dumps(spec))
    out = tmp_path / "c.json"
    rc = main(["count", "--order", str(path), "--s-grid", "1", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["rows"][0]["count"] == 24
