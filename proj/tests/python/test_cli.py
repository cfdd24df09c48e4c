import csv
import io
import json
import random
import subprocess


def run(cli, *args):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)


def test_encode_retrieve_roundtrip(cli, tmp_path):
    data = random.Random(3).randbytes(20000)
    src = tmp_path / "in.bin"
    src.write_bytes(data)
    shards = tmp_path / "shards"
    assert run(cli, "encode", "--input", src, "--out-dir", shards, "--m", 8, "--khat", 60).returncode == 0
    manifest = json.loads((shards / "manifest.json").read_text())
    assert manifest["n"] == 255 and manifest["payload_byte_len"] == 20000
    assert len(list(shards.glob("shard_*.prs1"))) == 255

    out = tmp_path / "out.bin"
    r = run(cli, "retrieve", "--shard-dir", shards, "--out", out, "--seed", 9,
            "--corrupt-list", "1,2,3,4,5,6,7,8", "--crash-list", "10,11,12")
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    assert report["outcome"] == "success"
    assert report["file_crc_ok"] is True
    assert out.read_bytes() == data
    fetched = [p for t in report["trace"] for p in t["fetched"]]
    assert len(fetched) == report["nodes_accessed"]
    assert not {10, 11, 12} & set(fetched)


def test_retrieve_failure_and_errors(cli, tmp_path):
    src = tmp_path / "in.bin"
    src.write_bytes(b"x" * 100)
    shards = tmp_path / "s"
    assert run(cli, "encode", "--input", src, "--out-dir", shards, "--m", 6, "--khat", 20).returncode == 0
    out = tmp_path / "o.bin"
    bad = ",".join(str(i) for i in range(0, 63, 2))
    r = run(cli, "retrieve", "--shard-dir", shards, "--out", out, "--seed", 1, "--corrupt-list", bad)
    assert r.returncode == 1
    assert json.loads(r.stdout)["outcome"] == "fail"
    assert not out.exists()

    crash = ",".join(str(i) for i in range(50))
    r = run(cli, "retrieve", "--shard-dir", shards, "--out", out, "--seed", 1, "--crash-list", crash)
    assert r.returncode == 2

    (shards / "shard_3.prs1").write_bytes(b"garbage")
    r = run(cli, "retrieve", "--shard-dir", shards, "--out", out, "--seed", 1)
    assert r.returncode == 2
    assert run(cli, "retrieve", "--shard-dir", tmp_path / "missing", "--out", out, "--seed", 1).returncode == 2
    assert run(cli, "encode", "--input", src, "--out-dir", shards, "--m", 4, "--khat", 20).returncode == 2


def test_analyze(cli, tmp_path):
    out = tmp_path / "a.json"
    assert run(cli, "analyze", "--n", 1023, "--khat", 401, "--p", 0.01, "--out", out).returncode == 0
    r = json.loads(out.read_text())
    assert abs(r["avg_accesses"] - 409.2) <= 0.3
    assert r["decode_stages"] == 5


def test_simulate_and_bench(cli, tmp_path):
    out, hist = tmp_path / "s.json", tmp_path / "h.csv"
    r = run(cli, "simulate", "--n", 63, "--khat", 15, "--p", 0.1, "--trials", 300, "--seed", 4,
            "--out", out, "--csv", hist)
    assert r.returncode == 0, r.stderr
    summary = json.loads(out.read_text())
    assert summary["trials"] == 300 and summary["silent_corruptions"] == 0
    rows = list(csv.DictReader(io.StringIO(hist.read_text())))
    assert sum(int(row["frequency"]) for row in rows) == 300
    assert run(cli, "simulate", "--n", 64, "--khat", 15, "--p", 0.1).returncode == 2

    r = run(cli, "bench", "--algorithms", "ird,genie", "--m", 8, "--khat", 100, "--p", 0.02,
            "--trials", 3, "--seed", 1)
    assert r.returncode == 0, r.stderr
    rows = list(csv.DictReader(io.StringIO(r.stdout)))
    assert [row["algorithm"] for row in rows] == ["ird", "genie"]
    assert run(cli, "bench", "--algorithms", "bm", "--m", 8, "--khat", 100, "--p", 0.02).returncode == 2
