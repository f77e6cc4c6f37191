from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from isoconv.cli import main
from isoconv.example import MASK
from isoconv.formats import CodeSpec, format_mask, parse_stream
from isoconv.sysrep import quality_report


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["gen-example", "--out", str(d / "code.json")]) == 0
    return d


def run(*args) -> int:
    return main([str(a) for a in args])


def test_gen_example(workdir):
    text = (workdir / "code.json").read_text()
    spec = CodeSpec.loads(text)
    assert (spec.n, spec.k, spec.delta) == (5, 3, 2)
    assert spec.dumps() == text
    rep = quality_report(spec.get_system(), 1, 3, 1, budget=100)
    assert rep["property1"]["1"] and rep["property2"]["1"]


def test_encode_erase_decode_round_trip(workdir):
    d = workdir
    assert run("encode", d / "code.json", "--seed", 3, "--message-out", d / "msg.txt", "--out", d / "frame.txt") == 0
    # encoding the saved message reproduces the frame
    assert run("encode", d / "code.json", d / "msg.txt", "--out", d / "frame2.txt") == 0
    assert (d / "frame.txt").read_text() == (d / "frame2.txt").read_text()
    assert run("erase", d / "frame.txt", "--p-erase", 0.2, "--seed", 5, "--mask-out", d / "mask.txt",
               "--out", d / "rx.txt") == 0
    _, rx = parse_stream((d / "rx.txt").read_text())
    assert rx.erasures == (d / "mask.txt").read_text().count("*")
    code = run("decode", d / "code.json", d / "rx.txt", "--report", d / "report.json", "--out", d / "dec.txt")
    report = json.loads((d / "report.json").read_text())
    assert code == (1 if report["lost"] else 0)
    if not report["lost"]:
        assert (d / "dec.txt").read_text() == (d / "frame.txt").read_text()


def test_decode_clean_stream(workdir):
    d = workdir
    run("encode", d / "code.json", "--seed", 4, "--out", d / "clean.txt")
    assert run("decode", d / "code.json", d / "clean.txt", "--report", d / "clean.json", "--out", d / "out.txt") == 0
    assert (d / "out.txt").read_text() == (d / "clean.txt").read_text()
    report = json.loads((d / "clean.json").read_text())
    assert all(s["status"] == "clean" for row in report["symbols"] for s in row)


def test_decode_example_pattern(workdir):
    d = workdir
    (d / "example.mask").write_text(format_mask(MASK))
    run("encode", d / "code.json", "--seed", 9, "--out", d / "f.txt")
    assert run("erase", d / "f.txt", "--pattern", d / "example.mask", "--out", d / "p.txt") == 0
    assert run("decode", d / "code.json", d / "p.txt", "--report", d / "low.json", "--out", d / "low.txt") == 0
    low = json.loads((d / "low.json").read_text())
    assert [s["delay"] for s in low["symbols"][4]] == [-1] * 5
    assert low["symbols"][0][0]["delay"] == 0
    run("decode", d / "code.json", d / "p.txt", "--baseline", "--report", d / "base.json", "--out", d / "b.txt")
    base = json.loads((d / "base.json").read_text())
    assert [base["symbols"][0][c]["delay"] for c in (0, 1)] == [1, 1]


def test_verify_example(workdir, capsys):
    assert run("verify-example", "--out", workdir / "verify.json") == 0
    out = capsys.readouterr().out
    assert out.strip().splitlines()[-1] == "PASS"
    assert "FAIL" not in out
    data = json.loads((workdir / "verify.json").read_text())
    assert data["ok"] and data["report"]["termination_time"] == 3


def test_simulate_is_byte_reproducible(workdir):
    d = workdir
    args = ["simulate", d / "code.json", "--trials", 20, "--p-erase", 0.1, "--seed", 8, "--per-trial"]
    assert run(*args, "--out", d / "s1.json") == 0
    assert run(*args, "--out", d / "s2.json") == 0
    assert (d / "s1.json").read_bytes() == (d / "s2.json").read_bytes()
    stats = json.loads((d / "s1.json").read_text())
    assert stats["trials"] == 20 and len(stats["per_trial"]) == 20
    assert run("simulate", "--trials", 5, "--burst", 0.1, 0.5, "--out", d / "s3.json") == 0


def test_inspect(workdir, capsys):
    assert run("inspect", workdir / "code.json") == 0
    d = json.loads(capsys.readouterr().out)
    assert d["profile"]["delta"] == 2 and d["profile"]["mdp"] is True
    assert d["quality"]["ell"] == -1


def test_error_exit_codes(workdir, capsys):
    d = workdir
    assert run("decode", d / "code.json", d / "missing.txt") == 2
    (d / "bad.txt").write_text("isoconv-stream n=5 k=3 gamma=0 p=2 m=331 modulus=1\n* * *\n")
    assert run("decode", d / "code.json", d / "bad.txt") == 2
    err = capsys.readouterr().err
    assert "parse error" in err
    # a stream of the wrong length for the code
    frame = (d / "clean.txt").read_text().splitlines()
    (d / "short.txt").write_text("\n".join(frame[:-1]) + "\n")
    assert run("decode", d / "code.json", d / "short.txt") == 2
    # a corrupted but unerased symbol next to an erasure
    lines = (d / "clean.txt").read_text().splitlines()
    toks = lines[1].split()
    toks[0] = "*"
    toks[1] = "0" * (len(toks[1]) - 1) + ("1" if toks[1][-1] != "1" else "2")
    lines[1] = " ".join(toks)
    (d / "corrupt.txt").write_text("\n".join(lines) + "\n")
    assert run("decode", d / "code.json", d / "corrupt.txt") == 2
    assert "inconsistent" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        run("erase", d / "clean.txt", "--p-erase", 0.1, "--burst", 0.1, 0.1)


def test_lost_symbols_exit_one(workdir):
    d = workdir
    lines = (d / "clean.txt").read_text().splitlines()
    lines[1:] = [" ".join(["*"] * 5) for _ in lines[1:]]
    (d / "all.txt").write_text("\n".join(lines) + "\n")
    assert run("decode", d / "code.json", d / "all.txt") == 1


def test_module_entry_point(workdir):
    exe = shutil.which("isoconv")
    cmd = [exe] if exe else [sys.executable, "-m", "isoconv.cli"]
    res = subprocess.run(cmd + ["gen-example"], capture_output=True, text=True, check=True)
    assert res.stdout == (workdir / "code.json").read_text()
