import json
import os
import subprocess
import sys

import pytest

from frobclt.cubic import enumerate_fields
from frobclt.cli import ExperimentConfig, config_from_args, main, read_config_file, run_experiment


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_densities_line_counts(capsys):
    code, out, _ = run(["densities", "s5", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 17
    code, out, _ = run(["densities", "s4", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 11
    assert out.splitlines()[0] == "1 1 1 1,1,51"
    code, out, _ = run(["densities", "s3", "5"], capsys)
    assert out.splitlines() == ["1 1 1,25,186", "1 2,25,62", "3,25,93", "1^2 1,5,31", "1^3,1,31"]


def test_hecke(capsys):
    code, out, _ = run(["hecke", "--expand", "4"], capsys)
    assert out.splitlines() == ["0,2", "1,0", "2,3", "3,0", "4,1"]
    code, out, _ = run(["hecke", "--dim", "11", "2"], capsys)
    assert out == "11,2,1\n"


def test_errors_are_machine_readable(capsys):
    code, out, err = run(["densities", "s7", "2"], capsys)
    assert code == 1 and out == ""
    record = json.loads(err.strip().splitlines()[-1])
    assert record["command"] == "densities" and record["error"] == "ValueError"
    with pytest.raises(SystemExit) as exc:
        main(["nosuch"])
    assert exc.value.code == 2


def test_clt_on_empty_family(tmp_path, capsys):
    table = tmp_path / "empty.txt"
    table.write_text("# nothing here\n")
    code, out, err = run(["clt", "--group", "s3", "--input", str(table)], capsys)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "UsageError"


def test_enumerate_then_ingest(tmp_path, capsys):
    out_path = tmp_path / "cubics.txt"
    code, _, _ = run(["enumerate", "--group", "s3", "--bound", "500", "--signature", "c", "--out", str(out_path)], capsys)
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("# config ")
    assert lines[1] == "3,-1,0,1,1,-23,1"
    assert all(int(line.split(",")[-2]) < 0 for line in lines[1:])
    code, out, _ = run(["ingest", "--input", str(out_path)], capsys)
    assert code == 0 and out.splitlines() == lines[1:]


def test_frobscan_cache(tmp_path, capsys):
    table = tmp_path / "t.txt"
    table.write_text("3,-1,-1,0,1,-23,1\n3,-12,0,0,1,-972,1\n")
    code, text, _ = run(["frobscan", "--input", str(table), "--x", "50"], capsys)
    assert code == 0 and text.startswith("field_id,p,symbol,a\n")
    cache = tmp_path / "t.bin"
    code, out, _ = run(["frobscan", "--input", str(table), "--x", "50", "--cache", str(cache)], capsys)
    assert code == 0 and out == ""
    code, out, _ = run(["cache", "export", str(cache)], capsys)
    assert out == text
    code, out, _ = run(["cache", "verify", str(cache)], capsys)
    assert out == "S3,50,2,30\n"
    cache.write_bytes(cache.read_bytes()[:-4])
    code, _, err = run(["cache", "verify", str(cache)], capsys)
    assert code == 1 and json.loads(err)["error"] == "ChecksumError"


def test_clt_and_satotate_modes(capsys):
    code, out, _ = run(["clt", "--mode", "empirical", "--X", "5000", "--x", "50", "--R", "4"], capsys)
    rows = [line.split(",") for line in out.splitlines()]
    assert code == 0 and [r[0] for r in rows] == ["1", "2", "3", "4"] and all(len(r) == 5 for r in rows)
    code, out, _ = run(["clt", "--group", "s4", "--mode", "montecarlo", "--x", "50", "--samples", "200", "--R", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 2
    code, out, _ = run(["satotate", "--mode", "measure", "--p", "inf", "--R", "6"], capsys)
    assert [line.split(",")[1] for line in out.splitlines()] == ["1", "1", "2", "5"]
    code, out, _ = run(["satotate", "--mode", "horizontal", "--x", "10", "--R", "2"], capsys)
    assert out.splitlines()[1].split(",")[:3] == ["3:-23:-1/-1/0/1:r=2", "0.5", "1"]
    code, out, _ = run(["satotate", "--mode", "vertical", "--group", "s5", "--p", "11", "--samples", "500", "--R", "2"], capsys)
    assert code == 0 and out.startswith("p=11:r=1,")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# montecarlo run\ngroup = s5\nmode = montecarlo\nx = 30\nsamples = 100\nR = 3\nseed = 9\n")
    assert read_config_file(cfg)["samples"] == 100
    config = config_from_args(["clt", "--config", str(cfg), "--R", "2"])
    assert (config.group, config.R, config.seed) == ("s5", 2, 9)
    report = tmp_path / "report.json"
    code, out, _ = run(["clt", "--config", str(cfg), "--report", str(report)], capsys)
    assert code == 0 and len(out.splitlines()) == 3
    rep = json.loads(report.read_text())
    assert rep["config"]["samples"] == 100 and rep["seconds"] >= 0
    assert str(cfg) in rep["inputs"]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    code, _, err = run(["clt", "--config", str(bad)], capsys)
    assert code == 2 and "unknown key" in err


def test_reruns_are_byte_identical(capsys):
    argv = ["clt", "--group", "s5", "--mode", "montecarlo", "--x", "100", "--samples", "300", "--R", "6", "--seed", "4"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_thread_cap_does_not_change_output(tmp_path):
    argv = [sys.executable, "-m", "frobclt.cli", "enumerate", "--bound", "3000"]
    outs = []
    for threads in ("1", "3"):
        env = dict(os.environ, FROBCLT_THREADS=threads)
        outs.append(subprocess.run(argv, capture_output=True, check=True, env=env).stdout)
    assert outs[0] == outs[1] and outs[0].count(b"\n") == len(enumerate_fields(3000))


def test_run_experiment_direct():
    import io

    buf = io.StringIO()
    assert run_experiment(ExperimentConfig(command="densities", group="s3", p="7"), stdout=buf) == 0
    assert len(buf.getvalue().splitlines()) == 5
