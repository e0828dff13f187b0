import io
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from fibeuler.bfile import parse_bfile
from fibeuler.cli import EXIT_COMPUTE, EXIT_NETWORK, EXIT_OK, EXIT_USAGE, main
from fibeuler.exact import euler_transform


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_terms_stdout():
    code, text = run("terms", "-z", "0", "-N", "10")
    assert code == EXIT_OK
    assert len(text.splitlines()) == 11
    assert [v for _, v in parse_bfile(text)] == list(euler_transform(0, 10).terms)


def test_terms_file(tmp_path):
    path = tmp_path / "t.txt"
    assert run("terms", "-z", "2", "-N", "25", "-o", str(path))[0] == EXIT_OK
    assert b"\r" not in path.read_bytes()
    assert len(parse_bfile(path.read_bytes())) == 26


def test_bad_shift():
    assert run("terms", "-z", "-2", "-N", "5")[0] == EXIT_USAGE


def test_missing_subcommand():
    assert run()[0] == EXIT_USAGE


def test_constants_output():
    code, text = run("constants", "-z", "0", "-d", "25")
    assert code == EXIT_OK
    fields = dict(line.split(" = ") for line in text.splitlines())
    assert fields["S"].startswith("0.60047660139257591296")
    assert fields["phi"].startswith("1.6180339887498948482")
    assert fields["c"].startswith("19.559996497426931711")


def test_constants_z1():
    text = run("constants", "-z", "1", "-d", "25")[1]
    assert "S = 0.79022140137510852629" in text


def test_digits_ceiling():
    assert run("constants", "-d", "5000")[0] == EXIT_USAGE


def test_saddle():
    code, text = run("saddle", "-z", "0", "-n", "100", "-d", "20")
    assert code == EXIT_OK
    assert "r_solved = 0.5776818198" in text
    assert run("saddle", "-n", "0")[0] == EXIT_USAGE


def test_verify_outputs(tmp_path):
    csv_path, svg_path = tmp_path / "r.csv", tmp_path / "r.svg"
    code, text = run("verify", "-z", "0", "-N", "200", "--stride", "10", "-d", "20",
                     "--csv", str(csv_path), "--svg", str(svg_path))
    assert code == EXIT_OK, text
    assert len(csv_path.read_text().splitlines()) == 21
    ET.parse(svg_path)
    assert "[PASS]" in text and "[FAIL]" not in text


def test_config_file(tmp_path):
    cfg = tmp_path / "f.cfg"
    cfg.write_text("# defaults\nz = 1\nN = 4\n")
    code, text = run("--config", str(cfg), "terms")
    assert code == EXIT_OK
    assert [v for _, v in parse_bfile(text)] == list(euler_transform(1, 4).terms)
    # explicit flags beat the file
    assert len(run("--config", str(cfg), "terms", "-N", "2")[1].splitlines()) == 3


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "f.cfg"
    cfg.write_text("colour = blue\n")
    assert run("--config", str(cfg), "terms")[0] == EXIT_USAGE


def test_offline_cold_cache(tmp_path):
    code, _ = run("verify", "-N", "60", "--stride", "20", "-d", "20", "--oeis", "--offline",
                  "--cache-dir", str(tmp_path))
    assert code == EXIT_NETWORK


def test_offline_warm_cache_mismatch(tmp_path):
    # a z=1 file placed under the z=0 name must be reported as a mismatch
    (tmp_path / "b166861.txt").write_text(euler_transform(1, 120).to_bfile())
    code, text = run("verify", "-N", "60", "--stride", "20", "-d", "20", "--oeis", "--offline",
                     "--cache-dir", str(tmp_path))
    assert code == EXIT_COMPUTE
    assert "mismatch at n=2" in text


def test_deterministic():
    assert run("constants", "-z", "2", "-d", "25") == run("constants", "-z", "2", "-d", "25")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fibeuler", "terms", "-N", "3"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert proc.stdout == "0 1\n1 1\n2 2\n3 4\n"
