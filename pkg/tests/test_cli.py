"""The command surface: formats, exit codes, cache behaviour, determinism."""

import os
import subprocess
import sys
from pathlib import Path

import pytest

from ssdlat import CacheMismatch, CountsCache, chain
from ssdlat.cache import HEADER
from ssdlat.cli import main, render_ascii

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCount:
    def test_exact_five(self, capsys):
        code, out, _ = run_cli(["count", "--max-n", "5"], capsys)
        assert code == 0
        assert out.splitlines()[-1] == "5,3,1"

    def test_exact_fifty(self, capsys):
        code, out, _ = run_cli(["count", "--max-n", "50"], capsys)
        assert code == 0
        last = out.splitlines()[-1]
        assert last.startswith("50,81287566224125,")

    def test_float_mode(self, capsys):
        code, out, _ = run_cli(["count", "--max-n", "4", "--mode", "float"], capsys)
        assert code == 0
        n, r, err = out.splitlines()[-1].split(",")
        assert n == "4" and float(r) == 0.125 and float(err) >= 0

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "rows.csv"
        code, out, _ = run_cli(
            ["count", "--max-n", "6", "--out", str(target)], capsys
        )
        assert code == 0 and out == ""
        assert target.read_text().splitlines()[-1] == "6,6,0"

    def test_cache_roundtrip(self, capsys, tmp_path):
        cache = tmp_path / "counts.txt"
        code, _, _ = run_cli(["count", "--max-n", "12", "--cache", str(cache)], capsys)
        assert code == 0
        first = cache.read_text()
        assert first.splitlines()[0] == HEADER
        code, _, _ = run_cli(["count", "--max-n", "12", "--cache", str(cache)], capsys)
        assert code == 0
        assert cache.read_text() == first  # idempotent

    def test_cache_extends(self, capsys, tmp_path):
        cache = tmp_path / "counts.txt"
        run_cli(["count", "--max-n", "8", "--cache", str(cache)], capsys)
        code, out, _ = run_cli(["count", "--max-n", "14", "--cache", str(cache)], capsys)
        assert code == 0
        assert len(cache.read_text().splitlines()) == 15

    def test_cache_mismatch_exit_two(self, capsys, tmp_path):
        cache = tmp_path / "counts.txt"
        run_cli(["count", "--max-n", "10", "--cache", str(cache)], capsys)
        lines = cache.read_text().splitlines()
        lines[7] = "7,12,1"  # corrupt n=7
        cache.write_text("\n".join(lines) + "\n")
        code, _, err = run_cli(["count", "--max-n", "11", "--cache", str(cache)], capsys)
        assert code == 2
        assert "n=7" in err

    def test_float_with_cache_rejected(self, capsys, tmp_path):
        code, _, err = run_cli(
            ["count", "--max-n", "5", "--mode", "float",
             "--cache", str(tmp_path / "c.txt")],
            capsys,
        )
        assert code == 2 and "exact rows only" in err


class TestEnumerate:
    def test_codes_n4(self, capsys):
        code, out, _ = run_cli(["enumerate", "--n", "4", "--emit", "codes"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 2
        assert "SSD1 n=4 L=1,2,1 E=0:1-1,1-2;1:1-1,2-1" in lines

    def test_stats_n5(self, capsys):
        code, out, _ = run_cli(["enumerate", "--n", "5"], capsys)
        assert code == 0 and out.strip() == "N=3 W=1"

    def test_single_line_n1(self, capsys):
        code, out, _ = run_cli(["enumerate", "--n", "1", "--emit", "codes"], capsys)
        assert code == 0 and out.strip() == "SSD1 n=1 L=1 E="

    def test_ceiling_exit_three(self, capsys):
        code, _, err = run_cli(["enumerate", "--n", "40"], capsys)
        assert code == 3 and "capped" in err

    def test_zero_size_exit_two(self, capsys):
        code, _, err = run_cli(["enumerate", "--n", "0"], capsys)
        assert code == 2
        code, _, err = run_cli(["count", "--max-n", "0"], capsys)
        assert code == 2


class TestVerify:
    def test_all_pass(self, capsys):
        code, out, _ = run_cli(["verify", "--max-n", "8", "--checks", "all"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert all(" PASS" in l for l in lines)
        assert lines[0].startswith("CHECK dichotomy")

    def test_single_check(self, capsys):
        code, out, _ = run_cli(["verify", "--max-n", "8", "--checks", "gk"], capsys)
        assert code == 0 and out.startswith("CHECK gk n<=8 PASS")

    def test_unknown_check_exit_two(self, capsys):
        code, _, err = run_cli(["verify", "--max-n", "8", "--checks", "bogus"], capsys)
        assert code == 2 and "unknown check" in err


class TestBoundsEstimate:
    def test_bounds_known_anchor(self, capsys):
        code, out, _ = run_cli(
            ["bounds", "--m", "50", "--N", "81287566224125", "--variant", "proof"],
            capsys,
        )
        assert code == 0
        assert "C_upper,0.0721978" in out
        assert "variant,proof" in out

    def test_bounds_m5(self, capsys):
        code, out, _ = run_cli(["bounds", "--m", "5", "--N", "3"], capsys)
        assert code == 0
        assert "C_upper,0.09375" in out

    def test_bad_anchor_exit_two(self, capsys):
        code, _, err = run_cli(["bounds", "--m", "4", "--N", "2"], capsys)
        assert code == 2

    def test_estimate(self, capsys):
        code, out, _ = run_cli(["estimate", "--max-n", "200"], capsys)
        assert code == 0
        assert out.startswith("C_lower,")
        assert "conjectured_band,0.023..0.073" in out

    def test_estimate_float_ten_thousand(self, capsys):
        code, out, _ = run_cli(
            ["estimate", "--max-n", "10000", "--mode", "float"], capsys
        )
        assert code == 0
        first = out.splitlines()[0]
        lo = float(first.split()[0].split(",")[1])
        hi = float(first.split()[1].split(",")[1])
        assert 0.0 < lo <= hi < 1.0
        assert (hi - lo) / hi <= 1e-5


class TestShow:
    def test_square_drawing(self, capsys, square):
        code, out, _ = run_cli(["show", "--code", square.code()], capsys)
        assert code == 0
        assert out.count("#") == 2  # both corners marked
        assert "/" in out and "\\" in out

    def test_chain_marks_bottom(self, capsys, chains):
        code, out, _ = run_cli(["show", "--code", chains[3].code()], capsys)
        assert code == 0
        rows = [r for r in out.splitlines() if r.strip()]
        assert rows[-1].strip() == "#"  # rank 0: bottom is the corner
        assert rows[0].strip() == "o"

    def test_bad_code_exit_two(self, capsys):
        code, _, err = run_cli(["show", "--code", "SSD1 nope"], capsys)
        assert code == 2

    def test_deterministic(self, capsys, sqtop):
        outs = set()
        for _ in range(2):
            _, out, _ = run_cli(["show", "--code", sqtop.code()], capsys)
            outs.add(out)
        assert len(outs) == 1


class TestPipelines:
    def test_enumerate_pipe_show(self):
        env = {**os.environ, "PYTHONPATH": SRC}
        codes = subprocess.run(
            [sys.executable, "-m", "ssdlat", "enumerate", "--n", "6", "--emit", "codes"],
            capture_output=True, text=True, env=env,
        )
        assert codes.returncode == 0
        shown = subprocess.run(
            [sys.executable, "-m", "ssdlat", "show"],
            input=codes.stdout, capture_output=True, text=True, env=env,
        )
        assert shown.returncode == 0
        assert shown.stdout.count("#") >= 6

    def test_streams_byte_identical(self):
        env = {**os.environ, "PYTHONPATH": SRC}
        runs = [
            subprocess.run(
                [sys.executable, "-m", "ssdlat", "enumerate", "--n", "8",
                 "--emit", "codes", "--workers", "1"],
                capture_output=True, text=True, env=env,
            ).stdout
            for _ in range(2)
        ]
        assert runs[0] == runs[1] and runs[0].count("\n") == 21


class TestCacheModule:
    def test_verify_catches_tamper(self, tmp_path):
        cache = CountsCache.load(str(tmp_path / "c.txt"))
        cache.extend(9)
        cache.rows[4] = type(cache.rows[4])(5, 4, 1)
        with pytest.raises(CacheMismatch) as ei:
            cache.verify()
        assert ei.value.n == 5

    def test_env_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SSDLAT_CACHE_DIR", str(tmp_path))
        cache = CountsCache.load("sub/c.txt")
        cache.extend(4)
        assert (tmp_path / "sub" / "c.txt").exists()


class TestRenderAscii:
    def test_single_element(self):
        assert render_ascii(chain(1)).strip() == "#"

    def test_round_trips_all_small(self):
        from ssdlat import enumerate_diagrams

        enumerate_diagrams(7, visitor=lambda d, s: render_ascii(d))
