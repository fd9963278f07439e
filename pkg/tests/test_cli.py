import csv
import math
import subprocess
import sys
from pathlib import Path

import pytest

from photoabsorb.cli import ConfigError, parse_scenario, write_table
from photoabsorb.cli.config import parse_quantity
from photoabsorb.cli.main import main, run
from photoabsorb.cli.tables import OutputError, format_cell, sidecar_path

BASE = (Path(__file__).resolve().parents[1] / "configs" / "yb174.conf").read_text()


def scenario(extra=""):
    return BASE + extra


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestParsing:
    def test_frequency_suffix(self):
        scn = parse_scenario(scenario())
        assert scn.trap.omega_T == pytest.approx(2 * math.pi * 4.8e5, rel=1e-15)
        assert parse_quantity("3e5 rad/s", "freq") == 3e5
        assert parse_quantity("1.2e8 1/s", "freq") == 1.2e8

    def test_yb_inputs(self):
        scn = parse_scenario(scenario())
        assert scn.atom.mass == pytest.approx(174 * 1.66053906660e-27, rel=1e-15)
        assert scn.atom.gamma == 1.2e8

    def test_missing_mass_names_key(self):
        text = "\n".join(l for l in BASE.splitlines() if not l.startswith("mass"))
        with pytest.raises(ConfigError, match="mass"):
            parse_scenario(text)

    def test_duplicate_cites_both_lines(self):
        text = "gamma = 1e8 1/s\nomega_eg = 5.1e15 rad/s\ngamma = 2e8 1/s\n"
        with pytest.raises(ConfigError) as info:
            parse_scenario(text)
        msg = str(info.value)
        assert "1" in msg and "3" in msg and "gamma" in msg

    def test_unknown_key_line(self):
        with pytest.raises(ConfigError) as info:
            parse_scenario(scenario("colour = blue\n"))
        assert info.value.line == len(BASE.splitlines()) + 1

    def test_unit_mismatch(self):
        with pytest.raises(ConfigError, match="unit"):
            parse_scenario(BASE.replace("480 kHz", "480 ns"))
        with pytest.raises(ConfigError):
            parse_scenario(BASE.replace("480 kHz", "480"))

    def test_non_monotone_list(self):
        with pytest.raises(ConfigError, match="increasing") as info:
            parse_scenario(scenario("fig5_r = 0, 2, 1\n"))
        assert info.value.line is not None

    def test_reversed_grid(self):
        assert run("fig2", scenario("eta0_min = 2\neta0_max = 1\n"))[0] == 2

    def test_comments_and_blank_lines(self):
        scn = parse_scenario("# header\n\n" + BASE + "   # trailing\n")
        assert scn.state_name == "doppler"

    def test_modulation_needs_both(self):
        with pytest.raises(ConfigError):
            parse_scenario(scenario("delta = 0.1\n"))


class TestTables:
    def test_empty_rows_header_only(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table([], ["a", "b"], path)
        assert path.read_bytes() == b"a,b\n"

    def test_nan_rejected(self, tmp_path):
        path = tmp_path / "t.csv"
        with pytest.raises(OutputError):
            write_table([[1.0, float("nan")]], ["a", "b"], path)
        assert not path.exists()

    def test_format(self):
        assert format_cell(1 / 3) == "0.333333333333"
        assert format_cell(-0.0) == "0"
        assert format_cell(True) == "1"
        assert format_cell(1.5e-20) == "1.5e-20"

    def test_sidecar(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table([[1]], ["a"], path, [("seed", "7")])
        assert Path(sidecar_path(path)).read_text() == "seed = 7\n"


class TestCommands:
    def test_fig2(self, tmp_path):
        out = tmp_path / "fig2.csv"
        code, table, _ = run("fig2", scenario(), out)
        assert code == 0
        rows = read_rows(out)
        assert len(rows) == 61
        assert float(rows[0]["eta0"]) == 0 and abs(float(rows[0]["ratio"]) - 1) <= 1e-9
        at_one = next(r for r in rows if float(r["eta0"]) == 1.0)
        assert float(at_one["ratio"]) == pytest.approx(0.4376, abs=1e-4)
        assert out.read_bytes().count(b"\r") == 0

    def test_fig3(self, tmp_path):
        out = tmp_path / "fig3.csv"
        assert run("fig3", scenario(), out)[0] == 0
        rows = read_rows(out)
        assert {r["eta0"] for r in rows} == {"0", "1", "2"}
        assert all(0 <= float(r["p_e"]) <= 1 for r in rows)

    def test_fig4_tracks_estimate(self, tmp_path):
        out = tmp_path / "fig4.csv"
        assert run("fig4", scenario(), out)[0] == 0
        rows = [r for r in read_rows(out) if float(r["omega_M_ratio"]) == 2.0 and 4 <= float(r["wt"]) <= 15]
        assert rows
        for r in rows:
            assert float(r["r_numeric"]) == pytest.approx(float(r["r_approx"]), rel=0.10)
        stable = {r["omega_M_ratio"]: r["stable"] for r in read_rows(out)}
        assert stable == {"2": "0", "2.2": "0", "2.3": "1"}

    def test_fig5_doppler_point(self, tmp_path):
        out = tmp_path / "fig5.csv"
        assert run("fig5", scenario(), out)[0] == 0
        rows = read_rows(out)
        point = next(
            r for r in rows
            if float(r["r"]) == 0 and r["phase"] == "matched" and float(r["x_param"]) == pytest.approx(0.7)
        )
        assert float(point["p_e"]) == pytest.approx(0.299, abs=1e-3 + 1e-12)
        assert {r["phase"] for r in rows} == {"matched", "anti"}

    def test_doppler_check(self, tmp_path):
        out = tmp_path / "d.csv"
        assert run("doppler-check", scenario(), out)[0] == 0
        rows = read_rows(out)
        assert len(rows) == 3
        assert float(rows[0]["ratio"]) == pytest.approx(3.3e-3, rel=0.02)

    def test_sweep(self, tmp_path):
        out = tmp_path / "s.csv"
        text = scenario("sweep_min = 100 kHz\nsweep_max = 1 MHz\nsweep_points = 5\nsweep_scale = log\n")
        assert run("sweep", text, out)[0] == 0
        assert len(read_rows(out)) == 5

    def test_headline_numbers(self, tmp_path):
        out = tmp_path / "p.csv"
        assert run("paper-numbers", scenario(), out)[0] == 0
        rows = read_rows(out)
        assert len(rows) == 6
        assert all(r["pass"] == "1" for r in rows)

    @pytest.mark.parametrize("command", ["fig3", "fig4", "fig5", "doppler-check", "paper-numbers"])
    def test_verify_passes(self, tmp_path, command):
        out = tmp_path / "v.csv"
        code, table, messages = run(command, scenario(), out, verify=True)
        assert code == 0, messages
        assert "discrepancy" in table.columns

    def test_sidecar_reproduces(self, tmp_path):
        first = tmp_path / "a.csv"
        assert run("fig5", scenario(), first)[0] == 0
        meta = Path(sidecar_path(first)).read_text()
        second = tmp_path / "b.csv"
        assert run("fig5", meta, second)[0] == 0
        assert first.read_bytes() == second.read_bytes()


class TestExitCodes:
    def test_ok_and_config(self, tmp_path):
        conf = tmp_path / "s.conf"
        conf.write_text(BASE)
        assert main(["doppler-check", "--config", str(conf), "--out", str(tmp_path / "o.csv")]) == 0
        conf.write_text(BASE + "bogus = 1\n")
        assert main(["doppler-check", "--config", str(conf), "--out", str(tmp_path / "o.csv")]) == 2
        assert main(["doppler-check", "--config", str(tmp_path / "missing.conf")]) == 2

    def test_unwritable_output(self, tmp_path):
        assert run("doppler-check", BASE, tmp_path / "no" / "such" / "dir.csv")[0] == 2

    def test_oracle_failure(self, tmp_path, monkeypatch):
        from photoabsorb import oracle

        monkeypatch.setattr(oracle, "mp_doppler_ratio", lambda *a: 1.0)
        assert run("doppler-check", BASE, tmp_path / "o.csv", verify=True)[0] == 3

    def test_seed_override(self, tmp_path):
        out = tmp_path / "o.csv"
        run("paper-numbers", BASE, out, seed=7)
        assert "seed = 7" in Path(sidecar_path(out)).read_text()
        assert run("paper-numbers", BASE, out, seed=-1)[0] == 2

    def test_console_script(self, tmp_path):
        conf = tmp_path / "s.conf"
        conf.write_text(BASE)
        out = tmp_path / "o.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "photoabsorb.cli.main", "paper-numbers", "--config", str(conf), "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert out.exists()
