"""Command-line interface: subcommands, exit codes, CSV/JSON output."""
import contextlib
import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from remoments import pure_state, save_state
from remoments.cli import main

Q0 = (math.sqrt(2) - 1) / 2


def run_cli(*args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(list(args))
        except SystemExit as exc:  # argparse's own exits
            code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()


def parse_report(text):
    fields = {}
    for line in text.splitlines():
        if ":" in line:
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
    return fields


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestAnalyze:
    def test_golden_statistic(self):
        code, out, err = run_cli(
            "analyze", "--family", "rho_pq", "--param", "0.2071067811",
            "--criterion", "v1", "--a", "0.2",
        )
        assert code == 0 and err == ""
        fields = parse_report(out)
        assert fields["outcome"] == "ENTANGLED"
        assert float(fields["statistic"]) == pytest.approx(1.5073, abs=5e-4)
        assert float(fields["discriminant"]) == pytest.approx(0.0188, abs=5e-4)
        assert fields["dims"] == "4x4"
        assert "admissible" in fields

    def test_inconclusive_is_success(self):
        code, out, _ = run_cli(
            "analyze", "--family", "noisy_ghz4", "--param", "0",
            "--criterion", "v3", "--v", "0.01", "--split", "1|2",
        )
        assert code == 0
        assert parse_report(out)["outcome"] == "INCONCLUSIVE"

    def test_state_file_realign(self, tmp_path):
        bell = pure_state(np.array([1, 0, 0, 1]) / math.sqrt(2), (2, 2))
        path = tmp_path / "bell.json"
        save_state(path, bell)
        code, out, _ = run_cli(
            "analyze", "--state", str(path), "--criterion", "realign", "--split", "1|2"
        )
        assert code == 0
        fields = parse_report(out)
        assert float(fields["statistic"]) == pytest.approx(2.0, abs=1e-9)
        assert fields["outcome"] == "ENTANGLED"

    def test_ppt(self):
        code, out, _ = run_cli(
            "analyze", "--family", "rho_d", "--param", "0.3", "--criterion", "ppt", "--party", "2"
        )
        assert code == 0
        fields = parse_report(out)
        assert fields["outcome"] == "ENTANGLED"
        assert float(fields["statistic"]) == pytest.approx(-0.22, abs=1e-9)
        assert float(fields["threshold"]) == 0.0

    def test_json_out(self, tmp_path):
        path = tmp_path / "verdict.json"
        code, out, _ = run_cli(
            "analyze", "--family", "rho_pq", "--param", str(Q0),
            "--criterion", "v1", "--a", "0.2", "--out", str(path),
        )
        assert code == 0
        payload = json.loads(path.read_text())
        assert payload["criterion"] == "v1"
        assert payload["parameter"] == 0.2
        assert payload["outcome"] == "ENTANGLED"
        assert payload["statistic"] == pytest.approx(1.5072876654986822, abs=1e-9)
        assert payload["dims"] == [4, 4]
        assert payload["state"] == {"family": "rho_pq", "param": Q0}
        assert payload["moments"]["t1"] == pytest.approx(0.17157287525380985, abs=1e-12)
        assert payload["discriminant"] == pytest.approx(0.01882146863844181, abs=1e-12)
        ivs = payload["admissible"]["intervals"]
        assert ivs[0]["hi"] == pytest.approx(0.21077270350240235, abs=1e-9)
        assert ivs[1]["hi"] is None
        # statistic printed and stored agree
        assert float(parse_report(out)["statistic"]) == pytest.approx(
            payload["statistic"], abs=1e-10
        )


class TestExitCodes:
    @pytest.mark.parametrize(
        "args",
        [
            ("analyze", "--family", "rho_d", "--criterion", "v1", "--a", "2"),  # no --param
            ("analyze", "--criterion", "v1", "--a", "2"),  # no source
            ("analyze", "--family", "rho_d", "--param", "0.3", "--criterion", "v1"),  # no --a
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "v2", "--u", "5"),
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "v1", "--a", "2"),
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "ppt"),
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "ppt", "--party", "4"),
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "v2", "--u", "5", "--split", "1|1"),
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "v2", "--u", "5", "--split", "1|4"),
            ("analyze", "--family", "ghz_w", "--param", "0.5", "--criterion", "v2", "--u", "-1", "--split", "1|2"),
            ("sweep", "--family", "ghz_w", "--range", "0:1", "--criterion", "v2", "--u", "5", "--split", "1|2"),
            ("sweep", "--family", "ghz_w", "--range", "1:0:0.1", "--criterion", "v2", "--u", "5", "--split", "1|2"),
            ("sweep", "--family", "ghz_w", "--range", "0:1:-0.1", "--criterion", "v2", "--u", "5", "--split", "1|2"),
            ("threshold", "--family", "ghz_w", "--bracket", "0-1", "--criterion", "v2", "--u", "5", "--split", "1|2"),
            ("audit", "--dims", "2", "--criteria", "v3"),
            ("audit", "--dims", "2,x", "--criteria", "v3"),
            ("audit", "--dims", "2,2", "--criteria", "nope"),
        ],
    )
    def test_usage_errors_exit_2(self, args):
        code, _, err = run_cli(*args)
        assert code == 2
        assert err.strip() != ""

    def test_both_sources_exit_2(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text("{}")
        code, _, _ = run_cli(
            "analyze", "--family", "rho_d", "--param", "0.3", "--state", str(path),
            "--criterion", "v1", "--a", "2",
        )
        assert code == 2

    def test_malformed_state_file_exit_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json at all")
        code, _, err = run_cli(
            "analyze", "--state", str(path), "--criterion", "realign", "--split", "1|2"
        )
        assert code == 2 and "cannot read" in err

    def test_missing_state_file_exit_2(self, tmp_path):
        code, _, _ = run_cli(
            "analyze", "--state", str(tmp_path / "absent.json"),
            "--criterion", "realign", "--split", "1|2",
        )
        assert code == 2

    def test_unknown_choice_exit_2(self):
        code, _, _ = run_cli(
            "analyze", "--family", "rho_d", "--param", "0.3", "--criterion", "v9"
        )
        assert code == 2

    def test_family_domain_exit_3(self):
        code, _, err = run_cli(
            "analyze", "--family", "rho_d", "--param", "0.9", "--criterion", "v1", "--a", "2"
        )
        assert code == 3
        assert "validation failure" in err

    def test_invalid_state_file_exit_3(self, tmp_path):
        path = tmp_path / "npsd.json"
        payload = {
            "dims": [2],
            "matrix": [[[1.001, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.001, 0.0]]],
        }
        path.write_text(json.dumps(payload))
        code, _, err = run_cli(
            "analyze", "--state", str(path), "--criterion", "ppt", "--party", "1"
        )
        assert code == 3
        assert "NOT_PSD" in err


class TestSweep:
    def test_schema_and_grid(self):
        code, out, _ = run_cli(
            "sweep", "--family", "ghz_w", "--range", "0:1:0.3",
            "--criterion", "v2", "--u", "5", "--split", "1|2",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == [
            "state_param", "criterion", "criterion_param", "statistic",
            "admissible_low", "admissible_high", "outcome",
        ]
        assert [r[0] for r in rows] == ["0", "0.3", "0.6", "0.9", "1"]
        assert all(r[1] == "v2" and r[2] == "5" and r[6] == "ENTANGLED" for r in rows)

    def test_single_point_range(self):
        code, out, _ = run_cli(
            "sweep", "--family", "ghz_w", "--range", "0.5:0.5:0.1",
            "--criterion", "v2", "--u", "5", "--split", "1|2",
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 1

    def test_admissible_columns(self):
        code, out, _ = run_cli(
            "sweep", "--family", "rho_pq", "--range", "0:0.5:0.05",
            "--criterion", "v1", "--a", "0.2",
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 11
        by_q = {r[0]: r for r in rows}
        row = by_q["0.15"]  # well inside the positive-discriminant zone
        assert float(row[4]) == pytest.approx(0.20456545342288543, abs=1e-9)
        assert float(row[5]) == pytest.approx(12.2341644564164, abs=1e-7)
        row_deg = by_q["0.5"]  # negative discriminant: whole positive axis
        assert row_deg[4] == "" and row_deg[5] == ""

    def test_byte_stable_and_file_matches_stdout(self, tmp_path):
        args = (
            "sweep", "--family", "noisy_ghz4", "--range", "0:1:0.1",
            "--criterion", "v3", "--v", "0.01", "--split", "1|2",
        )
        code, out, _ = run_cli(*args)
        assert code == 0
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(*args, "--out", str(p1))[0] == 0
        assert run_cli(*args, "--out", str(p2))[0] == 0
        assert p1.read_bytes() == p2.read_bytes()
        assert p1.read_text() == out

    def test_twelve_significant_digits(self):
        _, out, _ = run_cli(
            "sweep", "--family", "ghz_w", "--range", "0.1:0.1:1",
            "--criterion", "v2", "--u", "5", "--split", "1|2",
        )
        _, rows = parse_csv(out)
        stat = rows[0][3]
        assert stat == format(float(stat), ".12g")
        assert len(stat.replace(".", "").replace("-", "").lstrip("0")) >= 11

    def test_matches_analyze(self):
        args_common = ("--criterion", "v1", "--a", "0.2")
        _, sweep_out, _ = run_cli(
            "sweep", "--family", "rho_pq", "--range", "0.2:0.2:1", *args_common
        )
        _, rows = parse_csv(sweep_out)
        sweep_stat = float(rows[0][3])
        _, an_out, _ = run_cli(
            "analyze", "--family", "rho_pq", "--param", "0.2", *args_common
        )
        an_stat = float(parse_report(an_out)["statistic"])
        assert abs(sweep_stat - an_stat) <= 1e-12


class TestThreshold:
    def test_detection_boundary(self):
        code, out, _ = run_cli(
            "threshold", "--family", "noisy_ghz4", "--bracket", "0:1",
            "--criterion", "v3", "--v", "0.01", "--split", "1|2",
        )
        assert code == 0
        x_star = float(out.strip())
        assert x_star == pytest.approx(0.6427, abs=1e-3)
        # crossing is genuine: re-evaluated statistic sits on the threshold
        _, an_out, _ = run_cli(
            "analyze", "--family", "noisy_ghz4", "--param", str(x_star),
            "--criterion", "v3", "--v", "0.01", "--split", "1|2",
        )
        assert abs(float(parse_report(an_out)["statistic"]) - 1.0) <= 1e-4

    def test_realign_norm_boundary(self):
        code, out, _ = run_cli(
            "threshold", "--family", "noisy_ghz4", "--bracket", "0:1",
            "--criterion", "realign", "--split", "1|2",
        )
        assert code == 0
        assert float(out.strip()) == pytest.approx(1 / 3, abs=2e-6)

    def test_no_sign_change(self):
        code, _, err = run_cli(
            "threshold", "--family", "ghz_w", "--bracket", "0:1",
            "--criterion", "v2", "--u", "5", "--split", "1|2",
        )
        assert code == 2
        assert "straddle" in err


class TestAudit:
    def test_product_states_expose_formula(self):
        code, out, _ = run_cli(
            "audit", "--dims", "2,2", "--num-states", "30", "--num-terms", "1",
            "--criteria", "v1", "--params", "0.5,2,10", "--seed", "0",
        )
        assert code == 0
        lines = [ln.split() for ln in out.splitlines() if ln.startswith("v1")]
        assert len(lines) == 3
        for parts, a in zip(lines, (0.5, 2.0, 10.0)):
            evaluated, violations = int(parts[3]), int(parts[4])
            assert evaluated == 30 and violations == 30
            assert float(parts[5]) == pytest.approx(math.sqrt(1 + 4 / a), abs=1e-9)

    def test_mixed_samples_no_violations(self):
        code, out, _ = run_cli(
            "audit", "--dims", "2,2", "--num-states", "50", "--num-terms", "3",
            "--criteria", "v3,realign,ppt", "--params", "0.01,0.5,1,5", "--seed", "0",
        )
        assert code == 0
        for line in out.splitlines():
            parts = line.split()
            if parts and parts[0] in ("v3", "realign", "ppt"):
                assert int(parts[4]) == 0

    def test_deterministic(self):
        args = ("audit", "--dims", "2,2", "--num-states", "10", "--seed", "3")
        assert run_cli(*args)[1] == run_cli(*args)[1]

    def test_json_report(self, tmp_path):
        path = tmp_path / "audit.json"
        code, _, _ = run_cli(
            "audit", "--dims", "2,2", "--num-states", "5", "--num-terms", "1",
            "--criteria", "v1", "--params", "2", "--out", str(path),
        )
        assert code == 0
        payload = json.loads(path.read_text())
        assert payload["config"]["dims"] == [2, 2]
        assert payload["config"]["num_terms"] == 1
        entry = payload["entries"][0]
        assert entry["criterion"] == "v1"
        assert entry["evaluated"] == 5
        assert entry["violations"] == 5
        assert entry["worst_statistic"] == pytest.approx(math.sqrt(3.0), abs=1e-9)
        assert isinstance(entry["worst_seed"], int)


def test_module_entry_point():
    proc = subprocess.run(
        [
            sys.executable, "-m", "remoments", "analyze",
            "--family", "ghz_w", "--param", "0.5",
            "--criterion", "v2", "--u", "5", "--split", "1|2",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "ENTANGLED" in proc.stdout
