import json

import pytest

from longtrail.cli import main

TRIANGLE_TEXT = "3 3\n0 1\n1 2\n2 0\n"
K4_TEXT = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"

REPORT_KEYS = {
    "engine", "n", "m", "length", "trail", "queries", "seed", "alpha",
    "mode", "wall_ms",
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_deterministic_output(self, capsys, tmp_path):
        out1 = tmp_path / "a.txt"
        out2 = tmp_path / "b.txt"
        assert run_cli(capsys, "gen", "--n", "4", "--m", "6", "--seed", "1",
                       "--out", str(out1))[0] == 0
        assert run_cli(capsys, "gen", "--n", "4", "--m", "6", "--seed", "1",
                       "--out", str(out2))[0] == 0
        assert out1.read_text() == out2.read_text()
        assert out1.read_text().splitlines()[0] == "4 6"

    def test_empty_instance(self, capsys):
        code, out, _ = run_cli(capsys, "gen", "--n", "1", "--m", "0")
        assert code == 0 and out == "1 0\n"

    def test_size_cap(self, capsys):
        code, _, err = run_cli(capsys, "gen", "--n", "2", "--m", "31")
        assert code == 2 and "error" in err


class TestSolve:
    def _write(self, tmp_path, text):
        path = tmp_path / "g.txt"
        path.write_text(text)
        return str(path)

    def test_dp_triangle(self, capsys, tmp_path):
        path = self._write(tmp_path, TRIANGLE_TEXT)
        code, out, _ = run_cli(capsys, "solve", path, "--engine", "dp")
        assert code == 0
        report = json.loads(out)
        assert report["length"] == 3
        assert set(report) == REPORT_KEYS
        assert report["queries"] is None and report["mode"] is None

    def test_hybrid_det_k4(self, capsys, tmp_path):
        path = self._write(tmp_path, K4_TEXT)
        code, out, _ = run_cli(capsys, "solve", path, "--engine", "hybrid",
                               "--mode", "det")
        assert code == 0
        report = json.loads(out)
        assert report["length"] == 5
        assert report["queries"]["total"] > 0
        assert "level0" in report["queries"]["per_level"]
        assert set(report) == REPORT_KEYS

    def test_hybrid_stoch_reproducible(self, capsys, tmp_path):
        path = self._write(tmp_path, K4_TEXT)
        reports = []
        for _ in range(2):
            code, out, _ = run_cli(capsys, "solve", path, "--engine", "hybrid",
                                   "--mode", "stoch", "--seed", "5")
            assert code == 0
            rep = json.loads(out)
            rep.pop("wall_ms")
            reports.append(rep)
        assert reports[0] == reports[1]

    def test_oracle_bound(self, capsys, tmp_path):
        edges = "\n".join("0 1" for _ in range(15))
        path = self._write(tmp_path, f"2 15\n{edges}\n")
        code, _, err = run_cli(capsys, "solve", path, "--engine", "oracle")
        assert code == 2 and "error" in err

    def test_parse_error(self, capsys, tmp_path):
        path = self._write(tmp_path, "2 1\n0 7\n")
        code, _, err = run_cli(capsys, "solve", path, "--engine", "dp")
        assert code == 2 and "out of range" in err

    def test_table_dump(self, capsys, tmp_path):
        path = self._write(tmp_path, K4_TEXT)
        dump = tmp_path / "cache.bin"
        code, _, err = run_cli(capsys, "solve", path, "--engine", "hybrid",
                               "--dump-table", str(dump))
        assert code == 0
        assert dump.stat().st_size > 0 and "table records" in err


class TestVerify:
    def test_random_instances(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--random", "5", "4", "8", "123")
        assert code == 0
        payload = json.loads(out)
        assert payload["ok"] and payload["agreed"] == 5
        assert "5/5 agree" in err

    def test_single_edge_file(self, capsys, tmp_path):
        path = tmp_path / "one.txt"
        path.write_text("2 1\n0 1\n")
        code, out, _ = run_cli(capsys, "verify", str(path))
        payload = json.loads(out)
        assert code == 0
        assert payload["results"][0]["lengths"] == {
            "oracle": 1, "dp": 1, "hybrid-det": 1,
        }

    def test_empty_graph(self, capsys, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("3 0\n")
        code, out, _ = run_cli(capsys, "verify", str(path))
        payload = json.loads(out)
        assert code == 0
        assert set(payload["results"][0]["lengths"].values()) == {0}

    def test_requires_one_source(self, capsys):
        with pytest.raises(SystemExit):
            main(["verify"])


class TestCosts:
    def test_m20(self, capsys):
        code, out, _ = run_cli(capsys, "costs", "--m", "20")
        assert code == 0
        payload = json.loads(out)
        assert payload["classical_count"] == 15504

    def test_m2000_exponents(self, capsys):
        code, out, _ = run_cli(capsys, "costs", "--m", "2000")
        payload = json.loads(out)
        assert abs(payload["exponent_classical"] - 0.78899) < 0.02
        assert abs(payload["exponent_quantum"] - 0.78899) < 0.02

    def test_too_small(self, capsys):
        code, _, err = run_cli(capsys, "costs", "--m", "3")
        assert code == 2 and "error" in err


class TestBench:
    def test_deterministic_mode_always_succeeds(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--sizes", "6,8", "--runs", "2",
                               "--mode", "det")
        assert code == 0
        payload = json.loads(out)
        assert [a["m"] for a in payload["aggregates"]] == [6, 8]
        assert all(a["success_rate"] == 1.0 for a in payload["aggregates"])
        assert all(r["queries_total"] > 0 for r in payload["rows"])

    def test_stochastic_mode(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--sizes", "8", "--runs", "3",
                               "--mode", "stoch", "--seed", "7")
        assert code == 0
        payload = json.loads(out)
        agg = payload["aggregates"][0]
        assert agg["runs"] == 3
        assert 0.0 <= agg["success_rate"] <= 1.0
        assert agg["queries_min"] <= agg["queries_mean"] <= agg["queries_max"]

    def test_csv_format(self, capsys, tmp_path):
        out_path = tmp_path / "bench.csv"
        code, _, _ = run_cli(capsys, "bench", "--sizes", "6", "--runs", "2",
                             "--mode", "det", "--format", "csv",
                             "--out", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0].startswith("m,seed,n,")
        assert len(lines) == 3
