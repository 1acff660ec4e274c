"""Command-line interface tests: exit codes, formats, determinism."""

import csv
import io
import json

import pytest

from freearm import analytics, cli


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


class TestAnalyticCommand:
    def test_table_row_values(self, capsys):
        code, out = run(["analytic", "--n", "2", "--m", "2"], capsys)
        assert code == 0
        row = out.splitlines()[1]
        for value in ("6", "13.5", "22.5", "67.5", "40.5", "2.25"):
            assert value in row.split()

    def test_json_exact_rationals_round_trip(self, capsys):
        code, out = run(["analytic", "--n", "2", "3", "--m", "2",
                         "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        by_n = {r["n"]: r for r in doc["rows"]}
        assert analytics.parse_rational(by_n[2]["cs_per_link"]) == analytics.parse_rational("45/2")
        assert analytics.parse_rational(by_n[3]["attempts_per_link"]) == analytics.parse_rational("32/11")

    def test_divergent_order_marked(self, capsys):
        code, out = run(["analytic", "--n", "1", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["rows"][0]["attempts_per_link"] == "divergent"


class TestWalkCommand:
    ARGS = ["walk", "--n", "2", "--trials", "400", "--target-links", "100",
            "--seed", "7"]

    def test_convergent_run_exits_zero(self, capsys):
        code, out = run(self.ARGS, capsys)
        assert code == 0
        assert "convergence: pass" in out

    def test_order_one_divergence_is_informational(self, capsys):
        code, out = run(["walk", "--n", "1", "--trials", "20",
                         "--target-links", "10", "--max-steps", "5000"], capsys)
        assert code == 0
        assert "divergence is expected" in out

    def test_csv_schema(self, capsys):
        code, out = run(self.ARGS + ["--format", "csv"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        for col in ("n", "target_links", "trials", "seed", "attempts_per_net_link",
                    "attempts_per_net_link_stderr", "units_per_link", "cs_per_link",
                    "converged"):
            assert col in rows[0]

    def test_per_trial_records(self, capsys):
        code, out = run(["walk", "--n", "2", "--trials", "5", "--target-links",
                         "20", "--per-trial", "--format", "csv"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 5
        assert all(int(r["steps"]) >= 20 for r in rows)

    def test_thread_count_byte_identical(self, capsys):
        _, one = run(self.ARGS + ["--threads", "1", "--format", "json"], capsys)
        _, four = run(self.ARGS + ["--threads", "4", "--format", "json"], capsys)
        assert one == four

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "walk.json"
        code, out = run(self.ARGS + ["--format", "json", "--output", str(target)],
                        capsys)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["command"] == "walk"


class TestSeedHandling:
    def test_env_default_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("FREEARM_SEED", "99")
        _, out = run(["weave", "--m", "2", "--count", "1000",
                      "--format", "json"], capsys)
        assert json.loads(out)["params"]["seed"] == 99

    def test_explicit_seed_wins(self, capsys, monkeypatch):
        monkeypatch.setenv("FREEARM_SEED", "99")
        _, out = run(["weave", "--m", "2", "--count", "1000", "--seed", "5",
                      "--format", "json"], capsys)
        assert json.loads(out)["params"]["seed"] == 5

    def test_seed_range_checked(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["walk", "--n", "2", "--trials", "1", "--target-links", "1",
                      "--seed", str(2 ** 64)])
        assert exc.value.code == 2
        capsys.readouterr()


class TestVerificationCommands:
    def test_verify_weave(self, capsys):
        code, out = run(["verify-weave"], capsys)
        assert code == 0
        assert "min branch fidelity 1.000000 (4 branches)" in out

    def test_verify_weave_json(self, capsys):
        _, out = run(["verify-weave", "--format", "json"], capsys)
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["branch_count"] == 4
        assert all(abs(p - 0.25) < 1e-12 for p in doc["probabilities"])

    def test_verify_evolve(self, capsys):
        code, out = run(["verify-evolve", "--qubits", "2", "--cphases", "1",
                         "--rotations", "1", "--seed", "3", "--format", "json"],
                        capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["min_fidelity"] >= 1 - 1e-9
        assert abs(doc["probability_sum"] - 1) < 1e-9
        # the report embeds the program for reproduction
        assert doc["program"]["qubits"] == ["q0", "q1"]

    def test_fock_cz_report(self, capsys):
        code, out = run(["fock-cz", "--n", "1", "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert abs(doc["success_probability"] - 0.25) < 1e-12
        assert len(doc["branch_fidelities"]) == doc["success_branches"]


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_module_errors_map_to_usage_exit(self, capsys):
        assert cli.main(["fock-cz", "--n", "4"]) == 2
        assert cli.main(["walk", "--n", "0", "--trials", "1",
                         "--target-links", "1"]) == 2
        capsys.readouterr()
