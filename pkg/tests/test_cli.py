import csv
import importlib
import io
import json
import subprocess
import sys

import pytest

from loqc import cli, verify

teleport_module = importlib.import_module("loqc.protocols.teleport")


@pytest.fixture
def corrupted_table(monkeypatch):
    monkeypatch.setitem(teleport_module.CORRECTION_TABLE, (1, 1), "X")


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestVerify:
    def test_suite_passes(self):
        results = verify.run_suite()
        assert len(results) >= 60
        assert all(r.passed for r in results), [r for r in results if not r.passed]

    def test_clean_exit(self, capsys):
        code, out, err = run(["verify"], capsys)
        assert code == 0
        assert len(rows(out)) >= 60
        assert "checks passed" in err

    def test_corrupted_table_names_branch(self, corrupted_table, capsys):
        code, out, err = run(["verify"], capsys)
        assert code == 1
        failed = [r["check"] for r in rows(out) if r["passed"] == "False"]
        assert "correction table (1, 1)" in failed
        assert any(name.startswith("teleport branch (1, 1)") for name in failed)
        assert "FAILED: correction table (1, 1)" in err


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["nope"],
        ["concat", "--f0", "1.5"],
        ["concat", "--levels", "-1"],
        ["montecarlo", "--trials", "0"],
        ["montecarlo", "--protocol", "unknown"],
        ["threshold", "--f-grid", "0.1,abc"],
        ["concat", "--format", "xml"],
    ])
    def test_exit_two(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2

    def test_printed_mode_needs_two_levels_or_fewer(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["resources", "--levels", "3", "--printed-constants"])
        assert exc.value.code == 2


class TestTables:
    def test_concat(self, capsys):
        code, out, _ = run(["concat", "--f0", "0.25", "--levels", "2"], capsys)
        table = rows(out)
        assert code == 0 and len(table) == 3
        assert round(float(table[1]["f"]), 4) == 0.1346
        assert round(float(table[2]["f"]), 4) == 0.0383

    def test_resources_columns(self, capsys):
        _, out, _ = run(["resources"], capsys)
        assert out.splitlines()[0] == "level,category,R0,R1,R2,attempts"

    def test_erasure_fixed_point(self, capsys):
        _, out, _ = run(["erasure", "--s", "0.009615"], capsys)
        (row,) = rows(out)
        assert row["fixed_point"] == "True"
        _, out, _ = run(["erasure", "--s", "0.02"], capsys)
        assert rows(out)[0]["fixed_point"] == "False"

    def test_json_mirrors_csv(self, capsys):
        _, out_csv, _ = run(["concat"], capsys)
        _, out_json, _ = run(["concat", "--format", "json"], capsys)
        doc = json.loads(out_json)
        assert doc["command"] == "concat"
        assert [str(r["f"]) for r in doc["rows"]] == [r["f"] for r in rows(out_csv)]

    def test_threshold_small(self, capsys):
        code, out, err = run(["threshold", "--trials", "300", "--f-grid", "0.25,0.6"], capsys)
        table = rows(out)
        assert code == 0 and len(table) == 2
        assert round(float(table[0]["analytic"]), 6) == 0.134615
        assert "analytic threshold 0.5" in err

    def test_threshold_single_trial(self, capsys):
        code, out, _ = run(["threshold", "--trials", "1"], capsys)
        assert code == 0 and len(rows(out)) == 6

    def test_montecarlo_row(self, capsys):
        code, out, _ = run(["montecarlo", "--trials", "200", "--f", "0.25"], capsys)
        (row,) = rows(out)
        assert code == 0 and {"rate", "analytic", "z", "tally"} <= set(row)


class TestReproducibility:
    def test_byte_identical(self, capsys, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            cli.main(["montecarlo", "--trials", "150", "--f", "0.3", "--seed", "4", "--out", str(p)])
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("LOQC_SEED", "4")
        _, from_env, _ = run(["montecarlo", "--trials", "150", "--f", "0.3"], capsys)
        _, explicit, _ = run(["montecarlo", "--trials", "150", "--f", "0.3", "--seed", "4"], capsys)
        _, other, _ = run(["montecarlo", "--trials", "150", "--f", "0.3", "--seed", "5"], capsys)
        assert from_env == explicit
        assert rows(from_env)[0]["seed"] == "4"
        assert other != explicit

    def test_timestamp_header_optional(self, capsys):
        _, plain, _ = run(["erasure"], capsys)
        _, stamped, _ = run(["erasure", "--timestamp"], capsys)
        assert stamped.startswith("# generated ")
        assert stamped.split("\n", 1)[1] == plain

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "loqc", "concat"], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.startswith("level,f,q,p")


def test_printed_constants_alias(capsys):
    _, a, _ = run(["resources", "--printed-constants"], capsys)
    _, b, _ = run(["resources", "--paper-arithmetic"], capsys)
    assert a == b
