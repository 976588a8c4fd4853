import csv
import io
import json
import subprocess
import sys


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "coprime_census", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def payload(record: dict) -> dict:
    return {k: v for k, v in record.items() if k != "timestamp"}


class TestCount:
    def test_c24(self, tmp_path):
        res = run_cli("count", "--kind", "c", "--n", "24", "--no-cache", cwd=tmp_path)
        assert res.returncode == 0, res.stderr
        rec = json.loads(res.stdout)
        assert rec["value"] == "1142807773593600"
        assert rec["ratio"] == "2.3118"
        assert rec["kind"] == "c" and rec["n"] == 24 and rec["aux"] is None

    def test_a20(self, tmp_path):
        res = run_cli("count", "--kind", "a", "--n", "20", "--no-cache", cwd=tmp_path)
        assert res.returncode == 0
        assert json.loads(res.stdout)["value"] == "318695040"

    def test_c2(self, tmp_path):
        res = run_cli("count", "--kind", "c", "--n", "2", "--no-cache", cwd=tmp_path)
        assert json.loads(res.stdout)["value"] == "1"

    def test_methods_byte_identical(self, tmp_path):
        a = run_cli(
            "count", "--kind", "c", "--n", "12", "--no-cache", cwd=tmp_path
        )
        b = run_cli(
            "count",
            "--kind",
            "c",
            "--n",
            "12",
            "--method",
            "permanent",
            "--no-cache",
            cwd=tmp_path,
        )
        assert json.loads(a.stdout)["value"] == json.loads(b.stdout)["value"]

    def test_usage_error(self, tmp_path):
        res = run_cli("count", "--kind", "zz", "--n", "4", cwd=tmp_path)
        assert res.returncode == 2

    def test_missing_aux_is_usage_error(self, tmp_path):
        res = run_cli("count", "--kind", "ck", "--n", "6", "--no-cache", cwd=tmp_path)
        assert res.returncode == 2

    def test_capacity_refusal(self, tmp_path):
        res = run_cli(
            "count", "--kind", "c0", "--n", "45", "--no-cache", cwd=tmp_path
        )
        assert res.returncode == 3
        assert "ceiling" in res.stderr

    def test_dump_matrix(self, tmp_path):
        res = run_cli(
            "count",
            "--kind",
            "c0",
            "--n",
            "3",
            "--dump-matrix",
            "--no-cache",
            cwd=tmp_path,
        )
        lines = res.stdout.splitlines()
        assert lines[0] == "rows: 1 3 5"
        assert lines[1] == "cols: 1 2 3"
        assert lines[2:5] == ["111", "110", "111"]
        json.loads(lines[5])  # record still emitted


class TestCache:
    def test_round_trip_byte_identical(self, tmp_path):
        first = run_cli("count", "--kind", "c0", "--n", "9", cwd=tmp_path)
        assert first.returncode == 0
        second = run_cli("count", "--kind", "c0", "--n", "9", cwd=tmp_path)
        assert second.returncode == 0
        # cache hit re-emits the stored record verbatim
        assert json.loads(first.stdout) == json.loads(second.stdout)
        cache_file = tmp_path / "coprime-census.cache.jsonl"
        assert cache_file.exists()
        stored = json.loads(cache_file.read_text().strip())
        assert stored["value"] == "59616"

    def test_verify_cache_recomputes(self, tmp_path):
        run_cli("count", "--kind", "c0", "--n", "8", cwd=tmp_path)
        res = run_cli(
            "count", "--kind", "c0", "--n", "8", "--verify-cache", cwd=tmp_path
        )
        assert res.returncode == 0
        assert json.loads(res.stdout)["value"] == "9552"

    def test_verify_cache_detects_corruption(self, tmp_path):
        run_cli("count", "--kind", "c0", "--n", "8", cwd=tmp_path)
        cache_file = tmp_path / "coprime-census.cache.jsonl"
        text = cache_file.read_text().replace("9552", "9553")
        cache_file.write_text(text)
        res = run_cli(
            "count", "--kind", "c0", "--n", "8", "--verify-cache", cwd=tmp_path
        )
        assert res.returncode == 1
        assert "mismatch" in res.stderr


class TestTable:
    def test_t1_csv(self, tmp_path):
        res = run_cli(
            "table", "--which", "t1", "--max", "12", "--no-cache", cwd=tmp_path
        )
        rows = list(csv.DictReader(io.StringIO(res.stdout)))
        assert res.stdout.splitlines()[0] == "n,value,ratio"
        assert len(rows) == 12
        assert rows[11] == {"n": "12", "value": "33805440", "ratio": "2.3118"}

    def test_t2_rows(self, tmp_path):
        res = run_cli(
            "table", "--which", "t2", "--max", "21", "--no-cache", cwd=tmp_path
        )
        rows = {r["n"]: r for r in csv.DictReader(io.StringIO(res.stdout))}
        assert rows["21"]["value"] == "12474417291264"
        assert rows["21"]["ratio"] == "2.0648"

    def test_t3_rows(self, tmp_path):
        res = run_cli(
            "table", "--which", "t3", "--max", "27", "--no-cache", cwd=tmp_path
        )
        rows = {r["n"]: r for r in csv.DictReader(io.StringIO(res.stdout))}
        assert "23" not in rows  # primes are skipped
        assert rows["27"]["value"] == "132879856582656"
        assert rows["27"]["ratio"] == "3.2758"

    def test_csv_and_json_carry_identical_data(self, tmp_path):
        c = run_cli("table", "--which", "t1", "--max", "6", "--no-cache", cwd=tmp_path)
        j = run_cli(
            "table",
            "--which",
            "t1",
            "--max",
            "6",
            "--format",
            "json",
            "--no-cache",
            cwd=tmp_path,
        )
        csv_rows = [
            {"n": int(r["n"]), "value": r["value"], "ratio": r["ratio"]}
            for r in csv.DictReader(io.StringIO(c.stdout))
        ]
        json_rows = [json.loads(line) for line in j.stdout.splitlines()]
        assert csv_rows == json_rows


class TestDist:
    def test_density_row(self, tmp_path):
        res = run_cli(
            "dist",
            "--alpha",
            "0.5",
            "--n",
            "100000",
            "--format",
            "json",
            "--no-cache",
            cwd=tmp_path,
        )
        row = json.loads(res.stdout)
        assert row["alpha"] == "1/2"
        assert 0.018 < row["density"] < 0.028

    def test_second_moment_mode(self, tmp_path):
        res = run_cli(
            "dist", "--second-moment", "--n", "100000", "--no-cache", cwd=tmp_path
        )
        data = json.loads(res.stdout)
        assert data["ratio_to_n"] < 1.78

    def test_top_set_mode(self, tmp_path):
        res = run_cli(
            "dist", "--top-set", "--n", "10000", "--no-cache", cwd=tmp_path
        )
        assert res.returncode == 0
        assert json.loads(res.stdout)["verdict"] == "EQUAL"

    def test_sieve_limit_refusal(self, tmp_path):
        res = run_cli(
            "dist",
            "--alpha",
            "0.5",
            "--n",
            "60000",
            "--sieve-limit",
            "100000",
            "--no-cache",
            cwd=tmp_path,
        )
        assert res.returncode == 3


class TestVerify:
    def test_constants_suite(self, tmp_path):
        res = run_cli("verify", "--suite", "constants", "--no-cache", cwd=tmp_path)
        assert res.returncode == 0, res.stdout + res.stderr
        assert "PASS c3" in res.stdout and "PASS c5" in res.stdout

    def test_bounds_suite(self, tmp_path):
        res = run_cli("verify", "--suite", "bounds", "--no-cache", cwd=tmp_path)
        assert res.returncode == 0
        for name in ("esum-dyadic", "esum-middle", "esum-tail", "assembly"):
            assert f"PASS {name}" in res.stdout

    def test_tables_suite_prefix(self, tmp_path):
        res = run_cli(
            "verify", "--suite", "tables", "--max", "12", "--no-cache", cwd=tmp_path
        )
        assert res.returncode == 0, res.stdout
        assert "verification PASSED" in res.stdout


class TestDeterminism:
    def test_threads_do_not_change_payload(self, tmp_path):
        outs = []
        for t in ("1", "2", "8"):
            res = run_cli(
                "count",
                "--kind",
                "c0",
                "--n",
                "16",
                "--threads",
                t,
                "--no-cache",
                cwd=tmp_path,
            )
            outs.append(payload(json.loads(res.stdout)))
        assert outs[0] == outs[1] == outs[2]
