"""End-to-end CLI contract: subcommands, formats, exit codes 0/1/2, schema
validation of JSON outputs, and format agreement on numeric values."""

from __future__ import annotations

import csv
import io
import json
import shutil
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from cddlint.cli import main

from conftest import FIXTURES, LISTING_PATH, ORACLE_DIR

SCHEMA_DIR = Path(__file__).parent.parent / "src" / "cddlint" / "schemas"

CORPUS_CONFIG = json.dumps({
    "internal_types": ["Internal*"],
    "external_types": ["External*", "Optional"],
})

LISTING_CONFIG = json.dumps({
    "internal_types": [
        "CertificateRepository", "TrainingCompleted", "Student",
        "CertificateResponse", "Training",
    ],
})


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def corpus_dir(tmp_path, monkeypatch) -> Path:
    target = tmp_path / "corpus"
    shutil.copytree(ORACLE_DIR, target)
    (target / "manifest.json").unlink()
    monkeypatch.chdir(target)
    return target


def validate(document: dict, schema_name: str) -> None:
    schema = json.loads((SCHEMA_DIR / schema_name).read_text())
    jsonschema.validate(document, schema)


class TestInit:
    def test_creates_config(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(capsys, "init", ".")
        assert code == 0
        assert (tmp_path / "cdd.json").is_file()

    def test_refuses_to_clobber(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert run(capsys, "init", ".")[0] == 0
        code, _, err = run(capsys, "init", ".")
        assert code == 2
        assert "already exists" in err

    def test_force_overwrites(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        run(capsys, "init", ".")
        assert run(capsys, "init", ".", "--force")[0] == 0

    def test_round_trip_on_oracle_corpus(self, corpus_dir, capsys):
        assert run(capsys, "init", ".")[0] == 0
        code, out, err = run(capsys, "check", ".")
        assert code == 0, err


class TestCheck:
    def test_under_limit_corpus_exits_zero(self, corpus_dir, capsys):
        # default rules: no coupling patterns configured, everything <= 10
        code, out, _ = run(capsys, "check", ".")
        assert code == 0
        assert "0 over limit" in out

    def test_over_limit_unit_exits_one_and_is_listed(self, corpus_dir, capsys):
        (corpus_dir / "cdd.json").write_text(CORPUS_CONFIG)
        code, out, _ = run(capsys, "check", ".")
        assert code == 1
        assert "dto/BigDto.java:BigDto: 20 ICPs (limit 10)" in out
        assert "internal_coupling 10" in out

    def test_fail_on_never(self, corpus_dir, capsys):
        (corpus_dir / "cdd.json").write_text(CORPUS_CONFIG)
        assert run(capsys, "check", ".", "--fail-on", "never")[0] == 0

    def test_dto_override_flips_verdict(self, corpus_dir, capsys):
        config = json.loads(CORPUS_CONFIG)
        config["limit_overrides"] = [{"pattern": "**/dto/**", "limit": 20}]
        (corpus_dir / "cdd.json").write_text(json.dumps(config))
        code, out, _ = run(capsys, "check", ".")
        assert code == 0
        assert "0 over limit" in out

    def test_listing_json_report(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        shutil.copy(LISTING_PATH, tmp_path / "CertificateDetailsController.java")
        (tmp_path / "cdd.json").write_text(LISTING_CONFIG)
        code, out, _ = run(capsys, "check", ".", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        validate(doc, "check_report.schema.json")
        [unit] = doc["units"]
        assert unit["total"] == 8
        assert unit["over_limit"] is False
        assert unit["subtotals"]["internal_coupling"] == 6
        assert unit["drift_status"] == "in_sync"

    def test_formats_agree_on_numbers(self, corpus_dir, capsys):
        (corpus_dir / "cdd.json").write_text(CORPUS_CONFIG)
        _, json_out, _ = run(capsys, "check", ".", "--format", "json")
        _, csv_out, _ = run(capsys, "check", ".", "--format", "csv")
        _, text_out, _ = run(capsys, "check", ".", "--format", "text")
        doc = json.loads(json_out)
        by_type = {u["type"]: u for u in doc["units"]}
        for row in csv.DictReader(io.StringIO(csv_out)):
            unit = by_type[row["type"]]
            assert Fraction(row["total"]) == Fraction(unit["total"])
            assert Fraction(row["limit"]) == Fraction(unit["limit"])
            assert (row["over_limit"] == "true") == unit["over_limit"]
        assert "BigDto: 20 ICPs (limit 10)" in text_out
        assert doc["summary"]["over_limit_count"] == 1

    def test_half_point_over_limit_listed(self, tmp_path, capsys, monkeypatch):
        # 5 ifs (10.0) + one external declaration (0.5) = 10.5 > 10
        monkeypatch.chdir(tmp_path)
        guards = "\n".join(f"    if (x{i} > 0) {{}}" for i in range(5))
        params = ", ".join(f"int x{i}" for i in range(5))
        (tmp_path / "Edge.java").write_text(
            f"class Edge {{\n  void f({params}) {{\n"
            f"    ExternalBox b = make();\n{guards}\n  }}\n}}\n"
        )
        (tmp_path / "cdd.json").write_text('{"external_types": ["External*"]}')
        code, out, _ = run(capsys, "check", ".")
        assert code == 1
        assert "Edge.java:Edge: 10.5 ICPs (limit 10)" in out

    def test_parse_failure_reported_non_fatal(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "Bad.java").write_text("not a compilation unit")
        (tmp_path / "Ok.java").write_text("class Ok {}")
        code, out, _ = run(capsys, "check", ".")
        assert code == 0
        assert "1 parse failures" in out

    def test_missing_path_exits_two(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, _, err = run(capsys, "check", "nope/")
        assert code == 2

    def test_bad_config_exits_two(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "cdd.json").write_text('{"bogus_key": 1}')
        (tmp_path / "A.java").write_text("class A {}")
        code, _, err = run(capsys, "check", ".")
        assert code == 2
        assert "bogus_key" in err

    def test_missing_explicit_config_exits_two(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, _, err = run(capsys, "check", ".", "--config", "absent.json")
        assert code == 2

    def test_env_config_fallback(self, corpus_dir, capsys, monkeypatch):
        cfg = corpus_dir / "env-config.json"
        cfg.write_text(CORPUS_CONFIG)
        monkeypatch.setenv("CDD_CONFIG", str(cfg))
        code, out, _ = run(capsys, "check", ".")
        assert code == 1  # BigDto goes over the limit under the env config


class TestReconcile:
    def test_in_sync_corpus_exits_zero(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        shutil.copy(LISTING_PATH, tmp_path / "C.java")
        (tmp_path / "cdd.json").write_text(LISTING_CONFIG)
        code, out, _ = run(capsys, "reconcile", ".", "--fail-on", "drift")
        assert code == 0
        assert "0 drifted" in out

    def test_drift_detected_and_fixed(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        drifted = LISTING_PATH.read_text().replace("@ICP(8)", "@ICP(7)")
        (tmp_path / "C.java").write_text(drifted)
        (tmp_path / "cdd.json").write_text(LISTING_CONFIG)

        code, out, _ = run(capsys, "reconcile", ".", "--fail-on", "drift")
        assert code == 1
        assert "drifted: declared 7, computed 8 (delta +1)" in out

        code, out, _ = run(capsys, "reconcile", ".", "--fix")
        assert code == 0
        assert "1 files changed" in out
        assert "@ICP(8)" in (tmp_path / "C.java").read_text()

        code, out, _ = run(capsys, "reconcile", ".", "--fix")
        assert code == 0
        assert "0 files changed" in out

    def test_drift_json_validates(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "A.java").write_text("class A { void f(boolean x) { if (x) {} } }")
        code, out, _ = run(capsys, "reconcile", ".", "--format", "json")
        doc = json.loads(out)
        validate(doc, "drift_report.schema.json")
        assert doc["units"][0]["status"] == "unannotated"

    def test_rewrite_conflict_exits_one(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "A.java").write_text(
            "@ICP(1)\n@ICP(2)\nclass A { void f(boolean x) { if (x) {} } }\n"
        )
        code, _, err = run(capsys, "reconcile", ".", "--fix")
        assert code == 1
        assert "duplicate @ICP" in err


class TestHistory:
    def test_repo_mode_writes_golden_csv(self, history_repo, tmp_path, capsys,
                                         monkeypatch):
        from test_history import expected_csv

        repo, ids = history_repo
        out_dir = tmp_path / "out"
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"internal_types": ["Internal*"]}))
        monkeypatch.chdir(tmp_path)
        code, out, err = run(
            capsys, "history", str(repo), "--config", str(cfg),
            "--output-dir", str(out_dir),
        )
        assert code == 0, err
        got = (out_dir / "cdd_series.csv").read_text()
        assert got == expected_csv(ids)
        doc = json.loads((out_dir / "cdd_series.json").read_text())
        validate(doc, "series_report.schema.json")
        assert len(doc["snapshots"]) == 5

    def test_snapshot_mode_matches_repo_mode(self, history_repo,
                                             history_snapshot_dir, tmp_path,
                                             capsys, monkeypatch):
        repo, _ = history_repo
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"internal_types": ["Internal*"]}))
        monkeypatch.chdir(tmp_path)
        run(capsys, "history", str(repo), "--config", str(cfg),
            "--output-dir", "a")
        code, _, err = run(
            capsys, "history", "--snapshots", str(history_snapshot_dir),
            "--config", str(cfg), "--output-dir", "b",
        )
        assert code == 0, err
        assert (tmp_path / "a" / "cdd_series.csv").read_text() == \
            (tmp_path / "b" / "cdd_series.csv").read_text()

    def test_range_limits_rows(self, history_repo, tmp_path, capsys, monkeypatch):
        repo, _ = history_repo
        monkeypatch.chdir(tmp_path)
        code, _, _ = run(capsys, "history", str(repo), "--range", "2",
                         "--output-dir", "out")
        assert code == 0
        rows = (tmp_path / "out" / "cdd_series.csv").read_text().splitlines()
        assert len(rows) == 3  # header + 2 data rows

    def test_missing_repo_exits_two(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, _, err = run(capsys, "history", "missing-repo")
        assert code == 2
        assert "missing-repo" in err


class TestInstalledScript:
    def test_console_entry_point(self):
        import subprocess

        proc = subprocess.run(["cddlint", "--help"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "reconcile" in proc.stdout and "history" in proc.stdout
