"""The batch verification harness: determinism, exit codes, witnesses."""

import json

import pytest

from spinalg import cartan
from spinalg import cli
from spinalg.suites import KNOWN_ANCHORS


def small_config(**extra):
    base = dict(
        suite="transfer",
        n_min=1,
        n_max=2,
        seed=5,
        samples=10,
        out=None,
        fail_fast=False,
    )
    base.update(extra)
    return cli.SuiteConfig(**base)


class TestReports:
    def test_byte_identical_documents(self):
        a = cli.run_suite(small_config()).to_document()
        b = cli.run_suite(small_config()).to_document()
        assert a == b

    def test_document_shape_and_anchors(self):
        report = cli.run_suite(small_config())
        doc = json.loads(report.to_document())
        assert doc["tool"]["name"] == "spinalg"
        keys = [(c["suite"], c["n"], c["name"]) for c in doc["checks"]]
        assert keys == sorted(keys)
        for c in doc["checks"]:
            assert c["status"] in ("pass", "fail", "skipped")
            assert c["anchor"] in KNOWN_ANCHORS
            if c["status"] == "skipped":
                assert c["witness"]

    def test_empty_check_list_is_valid(self):
        report = cli.Report(tool_version="0.0", config=small_config(), checks=())
        doc = json.loads(report.to_document())
        assert doc["checks"] == []
        assert doc["summary"] == {"pass": 0, "fail": 0, "skipped": 0}

    def test_emit_to_file(self, tmp_path):
        path = tmp_path / "report.json"
        report = cli.run_suite(small_config())
        cli.emit_report(report, str(path))
        assert json.loads(path.read_text())["summary"]["fail"] == 0


class TestExitCodes:
    def test_all_pass(self, tmp_path, capsys):
        rc = cli.main(
            [
                "--suite",
                "transfer",
                "--n-max",
                "2",
                "--samples",
                "5",
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert rc == cli.EXIT_OK

    def test_unknown_suite(self):
        assert cli.main(["--suite", "nonsense"]) == cli.EXIT_CONFIG

    def test_bad_range(self):
        assert cli.main(["--n-min", "3", "--n-max", "2"]) == cli.EXIT_CONFIG
        assert cli.main(["--n-max", "9"]) == cli.EXIT_CONFIG

    def test_corrupted_sign_produces_witness(self, tmp_path, monkeypatch):
        # simulate a broken build: flip the diagram sign convention
        original = cartan._parity_sign
        monkeypatch.setattr(cartan, "_parity_sign", lambda n, p: -original(n, p))
        rc = cli.main(
            [
                "--suite",
                "cartan",
                "--n-min",
                "2",
                "--n-max",
                "2",
                "--samples",
                "4",
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert rc == cli.EXIT_FAILURES
        doc = json.loads((tmp_path / "r.json").read_text())
        failing = [c for c in doc["checks"] if c["status"] == "fail"]
        assert failing
        assert all(c["witness"] for c in failing)

    def test_fail_fast_stops_early(self, tmp_path, monkeypatch):
        original = cartan._parity_sign
        monkeypatch.setattr(cartan, "_parity_sign", lambda n, p: -original(n, p))
        rc = cli.main(
            [
                "--suite",
                "cartan",
                "--n-min",
                "2",
                "--n-max",
                "2",
                "--samples",
                "4",
                "--fail-fast",
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert rc == cli.EXIT_FAILURES
        doc = json.loads((tmp_path / "r.json").read_text())
        assert doc["summary"]["fail"] == 1
        # stopped before finishing the six-check suite
        assert len(doc["checks"]) < 6


class TestSkipping:
    def test_out_of_domain_levels_are_skipped(self):
        report = cli.run_suite(
            cli.SuiteConfig(
                suite="theorem61",
                n_min=1,
                n_max=2,
                seed=1,
                samples=2,
                out=None,
                fail_fast=False,
            )
        )
        assert report.counts["fail"] == 0
        assert report.counts["pass"] == 0
        assert report.counts["skipped"] > 0
