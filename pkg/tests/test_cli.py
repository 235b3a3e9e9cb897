"""
Command-line front end against a scratch workdir
"""

import json

import pytest

from periodplan._cli import EXIT_ERROR, EXIT_FAIL, EXIT_OK, main

pytestmark = pytest.mark.integration


def run(workdir, *argv):
    return main(["--workdir", str(workdir), *argv])


class TestSearchCommand:
    """Test search and report on the bundled toy problem"""

    def test_toy_search(self, workdir, capsys):
        assert run(workdir, "search", "--toy") == EXIT_OK
        report = json.loads((workdir / "report.json").read_text())
        assert report["status"] == "success"
        assert report["paths"] == [["a", "c", "b"]]
        assert report["provenance"]["command"] == "search"
        printed = json.loads(capsys.readouterr().out)
        assert printed["paths"] == [["a", "c", "b"]]
        assert (workdir / "checkpoint.jsonl").exists()

    def test_scored_search_skips_slow_edge(self, workdir):
        assert run(workdir, "search", "--toy", "--scored") == EXIT_OK
        report = json.loads((workdir / "report.json").read_text())
        assert report["counts"]["attempted"] == 2
        assert report["counts"]["timeouts"] == 0

    def test_threshold_failure(self, workdir, capsys):
        assert run(workdir, "search", "--toy", "--threshold", "0.5") == EXIT_FAIL
        capsys.readouterr()
        assert run(workdir, "report") == EXIT_FAIL
        assert "status: fail" in capsys.readouterr().out

    def test_report(self, workdir, capsys):
        run(workdir, "search", "--toy", "--output", str(workdir / "toy.json"))
        capsys.readouterr()
        assert run(workdir, "report", "--input", str(workdir / "toy.json")) == EXIT_OK
        out = capsys.readouterr().out
        assert "path: a -> c -> b" in out
        assert "status: success" in out

    def test_resume(self, workdir):
        assert run(workdir, "search", "--toy") == EXIT_OK
        first = json.loads((workdir / "report.json").read_text())
        assert run(workdir, "search", "--toy", "--resume") == EXIT_OK
        second = json.loads((workdir / "report.json").read_text())
        assert second["counts"]["attempted"] == first["counts"]["attempted"]
        lines = (workdir / "checkpoint.jsonl").read_text().splitlines()
        assert len(lines) == first["counts"]["attempted"]


class TestOtherCommands:
    """Test store-backed commands and error exits"""

    def test_enumerate_writes_sidecar(self, workdir, capsys):
        assert run(workdir, "enumerate", "--k", "1") == EXIT_OK
        assert json.loads(capsys.readouterr().out)["vertices"] == 0
        meta = json.loads((workdir / "vertices.jsonl.meta.json").read_text())
        assert meta["command"] == "enumerate"
        assert len(meta["config_hash"]) == 64

    def test_missing_label_store(self, workdir, capsys):
        assert run(workdir, "compact") == EXIT_ERROR
        assert capsys.readouterr().err.startswith("error: ")

    def test_missing_report(self, workdir):
        assert run(workdir, "report") == EXIT_ERROR

    def test_unknown_config_key(self, workdir, tmp_path, capsys):
        path = tmp_path / "bad.conf"
        path.write_text("colour = blue\n")
        assert main(["--config", str(path), "--workdir", str(workdir), "search", "--toy"]) == EXIT_ERROR
        assert "unknown configuration keys" in capsys.readouterr().err

    def test_usage_error(self):
        with pytest.raises(SystemExit):
            main(["search", "--scored", "--random"])
