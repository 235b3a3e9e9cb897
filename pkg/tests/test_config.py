"""
Configuration layering and validation
"""

from fractions import Fraction
from pathlib import Path

import pytest

from periodplan import NOT_GIVEN, ConfigError, load_config
from periodplan._version import __version__


def write_config(tmp_path, text):
    path = tmp_path / "periodplan.conf"
    path.write_text(text)
    return path


class TestDefaults:
    """Test the built-in configuration"""

    def test_defaults(self):
        config = load_config(environ={})
        assert config.budget_seconds == 30.0
        assert config.pca_components == 23
        assert config.basepoints == ["0", "1"]
        assert config.network.mlp_widths == [500, 500, 500, 100, 100]
        assert config.log_level == "WARNING"

    def test_store_paths(self):
        config = load_config(overrides={"workdir": "runs"}, environ={})
        assert config.path("labels_path") == Path("runs") / "labels.jsonl"
        assert config.path("models_dir") == Path("runs") / "models"
        custom = load_config(overrides={"labels_path": "/tmp/l.jsonl"}, environ={})
        assert custom.path("labels_path") == Path("/tmp/l.jsonl")


class TestLayering:
    """Test file < environment < explicit override"""

    def test_precedence(self, tmp_path):
        path = write_config(tmp_path, "# run settings\nseed = 1\nbudget_seconds = 10\n\nworkers = 2\n")
        environ = {"PERIODPLAN_SEED": "2", "PERIODPLAN_WORKERS": "3", "HOME": "/root"}
        config = load_config(path, overrides={"seed": 4}, environ=environ)
        assert config.seed == 4
        assert config.workers == 3
        assert config.budget_seconds == 10.0

    def test_not_given_overrides_are_skipped(self):
        config = load_config(overrides={"seed": NOT_GIVEN, "workers": None}, environ={"PERIODPLAN_SEED": "5"})
        assert config.seed == 5
        assert config.workers == 1

    def test_process_environment(self, monkeypatch):
        monkeypatch.setenv("PERIODPLAN_TOP_N", "3")
        assert load_config().top_n == 3

    def test_network_keys_and_lists(self, tmp_path):
        path = write_config(
            tmp_path,
            "network.gamma = 0.01\nnetwork.mlp_widths = 8, 4\nbasepoints = 0, 1/2, -3\n",
        )
        config = load_config(path, environ={"PERIODPLAN_NETWORK_EPOCHS": "7"})
        assert config.network.gamma == 0.01
        assert config.network.mlp_widths == [8, 4]
        assert config.network.epochs == 7
        assert config.network.batch_size == 32
        assert config.basepoint_values() == [Fraction(0), Fraction(1, 2), Fraction(-3)]

    def test_log_level_is_normalized(self):
        assert load_config(overrides={"log_level": "debug"}, environ={}).log_level == "DEBUG"


class TestValidation:
    """Test rejected configurations"""

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as exc_info:
            load_config(overrides={"budget": 3}, environ={})
        assert "budget" in exc_info.value.message

    def test_unknown_network_key(self):
        with pytest.raises(ConfigError):
            load_config(environ={"PERIODPLAN_NETWORK_LEARNING_RATE": "0.1"})

    @pytest.mark.parametrize(
        "overrides",
        [
            {"budget_seconds": 0},
            {"alpha": 1.0},
            {"workers": 0},
            {"isolation": "container"},
            {"log_level": "LOUD"},
            {"basepoints": ["1/0"]},
            {"basepoints": []},
        ],
    )
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigError):
            load_config(overrides=overrides, environ={})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.conf", environ={})

    def test_bad_line_is_located(self, tmp_path):
        path = write_config(tmp_path, "seed = 1\nworkers 2\n")
        with pytest.raises(ConfigError) as exc_info:
            load_config(path, environ={})
        assert f"{path}:2" in exc_info.value.message


class TestProvenance:
    """Test the configuration fingerprint"""

    def test_fingerprint_is_stable(self):
        a = load_config(overrides={"seed": 3}, environ={})
        b = load_config(environ={"PERIODPLAN_SEED": "3"})
        assert a.fingerprint() == b.fingerprint()
        assert a.fingerprint() != load_config(environ={}).fingerprint()
        assert len(a.fingerprint()) == 64

    def test_provenance(self):
        config = load_config(environ={})
        assert config.provenance("search") == {
            "command": "search",
            "config_hash": config.fingerprint(),
            "version": __version__,
        }
