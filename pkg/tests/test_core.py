"""Configuration, validation, seeding and logging."""

import io
import logging
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from src.pipemeta.core import PipemetaConfig, RunConfig, derive_seed, load_config_file
from src.pipemeta.core.logging_utils import close_logging, get_component_logger, setup_logging
from src.pipemeta.core.validation import (
    ValidationError,
    validate_boolean_param,
    validate_enum_param,
    validate_existing_path,
    validate_feature_matrix,
    validate_integer_param,
    validate_label_vector,
    validate_ratio_param,
)

ENV_NAMES = [
    "PIPEMETA_SEED",
    "PIPEMETA_JOBS",
    "PIPEMETA_CLEAN_MODE",
    "PIPEMETA_SPLIT_RATIO",
    "PIPEMETA_ICA_MAX_ITER",
    "PIPEMETA_ICA_TOL",
    "PIPEMETA_MAX_MATRIX_BYTES",
    "PIPEMETA_LOG_DIR",
    "LOG_LEVEL",
    "LOG_FORMAT",
]


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


class TestPipemetaConfig:
    def test_defaults(self, clean_env):
        config = PipemetaConfig()
        assert config.seed is None
        assert config.jobs == 1
        assert config.clean_mode == "pre-split"
        assert config.split_ratio == 0.7
        assert config.ica_max_iter == 200
        assert config.log_dir is None

    def test_reads_environment(self, clean_env):
        clean_env.setenv("PIPEMETA_SEED", "7")
        clean_env.setenv("PIPEMETA_JOBS", "4")
        clean_env.setenv("PIPEMETA_CLEAN_MODE", "POST-SPLIT")
        config = PipemetaConfig()
        assert (config.seed, config.jobs, config.clean_mode) == (7, 4, "post-split")
        assert config.get_settings_info()["seed"] == 7

    @pytest.mark.parametrize("name,value", [
        ("PIPEMETA_CLEAN_MODE", "sideways"),
        ("LOG_LEVEL", "CHATTY"),
        ("PIPEMETA_JOBS", "0"),
        ("PIPEMETA_ICA_MAX_ITER", "0"),
        ("PIPEMETA_MAX_MATRIX_BYTES", "0"),
        ("PIPEMETA_SPLIT_RATIO", "1.0"),
        ("PIPEMETA_SEED", "seven"),
    ])
    def test_rejects_bad_values(self, clean_env, name, value):
        clean_env.setenv(name, value)
        with pytest.raises(ValueError):
            PipemetaConfig()


class TestConfigFile:
    def test_flag_and_plain_keys_map_to_destinations(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("--clean-mode=post-split\nseed=11\n# comment\nsplit_ratio=0.6\n", encoding="utf-8")
        assert load_config_file(path) == {"clean_mode": "post-split", "seed": "11", "split_ratio": "0.6"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="does not exist"):
            load_config_file(tmp_path / "absent.conf")


class TestRunConfig:
    def test_paths_must_be_distinct(self, tmp_path):
        with pytest.raises(PydanticValidationError, match="distinct"):
            RunConfig(input_paths={"results": tmp_path / "r.jsonl"}, out_paths={"out": tmp_path / "r.jsonl"})

    def test_data_dir_counts_as_a_path(self, tmp_path):
        with pytest.raises(PydanticValidationError):
            RunConfig(data_dir=tmp_path, out_paths={"out": tmp_path})

    @pytest.mark.parametrize("field,value", [
        ("jobs", 0),
        ("clean_mode", "whenever"),
        ("split_ratio", 0.0),
        ("metric", "squared"),
        ("label_comparator", "<"),
    ])
    def test_field_constraints(self, field, value):
        with pytest.raises(PydanticValidationError):
            RunConfig(**{field: value})

    def test_seed_required_for_randomized_commands(self):
        with pytest.raises(ValidationError, match="seed is required"):
            RunConfig().require_seed()
        assert RunConfig(seed=3).require_seed() == 3

    def test_frozen(self):
        config = RunConfig(seed=1)
        with pytest.raises(PydanticValidationError):
            config.seed = 2


class TestDeriveSeed:
    def test_deterministic_and_in_range(self):
        assert derive_seed(7, "iris") == derive_seed(7, "iris")
        assert 0 <= derive_seed(7, "iris") < 2**31 - 1

    def test_parts_matter(self):
        seeds = {derive_seed(7, "iris"), derive_seed(8, "iris"), derive_seed(7, "wine"), derive_seed(7, "iris", "split")}
        assert len(seeds) == 4

    def test_part_boundaries_matter(self):
        assert derive_seed("ab", "c") != derive_seed("a", "bc")


class TestValidators:
    def test_ratio(self):
        assert validate_ratio_param("0.25", "ratio") == 0.25
        for bad in (0, 1, -0.1, "x"):
            with pytest.raises(ValidationError):
                validate_ratio_param(bad, "ratio")

    def test_integer(self):
        assert validate_integer_param("5", "n", min_value=1) == 5
        with pytest.raises(ValidationError):
            validate_integer_param(True, "n")
        with pytest.raises(ValidationError, match="at least 1"):
            validate_integer_param(0, "n", min_value=1)

    def test_boolean(self):
        assert validate_boolean_param("yes", "flag") is True
        assert validate_boolean_param("OFF", "flag") is False
        with pytest.raises(ValidationError):
            validate_boolean_param("maybe", "flag")

    def test_enum(self):
        assert validate_enum_param("relative", ("relative", "absolute"), "metric") == "relative"
        with pytest.raises(ValidationError, match="relative, absolute"):
            validate_enum_param("squared", ("relative", "absolute"), "metric")

    def test_existing_path(self, tmp_path):
        (tmp_path / "f.csv").write_text("a\n1\n")
        assert validate_existing_path(tmp_path / "f.csv", "--results") == tmp_path / "f.csv"
        with pytest.raises(ValidationError, match="must be a directory"):
            validate_existing_path(tmp_path / "f.csv", "--data-dir", directory=True)
        with pytest.raises(ValidationError, match="does not exist"):
            validate_existing_path(tmp_path / "nope", "--results")

    def test_feature_matrix_names_the_bad_cell(self):
        with pytest.raises(ValidationError, match="row 1, column 0"):
            validate_feature_matrix([[1.0, 2.0], [np.nan, 3.0]])
        with pytest.raises(ValidationError, match="2-dimensional"):
            validate_feature_matrix([1.0, 2.0])
        assert validate_feature_matrix(np.zeros((0, 3)), min_rows=0).shape == (0, 3)

    def test_label_vector_length(self):
        with pytest.raises(ValidationError, match="expected 3"):
            validate_label_vector([0, 1], 3)


class TestLogging:
    def test_component_files_when_log_dir_set(self, clean_env, tmp_path):
        clean_env.setenv("PIPEMETA_LOG_DIR", str(tmp_path / "logs"))
        setup_logging(PipemetaConfig(), "DEBUG")
        get_component_logger("runner").info("runner line")
        get_component_logger("agents").warning("agents line")
        close_logging()
        assert "runner line" in (tmp_path / "logs" / "pipeline-runner.log").read_text()
        assert "agents line" in (tmp_path / "logs" / "agents.log").read_text()
        assert "runner line" not in (tmp_path / "logs" / "agents.log").read_text()

    def test_console_goes_to_stderr(self, clean_env, capsys):
        logger = setup_logging(PipemetaConfig(), "INFO")
        logger.info("hello from cli")
        captured = capsys.readouterr()
        assert "hello from cli" in captured.err
        assert captured.out == ""

    def test_level_override(self, clean_env):
        setup_logging(PipemetaConfig(), "ERROR")
        assert logging.getLogger("pipemeta.data").level == logging.ERROR

    def test_close_ignores_closed_console_stream(self, clean_env, tmp_path, monkeypatch):
        console = io.StringIO()
        monkeypatch.setattr("sys.stderr", console)
        clean_env.setenv("PIPEMETA_LOG_DIR", str(tmp_path / "logs"))
        setup_logging(PipemetaConfig(), "INFO")
        get_component_logger("runner").info("before close")
        console.close()

        close_logging()

        assert not logging.getLogger("pipemeta.runner").handlers
        assert "before close" in (tmp_path / "logs" / "pipeline-runner.log").read_text()
