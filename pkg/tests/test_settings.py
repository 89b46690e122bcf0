from pathlib import Path

import pytest
from pydantic import ValidationError

from src.PSICM.certify.engine import Method
from src.PSICM.config import settings as settings_module
from src.PSICM.config.run_config import Command, GridSpec, build_run_config, parse_config_file
from src.PSICM.config.settings import Settings, get_settings, reload_settings
from src.PSICM.core.errors import ConfigurationError
from src.PSICM.core.kernels import QuadratureConfig


class TestSettings:
    def test_defaults(self):
        s = Settings()
        assert s.LOG_LEVEL == "INFO"
        assert (s.GRID_MIN, s.GRID_MAX, s.GRID_POINTS) == (1e-2, 1e2, 13)
        assert s.CM_MAX_ORDER == 10
        assert s.CM_STEPS == [0.25, 1.0]
        assert s.IDENTITY_TOL == 1e-8
        assert s.DEFAULT_QUADRATURE == QuadratureConfig(abs_tol=1e-11, rel_tol=1e-10)
        assert s.is_configuration_valid()

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("GRID_POINTS", "7")
        monkeypatch.setenv("cm_steps", "[1.0, 0.5]")
        s = Settings()
        assert s.GRID_POINTS == 7
        assert s.CM_STEPS == [0.5, 1.0]

    def test_reload_rebinds_global(self, monkeypatch):
        monkeypatch.setenv("LOG_LEVEL", "debug")
        try:
            reloaded = reload_settings()
            assert get_settings() is reloaded
            assert settings_module.settings is reloaded
            assert reloaded.IS_DEBUG_MODE
        finally:
            monkeypatch.delenv("LOG_LEVEL")
            reload_settings()

    @pytest.mark.parametrize(
        "overrides",
        [
            {"LOG_LEVEL": "LOUD"},
            {"QUAD_ABS_TOL": 0.0},
            {"SMALL_T_CUTOFF": 1.0},
            {"MAX_SUBDIVISIONS": 0},
            {"GRID_MIN": -1.0},
            {"GRID_MIN": 2.0, "GRID_MAX": 1.0},
            {"CM_MAX_ORDER": 13},
            {"CM_STEPS": []},
        ],
    )
    def test_validators(self, overrides):
        with pytest.raises(ValidationError):
            Settings(**overrides)

    def test_cross_field_check(self):
        assert not Settings(GRID_POINTS=1).is_configuration_valid()
        assert not Settings(CM_GRID_POINTS=1).is_configuration_valid()


class TestRunConfig:
    def test_settings_defaults(self):
        cfg = build_run_config("eval")
        assert cfg.command is Command.EVAL
        assert cfg.grid == GridSpec(min=1e-2, max=1e2, points=13, log=True)
        assert cfg.alphas == [1.0]
        assert cfg.tol is None
        assert len(cfg.abscissae()) == 13

    def test_command_defaults(self):
        assert build_run_config("bounds").grid is None
        assert build_run_config("identities").tol == 1e-8
        certify = build_run_config("certify")
        assert (certify.grid.min, certify.grid.max, certify.grid.points) == (1e-3, 1e3, 60)
        assert certify.max_order == 10
        assert build_run_config("certify", {"method": "analytic"}).max_order == 8

    def test_flags_are_validated(self):
        cfg = build_run_config("certify", {"alpha": [1.5, -1.0], "steps": [1.0, 0.25], "order": 4})
        assert cfg.alphas == [1.5, -1.0]
        assert cfg.steps == [0.25, 1.0]
        assert cfg.max_order == 4

    @pytest.mark.parametrize(
        "command, flags, field",
        [
            ("eval", {"grid.min": -1.0}, "grid.min"),
            ("eval", {"grid.min": 5.0, "grid.max": 1.0}, "grid.max"),
            ("eval", {"grid.min": 1.0, "grid.max": 2.0, "grid.points": 1}, "grid.points"),
            ("certify", {"method": "analytic", "order": 9}, "order"),
            ("certify", {"order": 13}, "order"),
            ("certify", {"alpha": [float("nan")]}, "alpha"),
            ("certify", {"steps": [-1.0]}, "steps"),
            ("certify", {"method": "logarithmic"}, "method"),
            ("certify", {"method": "bogus"}, "method"),
            ("bogus", {}, "command"),
            ("identities", {"tol": 0.0}, "tol"),
            ("identities", {"quadrature.abs_tol": 0.0}, "quadrature.abs_tol"),
        ],
    )
    def test_errors_name_the_field(self, command, flags, field):
        with pytest.raises(ConfigurationError) as info:
            build_run_config(command, flags)
        assert info.value.field == field
        assert field in str(info.value)

    def test_single_point_grid(self):
        cfg = build_run_config("eval", {"grid.min": 1.0, "grid.max": 1.0, "grid.points": 1})
        assert cfg.abscissae() == [1.0]

    def test_partial_grid_for_bounds(self):
        cfg = build_run_config("bounds", {"grid.points": 5})
        assert cfg.grid == GridSpec(min=1e-2, max=1e2, points=5)

    def test_method_enum(self):
        assert build_run_config("certify", {"method": "analytic"}).method is Method.ANALYTIC


class TestConfigFile:
    def write(self, tmp_path: Path, text: str) -> Path:
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return path

    def test_parse(self, tmp_path):
        path = self.write(tmp_path, "# sweep\ngrid.min = 0.5\nalpha = -1, 0, 1  # three\n\nGRID.LOG = false\n")
        assert parse_config_file(path) == {"grid.min": "0.5", "alpha": ["-1", "0", "1"], "grid.log": "false"}

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigurationError) as info:
            parse_config_file(self.write(tmp_path, "colour = blue\n"))
        assert info.value.field == "colour"

    def test_malformed_line(self, tmp_path):
        with pytest.raises(ConfigurationError) as info:
            parse_config_file(self.write(tmp_path, "grid.min 0.5\n"))
        assert info.value.field == "config"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            parse_config_file(tmp_path / "absent.cfg")

    def test_precedence(self, tmp_path):
        path = self.write(tmp_path, "grid.min = 0.5\ngrid.points = 5\nalpha = 0, 1\n")
        cfg = build_run_config("eval", {"grid.points": 7}, config_file=path)
        assert cfg.grid.min == 0.5
        assert cfg.grid.max == 1e2
        assert cfg.grid.points == 7
        assert cfg.alphas == [0.0, 1.0]

    def test_invalid_file_value(self, tmp_path):
        with pytest.raises(ConfigurationError) as info:
            build_run_config("eval", config_file=self.write(tmp_path, "grid.points = many\n"))
        assert info.value.field == "grid.points"
