"""Tests for settings loading."""

from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from instanton_calculus.config import Settings, load_settings, load_settings_from_dict


class TestSettings:
    def test_defaults(self) -> None:
        settings = Settings()
        assert settings.database_path is None
        assert settings.nu_bound == 99
        assert (settings.h_max, settings.k_max, settings.jobs) == (12, 5, 1)
        assert settings.output_format == "human"
        assert settings.verbose is False

    def test_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("INSTANTON_CALCULUS_NU_BOUND", "7")
        monkeypatch.setenv("INSTANTON_CALCULUS_OUTPUT_FORMAT", "tsv")
        settings = Settings()
        assert settings.nu_bound == 7
        assert settings.output_format == "tsv"

    def test_user_path_expanded(self) -> None:
        assert Settings(database_path="~/knots.json").database_path == Path.home() / "knots.json"

    @pytest.mark.parametrize(
        "data",
        [{"jobs": 0}, {"nu_bound": 0}, {"output_format": "xml"}],
    )
    def test_invalid(self, data: dict) -> None:
        with pytest.raises(ValidationError):
            load_settings_from_dict(data)


class TestLoadSettings:
    def test_without_file(self) -> None:
        assert load_settings(None) == Settings()

    def test_relative_database_path(self, tmp_path: Path) -> None:
        conf_dir = tmp_path / "conf"
        conf_dir.mkdir()
        config = conf_dir / "config.yaml"
        config.write_text("database_path: knots.json\nh_max: 6\n")
        settings = load_settings(config)
        assert settings.database_path == (conf_dir / "knots.json").resolve()
        assert settings.h_max == 6

    def test_environment_beats_yaml(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        config = tmp_path / "config.yaml"
        config.write_text("nu_bound: 5\njobs: 3\n")
        monkeypatch.setenv("INSTANTON_CALCULUS_NU_BOUND", "7")
        settings = load_settings(config)
        assert settings.nu_bound == 7
        assert settings.jobs == 3

    def test_empty_file(self, tmp_path: Path) -> None:
        config = tmp_path / "config.yaml"
        config.write_text("")
        assert load_settings(config) == Settings()

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError, match="Configuration file not found"):
            load_settings(tmp_path / "missing.yaml")

    def test_not_a_mapping(self, tmp_path: Path) -> None:
        config = tmp_path / "config.yaml"
        config.write_text("- a\n- b\n")
        with pytest.raises(ValueError, match="mapping"):
            load_settings(config)
