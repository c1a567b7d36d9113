import json
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..errors import InvalidInputError
from ..model.run_config import RunConfig
from ..utils.notifications import notification_manager


class ConfigError(InvalidInputError):
    """Exception raised for configuration-related errors."""


class ConfigManager:
    """Loads run configurations and merges command-line overrides into them."""

    @staticmethod
    def load_run_config(config_path: Path) -> RunConfig:
        """
        Load a RunConfig from a JSON file.

        Args:
            config_path: Path to the configuration file

        Returns:
            Validated RunConfig instance

        Raises:
            ConfigError: If loading or validation fails
        """
        json_data = ""
        try:
            if not config_path.exists():
                raise FileNotFoundError(f"Configuration file not found: {config_path}")
            if not config_path.is_file():
                raise IsADirectoryError(f"Configuration path is not a file: {config_path}")

            with open(config_path, encoding="utf-8") as f:
                json_data = f.read()

            run_config = RunConfig.model_validate_json(json_data)

            notification_manager.phase_separator("Configuration")
            notification_manager.success(
                f"[ConfigManager] Run config loaded from {config_path} "
                f"({len(run_config.model_fields_set)} parameter(s) set)"
            )
            return run_config

        except ValidationError as e:
            ConfigManager._handle_validation_error(e, config_path, json_data)
            error_msg = f"[ConfigManager] Invalid run config in {config_path}: {e}"
            raise ConfigError(error_msg) from e
        except json.JSONDecodeError as e:
            error_msg = f"[ConfigManager] Invalid JSON in configuration file {config_path}: {e}"
            raise ConfigError(error_msg) from e
        except Exception as e:
            error_msg = (
                f"[ConfigManager] Failed to load run config from {config_path}: {e}"
            )
            raise ConfigError(error_msg) from e

    @staticmethod
    def merge_overrides(base: RunConfig, overrides: dict[str, Any]) -> RunConfig:
        """
        Apply command-line values on top of a base configuration.

        Overrides equal to None mean "flag not given" and leave the base value.

        Raises:
            ConfigError: If the merged configuration is invalid
        """
        given = {key: value for key, value in overrides.items() if value is not None}
        merged = {**base.model_dump(exclude_unset=True), **given}
        try:
            run_config = RunConfig.model_validate(merged)
        except ValidationError as e:
            raise ConfigError(f"[ConfigManager] Invalid parameters: {e}") from e

        if given:
            notification_manager.debug(
                f"[ConfigManager] Command-line overrides: {', '.join(sorted(given))}"
            )
        return run_config

    @staticmethod
    def resolve(config_file: str | None, overrides: dict[str, Any]) -> RunConfig:
        """Load the optional config file, then apply the overrides."""
        base = (
            ConfigManager.load_run_config(Path(config_file))
            if config_file is not None
            else RunConfig()
        )
        return ConfigManager.merge_overrides(base, overrides)

    @staticmethod
    def _handle_validation_error(
        error: ValidationError, config_path: Path, json_data: str
    ) -> None:
        """
        Show the JSON lines around the first unrecognized parameter.

        Args:
            error: The ValidationError that occurred
            config_path: Path to the configuration file
            json_data: The raw JSON data that was being validated
        """
        for err in error.errors():
            location = err.get("loc", ())
            if err.get("type") == "extra_forbidden" and location:
                field_name = str(location[-1])
                ConfigManager._show_json_context(
                    json_data,
                    field_name,
                    f"Unrecognized parameter '{field_name}'",
                    config_path,
                )
                break

    @staticmethod
    def _show_json_context(
        json_data: str, search_term: str, error_msg: str, config_path: Path
    ) -> None:
        json_lines = json_data.split("\n")
        target = next(
            (i for i, line in enumerate(json_lines) if f'"{search_term}"' in line), None
        )
        if target is None:
            notification_manager.error(f"[ConfigManager] {error_msg} in {config_path}")
            return

        lines = [f"[ConfigManager] {error_msg} in {config_path}:"]
        for i in range(max(0, target - 2), min(len(json_lines), target + 3)):
            marker = "[bold red]>>>[/bold red]" if i == target else "   "
            lines.append(f"  {marker} [dim]{i + 1:3d}:[/dim] {json_lines[i]}")
        notification_manager.error("\n".join(lines))
