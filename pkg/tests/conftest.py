"""
Pytest configuration and shared fixtures for maslov-kernel tests.

This module provides oscillator configurations, test packets, JSON helpers and
a notification recorder shared by the test modules.
"""

# pyright: basic

import importlib
import json
import math
import tempfile
from collections.abc import Callable, Generator
from pathlib import Path
from typing import Any

import pytest
from _pytest.monkeypatch import MonkeyPatch

from maslov_kernel.model.oscillator import GaussianPacket, OscillatorConfig
from maslov_kernel.modules.output_manager import output_manager

# Modules that import notification_manager by name.
NOTIFYING_MODULES = [
    "maslov_kernel.modules.config_manager",
    "maslov_kernel.modules.output_manager",
    "maslov_kernel.runner",
    "maslov_kernel.commands.kernel",
    "maslov_kernel.commands.spectrum",
    "maslov_kernel.commands.scan",
    "maslov_kernel.commands.converge",
    "maslov_kernel.commands.smear",
    "maslov_kernel.commands.oracle_compare",
]


@pytest.fixture
def tmp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)


@pytest.fixture
def quarter_period() -> OscillatorConfig:
    """m = ω = ħ = 1 at T = π/2, from x_I = 0 to x_F = 1."""
    return OscillatorConfig(time=math.pi / 2.0, x_initial=0.0, x_final=1.0)


@pytest.fixture
def regular_config() -> OscillatorConfig:
    """A generic non-caustic configuration past the first caustic."""
    return OscillatorConfig(
        mass=1.3, omega=0.9, hbar=0.7, time=5.1, x_initial=0.3, x_final=-0.45
    )


@pytest.fixture
def free_config() -> OscillatorConfig:
    """Free particle, m = ħ = T = 1, from 0 to 1."""
    return OscillatorConfig(omega=0.0, time=1.0, x_initial=0.0, x_final=1.0)


@pytest.fixture
def unit_packet() -> GaussianPacket:
    """Unit-width Gaussian test function slightly off the origin."""
    return GaussianPacket(center=0.3, width=1.0, momentum=0.4)


@pytest.fixture
def minimal_run_config_data() -> dict[str, Any]:
    """Smallest run config that the kernel command accepts."""
    return {"omega": 1.0, "time": 1.5707963, "steps": 256, "x_final": 1.0}


@pytest.fixture
def complete_run_config_data() -> dict[str, Any]:
    """Run config using every group of parameters."""
    return {
        "mass": 2.0,
        "omega": 0.5,
        "hbar": 1.0,
        "time": 3.0,
        "time_range": "1:3:0.5",
        "steps": 128,
        "steps_ladder": {"start": 64, "stop": 512, "factor": 2},
        "x_initial": 0.1,
        "x_final": 0.2,
        "packet_center": 0.5,
        "packet_width": 0.8,
        "packet_momentum": -0.3,
        "format": "json",
        "seed": 7,
        "samples": 3,
        "workers": "max",
        "caustic_tol": 1e-8,
        "n_max": 64,
        "verify": True,
    }


@pytest.fixture
def create_json_file(tmp_dir: Path) -> Callable[..., Path]:
    """Helper function to create JSON config files."""

    def _create_json_file(data: dict[str, Any], filename: str = "config.json") -> Path:
        file_path = tmp_dir / filename
        file_path.write_text(json.dumps(data, indent=2))
        return file_path

    return _create_json_file


@pytest.fixture
def mock_notifications(monkeypatch: MonkeyPatch):
    """Mock the notification manager to capture notifications during tests."""

    class MockNotificationManager:
        def __init__(self) -> None:
            self.messages: list[tuple[str, str]] = []

        def debug(self, message: str) -> None:
            self.messages.append(("debug", message))

        def info(self, message: str) -> None:
            self.messages.append(("info", message))

        def success(self, message: str) -> None:
            self.messages.append(("success", message))

        def warning(self, message: str) -> None:
            self.messages.append(("warning", message))

        def error(self, message: str) -> None:
            self.messages.append(("error", message))

        def phase_separator(self, message: str) -> None:
            self.messages.append(("phase_separator", message))

        def spectrum_report(self, config: Any, spectrum: Any, max_rows: int = 12) -> None:
            self.messages.append(("spectrum_report", f"N={spectrum.steps}"))

        def of_level(self, level: str) -> list[str]:
            return [msg for lvl, msg in self.messages if lvl == level]

    mock_manager = MockNotificationManager()
    for module in NOTIFYING_MODULES:
        monkeypatch.setattr(
            importlib.import_module(module), "notification_manager", mock_manager
        )
    return mock_manager


@pytest.fixture(autouse=True)
def reset_output_manager() -> Generator[None, None, None]:
    """Leave the output singleton in its default state after every test."""
    yield
    output_manager.reset()
