from collections.abc import Callable
from typing import Any

import typer
from pydantic import ValidationError
from rich import print as rprint

from . import __author__, __version__
from .commands.converge import ConvergeCommand
from .commands.kernel import KernelCommand
from .commands.oracle_compare import OracleCompareCommand
from .commands.scan import ScanCommand
from .commands.smear import SmearCommand
from .commands.spectrum import SpectrumCommand
from .errors import NumericalError
from .model.run_config import OutputFormat, RunConfig
from .modules.config_manager import ConfigManager
from .utils.notifications import notification_manager

app = typer.Typer(help="maslov-kernel")

EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3


@app.callback(invoke_without_command=True)
def main_callback(
    ctx: typer.Context,
    version: bool = typer.Option(
        False, "--version", "-v", help="Show version information"
    ),
):
    """
    Maslov Kernel - Harmonic-oscillator propagator from discrete-time path integrals.
    """
    if version:
        rprint(f"[bold cyan]maslov-kernel[/bold cyan] v{__version__}")
        rprint(f"Authored by: {__author__}")
        return

    if ctx.invoked_subcommand is None:
        print(ctx.get_help())
        raise typer.Exit()


def _execute(
    command: Callable[[RunConfig], None],
    config_file: str | None,
    debug: bool,
    overrides: dict[str, Any],
) -> None:
    """
    Resolve the run config and run a command, mapping failures to exit codes.

    Invalid input exits with 2, numerical failure with 3.
    """
    if debug:
        notification_manager.set_debug(True)
        notification_manager.debug("[ConfigManager] DEBUG Enabled")
    try:
        run_config = ConfigManager.resolve(config_file, overrides)
        command(run_config)
    except typer.Exit:
        raise
    except NumericalError as e:
        notification_manager.error(f"Numerical failure ({type(e).__name__}): {e}")
        raise typer.Exit(EXIT_NUMERICAL_FAILURE) from e
    except (ValueError, ValidationError) as e:
        notification_manager.error(f"Invalid input: {e}")
        raise typer.Exit(EXIT_INVALID_INPUT) from e
    except Exception as e:
        notification_manager.error(f"Command failed: {e}")
        raise typer.Exit(1) from e


MASS = typer.Option(None, "--mass", help="Particle mass m")
OMEGA = typer.Option(None, "--omega", help="Angular frequency ω")
HBAR = typer.Option(None, "--hbar", help="Reduced Planck constant ħ")
TIME = typer.Option(None, "--T", help="Propagation time T")
TIME_RANGE = typer.Option(None, "--T-range", help="Times to scan as a:b:step")
STEPS = typer.Option(None, "--N", help="Number of time steps N")
STEPS_LADDER = typer.Option(None, "--N-ladder", help="N ladder as n0:n1:factor")
X_INITIAL = typer.Option(None, "--xi", help="Initial endpoint x_I")
X_FINAL = typer.Option(None, "--xf", help="Final endpoint x_F")
PACKET_CENTER = typer.Option(None, "--packet-center", help="Test-function center")
PACKET_WIDTH = typer.Option(None, "--packet-width", help="Test-function width")
PACKET_MOMENTUM = typer.Option(None, "--packet-momentum", help="Test-function wavenumber")
FORMAT = typer.Option(None, "--format", "-f", help="Record format: csv or json")
OUT = typer.Option(None, "--out", "-o", help="Output file (stdout when omitted)")
SEED = typer.Option(None, "--seed", help="Seed for randomly drawn endpoints")
CONFIG = typer.Option(None, "--config", "-c", help="JSON run-config file")
DEBUG = typer.Option(False, "--debug", "-d", help="Enable debug output")
WORKERS = typer.Option(None, "--workers", "-w", help="Concurrent sweep points, or 'max'")
CAUSTIC_TOL = typer.Option(None, "--caustic-tol", help="Distance of ωT/π from an integer")


@app.command()
def kernel(
    mass: float | None = MASS,
    omega: float | None = OMEGA,
    hbar: float | None = HBAR,
    time: float | None = TIME,
    steps: int | None = STEPS,
    x_initial: float | None = X_INITIAL,
    x_final: float | None = X_FINAL,
    caustic_tol: float | None = CAUSTIC_TOL,
    output_format: OutputFormat | None = FORMAT,
    out: str | None = OUT,
    config_file: str | None = CONFIG,
    debug: bool = DEBUG,
) -> None:
    """
    Evaluate the finite-N and closed-form kernel at one time.
    """
    _execute(
        KernelCommand.run,
        config_file,
        debug,
        {
            "mass": mass,
            "omega": omega,
            "hbar": hbar,
            "time": time,
            "steps": steps,
            "x_initial": x_initial,
            "x_final": x_final,
            "caustic_tol": caustic_tol,
            "format": output_format,
            "out": out,
        },
    )


@app.command()
def spectrum(
    mass: float | None = MASS,
    omega: float | None = OMEGA,
    hbar: float | None = HBAR,
    time: float | None = TIME,
    steps: int | None = STEPS,
    verify: bool = typer.Option(
        False, "--verify", help="Cross-check with the Sturm bisection solver"
    ),
    caustic_tol: float | None = CAUSTIC_TOL,
    output_format: OutputFormat | None = FORMAT,
    out: str | None = OUT,
    config_file: str | None = CONFIG,
    debug: bool = DEBUG,
) -> None:
    """
    List the eigenvalues of the fluctuation matrix and the Maslov index.
    """
    _execute(
        SpectrumCommand.run,
        config_file,
        debug,
        {
            "mass": mass,
            "omega": omega,
            "hbar": hbar,
            "time": time,
            "steps": steps,
            "verify": verify or None,
            "caustic_tol": caustic_tol,
            "format": output_format,
            "out": out,
        },
    )


@app.command()
def scan(
    mass: float | None = MASS,
    omega: float | None = OMEGA,
    hbar: float | None = HBAR,
    time_range: str | None = TIME_RANGE,
    steps: int | None = STEPS,
    x_initial: float | None = X_INITIAL,
    x_final: float | None = X_FINAL,
    caustic_tol: float | None = CAUSTIC_TOL,
    workers: str | None = WORKERS,
    output_format: OutputFormat | None = FORMAT,
    out: str | None = OUT,
    config_file: str | None = CONFIG,
    debug: bool = DEBUG,
) -> None:
    """
    Scan the propagation time: Maslov index, phase and magnitude per T.
    """
    _execute(
        ScanCommand.run,
        config_file,
        debug,
        {
            "mass": mass,
            "omega": omega,
            "hbar": hbar,
            "time_range": time_range,
            "steps": steps,
            "x_initial": x_initial,
            "x_final": x_final,
            "caustic_tol": caustic_tol,
            "workers": workers,
            "format": output_format,
            "out": out,
        },
    )


@app.command()
def converge(
    mass: float | None = MASS,
    omega: float | None = OMEGA,
    hbar: float | None = HBAR,
    time: float | None = TIME,
    steps_ladder: str | None = STEPS_LADDER,
    x_initial: float | None = X_INITIAL,
    x_final: float | None = X_FINAL,
    caustic_tol: float | None = CAUSTIC_TOL,
    output_format: OutputFormat | None = FORMAT,
    out: str | None = OUT,
    config_file: str | None = CONFIG,
    debug: bool = DEBUG,
) -> None:
    """
    Convergence of K_N towards the closed form along an N ladder.
    """
    _execute(
        ConvergeCommand.run,
        config_file,
        debug,
        {
            "mass": mass,
            "omega": omega,
            "hbar": hbar,
            "time": time,
            "steps_ladder": steps_ladder,
            "x_initial": x_initial,
            "x_final": x_final,
            "caustic_tol": caustic_tol,
            "format": output_format,
            "out": out,
        },
    )


@app.command()
def smear(
    mass: float | None = MASS,
    omega: float | None = OMEGA,
    hbar: float | None = HBAR,
    time: float | None = TIME,
    steps: int | None = STEPS,
    steps_ladder: str | None = STEPS_LADDER,
    x_final: float | None = X_FINAL,
    packet_center: float | None = PACKET_CENTER,
    packet_width: float | None = PACKET_WIDTH,
    packet_momentum: float | None = PACKET_MOMENTUM,
    n_max: int | None = typer.Option(
        None, "--n-max", help="Hermite terms for the expansion oracle"
    ),
    caustic_tol: float | None = CAUSTIC_TOL,
    workers: str | None = WORKERS,
    output_format: OutputFormat | None = FORMAT,
    out: str | None = OUT,
    config_file: str | None = CONFIG,
    debug: bool = DEBUG,
) -> None:
    """
    Kernel smeared against a Gaussian test function, valid at caustics.
    """
    _execute(
        SmearCommand.run,
        config_file,
        debug,
        {
            "mass": mass,
            "omega": omega,
            "hbar": hbar,
            "time": time,
            "steps": steps,
            "steps_ladder": steps_ladder,
            "x_final": x_final,
            "packet_center": packet_center,
            "packet_width": packet_width,
            "packet_momentum": packet_momentum,
            "n_max": n_max,
            "caustic_tol": caustic_tol,
            "workers": workers,
            "format": output_format,
            "out": out,
        },
    )


@app.command("oracle-compare")
def oracle_compare(
    mass: float | None = MASS,
    omega: float | None = OMEGA,
    hbar: float | None = HBAR,
    time: float | None = TIME,
    steps: int | None = STEPS,
    x_initial: float | None = X_INITIAL,
    x_final: float | None = X_FINAL,
    seed: int | None = SEED,
    samples: int | None = typer.Option(
        None, "--samples", help="Endpoint pairs drawn when --seed is given"
    ),
    workers: str | None = WORKERS,
    output_format: OutputFormat | None = FORMAT,
    out: str | None = OUT,
    config_file: str | None = CONFIG,
    debug: bool = DEBUG,
) -> None:
    """
    Compare brute-force Fresnel quadrature, the finite-N formula and dense
    linear algebra for N = 2, 3, 4.
    """
    _execute(
        OracleCompareCommand.run,
        config_file,
        debug,
        {
            "mass": mass,
            "omega": omega,
            "hbar": hbar,
            "time": time,
            "steps": steps,
            "x_initial": x_initial,
            "x_final": x_final,
            "seed": seed,
            "samples": samples,
            "workers": workers,
            "format": output_format,
            "out": out,
        },
    )


def cli():
    """Entry point for the CLI"""
    app()


if __name__ == "__main__":
    app()
