"""
Notification management system for maslov-kernel.

This module provides a centralized way to send notifications via Rich formatting.
All notifications go to stderr so that CSV/JSON records on stdout stay clean.
"""

import math
from typing import TYPE_CHECKING

from rich.columns import Columns
from rich.console import Console, Group
from rich.highlighter import RegexHighlighter
from rich.panel import Panel
from rich.table import Table
from rich.theme import Theme

if TYPE_CHECKING:
    from ..model.oscillator import OscillatorConfig
    from ..modules.spectral import Spectrum


class KernelHighlighter(RegexHighlighter):
    """Custom highlighter for maslov-kernel output with rich formatting"""

    base_style = "maslov."
    highlights = [
        # Section borders (═══════════...)
        r"(?P<border>═+)",
        # Component tags
        r"(?P<component>\[(?:LatticeAction|Spectral|Kernel|Caustic|Oracle|SweepRunner|ConfigManager|OutputManager)\])",
        # Output files
        r"(?P<filepath>[a-zA-Z0-9_\-./]+\.(?:json|csv))\b",
        # Classification words
        r"(?P<caustic>caustic|CausticDelta)",
        r"(?P<regular>Regular)",
    ]


# severity -> (theme style, tag printed before the message)
SEVERITY_TAGS: dict[str, tuple[str, str]] = {
    "error": ("error", "ERROR"),
    "warning": ("warning", "WARN"),
    "success": ("success", "SUCCESS"),
    "information": ("info", "INFO"),
    "debug": ("debug", "DEBUG"),
}


class NotificationManager:
    """
    Manages notifications for maslov-kernel.
    This class handles sending notifications via Rich formatting
    """

    def __init__(self, debug_enabled: bool = False):
        self._debug_enabled = debug_enabled

        self._theme = Theme(
            {
                "info": "bold blue",
                "success": "bold #00aa00",
                "warning": "bold #ff8c00",
                "error": "bold #ff0000",
                "debug": "bold #888888",
                "phase_separator": "bold #00aaaa",
                "maslov.border": "dim #00aaaa",
                "maslov.component": "bold magenta",
                "maslov.filepath": "#005f7c",
                "maslov.caustic": "bold #8b008b",
                "maslov.regular": "#00aa00",
            }
        )

        self._console = Console(
            theme=self._theme, highlighter=KernelHighlighter(), stderr=True
        )

    def notify(self, message: str, severity: str = "information"):
        """
        Print a notification on stderr.

        Args:
            message: The notification message to display
            severity: One of the keys of SEVERITY_TAGS; unknown values print as info
        """
        if severity == "debug" and not self._debug_enabled:
            return
        style, tag = SEVERITY_TAGS.get(severity, SEVERITY_TAGS["information"])
        self._console.print(f"[{style}][{tag}][/{style}] {message}")

    def error(self, message: str):
        """Send an error notification."""
        self.notify(message, "error")

    def success(self, message: str):
        """Send a success notification for positive outcomes."""
        self.notify(message, "success")

    def info(self, message: str):
        """Send an information notification."""
        self.notify(message, "information")

    def warning(self, message: str):
        """Send a warning notification."""
        self.notify(message, "warning")

    def debug(self, message: str):
        """Send a debug notification (shown only with --debug)."""
        self.notify(message, "debug")

    def phase_separator(self, phase_name: str):
        """
        Display a visual phase separator with the given phase name.

        Args:
            phase_name: The name of the phase to display
        """
        separator_line = "═" * 63

        self._console.print()
        self._console.print(f"[phase_separator]{separator_line}[/phase_separator]")
        self._console.print(f"[phase_separator]{phase_name.upper()}[/phase_separator]")
        self._console.print(f"[phase_separator]{separator_line}[/phase_separator]")
        self._console.print()

    def set_debug(self, enabled: bool):
        """Enable or disable debug output."""
        self._debug_enabled = enabled

    def spectrum_report(
        self, config: "OscillatorConfig", spectrum: "Spectrum", max_rows: int = 12
    ) -> None:
        """
        Display the classification of a fluctuation spectrum.

        Args:
            config: Physical parameters the spectrum was computed for
            spectrum: Classified spectrum
            max_rows: Eigenvalues listed before the table is elided
        """
        params_table = Table(show_header=True, header_style="bold magenta")
        params_table.add_column("Parameter", style="cyan")
        params_table.add_column("Value", justify="right")
        params_table.add_row("m", f"{config.mass:g}")
        params_table.add_row("ω", f"{config.omega:g}")
        params_table.add_row("ħ", f"{config.hbar:g}")
        params_table.add_row("T", f"{config.time:g}")
        params_table.add_row("ωT/π", f"{config.omega * config.time / math.pi:.9g}")
        params_table.add_row("N", str(spectrum.steps))

        class_table = Table(show_header=True, header_style="bold cyan")
        class_table.add_column("Quantity", style="cyan")
        class_table.add_column("Value", justify="right")
        class_table.add_row("M", str(spectrum.m_index))
        class_table.add_row("L", f"[bold]{spectrum.maslov_l}[/bold]")
        class_table.add_row("x₀(N)", f"{spectrum.zero_crossing:.12g}")
        class_table.add_row("Negative eigenvalues", str(spectrum.negative_count))
        class_table.add_row(
            "Caustic",
            "[maslov.caustic]yes[/maslov.caustic]" if spectrum.at_caustic else "no",
        )
        class_table.add_row(
            "Count stable", "✅" if spectrum.count_stable else "❌ increase N"
        )

        eigen_table = Table(show_header=True, header_style="bold blue")
        eigen_table.add_column("k", justify="right")
        eigen_table.add_column("λ_k", justify="right")

        eigenvalues = spectrum.eigenvalues
        shown = list(range(min(len(eigenvalues), max_rows)))
        for k in shown:
            style = "#ff0000" if eigenvalues[k] < 0 else "#00aa00"
            eigen_table.add_row(str(k + 1), f"[{style}]{eigenvalues[k]:.6e}[/{style}]")
        if len(eigenvalues) > max_rows:
            eigen_table.add_row("…", f"{len(eigenvalues) - max_rows} more")

        final_panel = Panel(
            Group(Columns([params_table, class_table]), eigen_table),
            title="Fluctuation Spectrum",
            border_style="blue",
            padding=(1, 2),
        )
        self._console.print("")
        self._console.print(final_panel)


# Create a singleton instance that can be imported and used throughout the app
notification_manager = NotificationManager()
