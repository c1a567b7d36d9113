"""
Output manager for maslov-kernel.

This module serializes command records as CSV or JSON, either into the file
given with --out or onto stdout. Uses singleton pattern for global access.
"""

import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel

from ..model.run_config import OutputFormat
from ..utils.notifications import notification_manager


def format_cell(value: Any) -> str:
    """CSV text for one value: reals with 17 significant digits, None empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


class OutputManager:
    """
    Singleton output manager writing records in a fixed, reproducible layout.

    Column order is the field order of the record model; no timestamps or
    run-dependent data are written, so identical runs give identical bytes.
    """

    _instance: Optional["OutputManager"] = None
    _initialized: bool = False

    def __new__(cls) -> "OutputManager":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        # Prevent re-initialization
        if OutputManager._initialized:
            return
        OutputManager._initialized = True

        self.output_format: OutputFormat = OutputFormat.CSV
        self.output_path: Path | None = None
        self._is_setup = False

    def initialize(self, output_format: OutputFormat, output_path: str | None = None) -> None:
        """
        Choose the format and destination for the next emission.

        Args:
            output_format: csv or json
            output_path: Target file, or None for stdout
        """
        self.output_format = output_format
        self.output_path = Path(output_path) if output_path else None
        self._is_setup = True

        if self.output_path is not None and self.output_path.is_dir():
            raise RuntimeError(f"[OutputManager] Output path is a directory: {self.output_path}")

        notification_manager.debug(
            f"[OutputManager] Initialized: format={output_format.value}, "
            f"destination={self.output_path or 'stdout'}"
        )

    def reset(self) -> None:
        """Return to the default csv-on-stdout setup."""
        self.output_format = OutputFormat.CSV
        self.output_path = None
        self._is_setup = False

    def render(self, records: Sequence[BaseModel]) -> str:
        """Serialize records to text in the configured format."""
        if self.output_format is OutputFormat.JSON:
            payload = [record.model_dump(mode="json") for record in records]
            return json.dumps(payload, indent=2) + "\n"

        if not records:
            return ""
        columns = list(type(records[0]).model_fields)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            row = record.model_dump()
            writer.writerow([format_cell(row[column]) for column in columns])
        return buffer.getvalue()

    def emit(self, records: Sequence[BaseModel]) -> None:
        """
        Write records to the configured destination.

        Raises:
            RuntimeError: If the records mix types or the file cannot be written
        """
        if not self._is_setup:
            raise RuntimeError(
                "[OutputManager] OutputManager not initialized. Call initialize() first."
            )
        if len({type(record) for record in records}) > 1:
            raise RuntimeError("[OutputManager] Cannot mix record types in one output")

        text = self.render(records)
        if self.output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return

        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.output_path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except OSError as e:
            raise RuntimeError(
                f"[OutputManager] Failed to write {self.output_path}: {e}"
            ) from e
        notification_manager.success(
            f"[OutputManager] Wrote {len(records)} record(s) to {self.output_path}"
        )


# Create singleton instance
output_manager = OutputManager()
