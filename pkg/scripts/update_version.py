import re
from pathlib import Path
from typing import Any

try:
    import tomllib  # type: ignore[import]
except ImportError:
    import toml as tomllib  # type: ignore[import]

ROOT = Path(__file__).parent.parent


def update_version() -> None:
    """Propagate project.version from pyproject.toml to the package and README."""
    with open(ROOT / "pyproject.toml", "rb") as f:
        data: dict[str, Any] = tomllib.load(f)

    version: str = data["project"]["version"]
    authors: list[dict[str, str]] = data["project"]["authors"]
    description: str = data["project"]["description"]

    init_path = ROOT / "src" / "maslov_kernel" / "__init__.py"

    # An existing __author__ line wins; it may carry Rich markup for --version.
    authors_str = ", ".join(a["name"] for a in authors)
    if init_path.exists():
        author_match = re.search(
            r'^__author__\s*=\s*"(.*?)"\s*$', init_path.read_text(), re.MULTILINE
        )
        if author_match:
            authors_str = author_match.group(1)

    summary = description[0].upper() + description[1:]
    init_path.write_text(
        f'''"""Maslov Kernel - {summary}."""

__version__ = "{version}"
__author__ = "{authors_str}"

from .main import app

__all__ = ["app"]
'''
    )

    readme_path = ROOT / "README.md"
    readme_content = readme_path.read_text()
    badge_pattern = r"(!\[Release\]\(https://img\.shields\.io/badge/release-)([^-]+)(-[a-zA-Z0-9]+?\))"
    readme_path.write_text(
        re.sub(badge_pattern, rf"\g<1>{version}\g<3>", readme_content, count=1)
    )


if __name__ == "__main__":
    update_version()
