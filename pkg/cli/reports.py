"""
Plain-Text Reports

Every command prints `key = value` lines ending in `verdict = pass|fail`.
Values are exact: Fractions print as p/q, sequences as comma lists. The
header records version, seed and input digests, and nothing time-dependent
is ever written, so equal inputs give byte-identical reports.
"""

from typing import Any, List, Optional, Tuple
from fractions import Fraction
from importlib import metadata
import logging

from cli.formats import digest

logger = logging.getLogger(__name__)

PACKAGE = "homology-growth-workbench"


def tool_version() -> str:
    try:
        return metadata.version(PACKAGE)
    except metadata.PackageNotFoundError:
        return "0.1.0"


def render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return ",".join(render(v) for v in value)
    if value is None:
        return "none"
    return str(value)


class Report:
    """Ordered key = value lines with a pass/fail verdict."""

    def __init__(self, command: str, seed: Optional[int] = None):
        self.lines: List[Tuple[str, str]] = [("tool", PACKAGE), ("version", tool_version()),
                                             ("command", command)]
        if seed is not None:
            self.lines.append(("seed", str(seed)))
        self.passed = True

    def add(self, key: str, value: Any) -> "Report":
        if "=" in key or "\n" in key:
            raise ValueError(f"invalid report key {key!r}")
        self.lines.append((key, render(value).replace("\n", " ")))
        return self

    def add_input(self, name: str, text: str):
        self.add(f"input.{name}.sha256", digest(text))

    def check(self, key: str, ok: bool) -> bool:
        """Record a boolean outcome that feeds the verdict."""
        self.add(key, ok)
        if not ok:
            self.passed = False
        return ok

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def text(self) -> str:
        body = [f"{k} = {v}" for k, v in self.lines]
        body.append(f"verdict = {self.verdict}")
        return "\n".join(body) + "\n"


def parse_report(text: str) -> List[Tuple[str, str]]:
    """Inverse of Report.text, for tests and scripted consumers."""
    pairs = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"not a report line: {line!r}")
        pairs.append((key, value))
    return pairs


def report_value(text: str, key: str) -> Optional[str]:
    return dict(parse_report(text)).get(key)

