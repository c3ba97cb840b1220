"""
Suite Ledger

Records every check a verify suite performs, so a run ends with pass counts
per suite and the exact cases that failed.

Key Concerns:
1. Visibility: every check is recorded, not only failures
2. Determinism: records keep insertion order and carry no timestamps
3. Isolation: an exception inside a suite is recorded as an error, other suites still run
"""

from typing import Dict, List, Optional
from dataclasses import dataclass
from enum import Enum
import logging

logger = logging.getLogger(__name__)


class SuiteOutcome(Enum):
    PASSED = "pass"
    FAILED = "fail"
    ERROR = "error"
    EMPTY = "empty"


@dataclass
class CheckRecord:
    suite: str
    name: str
    passed: bool
    detail: str = ""


class SuiteLedger:
    """Pass/fail bookkeeping across suites."""

    def __init__(self):
        self._records: List[CheckRecord] = []
        self._errors: Dict[str, str] = {}
        self._order: List[str] = []

    def begin(self, suite: str):
        if suite not in self._order:
            self._order.append(suite)

    def record(self, suite: str, name: str, passed: bool, detail: str = "") -> bool:
        self.begin(suite)
        self._records.append(CheckRecord(suite, name, bool(passed), detail))
        if not passed:
            logger.warning("[%s] %s failed %s", suite, name, detail)
        return bool(passed)

    def error(self, suite: str, message: str):
        self.begin(suite)
        self._errors[suite] = message
        logger.error("[%s] aborted: %s", suite, message)

    @property
    def suites(self) -> List[str]:
        return list(self._order)

    def records(self, suite: Optional[str] = None) -> List[CheckRecord]:
        return [r for r in self._records if suite is None or r.suite == suite]

    def failures(self, suite: Optional[str] = None) -> List[CheckRecord]:
        return [r for r in self.records(suite) if not r.passed]

    def outcome(self, suite: str) -> SuiteOutcome:
        if suite in self._errors:
            return SuiteOutcome.ERROR
        records = self.records(suite)
        if not records:
            return SuiteOutcome.EMPTY
        return SuiteOutcome.PASSED if all(r.passed for r in records) else SuiteOutcome.FAILED

    @property
    def passed(self) -> bool:
        outcomes = [self.outcome(s) for s in self._order]
        return bool(outcomes) and all(o == SuiteOutcome.PASSED for o in outcomes)

    def stats(self) -> Dict[str, Dict]:
        summary = {}
        for suite in self._order:
            records = self.records(suite)
            summary[suite] = {
                "checks": len(records),
                "passed": sum(1 for r in records if r.passed),
                "outcome": self.outcome(suite).value,
                "error": self._errors.get(suite, ""),
            }
        return summary
