"""Acceptance criteria, one test each.

Every run prints one PASS/FAIL line per criterion (shown in the pytest
terminal summary). Run this file directly to print just those lines.
"""
import sys

import pytest

from quadlie.validation import ValidationConfig, criterion_names, run_criterion

LINES: list[str] = []


@pytest.mark.parametrize("name", criterion_names())
def test_criterion(name):
    result = run_criterion(name)
    LINES.append(result.line())
    assert result.passed, result.detail


def test_under_truncated_oracle_is_caught():
    result = run_criterion("amplifier-regimes", ValidationConfig(n_max=2))
    assert not result.passed


def main() -> int:
    results = [run_criterion(name) for name in criterion_names()]
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
