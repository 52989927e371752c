"""Acceptance criteria 1-12, one test each.

Every criterion prints a single ``PASS``/``FAIL`` line (also repeated in the
pytest terminal summary).  Run this file directly for just those lines.
"""

import pytest

from adsmana.checks import CHECKS, run_check

RESULTS = {}


@pytest.mark.parametrize("number", sorted(CHECKS), ids=[f"c{n:02d}_{CHECKS[n][0]}" for n in sorted(CHECKS)])
def test_criterion(number):
    result = run_check(number)
    RESULTS[number] = result
    print(result.line())
    assert result.passed, result.line()


if __name__ == "__main__":
    for n in sorted(CHECKS):
        print(run_check(n).line(), flush=True)
