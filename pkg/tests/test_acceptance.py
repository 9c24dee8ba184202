"""All twelve acceptance criteria at their stated tolerances.

Each test prints its pass/fail line (visible with ``pytest -s`` or in the
captured output of a failure) before asserting.
"""

import pytest

from shearct.acceptance import CHECKS, run_check


@pytest.mark.parametrize("number", range(1, len(CHECKS) + 1),
                         ids=[c.__name__.removeprefix("check_") for c in CHECKS])
def test_criterion(number):
    result = run_check(number)
    print(result.line())
    assert result.number == number
    assert result.passed, result.line()
