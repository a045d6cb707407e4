"""Acceptance criteria at full scale and their stated tolerances.

Each test prints its one-line verdict; the lines are gathered again in the
terminal summary so they show up even with output capture on.
"""

import pytest

from entropic_turan.acceptance import CRITERIA, run_criterion

VERDICTS = []


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = run_criterion(number, "desk", 0)
    VERDICTS.append(res.line())
    print(res.line())
    assert res.passed, res.line()


if __name__ == "__main__":
    for i in sorted(CRITERIA):
        print(run_criterion(i, "desk", 0).line())
