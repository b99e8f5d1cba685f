"""One test per acceptance criterion, each at its stated time limit.

Run with ``pytest tests/test_acceptance.py -s`` to see the pass/fail lines.
"""

import pytest

from gldl.checks import CHECKS, run_check

CRITERIA = [(i + 1, c) for i, c in enumerate(CHECKS)]


def test_criteria_cover_every_check():
    assert len(CRITERIA) == 11
    assert len({c.check_id for _, c in CRITERIA}) == 11


@pytest.mark.parametrize("number,check", CRITERIA, ids=[c.check_id for _, c in CRITERIA])
def test_criterion(number, check):
    rep = run_check(check, seed=0)
    ok = rep.passed and rep.within_time
    print(f"\ncriterion {number:2d} {check.check_id}: {'PASS' if ok else 'FAIL'} "
          f"({rep.wall_time:.3f}s, limit {check.time_limit:g}s)")
    assert rep.passed, rep.witness
    assert rep.wall_time < check.time_limit
