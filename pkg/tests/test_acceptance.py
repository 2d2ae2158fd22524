"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
pass/fail lines, or through the command line: ``tamezeta selftest``.
"""
import pytest

from tamezeta.selftest import CRITERIA

PRECISION_BITS = 128


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance_criterion(criterion):
    res = criterion(PRECISION_BITS)
    print(
        "[%s] %2d. %-55s measured=%s limit=%s (%.2fs)"
        % ("PASS" if res.ok else "FAIL", res.index, res.name, res.measured, res.limit, res.seconds)
    )
    assert res.ok, "%s: measured %s against %s" % (res.name, res.measured, res.limit)
