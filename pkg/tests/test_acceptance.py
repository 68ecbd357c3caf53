"""The twelve acceptance criteria, one PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) or under pytest; the lines
are printed either way.
"""

import sys
import time

import pytest

from rauzy.acceptance import CRITERIA, run_all

_SIZED = {"census", "arf-values"}


@pytest.mark.slow
@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, check, capsys):
    t0 = time.perf_counter()
    verdict = check(max_n=8) if name in _SIZED else check()
    with capsys.disabled():
        print(f"\n{verdict.line()}  ({time.perf_counter() - t0:.1f}s)")
        for line in verdict.details[:12]:
            print(f"    {line}")
    assert verdict.ok, verdict.details[:10]


if __name__ == "__main__":
    sys.exit(0 if all(v.ok for v in run_all(8)) else 1)
