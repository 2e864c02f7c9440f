import math

import pytest

from hyperharm.report import FD, INFORMATIONAL, CheckReport, identity_report


def test_margin_and_pass():
    r = CheckReport("x", 2, 1.0, 1.5, 1e-10)
    assert r.margin == 0.5 and r.passed and r.asserting
    r = CheckReport("x", 2, 1.0 + 1e-12, 1.0, 1e-10)
    assert r.passed  # inside the tolerance
    r = CheckReport("x", 2, 1.1, 1.0, 1e-10)
    assert not r.passed


def test_informational_does_not_assert():
    r = CheckReport("probe", 4, 2.0, 1.0, 0.0, regime=INFORMATIONAL)
    assert not r.passed and not r.asserting


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        CheckReport("x", 2, math.nan, 1.0, 0.0)
    with pytest.raises(ValueError):
        CheckReport("x", 2, 1.0, math.inf, 0.0)


def test_identity_report_relative():
    r = identity_report("id", 3, 1000.0, 1000.0 + 1e-9, 1e-12, relative=True, regime=FD)
    assert r.lhs == pytest.approx(1e-12, rel=1e-3)
    assert r.rhs == 0.0 and r.regime == FD
    assert r.params["left"] == 1000.0


def test_record_is_plain():
    import json

    import numpy as np

    r = CheckReport("x", 2, np.float64(0.1), 0.2, 1e-3, point=[np.zeros(2), np.ones(2)], params={"k": 1})
    rec = r.record(seed=5, trial=3)
    assert list(rec) == ["check", "n", "m", "point", "lhs", "rhs", "margin", "tol", "regime", "pass", "seed", "trial"]
    assert rec["point"] == [[0.0, 0.0], [1.0, 1.0]]
    json.dumps(rec, allow_nan=False)
