import json
import math

import numpy as np

from capstab import report as rp
from capstab import surface as sf


def test_dumps_is_valid_json_with_full_precision():
    obj = {"b": 0.1, "a": [1, 2.5, np.float64(math.pi)], "c": {"nan": float("nan"), "flag": np.bool_(True)}}
    text = rp.dumps(obj)
    back = json.loads(text)
    assert list(back) == ["b", "a", "c"]
    assert back["a"][2] == math.pi
    assert back["c"] == {"nan": None, "flag": True}
    assert "0.10000000000000001" in text


def test_sweep_row_columns():
    surf = sf.from_delaunay(2, 1.0, 0.1, 2e-3)
    report = rp.analyze(surf, residuals=False)
    row = rp.sweep_row(report).split(",")
    assert len(row) == len(rp.SWEEP_HEADER.split(","))
    assert row[0] == "2" and row[3] == "Unduloid" and row[-1] == "Unstable(mass-center)"
    assert report.residuals == {}


def test_report_json_is_deterministic():
    a = rp.report_json(rp.analyze(sf.from_delaunay(2, 1.0, -0.1, 2e-3), levels=2))
    b = rp.report_json(rp.analyze(sf.from_delaunay(2, 1.0, -0.1, 2e-3), levels=2))
    assert a == b
