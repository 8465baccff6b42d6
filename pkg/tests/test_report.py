from __future__ import annotations

import io
import json

from cloakforge.report import Report, jsonable, sort_reports, write_reports


def test_jsonable_orders_sets_and_flattens_tuple_keys():
    assert jsonable({(1, 2): {3, 1, 2}}) == {"1,2": [1, 2, 3]}
    assert jsonable((1, None, "x")) == [1, None, "x"]


def test_jsonable_uses_names():
    class Named:
        name = "thing"
    assert jsonable(Named()) == "thing"


def test_to_json_is_sorted_and_stable():
    r = Report("L2.4", "chain3", True, 4, None, {"b": 1, "a": 2})
    s = r.to_json()
    assert s == r.to_json()
    assert list(json.loads(s)) == sorted(json.loads(s))
    assert json.loads(s)["status"] == "holds"


def test_timing_only_when_asked():
    r = Report("x", "i", False, 1, timing=0.12345)
    assert "timing" not in r.as_dict()
    assert r.as_dict(timing=True)["timing"] == 0.123
    assert r.failed


def test_not_applicable_status():
    assert Report("A5", "m", None).as_dict()["status"] == "not-applicable"
    assert not Report("A5", "m", None).failed


def test_write_reports_one_line_each():
    rs = sort_reports([Report("b", "2", True), Report("a", "9", True), Report("b", "1", True)])
    assert [(r.claim, r.instance) for r in rs] == [("a", "9"), ("b", "1"), ("b", "2")]
    buf = io.StringIO()
    write_reports(rs, buf)
    assert [json.loads(line)["instance"] for line in buf.getvalue().splitlines()] == ["9", "1", "2"]
