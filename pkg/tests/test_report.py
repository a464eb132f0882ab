import math

import numpy as np

from revcurv.report import CheckRecord, VerificationReport, check, format_block, format_value


def _record(check_id, passed):
    return check(check_id, "desc", "x <= 1", np.float64(0.5), 1.0, np.bool_(passed))


def test_format_value():
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(math.nan) == "nan"
    assert format_value([1.0, 2.0]) == "1;2"
    assert format_value("a\nb") == "a b"


def test_check_coerces_numpy_scalars():
    record = _record("x", True)
    assert type(record.measured) is float
    assert record.passed is True
    assert record.to_dict()["threshold"] == 1.0


def test_overall_pass_needs_every_record():
    report = VerificationReport()
    report.extend([_record("a", True), _record("b", True)])
    assert report.passed
    report.extend([_record("c", False)])
    assert not report.passed
    assert [r.id for r in report.failures()] == ["c"]
    assert report.passed_count == 2 and report.failed_count == 1
    assert report.get("b").id == "b"


def test_aborted_report_fails():
    report = VerificationReport(records=[_record("a", True)], aborted="boom")
    assert not report.passed
    assert "aborted=boom" in report.to_text()


def test_text_is_deterministic(tmp_path):
    def build():
        return VerificationReport(
            records=[_record("a", True), CheckRecord("b", "d", "s", math.nan, 1.0, False, "why")],
            config={"seed": 0, "delta": 0.1},
            version="1.0.0",
        )

    first = build().write(tmp_path / "one.txt").read_bytes()
    second = build().write(tmp_path / "two.txt").read_bytes()
    assert first == second
    text = first.decode("utf-8")
    assert text.startswith("[run]\ntool=revcurv\nversion=1.0.0\nconfig.delta=0.10000000000000001\nconfig.seed=0\n")
    assert text.count("[check]") == 2
    assert "overall=fail" in text
    assert "measured=nan" in text


def test_format_block():
    assert format_block("x", {"a": 1, "b": 2.5}) == "[x]\na=1\nb=2.5\n"
