import json
from fractions import Fraction

import pytest

from cubecoup.core.scalars import ComplexRational, phase_value
from cubecoup.services.reports import (
    CheckResult,
    Report,
    Verdict,
    VerificationReport,
    canonical_json,
    write_report,
)


def test_check_result_constructors():
    ok = CheckResult.from_bool("x", True, witness={"ignored": 1})
    assert ok.verdict == Verdict.PASS
    assert ok.witness is None
    bad = CheckResult.from_bool("x", False, witness={"cylinder": [0]})
    assert bad.witness == {"cylinder": [0]}
    skipped = CheckResult.not_applicable("y", "too large")
    assert skipped.passed
    assert skipped.values == {"reason": "too large"}


def test_verification_report():
    report = VerificationReport(name="demo")
    report.add(CheckResult.from_bool("a", True))
    report.add(CheckResult.not_applicable("b", "skip"))
    assert report.passed
    report.add(CheckResult.from_bool("c", False))
    assert not report.passed
    assert report.verdict_of("b") == Verdict.NOT_APPLICABLE
    assert report.verdict_of("missing") is None
    assert [check.check_id for check in report.failures()] == ["c"]


def test_canonical_json_formats_scalars():
    text = canonical_json({"b": Fraction(1, 8), "a": [0.5, True, None, 3]})
    assert text == '{"a": [0.5, true, null, 3], "b": "1/8"}\n'
    assert canonical_json(0.1) == "0.10000000000000001\n"
    assert canonical_json(ComplexRational(1, 2)) == '["1/1", "2/1"]\n'
    assert canonical_json(complex(1, -2)) == "[1, -2]\n"
    assert json.loads(canonical_json(phase_value(Fraction(1, 3)))) == pytest.approx([-0.5, 3 ** 0.5 / 2])
    assert canonical_json({(0, 1): "x"}) == '{"(0, 1)": "x"}\n'
    assert canonical_json(float("nan")) == '"nan"\n'


def test_report_is_byte_identical(tmp_path):
    def build():
        results = [CheckResult.from_bool("gowers", True, values={"u_norm_pow": Fraction(1, 8), "u_norm": 8 ** -0.25})]
        return Report(command="gowers", params={"degree": 2, "group": "Z_2"}, results=results)

    path = tmp_path / "nested" / "report.json"
    first = write_report(build(), path)
    second = write_report(build())
    assert first == second
    assert path.read_text(encoding='utf-8') == first
    assert first.startswith('{"command": "gowers", "params": {"degree": 2, "group": "Z_2"}, "results": [')
    assert '"verdict": "pass"' in first
    assert '"version": "1.0.0"' in first
    assert '"u_norm_pow": "1/8"' in first
