import math

import pytest

import kcnverify as kv


def test_list_builtins():
    names = kv.list_builtins()
    assert len(names) == 7
    assert "hyperkahler-r4" in names
    assert "flat-c2-example15" in names


def test_eval_jet2_polynomial():
    value, gradient, hessian = kv.eval_jet2("x1^2 + 3*x2", ["x1", "x2"], [2.0, 1.0])
    assert value == pytest.approx(7.0)
    assert gradient == pytest.approx([4.0, 3.0])
    assert hessian[0][0] == pytest.approx(2.0)
    assert hessian[0][1] == 0.0
    assert hessian[1][0] == 0.0


def test_eval_jet2_trig():
    value, gradient, _ = kv.eval_jet2("sin(x)*y", ["x", "y"], [0.3, 2.0])
    assert value == pytest.approx(2.0 * math.sin(0.3))
    assert gradient[0] == pytest.approx(2.0 * math.cos(0.3))
    assert gradient[1] == pytest.approx(math.sin(0.3))


def test_parse_errors():
    with pytest.raises(kv.KcnError):
        kv.parse_expression("x +", ["x"])
    with pytest.raises(kv.KcnError):
        kv.parse_expression("nope", ["x"])


def test_check_builtin_positive():
    report = kv.check_builtin("parallel-form-c2")
    assert report["kcn"] == "PASS"
    assert report["classification"] == "cc"
    assert report["agreement"]["consistent"] is True
    assert report["exit_code"] == 0
    assert report["regression_exit_code"] == 0
    checks = {c["check"]: c for c in report["checks"]}
    assert checks["property1_nijenhuis"]["verdict"] == "PASS"
    assert checks["kahler"]["max_residual"] < 1e-8


def test_check_builtin_negative():
    report = kv.check_builtin("nonclosed-negative", samples=64)
    assert report["kcn"] == "FAIL"
    assert report["exit_code"] == 1
    assert report["regression_exit_code"] == 0  # matches its catalog expectations


def test_definition_round_trip():
    text = kv.builtin_definition("hyperkahler-r4")
    report = kv.check_text(text, suite="kcn", samples=32)
    assert report["kcn"] == "PASS"
    assert report["classification"] == "scc"


def test_json_report_is_deterministic():
    text = kv.builtin_definition("rank2-degenerate")
    a = kv.check_json(text, samples=32)
    b = kv.check_json(text, samples=32)
    assert a == b
    assert '"verdict"' in a and '"max_residual"' in a and '"worst_point"' in a


def test_expectations_exposed():
    exp = kv.builtin_expectations("scc-nonparallel-negative")
    assert exp["classification"] == "scc"
    assert exp["kcn"] == "FAIL"
    assert exp["checks"]["property1_nijenhuis"] == "FAIL"
