"""Claim verification: containment certificates, failure detection, windows."""

import pytest

from superbider.core import window
from superbider.scalars import Q, rat
from superbider.verifier import (
    CASE_IDS,
    ComponentRule,
    ExpectedFamily,
    TheoremCase,
    get_case,
    thread_cap,
    verify,
    verify_all,
)


def test_case_table_is_complete_and_unique():
    assert len(CASE_IDS) == len(set(CASE_IDS)) == 14
    assert set(CASE_IDS) == {
        "L3.1", "T3.2", "T3.3", "C3.4", "C3.5", "L4.3", "T4.4", "T4.5",
        "T5.1", "T5.2", "T5.4", "T5.6", "T5.8", "T6.3",
    }


def test_verify_skew_line_case():
    r = verify(get_case("T3.2"))
    assert r.status == "pass"
    by_label = {s.label: s for s in r.samples}
    assert by_label["b=-1"].computed_dim == 1
    assert by_label["b=2"].computed_dim == 0


def test_verify_symmetric_case_single_sample():
    r = verify(get_case("T3.3"), b_filter=rat("2"))
    assert r.status == "pass"
    [s] = r.samples
    assert s.computed_dim == s.expected_dim == 0
    r = verify(get_case("T3.3"), b_filter=rat("1"))
    [s] = r.samples
    assert s.status == "pass" and s.computed_dim == 5


def test_verify_counts_admissible_shifts():
    r = verify(get_case("T5.8"))
    [s] = r.samples
    # one parameter per integer shift |k| <= K = 2
    assert s.expected_dim == 5 and s.computed_dim == 5 and s.status == "pass"


def test_wrong_expected_family_fails_with_witness():
    base = get_case("T3.2")
    wrong = ExpectedFamily((
        ComponentRule(("L", "L"), "v", "lam",
                      lambda a2, b2, k2: Q(a2 + b2, 2), shifts=(0,)),
    ))
    case = TheoremCase(
        "T3.2-wrong", base.description, base.kind, base.algebra, base.module,
        base.parity, base.symmetry, ("-1",), base.window,
        lambda b: wrong,
    )
    r = verify(case)
    assert r.status == "fail"
    assert r.witness is not None


def test_window_too_small_is_reported_not_passed():
    r = verify(get_case("T3.2"), window(2, 2, 2))
    assert r.status == "window-too-small"
    assert not r.samples


def test_unknown_case_raises():
    with pytest.raises(ValueError):
        get_case("NOPE")


def test_verify_all_subset_and_filter():
    reports = verify_all(["L3.1", "C3.4"])
    assert [r.case_id for r in reports] == ["L3.1", "C3.4"]
    assert all(r.status == "pass" for r in reports)


def test_thread_cap_env(monkeypatch):
    monkeypatch.delenv("SUPERBIDER_THREADS", raising=False)
    assert thread_cap() == 1
    monkeypatch.setenv("SUPERBIDER_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("SUPERBIDER_THREADS", "0")
    assert thread_cap() == 1
    monkeypatch.setenv("SUPERBIDER_THREADS", "x")
    with pytest.raises(ValueError):
        thread_cap()


def test_verify_all_respects_thread_cap(monkeypatch):
    monkeypatch.setenv("SUPERBIDER_THREADS", "2")
    reports = verify_all(["L3.1", "T3.2"])
    assert [r.case_id for r in reports] == ["L3.1", "T3.2"]
    assert all(r.status == "pass" for r in reports)


def test_report_serialization_shape():
    r = verify(get_case("L3.1"), b_filter=rat("-1"))
    d = r.as_dict()
    assert d["case"] == "L3.1"
    assert d["window"] == {"N": "6", "K": "2", "N_int": "2"}
    assert d["samples"][0]["computed_dim"] == 1
    assert d["status"] == "pass"
