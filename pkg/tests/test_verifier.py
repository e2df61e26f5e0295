import pytest

from scrolls.invariants import ScrollData, double_point_number
from scrolls.verifier import (
    FAMILY_DEGREE_NOTE,
    conjecture_family_report,
    inequality_check,
    sweep,
    termwise_check,
    very_ample_bound,
)


def test_inequality_examples():
    rec = inequality_check(1, 2)
    assert (rec.lhs, rec.rhs, rec.relation) == (10, 10, "eq")
    rec = inequality_check(2, 2)
    assert (rec.lhs, rec.rhs, rec.relation) == (42, 42, "eq")
    rec = inequality_check(3, 2)
    assert (rec.lhs, rec.rhs, rec.relation) == (216, 168, "gt")


def test_termwise_examples():
    rec = termwise_check(3, 2)
    assert [(t.l, t.lhs, t.rhs, t.holds) for t in rec.terms] == [
        (2, 8, 8, True),
        (3, 9, 7, True),
    ]
    assert termwise_check(2, 5).terms == ()
    (term,) = [t for t in termwise_check(5, 1).terms if t.l == 5]
    assert (term.lhs, term.rhs, term.holds) == (10, 7, True)


def test_termwise_equivalence_with_span_condition():
    for n in range(3, 41):
        for k in range(1, 41):
            for term in termwise_check(n, k).terms:
                assert term.holds == term.equiv_holds
                assert term.equiv_holds == (n + k >= term.l)


def test_termwise_soundness_implies_inequality():
    for n in range(3, 31):
        for k in range(1, 31):
            record = termwise_check(n, k)
            if all(term.holds for term in record.terms):
                assert inequality_check(n, k).relation in ("eq", "gt")


def test_sweep_orders_and_classifies():
    result = sweep(range(1, 4), range(1, 2))
    assert [(r.n, r.k) for r in result.records] == [(1, 1), (2, 1), (3, 1)]
    assert [r.relation for r in result.records] == ["eq", "eq", "gt"]
    assert result.equality_set == ((1, 1), (2, 1))


def test_sweep_unordered_input_is_sorted():
    result = sweep([3, 1, 2], [2, 1])
    assert [(r.n, r.k) for r in result.records] == [
        (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)
    ]


def test_sweep_empty_range_rejected():
    with pytest.raises(ValueError):
        sweep(range(1, 1), range(1, 5))


def test_equality_exactly_for_n_at_most_two():
    result = sweep(range(1, 21), range(1, 21))
    for rec in result.records:
        assert rec.relation == ("eq" if rec.n <= 2 else "gt")


def test_double_point_sign_matches_inequality_gap():
    import math

    for n in range(1, 9):
        for k in range(1, 9):
            l = 2 * n + 2 * k - 1
            dp = double_point_number(ScrollData(n, k, l, math.factorial(n) * l))
            rec = inequality_check(n, k)
            gap = rec.lhs - rec.rhs
            assert (dp > 0) == (gap > 0)
            assert (dp == 0) == (gap == 0)


def test_very_ample_bound_examples():
    assert very_ample_bound(3, 13) == 5
    assert very_ample_bound(3, 8) == 1
    assert very_ample_bound(4, 10) == 1
    assert very_ample_bound(3, 10) == 3  # k < 4, largest odd is 3


def test_very_ample_bound_rejections():
    with pytest.raises(ValueError):
        very_ample_bound(2, 13)
    with pytest.raises(ValueError):
        very_ample_bound(3, 7)  # l must exceed 2n+1


def test_family_reports():
    reports = conjecture_family_report(10)
    assert len(reports) == 9
    for k, report in zip(range(2, 11), reports):
        assert report.data.n == 2
        assert report.data.k == k
        assert report.data.l == 2 * k + 3
        assert report.data.cn == 2 * (2 * k + 3)
        assert report.data.linear_system == "complete"
        assert report.double_point == 0
        assert report.deg_Y == (k + 1) * (2 * k + 3)
    assert reports[0].deg_Y == 21  # the degree-21 threefold anchor


def test_family_requires_at_least_order_two():
    with pytest.raises(ValueError):
        conjecture_family_report(1)


def test_family_degree_note_mentions_convention():
    assert "2*(2k+3)" in FAMILY_DEGREE_NOTE
