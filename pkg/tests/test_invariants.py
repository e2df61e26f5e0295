import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scrolls.invariants import (
    ScrollData,
    VERDICT_DOUBLE_POINTS,
    VERDICT_SMOOTH,
    _series_binomial,
    build_report,
    double_point_number,
    hyperplane_power_coefficient,
    rr_min_degree,
    scroll_degree,
    top_chern_normal,
)
from scrolls.ring import binomial


def test_hyperplane_power_examples():
    assert hyperplane_power_coefficient(2, 2) == 3
    assert hyperplane_power_coefficient(1, 2) == 2
    for n in (1, 2, 5, 9):
        assert hyperplane_power_coefficient(n, 1) == 1


def test_hyperplane_power_grid_agrees_with_binomial():
    for n in range(1, 11):
        for k in range(1, 11):
            assert hyperplane_power_coefficient(n, k) == binomial(n + k - 1, k - 1)


def test_top_chern_examples():
    assert top_chern_normal(1, 2, 5) == 10
    assert top_chern_normal(2, 2, 7) == 63
    assert top_chern_normal(3, 2, 9) == 336


def test_top_chern_rejects_small_ambient():
    with pytest.raises(ValueError):
        top_chern_normal(2, 2, 3)


def test_top_chern_general_l_closed_form():
    # independent recomputation of C(l, n) * [h^(k-1)] (1+h)^(l-n-k)
    for n in range(1, 7):
        for k in range(1, 7):
            for l in (n + k, n + k + 1, 2 * n + 2 * k - 1, 2 * n + 2 * k + 3):
                expected = binomial(l, n) * _series_binomial(l - n - k, k - 1)
                assert top_chern_normal(n, k, l) == expected


def test_series_binomial_negative_exponent():
    # (1+h)^(-2) = 1 - 2h + 3h^2 - 4h^3 + ...
    assert [_series_binomial(-2, j) for j in range(5)] == [1, -2, 3, -4, 5]
    assert _series_binomial(3, 5) == 0
    assert _series_binomial(3, -1) == 0


def test_scroll_degree_examples():
    assert scroll_degree(ScrollData(1, 2, 5, 5)) == 5
    assert scroll_degree(ScrollData(2, 2, 7, 14)) == 21
    assert scroll_degree(ScrollData(2, 3, 9, 18)) == 36


def test_double_point_examples():
    assert double_point_number(ScrollData(1, 2, 5, 5)) == 0
    assert double_point_number(ScrollData(2, 2, 7, 14)) == 0
    assert double_point_number(ScrollData(3, 2, 9, 54)) == 2592


def test_rr_min_degree_examples():
    assert rr_min_degree(1, 5) == 5
    assert rr_min_degree(2, 7) == 14
    assert rr_min_degree(3, 9) == 54


def test_scroll_data_validation():
    with pytest.raises(ValueError):
        ScrollData(0, 2, 5, 5)
    with pytest.raises(ValueError):
        ScrollData(1, 2, 2, 5)  # l < n + k
    with pytest.raises(ValueError):
        ScrollData(1, 2, 5, 0)


def test_linear_system_flag():
    assert ScrollData(2, 2, 7, 14).linear_system == "complete"
    assert ScrollData(2, 2, 7, 15).linear_system == "incomplete"
    assert ScrollData(2, 2, 7, 13).linear_system == "impossible"


def test_build_report_examples():
    smooth = build_report(ScrollData(2, 2, 7, 14))
    assert smooth.verdict == VERDICT_SMOOTH
    assert smooth.deg_Y == 21
    assert smooth.top_chern_normal == 63 * 14
    assert smooth.flags == ()

    forced = build_report(ScrollData(3, 2, 9, 54))
    assert forced.verdict == VERDICT_DOUBLE_POINTS
    assert forced.double_point == 2592

    quintic = build_report(ScrollData(1, 2, 5, 5))
    assert quintic.verdict == VERDICT_SMOOTH
    assert quintic.deg_Y == 5


def test_build_report_flags_impossible_and_fractional():
    report = build_report(ScrollData(2, 2, 7, 13))
    assert report.deg_Y == Fraction(39, 2)
    assert "non-integral scroll degree" in report.flags
    assert any("Riemann-Roch" in flag for flag in report.flags)


def test_half_dimensional_complete_case_zero_iff_n_small():
    # with l = 2n+2k-1 and the complete-system degree, the double point
    # number vanishes exactly for n in {1, 2}
    for n in range(1, 9):
        for k in range(1, 9):
            l = 2 * n + 2 * k - 1
            dp = double_point_number(ScrollData(n, k, l, math.factorial(n) * l))
            assert (dp == 0) == (n in (1, 2))
            assert dp >= 0


def test_double_point_strictly_increasing_in_cn():
    for n in range(1, 7):
        for k in range(1, 7):
            l = 2 * n + 2 * k - 1
            floor = math.factorial(n) * l
            values = [double_point_number(ScrollData(n, k, l, floor + t)) for t in range(4)]
            assert all(earlier < later for earlier, later in zip(values, values[1:]))


def test_projection_forces_double_points_even_for_small_n():
    # cn above the complete-system value: smoothness impossible also at n = 1, 2
    assert double_point_number(ScrollData(1, 2, 5, 6)) > 0
    assert double_point_number(ScrollData(2, 2, 7, 15)) > 0


@settings(derandomize=True, max_examples=120)
@given(
    st.integers(1, 8),
    st.integers(1, 8),
    st.integers(0, 12),
    st.integers(1, 400),
)
def test_k_squared_double_point_is_integral(n, k, l_extra, cn):
    data = ScrollData(n, k, n + k + l_extra, cn)
    assert (k * k * double_point_number(data)).denominator == 1


def test_van_de_ven_setting_k_equals_one():
    # trivial subgroup: the variety itself in P^(l-1); the classical surface
    # of degree 10 in P^4 is the unique smooth-consistent n = 2 case
    assert double_point_number(ScrollData(2, 1, 5, 10)) == 0
    assert double_point_number(ScrollData(3, 1, 7, 42)) == 294
    assert build_report(ScrollData(2, 1, 5, 10)).verdict == VERDICT_SMOOTH
