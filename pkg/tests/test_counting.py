from fractions import Fraction
from math import factorial

import pytest

from spinaltc.counting import (
    FAMILIES,
    ExactCount,
    check_ode_residual,
    count_bessel,
    count_c1_classes,
    count_c2_classes,
    count_nlsctc,
    count_nlstc,
    count_nlstc_via_marked,
    count_stc,
    count_stc_factored,
    count_stc_via_unlabeled,
    count_stc_via_marked,
    count_table,
    d_coef,
    derivative_row,
    double_factorial_odd,
    s_coef,
    series_coefficient_as_count,
    series_expand_s,
    table_csv,
)
from spinaltc.series import BiSeries, inverse_series, sqrt_series


@pytest.mark.parametrize("fn, n, k, value", [
    (count_stc, 3, 1, 15),
    (count_stc, 2, 1, 2),
    (count_stc, 1, 0, 1),
    (count_stc, 5, 3, 11700),
    (count_stc, 4, 0, 12),
    (count_nlstc, 5, 2, 45),
    (count_nlstc, 3, 1, 3),
    (count_c1_classes, 4, 2, 45),
    (count_c2_classes, 4, 2, 84),
    (count_nlsctc, 3, 1, 4),
    (count_nlsctc, 5, 2, 84),
    (count_stc, 5, 2, 4500),
    (count_stc_via_unlabeled, 3, 1, 15),
    (count_stc_via_unlabeled, 2, 0, 1),
    (count_stc_via_unlabeled, 5, 2, 4500),
    (s_coef, 5, 1, 120),
    (d_coef, 2, 2, 1),
    (count_bessel, 3, 3, 15),
    (s_coef, 3, 1, 6),
    (d_coef, 4, 2, 6),
])
def test_spot_values(fn, n, k, value):
    assert fn(n, k) == value


def test_tree_counts_without_reticulations():
    # (2n-3)!! rooted binary trees on n labeled leaves
    for n in range(2, 9):
        assert count_stc(n, 0) == factorial(n) // 2
        assert count_nlstc(n, 0) == 1


@pytest.mark.parametrize("fn", list(FAMILIES.values()))
def test_out_of_range_is_zero(fn):
    assert fn(3, 7) == 0


@pytest.mark.parametrize("fn", [count_stc, count_nlstc, count_bessel, s_coef])
def test_negative_raises(fn):
    with pytest.raises(ValueError):
        fn(-1, 0)
    with pytest.raises(ValueError):
        fn(2, -1)


def test_exact_count_provenance():
    c = count_stc_via_unlabeled(4, 1)
    assert isinstance(c, ExactCount) and c.provenance == "relation"
    assert count_stc(4, 1).provenance == "formula"
    with pytest.raises(ValueError):
        ExactCount(-1)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(2, 13) for k in range(0, n)])
def test_identities_agree(n, k):
    direct = count_stc(n, k)
    assert count_stc_via_unlabeled(n, k) == direct
    assert count_stc_factored(n, k) == direct
    assert count_stc_via_marked(n, k) == direct
    assert count_nlstc_via_marked(n, k) == count_nlstc(n, k)
    assert count_nlsctc(n, k) == count_c2_classes(n - 1, k)
    assert count_nlstc(n, k) == count_c1_classes(n - 1, k)


def test_big_values_are_exact():
    assert count_stc(40, 20) == count_stc_via_unlabeled(40, 20)
    assert count_stc(40, 20) > 10 ** 60


def test_table_shape_and_csv():
    rows = count_table("nlstc", 4, 2)
    assert [(n, k) for n, k, _ in rows][:3] == [(1, 0), (1, 1), (1, 2)]
    assert all(v == 1 for n, k, v in rows if k == 0)
    text = table_csv(rows)
    assert text.splitlines()[0] == "n,k,value,provenance"
    assert "4,2,15,formula" in text


def test_stc_diagonal_nonzero():
    assert all(count_stc(k + 1, k) > 0 for k in range(0, 8))


def test_series_matches_closed_form():
    s = series_expand_s(8, 8)
    for n in range(1, 9):
        for k in range(1, 9):
            assert series_coefficient_as_count(s, n, k) == s_coef(n, k)
    assert check_ode_residual(s)
    assert [s[n, 1] for n in range(9)] == [0] + [1] * 8


def test_ode_residual_detects_corruption():
    s = series_expand_s(5, 5)
    s.c[3][2] += 1
    assert not check_ode_residual(s)


@pytest.mark.parametrize("m", range(1, 6))
def test_z_derivatives_at_zero(m):
    s = series_expand_s(8, 6)
    assert [s[n, m] * factorial(m) for n in range(9)] == derivative_row(m, 8)


def test_double_factorial():
    assert [double_factorial_odd(m) for m in range(1, 6)] == [1, 1, 3, 15, 105]


def test_series_arithmetic():
    x = BiSeries.variable(0, 4, 2)
    one = BiSeries.constant(1, 4, 2)
    inv = inverse_series(one - x)
    assert [inv[i, 0] for i in range(5)] == [1] * 5
    sq = sqrt_series((one + x) * (one + x))
    assert sq == one + x
    with pytest.raises(ZeroDivisionError):
        inverse_series(x)
    with pytest.raises(ValueError):
        sqrt_series(x + 2)
    assert (x * Fraction(1, 2))[1, 0] == Fraction(1, 2)
