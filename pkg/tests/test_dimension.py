from fractions import Fraction

import pytest

from ffdioph.dimension import (
    CoverVerdict,
    DimensionError,
    Regime,
    consistency_check,
    cover_cost_report,
    thm1_verdict,
    thm2_verdict,
)
from ffdioph.exponents import SetFamily
from ffdioph.ffield import FieldSpec


def F(x):
    return Fraction(x)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


def test_thm1_examples():
    v = thm1_verdict(1, 1, F(1), F(3))
    assert v.regime is Regime.DIMENSION and v.dim_value == F(1) / 2
    v = thm1_verdict(2, 1, F(2), F(1))
    assert v.regime is Regime.FULL_MEASURE and v.dim_value == 2
    v = thm1_verdict(1, 1, F(1), F(1))
    assert v.regime is Regime.CRITICAL_UNDECIDED and v.dim_value == 1


def test_thm2_examples():
    assert thm2_verdict(1, 1, F(1) / 2).dim_value == F(1) / 2
    assert thm2_verdict(2, 2, F(5)).dim_value == 4  # saturates at mn
    assert thm2_verdict(3, 2, Fraction(5, 4)).dim_value == Fraction(21, 4)


def test_verdict_validation():
    with pytest.raises(DimensionError):
        thm1_verdict(1, 1, F(2), F(1))  # conv exp above m
    with pytest.raises(DimensionError):
        thm1_verdict(1, 1, F(1), F(-1))
    with pytest.raises(DimensionError):
        thm1_verdict(0, 1, F(0), F(1))
    with pytest.raises(DimensionError):
        thm2_verdict(1, 1, F(-1))


def test_dimension_bounds_and_monotonicity():
    for m in (1, 2, 3):
        for n in (1, 2):
            prev = None
            for lam_num in range(2 * m, 12):
                lam = Fraction(lam_num, 2)
                v = thm1_verdict(m, n, F(m), lam)
                assert Fraction(n * (m - 1)) <= v.dim_value <= Fraction(m * n)
                if prev is not None:
                    assert v.dim_value <= prev  # non-increasing in the decay order
                prev = v.dim_value
            # non-decreasing in the convergence exponent
            dims = [thm1_verdict(m, n, Fraction(j, 4), F(2 * m)).dim_value for j in range(0, 4 * m + 1)]
            assert all(a <= b for a, b in zip(dims, dims[1:]))


def test_route_identity_on_rational_grid():
    # both formulas agree whenever n * decay >= conv (power error on the
    # full family: conv = m, critical = (m+n)/(1+v))
    for m in (1, 2, 3):
        for n in (1, 2):
            v = Fraction(m, n)
            while v <= 10:
                t1 = thm1_verdict(m, n, F(m), v)
                t2 = thm2_verdict(m, n, Fraction(m + n) / (1 + v))
                assert t1.dim_value == t2.dim_value
                v += Fraction(1, 4)


def test_consistency_exact_and_estimated(F2):
    all1 = SetFamily.all_nonzero(F2, 1)
    rep = consistency_check(all1, F(3), 1)
    assert rep.exact_match is True and rep.thm1.dim_value == F(1) / 2
    all2 = SetFamily.all_nonzero(F2, 2)
    rep2 = consistency_check(all2, F(4), 1)
    assert rep2.exact_match is True and rep2.thm1.dim_value == Fraction(8, 5)
    lac = SetFamily.lacunary(F2, 1, 2)
    rep3 = consistency_check(lac, F(3), 1)
    assert rep3.gap <= 0.1


# ---------------------------------------------------------------------------
# cover diagnostic
# ---------------------------------------------------------------------------


def test_cover_dichotomy(F2):
    all1 = SetFamily.all_nonzero(F2, 1)
    above = cover_cost_report(all1, F(3), Fraction(1, 8), Fraction(3, 5), 2, 14)
    assert above.verdict is CoverVerdict.DECAYING
    assert above.threshold == F(1) / 2
    below = cover_cost_report(all1, F(3), Fraction(1, 8), Fraction(1, 4), 2, 14)
    assert below.verdict is CoverVerdict.GROWING
    at_full = cover_cost_report(all1, F(3), Fraction(1, 8), Fraction(1), 2, 14)
    assert at_full.verdict is CoverVerdict.DECAYING


def test_cover_rows_exact(F2):
    all1 = SetFamily.all_nonzero(F2, 1)
    report = cover_cost_report(all1, F(3), Fraction(1, 8), Fraction(3, 5), 2, 8)
    assert report.s_length == sum((r.term for r in report.rows), Fraction(0))
    for row in report.rows:
        assert row.term > 0


def test_cover_validation(F2):
    all1 = SetFamily.all_nonzero(F2, 1)
    with pytest.raises(DimensionError):
        cover_cost_report(all1, F(3), Fraction(0), Fraction(1, 2), 2, 10)
    with pytest.raises(DimensionError):
        cover_cost_report(all1, F(3), Fraction(1, 8), Fraction(2), 2, 10)  # s > mn
    with pytest.raises(DimensionError):
        cover_cost_report(all1, F(3), Fraction(1, 8), Fraction(1, 2), 12, 10)
