import random

import pytest

from ffdioph.laurent import (
    LaurentMatrix,
    LaurentSeries,
    PrecisionError,
    dist_nearest_poly,
    dist_nearest_poly_vec,
    resonance_distance,
    row_times_matrix,
)
from ffdioph.polyring import AbsValue, Poly, PolyVector


def S(field, lead, coeffs, precision=None):
    return LaurentSeries.make(field, lead, coeffs, precision)


def random_exact(field, rng, span=6):
    lead = rng.randint(-3, 3)
    coeffs = [rng.randrange(field.k) for _ in range(span)]
    return LaurentSeries.make(field, lead, coeffs, None)


# ---------------------------------------------------------------------------
# arithmetic and the absolute value
# ---------------------------------------------------------------------------


def test_char2_cancellation(F2):
    a = S(F2, 1, [1], 5)
    total = a + a
    assert total.known_zero()
    assert total.precision == 5


def test_product_abs(F2):
    prod = S(F2, 1, [1]) * S(F2, 2, [1])
    assert prod.lead == 3
    assert prod.abs_value() == AbsValue.of(-3)


def test_eq27_max_rule(F2, F3):
    rng = random.Random(1)
    for field in (F2, F3):
        for _ in range(300):
            f = random_exact(field, rng)
            g = random_exact(field, rng)
            fa, ga = f.abs_value(), g.abs_value()
            sa = (f + g).abs_value()
            assert sa <= max(fa, ga)
            if fa != ga:
                assert sa == max(fa, ga)


def test_multiplicativity_exact(F3):
    rng = random.Random(2)
    for _ in range(300):
        f = random_exact(F3, rng)
        g = random_exact(F3, rng)
        assert (f * g).abs_value() == f.abs_value() * g.abs_value()


def test_precision_soundness(F2):
    # recomputing with wider windows never changes reported coefficients
    rng = random.Random(3)
    for _ in range(100):
        coeffs_a = [rng.randrange(2) for _ in range(8)]
        coeffs_b = [rng.randrange(2) for _ in range(8)]
        lo = S(F2, 1, coeffs_a[:4], 4) * S(F2, 0, coeffs_b[:4], 3)
        hi = S(F2, 1, coeffs_a, 8) * S(F2, 0, coeffs_b, 7)
        assert lo.precision is not None
        for i in range(lo.lead if lo.coeffs else 1, lo.precision + 1):
            assert lo.coeff(i) == hi.coeff(i)


def test_window_propagation_mul(F2):
    f = S(F2, 1, [1, 0, 1], 3)
    g = S(F2, 2, [1], 6)
    prod = f * g
    # product window ends at min(3 + 2, 6 + 1) = 5
    assert prod.precision == 5
    assert prod.coeff(3) == 1 and prod.coeff(5) == 1
    with pytest.raises(PrecisionError):
        prod.coeff(6)


def test_narrow_windows_still_certify_lead(F2):
    # windows never underflow for nonzero factors: the product window
    # always reaches the product lead
    f = S(F2, 5, [1], 5)
    g = S(F2, 5, [1], 5)
    prod = f * g
    assert prod.lead == 10 and prod.precision == 10


def test_poly_part_needs_window(F2):
    f = S(F2, -2, [1], -1)  # knows X^2, nothing at X^1 or below
    with pytest.raises(PrecisionError):
        f.poly_part()


def test_abs_needs_certainty(F2):
    w = LaurentSeries.window_zero(F2, 6)
    with pytest.raises(PrecisionError):
        w.abs_value()
    assert LaurentSeries.exact_zero(F2).abs_value() == AbsValue.ZERO


def test_truncate(F2):
    f = S(F2, 1, [1, 1, 1], None)
    t = f.truncate(2)
    assert t.coeffs == (1, 1) and t.precision == 2
    with pytest.raises(PrecisionError):
        t.truncate(4)


# ---------------------------------------------------------------------------
# embedding and fractional parts
# ---------------------------------------------------------------------------


def test_embed_poly(F2):
    f = LaurentSeries.from_poly(Poly.make(F2, [1, 0, 1]))
    assert f.abs_value() == AbsValue.of(2)
    assert f.lead == -2
    assert LaurentSeries.from_poly(Poly.zero(F2)).is_exact_zero()
    assert LaurentSeries.from_poly(Poly.one(F2)).abs_value() == AbsValue.of(0)


def test_frac_part_examples(F2, F3):
    mixed = LaurentSeries.from_poly(Poly.x(F2)) + S(F2, 1, [1])
    frac = mixed.frac_part()
    assert frac.lead == 1 and dist_nearest_poly(mixed) == AbsValue.of(-1)
    poly = LaurentSeries.from_poly(Poly.make(F2, [1, 1, 1]))
    assert dist_nearest_poly(poly) == AbsValue.ZERO
    deep = S(F3, 2, [1, 0, 0, 1])  # X^-2 + X^-5
    assert deep.frac_part() == deep
    assert dist_nearest_poly(deep) == AbsValue.of(-2)


def test_poly_part(F2):
    mixed = LaurentSeries.from_poly(Poly.make(F2, [0, 1, 1])) + S(F2, 2, [1])
    assert mixed.poly_part() == Poly.make(F2, [0, 1, 1])
    assert S(F2, 1, [1]).poly_part().is_zero()


def test_dist_vec_examples(F2):
    v1 = LaurentSeries.from_poly(Poly.x(F2)) + S(F2, 1, [1])
    v2 = LaurentSeries.from_poly(Poly.make(F2, [0, 0, 1]))
    assert dist_nearest_poly_vec([v1, v2]) == AbsValue.of(-1)
    polys = [LaurentSeries.from_poly(Poly.x(F2)), LaurentSeries.from_poly(Poly.one(F2))]
    assert dist_nearest_poly_vec(polys) == AbsValue.ZERO
    assert dist_nearest_poly_vec([S(F2, 3, [1]), S(F2, 1, [1])]) == AbsValue.of(-1)


def test_dist_vec_precision_error(F2):
    undecided = LaurentSeries.window_zero(F2, 4)
    with pytest.raises(PrecisionError):
        dist_nearest_poly_vec([undecided])


# ---------------------------------------------------------------------------
# matrices and the resonance product
# ---------------------------------------------------------------------------


def test_row_times_matrix_identity(F2):
    a = LaurentMatrix.make([[S(F2, 1, [1, 0, 1], 5)]])
    q = PolyVector.make([Poly.one(F2)])
    out = row_times_matrix(q, a)
    assert out[0] == a.entry(0, 0)


def test_polynomial_matrix_resonates_exactly(F2):
    q = PolyVector.make([Poly.x(F2), Poly.make(F2, [1, 1])])
    a = LaurentMatrix.from_poly_matrix([[Poly.make(F2, [1, 1])], [Poly.x(F2)]])
    assert resonance_distance(q, a) == AbsValue.ZERO


def test_hand_multiplied_example(F2):
    # q = (X, 1) against column (X^-1, X^-2): product 1 + X^-2
    q = PolyVector.make([Poly.x(F2), Poly.one(F2)])
    a = LaurentMatrix.make([[S(F2, 1, [1])], [S(F2, 2, [1])]])
    out = row_times_matrix(q, a)
    assert out[0].poly_part() == Poly.one(F2)
    assert resonance_distance(q, a) == AbsValue.of(-2)


def test_translation_invariance(F2):
    rng = random.Random(4)
    q = PolyVector.make([Poly.x(F2), Poly.make(F2, [1, 0, 1])])
    for _ in range(50):
        a = LaurentMatrix.make(
            [[random_exact(F2, rng)] for _ in range(2)]
        )
        shift = LaurentMatrix.from_poly_matrix(
            [[Poly.from_index(F2, rng.randrange(16), 4)] for _ in range(2)]
        )
        assert resonance_distance(q, a) == resonance_distance(q, a + shift)


def test_unit_cube_check(F2):
    inside = LaurentMatrix.make([[S(F2, 1, [1], 4)]])
    assert inside.in_unit_cube()
    outside = LaurentMatrix.make([[S(F2, 0, [1], 4)]])
    assert not outside.in_unit_cube()


def test_dimension_mismatch(F2):
    q = PolyVector.make([Poly.x(F2)])
    a = LaurentMatrix.make([[S(F2, 1, [1])], [S(F2, 1, [1])]])
    with pytest.raises(ValueError):
        row_times_matrix(q, a)


def test_serialization(F2):
    f = S(F2, -1, [1, 0, 1], 4)
    assert f.to_config() == {"lead": -1, "coeffs": [1, 0, 1], "precision": 4}
