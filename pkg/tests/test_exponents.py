import random
from fractions import Fraction

import pytest

from ffdioph.exponents import (
    ApproxFunction,
    FamilyError,
    SetFamily,
    block_counts,
    closed_form_critical_exponent,
    convergence_exponent,
    count_upto,
    counting_dimension,
    counting_dimension_sup,
    counting_exponent,
    counting_exponent_of_psi,
    critical_exponent,
    decay_order,
    large_block_witnesses,
    parse_fraction,
    resonance_holds,
    split_series_report,
)
from ffdioph.ffield import FieldSpec
from ffdioph.laurent import LaurentMatrix
from ffdioph.polyring import Poly, PolyVector


@pytest.fixture(scope="module")
def families(F2):
    return {
        "all1": SetFamily.all_nonzero(F2, 1),
        "all2": SetFamily.all_nonzero(F2, 2),
        "monic1": SetFamily.monic_coords(F2, 1),
        "lac": SetFamily.lacunary(F2, 1, 2),
    }


# ---------------------------------------------------------------------------
# block tables
# ---------------------------------------------------------------------------


def test_block_counts_closed_forms(F2, families):
    table = block_counts(families["all1"], 6)
    assert [r.count for r in table.records] == [1, 2, 4, 8, 16, 32, 64]
    table2 = block_counts(families["all2"], 3)
    assert [r.count for r in table2.records] == [3, 12, 48, 192]


def test_block_counts_match_enumeration(F2, F3):
    for field in (F2, F3):
        fams = [
            SetFamily.all_nonzero(field, 1),
            SetFamily.all_nonzero(field, 2),
            SetFamily.monic_coords(field, 1),
            SetFamily.monic_coords(field, 2),
            SetFamily.lacunary(field, 1, 2),
            SetFamily.degree_pattern(field, [[0, 2], [1]]),
        ]
        nmax = 4 if field.k == 2 else 3
        for fam in fams:
            for N in range(nmax + 1):
                assert fam.block_count(N) == sum(1 for _ in fam.block(N))


def test_lacunary_list_blocks(F2):
    fam = SetFamily.lacunary_list(F2, 1, [1, 2, 4, 8])
    counts = [fam.block_count(N) for N in range(9)]
    assert counts == [0, 2, 4, 0, 16, 0, 0, 0, 256]


def test_membership(F2, families):
    x = PolyVector.make([Poly.x(F2)])
    assert families["all1"].contains(x)
    assert families["lac"].contains(x)  # degree 1 = 2^0
    deg3 = PolyVector.make([Poly.make(F2, [1, 1, 0, 1])])
    assert not families["lac"].contains(deg3)
    zero = PolyVector.make([Poly.zero(F2)])
    assert not families["all1"].contains(zero)
    cube = PolyVector.make([Poly.make(F2, [1, 0, 1])])  # not monic? it is monic deg 2
    assert families["monic1"].contains(cube)


def test_explicit_family(F2):
    vec = PolyVector.make([Poly.x(F2)])
    fam = SetFamily.explicit_list([vec])
    assert fam.contains(vec)
    assert fam.block_count(1) == 1 and fam.block_count(2) == 0
    with pytest.raises(FamilyError):
        counting_exponent(fam, 8)


# ---------------------------------------------------------------------------
# estimators against closed forms
# ---------------------------------------------------------------------------


def test_convergence_exponent(families):
    for name, expected in (("all1", 1), ("all2", 2), ("monic1", 1), ("lac", 1)):
        est = convergence_exponent(families[name], 12)
        assert est.value is not None
        assert abs(est.value - expected) <= 0.1
        assert est.exact == Fraction(expected)


def test_counting_exponent(families):
    for name, expected in (("all1", 1), ("all2", 2), ("monic1", 1), ("lac", 1)):
        est = counting_exponent(families[name], 12)
        assert abs(est.value - expected) <= 0.1


def test_requires_tail(F2):
    with pytest.raises(FamilyError):
        convergence_exponent(SetFamily.all_nonzero(F2, 1), 3)


def test_decay_order_power(F2, families):
    psi = ApproxFunction.power(F2, 3)
    est = decay_order(psi, families["all1"], 12)
    assert est.exact == Fraction(3)
    assert est.value == pytest.approx(3.0, abs=1e-9)


def test_decay_order_power_log(F2, families):
    psi = ApproxFunction.power_log(F2, 2, 1)
    est = decay_order(psi, families["all1"], 40)
    assert not est.flags
    assert abs(est.value - 2.0) <= 0.1
    assert est.exact == Fraction(2)


def test_decay_order_interleaved_table_flags(F2, families):
    entries = {N: (-2 * N if N % 2 == 0 else -3 * N) for N in range(17)}
    psi = ApproxFunction.from_table(F2, entries)
    est = decay_order(psi, families["all1"], 16)
    assert "limit-does-not-exist" in est.flags
    assert est.exact is None


def test_decay_order_needs_support(F2, families):
    psi = ApproxFunction.from_table(F2, {})
    with pytest.raises(FamilyError):
        decay_order(psi, families["all1"], 12)


def test_critical_exponent_power(F2):
    for v, n, expected in ((3, 1, Fraction(1, 2)), (2, 1, Fraction(2, 3)), (3, 2, Fraction(3, 4))):
        psi = ApproxFunction.power(F2, v)
        est = critical_exponent(psi, n, 12)
        assert est.exact == expected
        assert abs(est.value - float(expected)) <= 0.05
    assert closed_form_critical_exponent(1, 1, Fraction(3)) == Fraction(1, 2)


def test_critical_exponent_restricted(F2, families):
    psi = ApproxFunction.restricted(ApproxFunction.power(F2, 3), families["lac"])
    est = critical_exponent(psi, 1, 12)
    assert abs(est.value - 0.5) <= 0.05


def test_critical_exponent_constant_flags(F2):
    psi = ApproxFunction.from_table(F2, {N: -3 for N in range(17)})
    est = critical_exponent(psi, 1, 16)
    assert "slow-convergence" in est.flags


# ---------------------------------------------------------------------------
# psi structure
# ---------------------------------------------------------------------------


def test_power_quantization_down(F2):
    psi = ApproxFunction.power(F2, parse_fraction("3/2"))
    for N in range(8):
        e = psi.exponent_at_norm(N)
        assert isinstance(e, int)
        assert Fraction(e) <= Fraction(-3, 2) * N  # never above the true value
        assert Fraction(e) > Fraction(-3, 2) * N - 1


def test_restricted_agrees_with_pair(F2, families):
    # the membership predicate from (psi, S) and from the restricted psi agree
    rng = random.Random(12)
    psi = ApproxFunction.power(F2, 2)
    restricted = ApproxFunction.restricted(psi, families["lac"])
    qs = [q for N in range(1, 5) for q in families["all1"].block(N)]
    for _ in range(120):
        q = rng.choice(qs)
        word = [rng.randrange(2) for _ in range(10)]
        a = LaurentMatrix.from_unit_prefixes(F2, [[word]], 10)
        lhs = resonance_holds(q, a, psi, families["lac"])
        rhs = resonance_holds(q, a, restricted)
        assert lhs == rhs


def test_psi_zero_never_resonates(F2, families):
    psi = ApproxFunction.restricted(ApproxFunction.power(F2, 2), families["lac"])
    q = PolyVector.make([Poly.make(F2, [1, 1, 0, 1])])  # degree 3: off support
    a = LaurentMatrix.from_unit_prefixes(F2, [[[0] * 8]], 8)
    assert not resonance_holds(q, a, psi)


def test_psi_config_round_trip(F2, families):
    psi = ApproxFunction.restricted(ApproxFunction.power(F2, "3/2"), families["lac"])
    cfg = psi.to_config()
    again = ApproxFunction.from_config(F2, cfg)
    for N in range(9):
        assert again.exponent_at_norm(N) == psi.exponent_at_norm(N)


def test_family_config_round_trip(F2):
    fams = [
        SetFamily.all_nonzero(F2, 2),
        SetFamily.monic_coords(F2, 1),
        SetFamily.lacunary(F2, 1, 3),
        SetFamily.lacunary_list(F2, 1, [1, 2, 4]),
        SetFamily.degree_pattern(F2, [[0, 1], [2]]),
        SetFamily.explicit_list([PolyVector.make([Poly.x(F2)])]),
    ]
    for fam in fams:
        again = SetFamily.from_config(F2, fam.to_config())
        for N in range(5):
            assert again.block_count(N) == fam.block_count(N)


# ---------------------------------------------------------------------------
# counting quantities
# ---------------------------------------------------------------------------


def test_count_upto_power(F2, families):
    psi = ApproxFunction.power(F2, 3)
    # v >= v0: every vector counts; v < v0: only the constants remain
    assert count_upto(psi, Fraction(3), 6) == families["all1"].cumulative_count(6)
    assert count_upto(psi, Fraction(2), 6) == 1
    assert count_upto(psi, Fraction(4), 6) == families["all1"].cumulative_count(6)


def test_count_monotone(F2):
    psi = ApproxFunction.power(F2, 2)
    grid = [Fraction(1), Fraction(2), Fraction(3)]
    prev_by_v = {v: 0 for v in grid}
    for N in range(8):
        prev = 0
        for v in grid:
            c = count_upto(psi, v, N)
            assert c >= prev  # monotone in v
            assert c >= prev_by_v[v]  # monotone in N
            prev_by_v[v] = c
            prev = c


def test_counting_dimension_branches(F2):
    psi = ApproxFunction.power(F2, 3)
    d, report = counting_dimension(psi, Fraction(3), 1, 12)
    assert report.unbounded and abs(d - 0.5) <= 0.05
    d0, report0 = counting_dimension(psi, Fraction(2), 1, 12)
    assert not report0.unbounded and d0 == 0.0
    gamma = counting_exponent_of_psi(psi, Fraction(3), 12).gamma
    assert gamma is not None and abs(gamma.value - 1.0) <= 0.1


def test_counting_dimension_sup(F2):
    psi = ApproxFunction.power(F2, 3)
    grid = [Fraction(j, 4) for j in range(1, 17)]
    sup, values = counting_dimension_sup(psi, 1, grid, 12)
    assert abs(sup - 0.5) <= 0.1
    assert len(values) == len(grid)


# ---------------------------------------------------------------------------
# large blocks and the partition
# ---------------------------------------------------------------------------


def test_large_block_witnesses(F2, families):
    w = large_block_witnesses(families["all1"], Fraction(1, 2), 10)
    assert w == list(range(11))  # every block qualifies
    wl = large_block_witnesses(families["lac"], Fraction(1, 2), 10)
    assert wl == [1, 2, 4, 8]
    # slack above the exponent: every nonempty block qualifies
    wbig = large_block_witnesses(families["lac"], Fraction(3), 10, v=Fraction(1))
    assert wbig == [1, 2, 4, 8]


def test_partition_identity(F2, families):
    psi = ApproxFunction.power(F2, 3)
    report = split_series_report(psi, Fraction(1, 2), Fraction(1, 2), 1, 10)
    assert report.identity_holds
    assert report.mu == Fraction(4)
    assert report.tail_part_decaying
    restricted = ApproxFunction.restricted(ApproxFunction.power(F2, 3), families["lac"])
    report2 = split_series_report(restricted, Fraction(1, 2), Fraction(1, 2), 1, 10)
    assert report2.identity_holds


def test_partition_pure_power_single_band(F2):
    # a pure power error lands in exactly one band at every large norm
    psi = ApproxFunction.power(F2, 2)
    report = split_series_report(psi, Fraction(1), Fraction(1, 2), 1, 10)
    assert report.identity_holds
    populated = [name for name, vals in report.part_block_logs if vals]
    assert any(name.startswith("band") for name in populated)


def test_partition_validates(F2):
    psi = ApproxFunction.power(F2, 2)
    with pytest.raises(FamilyError):
        split_series_report(psi, Fraction(1, 2), Fraction(0), 1, 8)
    with pytest.raises(FamilyError):
        split_series_report(psi, Fraction(0), Fraction(1, 2), 1, 8)
