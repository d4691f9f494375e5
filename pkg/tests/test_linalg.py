import itertools

import pytest

from ffdioph.ffield import FieldSpec
from ffdioph.linalg import (
    LinearSystem,
    nullspace_sample,
    rank_of,
    rowspace_contains,
    solve_unique,
)


def brute_count(field, n_vars, rows, rhs):
    count = 0
    for point in itertools.product(range(field.k), repeat=n_vars):
        ok = True
        for row, b in zip(rows, rhs):
            acc = 0
            for c, x in zip(row, point):
                acc = field.add(acc, field.mul(c, x))
            if acc != b:
                ok = False
                break
        if ok:
            count += 1
    return count


@pytest.mark.parametrize("k,l", [(2, 1), (3, 1), (2, 2)])
def test_solution_counts_match_enumeration(k, l):
    field = FieldSpec(k, l)
    rows = [[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0]]  # third = sum of first two in char 2
    for rhs in ([0, 0, 0], [1, 0, 1], [1, 1, 1]):
        system = LinearSystem(field, 4, rows)
        exp = system.solution_count_exp(rhs)
        brute = brute_count(field, 4, rows, rhs)
        if exp is None:
            assert brute == 0
        else:
            assert brute == field.k**exp


def test_rank_gf2():
    field = FieldSpec(2)
    assert rank_of(field, 3, [[1, 0, 0], [0, 1, 0], [1, 1, 0]]) == 2
    assert rank_of(field, 3, []) == 0
    assert rank_of(field, 2, [[1, 1], [1, 1]]) == 1


def test_rank_gf3():
    field = FieldSpec(3)
    # second row = 2 * first
    assert rank_of(field, 2, [[1, 2], [2, 1]]) == 1
    assert rank_of(field, 2, [[1, 2], [2, 2]]) == 2


def test_consistency_certificates():
    field = FieldSpec(2)
    rows = [[1, 1], [1, 1]]
    system = LinearSystem(field, 2, rows)
    assert system.consistent([0, 0])
    assert system.consistent([1, 1])
    assert not system.consistent([1, 0])
    assert system.solution_count_exp([1, 0]) is None


def test_certificate_signatures_split():
    field = FieldSpec(2)
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    system = LinearSystem(field, 3, rows)
    for rhs in itertools.product(range(2), repeat=3):
        sig_a = system.certificate_signature(rhs[:2], 0)
        sig_b = system.certificate_signature(rhs[2:], 2)
        joined = system.negate_signature(sig_b) == sig_a
        assert joined == system.consistent(list(rhs))


def test_rowspace_and_solve():
    field = FieldSpec(3)
    rows = [[1, 0, 2], [0, 1, 1]]
    assert rowspace_contains(field, 3, rows, [1, 1, 0])  # sum
    assert not rowspace_contains(field, 3, rows, [0, 0, 1])
    sol = solve_unique(field, 3, rows, [2, 1])
    assert sol is not None
    for row, b in zip(rows, [2, 1]):
        acc = 0
        for c, x in zip(row, sol):
            acc = field.add(acc, field.mul(c, x))
        assert acc == b
    assert solve_unique(field, 2, [[1, 1], [2, 2]], [1, 1]) is None


def test_nullspace_sample():
    field = FieldSpec(2)
    rows = [[1, 1, 0, 0]]
    avoid = [0, 0, 1, 0]
    sol = nullspace_sample(field, 4, rows, avoid)
    assert sol is not None
    assert (sol[0] + sol[1]) % 2 == 0
    assert sol[2] == 1
    # implied functional has no violating point
    assert nullspace_sample(field, 4, rows, [1, 1, 0, 0]) is None
