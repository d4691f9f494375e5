"""Linear algebra over F_k for exact solution counting.

The measure computations reduce to counting solutions of affine systems
M x = b over a finite field.  ``LinearSystem`` echelonizes the
coefficient matrix once (tracking the row operations), after which any
number of right-hand sides can be tested for consistency cheaply.  The
number of solutions of a consistent system is k^(n_vars - rank), so
counts are returned as exponents and stay exact.

For GF(2) rows are packed into int bitmasks; the generic path works
over any ``FieldSpec``.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .ffield import FieldSpec


class LinearSystem:
    """Echelonized linear system over a finite field.

    rows: coefficient rows (lists of encodings of length n_vars).
    After construction, ``rank`` is available and ``solution_count_exp``
    answers queries for arbitrary right-hand sides.
    """

    def __init__(self, field: FieldSpec, n_vars: int, rows: Sequence[Sequence[int]]):
        self.field = field
        self.n_vars = n_vars
        self.n_rows = len(rows)
        self._gf2 = field.k == 2
        if self._gf2:
            self._init_gf2(rows)
        else:
            self._init_generic(rows)

    # -- GF(2): rows as bitmasks, transform tracked as bitmask over rows ----

    def _init_gf2(self, rows: Sequence[Sequence[int]]) -> None:
        packed = []
        for r in rows:
            mask = 0
            for j, c in enumerate(r):
                if c & 1:
                    mask |= 1 << j
            packed.append(mask)
        trans = [1 << i for i in range(len(packed))]
        rank = 0
        for col in range(self.n_vars):
            pivot = None
            for i in range(rank, len(packed)):
                if (packed[i] >> col) & 1:
                    pivot = i
                    break
            if pivot is None:
                continue
            packed[rank], packed[pivot] = packed[pivot], packed[rank]
            trans[rank], trans[pivot] = trans[pivot], trans[rank]
            for i in range(len(packed)):
                if i != rank and ((packed[i] >> col) & 1):
                    packed[i] ^= packed[rank]
                    trans[i] ^= trans[rank]
            rank += 1
        self.rank = rank
        # combinations producing zero rows: consistency certificates
        self._zero_combos_gf2 = [trans[i] for i in range(len(packed)) if not packed[i]]
        self._rref_gf2 = packed

    # -- generic field -------------------------------------------------------

    def _init_generic(self, rows: Sequence[Sequence[int]]) -> None:
        f = self.field
        mat = [list(r) for r in rows]
        n = len(mat)
        trans = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        rank = 0
        for col in range(self.n_vars):
            pivot = None
            for i in range(rank, n):
                if mat[i][col]:
                    pivot = i
                    break
            if pivot is None:
                continue
            mat[rank], mat[pivot] = mat[pivot], mat[rank]
            trans[rank], trans[pivot] = trans[pivot], trans[rank]
            piv_inv = f.inv(mat[rank][col])
            if piv_inv != 1:
                mat[rank] = [f.mul(piv_inv, c) for c in mat[rank]]
                trans[rank] = [f.mul(piv_inv, c) for c in trans[rank]]
            for i in range(n):
                if i != rank and mat[i][col]:
                    factor = mat[i][col]
                    mat[i] = [
                        f.sub(c, f.mul(factor, d)) for c, d in zip(mat[i], mat[rank])
                    ]
                    trans[i] = [
                        f.sub(c, f.mul(factor, d)) for c, d in zip(trans[i], trans[rank])
                    ]
            rank += 1
        self.rank = rank
        self._zero_combos = [trans[i] for i in range(n) if not any(mat[i])]
        self._rref = mat

    # -- queries ---------------------------------------------------------------

    def consistent(self, rhs: Sequence[int]) -> bool:
        """Whether M x = rhs has a solution."""
        if self._gf2:
            for combo in self._zero_combos_gf2:
                acc = 0
                m = combo
                while m:
                    low = m & -m
                    acc ^= rhs[low.bit_length() - 1] & 1
                    m ^= low
                if acc:
                    return False
            return True
        f = self.field
        for combo in self._zero_combos:
            acc = 0
            for c, b in zip(combo, rhs):
                if c and b:
                    acc = f.add(acc, f.mul(c, b))
            if acc:
                return False
        return True

    def solution_count_exp(self, rhs: Optional[Sequence[int]] = None) -> Optional[int]:
        """Exponent e with k^e solutions, or None if inconsistent."""
        if rhs is not None and any(rhs) and not self.consistent(rhs):
            return None
        return self.n_vars - self.rank

    def certificate_signature(self, rhs: Sequence[int], row_offset: int = 0) -> tuple:
        """Dot products of the zero-row certificates with a right-hand
        side supported on rows [row_offset, row_offset + len(rhs)).

        A full rhs split into segments is consistent iff the segment
        signatures cancel; over GF(2) that means they are equal.
        """
        if self._gf2:
            out = 0
            for ci, combo in enumerate(self._zero_combos_gf2):
                acc = 0
                for i, v in enumerate(rhs):
                    if v & 1 and (combo >> (row_offset + i)) & 1:
                        acc ^= 1
                if acc:
                    out |= 1 << ci
            return (out,)
        f = self.field
        sig = []
        for combo in self._zero_combos:
            acc = 0
            for i, v in enumerate(rhs):
                if v:
                    c = combo[row_offset + i]
                    if c:
                        acc = f.add(acc, f.mul(c, v))
            sig.append(acc)
        return tuple(sig)

    def negate_signature(self, sig: tuple) -> tuple:
        """The signature that cancels the given one."""
        if self._gf2:
            return sig
        f = self.field
        return tuple(f.neg(x) for x in sig)


def rank_of(field: FieldSpec, n_vars: int, rows: Sequence[Sequence[int]]) -> int:
    return LinearSystem(field, n_vars, rows).rank


def rowspace_contains(
    field: FieldSpec,
    n_vars: int,
    rows: Sequence[Sequence[int]],
    vec: Sequence[int],
) -> bool:
    """Whether vec lies in the row span of rows."""
    base = LinearSystem(field, n_vars, rows).rank
    aug = LinearSystem(field, n_vars, list(rows) + [list(vec)]).rank
    return aug == base


def solve_unique(
    field: FieldSpec, n_vars: int, rows: Sequence[Sequence[int]], rhs: Sequence[int]
) -> Optional[List[int]]:
    """Solve a square-rank system; returns one solution with free vars set to 0."""
    f = field
    mat = [list(r) + [b] for r, b in zip(rows, rhs)]
    n = len(mat)
    rank = 0
    pivots = []
    for col in range(n_vars):
        pivot = None
        for i in range(rank, n):
            if mat[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        piv_inv = f.inv(mat[rank][col])
        if piv_inv != 1:
            mat[rank] = [f.mul(piv_inv, c) for c in mat[rank]]
        for i in range(n):
            if i != rank and mat[i][col]:
                factor = mat[i][col]
                mat[i] = [f.sub(c, f.mul(factor, d)) for c, d in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, n):
        if mat[i][n_vars]:
            return None
    sol = [0] * n_vars
    for i, col in enumerate(pivots):
        sol[col] = mat[i][n_vars]
    return sol


def nullspace_sample(
    field: FieldSpec, n_vars: int, rows: Sequence[Sequence[int]], avoid: Sequence[int]
) -> Optional[List[int]]:
    """A solution of M x = 0 with avoid . x != 0, if one exists.

    Used to exhibit counterexample cylinders: a point satisfying the
    first constraint set but violating the linear functional ``avoid``.
    """
    f = field
    base = LinearSystem(field, n_vars, rows)
    aug = LinearSystem(field, n_vars, list(rows) + [list(avoid)])
    if aug.rank == base.rank:
        return None  # avoid is implied by rows: no such point
    # solve rows . x = 0, avoid . x = 1
    full = [list(r) for r in rows] + [list(avoid)]
    rhs = [0] * len(rows) + [1]
    return solve_unique(f, n_vars, full, rhs)
