"""Exact Haar measures of resonant neighborhoods.

A matrix A in the unit cube is described by its coefficient variables
a_{ij,t} (row i, column j, tail index t >= 1).  The neighborhoods

    plain(q, r)          ||q A|| < k^-r
    coprime(q, r)        |q A - p| < k^-r with every p_j coprime to q   (m = 1)
    content-coprime(q,r) |q A - p| < k^-r with every p_j coprime to the
                         gcd of the coordinates of q

are finite unions of solution sets of affine-linear systems in the
a_{ij,t}: the fractional coefficients of q A at indices 1..r vanish,
and (for the coprime flavors) the polynomial part of q A equals an
admissible p.  Distinct p give disjoint components, and the constraint
sets do not couple different columns j, so all measures and pairwise
intersection measures reduce to solution counting over one column and
an n-th power.

Everything here is exact: measures are ``KadicMeasure`` values
num * k^-exp with integer num, and the full-enumeration oracle
recomputes small cases point by point through the Laurent layer.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .ffield import FieldSpec
from .laurent import LaurentMatrix, LaurentSeries, PrecisionError, row_times_matrix
from .linalg import LinearSystem, solve_unique
from .polyring import (
    AbsValue,
    Poly,
    PolyVector,
    dependent_multipliers,
    enumerate_polys_upto,
    poly_gcd,
    vectors_linearly_dependent,
)


class MeasureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact measures num * k^-exp
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KadicMeasure:
    """Exact measure num * k^-exp of a subset of the unit cube."""

    num: int
    exp: int
    k: int

    @staticmethod
    def make(k: int, num: int, exp: int) -> "KadicMeasure":
        if num < 0 or exp < 0:
            raise MeasureError("measures are non-negative with non-negative depth")
        if num == 0:
            return KadicMeasure(0, 0, k)
        while exp > 0 and num % k == 0:
            num //= k
            exp -= 1
        if num > k**exp:
            raise MeasureError(f"measure {num}*k^-{exp} exceeds 1")
        return KadicMeasure(num, exp, k)

    @staticmethod
    def zero(k: int) -> "KadicMeasure":
        return KadicMeasure(0, 0, k)

    @staticmethod
    def one(k: int) -> "KadicMeasure":
        return KadicMeasure(1, 0, k)

    def __add__(self, other: "KadicMeasure") -> "KadicMeasure":
        self._check(other)
        e = max(self.exp, other.exp)
        num = self.num * self.k ** (e - self.exp) + other.num * self.k ** (e - other.exp)
        return KadicMeasure.make(self.k, num, e)

    def __mul__(self, other: "KadicMeasure") -> "KadicMeasure":
        self._check(other)
        return KadicMeasure.make(self.k, self.num * other.num, self.exp + other.exp)

    def __pow__(self, n: int) -> "KadicMeasure":
        return KadicMeasure.make(self.k, self.num**n, self.exp * n)

    def _check(self, other: "KadicMeasure") -> None:
        if self.k != other.k:
            raise MeasureError("measures over different fields")

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.k**self.exp)

    def __le__(self, other: "KadicMeasure") -> bool:
        return self.to_fraction() <= other.to_fraction()

    def __lt__(self, other: "KadicMeasure") -> bool:
        return self.to_fraction() < other.to_fraction()

    def is_zero(self) -> bool:
        return self.num == 0

    def to_config(self) -> dict:
        return {"num": str(self.num), "exp": self.exp}

    def __repr__(self) -> str:
        return f"{self.num}*{self.k}^-{self.exp}"


# ---------------------------------------------------------------------------
# resonant neighborhoods
# ---------------------------------------------------------------------------


class ResonantKind(enum.Enum):
    PLAIN = "plain"
    COPRIME = "coprime"
    CONTENT_COPRIME = "content-coprime"


@dataclass(frozen=True)
class ResonantSet:
    """Neighborhood of radius k^-radius_exp around the solution sets of
    q A = p inside the unit cube of m x n matrices."""

    kind: ResonantKind
    q: PolyVector
    radius_exp: int
    n: int

    def __post_init__(self) -> None:
        if self.q.is_zero():
            raise MeasureError("resonant sets need a nonzero vector")
        if self.n < 1:
            raise MeasureError("n must be >= 1")
        if self.kind is ResonantKind.COPRIME and self.q.m != 1:
            raise MeasureError("the coprime flavor is defined for m = 1 only")
        if self.kind is not ResonantKind.PLAIN and self.radius_exp < 0:
            raise MeasureError(
                "radius above 1 is not below the separation of residue classes"
            )

    @property
    def field(self) -> FieldSpec:
        return self.q.field

    @property
    def m(self) -> int:
        return self.q.m

    def norm_exponent(self) -> int:
        e = self.q.norm_exponent()
        assert e is not None
        return e

    def required_precision(self) -> int:
        return max(self.radius_exp, 0) + self.norm_exponent()

    def gcd_content(self) -> Poly:
        if self.kind is ResonantKind.COPRIME:
            return self.q.entries[0].monic()
        return _content_cached(self.q)

    def admissible_parts(self) -> Optional[Tuple[Poly, ...]]:
        """Per-column polynomial parts compatible with the coprimality
        condition (None for the plain flavor: the part is unconstrained)."""
        if self.kind is ResonantKind.PLAIN:
            return None
        return _admissible_parts_cached(self.gcd_content(), self.norm_exponent())


@functools.lru_cache(maxsize=None)
def _content_cached(q: PolyVector) -> Poly:
    return q.content()


@functools.lru_cache(maxsize=None)
def _admissible_parts_cached(g: Poly, d: int) -> Tuple[Poly, ...]:
    field = g.field
    if d < 1:
        candidates: Iterable[Poly] = [Poly.zero(field)]
    else:
        candidates = enumerate_polys_upto(field, d - 1)
    out = []
    for p in candidates:
        if p.is_zero():
            if g.degree() == 0:
                out.append(p)
            continue
        if g.degree() == 0 or poly_gcd(g, p).degree() == 0:
            out.append(p)
    return tuple(out)


def plain_set(q: PolyVector, radius_exp: int, n: int) -> ResonantSet:
    return ResonantSet(ResonantKind.PLAIN, q, radius_exp, n)


def coprime_set(q: Poly, radius_exp: int, n: int) -> ResonantSet:
    return ResonantSet(ResonantKind.COPRIME, PolyVector.make([q]), radius_exp, n)


def content_coprime_set(q: PolyVector, radius_exp: int, n: int) -> ResonantSet:
    return ResonantSet(ResonantKind.CONTENT_COPRIME, q, radius_exp, n)


# ---------------------------------------------------------------------------
# constraint rows over one column
# ---------------------------------------------------------------------------


def _frac_rows(q: PolyVector, r: int, T: int) -> List[List[int]]:
    """Rows forcing the fractional coefficients of (qA)_j at 1..r to zero."""
    m = q.m
    rows = []
    for s in range(1, r + 1):
        row = [0] * (m * T)
        for i, qi in enumerate(q.entries):
            for c, coeff in enumerate(qi.coeffs):
                t = s + c
                if coeff and t <= T:
                    row[i * T + (t - 1)] = coeff
        rows.append(row)
    return rows


def _poly_rows(q: PolyVector, T: int) -> List[List[int]]:
    """Rows computing the coefficients of the polynomial part of (qA)_j,
    one per degree d-1 .. 0 where d is the norm exponent of q."""
    m = q.m
    d = q.norm_exponent()
    assert d is not None
    rows = []
    for u in range(d):
        row = [0] * (m * T)
        for i, qi in enumerate(q.entries):
            for c, coeff in enumerate(qi.coeffs):
                t = c - u
                if coeff and 1 <= t <= T:
                    row[i * T + (t - 1)] = coeff
        rows.append(row)
    return rows


def _column_rows(rs: ResonantSet, T: int) -> Tuple[List[List[int]], int]:
    """(rows, n_poly_rows): polynomial-part rows first, then vanishing rows."""
    r = max(rs.radius_exp, 0)
    if rs.kind is ResonantKind.PLAIN:
        return _frac_rows(rs.q, r, T), 0
    d = rs.norm_exponent()
    return _poly_rows(rs.q, T) + _frac_rows(rs.q, r, T), d


def _poly_rhs(p: Poly, d: int) -> List[int]:
    return [p.coeff(u) for u in range(d)]


def _check_precision(rs: ResonantSet, T: int) -> None:
    if T < rs.required_precision():
        raise PrecisionError(
            f"precision {T} below required {rs.required_precision()} for {rs}"
        )


# ---------------------------------------------------------------------------
# single-set measures
# ---------------------------------------------------------------------------


def measure_resonant(rs: ResonantSet, T: int) -> KadicMeasure:
    """Exact Haar measure by affine solution counting at precision T."""
    _check_precision(rs, T)
    k = rs.field.k
    if rs.kind is ResonantKind.PLAIN and rs.radius_exp <= 0:
        return KadicMeasure.one(k)
    n_vars = rs.m * T
    rows, n_poly = _column_rows(rs, T)
    system = LinearSystem(rs.field, n_vars, rows)
    parts = rs.admissible_parts()
    if parts is None:
        col_count = 1 if system.solution_count_exp([0] * len(rows)) is not None else 0
    else:
        d = rs.norm_exponent()
        col_count = 0
        zeros = [0] * (len(rows) - n_poly)
        for p in parts:
            if system.consistent(_poly_rhs(p, d) + zeros):
                col_count += 1
    col = KadicMeasure.make(k, col_count, system.rank)
    return col**rs.n


def measure_B(q: PolyVector, r: int, n: int, T: int) -> KadicMeasure:
    return measure_resonant(plain_set(q, r, n), T)


def measure_B_prime(q: Poly, r: int, n: int, T: int) -> KadicMeasure:
    return measure_resonant(coprime_set(q, r, n), T)


def measure_B_dprime(q: PolyVector, r: int, n: int, T: int) -> KadicMeasure:
    return measure_resonant(content_coprime_set(q, r, n), T)


def coprime_measure_formula(rs: ResonantSet) -> KadicMeasure:
    """Closed form k^-rn * (totient(g)/|g|)^n for the coprime flavors.

    Derived from the component count: admissible parts per column are
    |q| * density of residues coprime to the content g, each component a
    translate of the same k^-(r + d) slab.
    """
    from .polyring import coprime_density

    if rs.kind is ResonantKind.PLAIN:
        raise MeasureError("closed form applies to the coprime flavors")
    k = rs.field.k
    dens = coprime_density(rs.gcd_content())
    d = rs.norm_exponent()
    num = dens.numerator * k**d // dens.denominator
    col = KadicMeasure.make(k, num, d + max(rs.radius_exp, 0))
    return col**rs.n


# ---------------------------------------------------------------------------
# pairwise intersections
# ---------------------------------------------------------------------------


def measure_intersection(sa: ResonantSet, sb: ResonantSet, T: int) -> KadicMeasure:
    """Exact measure of the intersection of two resonant neighborhoods."""
    if sa.field != sb.field:
        raise MeasureError("sets over different fields")
    if sa.m != sb.m or sa.n != sb.n:
        raise MeasureError("sets in different matrix spaces")
    _check_precision(sa, T)
    _check_precision(sb, T)
    k = sa.field.k
    n_vars = sa.m * T
    rows_a, npoly_a = _column_rows(sa, T)
    rows_b, npoly_b = _column_rows(sb, T)
    system = LinearSystem(sa.field, n_vars, rows_a + rows_b)
    parts_a = sa.admissible_parts()
    parts_b = sb.admissible_parts()
    da = sa.norm_exponent()
    db = sb.norm_exponent()
    zeros_a = [0] * (len(rows_a) - npoly_a)
    zeros_b = [0] * (len(rows_b) - npoly_b)
    # a part pair is consistent iff the certificate signatures of the two
    # rhs segments cancel; match them through a dictionary instead of
    # testing the product of the part lists
    sig_counts: dict = {}
    for pa in parts_a if parts_a is not None else [None]:
        rhs_a = (_poly_rhs(pa, da) if pa is not None else []) + zeros_a
        sig = system.certificate_signature(rhs_a, 0)
        sig_counts[sig] = sig_counts.get(sig, 0) + 1
    col_count = 0
    for pb in parts_b if parts_b is not None else [None]:
        rhs_b = (_poly_rhs(pb, db) if pb is not None else []) + zeros_b
        sig = system.certificate_signature(rhs_b, len(rows_a))
        col_count += sig_counts.get(system.negate_signature(sig), 0)
    col = KadicMeasure.make(k, col_count, system.rank)
    return col**sa.n


# ---------------------------------------------------------------------------
# membership and the enumeration oracle
# ---------------------------------------------------------------------------


def resonant_contains(rs: ResonantSet, a: LaurentMatrix) -> bool:
    """Point membership decided through the Laurent layer."""
    if a.m != rs.m or a.n != rs.n:
        raise MeasureError("matrix shape does not match the set")
    r = max(rs.radius_exp, 0)
    prod = row_times_matrix(rs.q, a)
    for series in prod:
        frac = series.frac_part()
        for s in range(1, r + 1):
            if frac.coeff(s) != 0:
                return False
    if rs.kind is not ResonantKind.PLAIN:
        g = rs.gcd_content()
        for series in prod:
            p = series.poly_part()
            if p.is_zero():
                if g.degree() != 0:
                    return False
            elif g.degree() != 0 and poly_gcd(g, p).degree() != 0:
                return False
    return True


_ENUM_GUARD_BITS = 24


def _enumeration_guard(field: FieldSpec, cells: int, T: int) -> None:
    import math

    bits = cells * T * math.log2(field.k)
    if bits > _ENUM_GUARD_BITS:
        raise MeasureError(
            f"enumeration over {cells * T} coefficients exceeds the {_ENUM_GUARD_BITS}-bit guard"
        )


def measure_by_enumeration(sets: Sequence[ResonantSet], T: int) -> KadicMeasure:
    """Oracle: measure of the intersection of the given sets by listing
    every depth-T cylinder.  Guarded to small configurations."""
    if not sets:
        raise MeasureError("need at least one set")
    first = sets[0]
    for rs in sets:
        _check_precision(rs, T)
    field = first.field
    m, n = first.m, first.n
    _enumeration_guard(field, m * n, T)
    k = field.k
    total_cells = m * n
    count = 0
    for idx in range(k ** (total_cells * T)):
        rem = idx
        words: List[List[int]] = []
        for _ in range(total_cells):
            word = []
            for _ in range(T):
                word.append(rem % k)
                rem //= k
            words.append(word)
        rows = [[words[i * n + j] for j in range(n)] for i in range(m)]
        a = LaurentMatrix.from_unit_prefixes(field, rows, T)
        if all(resonant_contains(rs, a) for rs in sets):
            count += 1
    return KadicMeasure.make(k, count, total_cells * T)


# ---------------------------------------------------------------------------
# counting paired parts along a common direction
# ---------------------------------------------------------------------------


def count_paired_parts(
    q: PolyVector, q2: PolyVector, r: int, r2: int, n: int
) -> Tuple[int, Fraction]:
    """Exact count of part pairs (p, p') that keep the neighborhoods of
    two parallel resonant families close, with its counting bound.

    Requires q and q2 linearly dependent and nonzero.  The parts range
    over |p| < |q| and |p'| < |q2|, the values actually taken by
    polynomial parts of q A over the unit cube.  Returns (count, bound)
    with bound = (|q2| eps + |q| eps')^n; the verification suite checks
    count <= bound over its grids.
    """
    if q.is_zero() or q2.is_zero():
        raise MeasureError("vectors must be nonzero")
    if not vectors_linearly_dependent(q, q2):
        raise MeasureError("vectors are not linearly dependent")
    k = q.field.k
    dq = q.norm_exponent()
    dq2 = q2.norm_exponent()
    assert dq is not None and dq2 is not None
    eps = Fraction(1, k**r) if r >= 0 else Fraction(k**-r)
    eps2 = Fraction(1, k**r2) if r2 >= 0 else Fraction(k**-r2)
    bound = (Fraction(k**dq2) * eps + Fraction(k**dq) * eps2) ** n
    _, lam, lam2 = dependent_multipliers(q, q2)
    # the separation condition is stated for |lam| >= |lam'|
    if lam.abs_value() < lam2.abs_value():
        lam, lam2 = lam2, lam
        dq, dq2 = dq2, dq
        eps, eps2 = eps2, eps
    # closeness threshold eps * |lam'| as an absolute-value exponent
    lam2_deg = lam2.degree()
    assert lam2_deg is not None
    threshold = eps * Fraction(k**lam2_deg)
    zero = Poly.zero(q.field)
    parts_q = list(enumerate_polys_upto(q.field, dq - 1)) if dq >= 1 else [zero]
    parts_q2 = list(enumerate_polys_upto(q.field, dq2 - 1)) if dq2 >= 1 else [zero]
    per_coord = 0
    for p in parts_q:
        if not _coprime_or_vacuous(p, lam):
            continue
        for p2 in parts_q2:
            if not _coprime_or_vacuous(p2, lam2):
                continue
            diff = lam2 * p - lam * p2
            dd = diff.degree()
            val = Fraction(0) if dd is None else Fraction(k**dd)
            if val < threshold:
                per_coord += 1
    return per_coord**n, bound


def _coprime_or_vacuous(p: Poly, lam: Poly) -> bool:
    if lam.degree() == 0:
        return True
    if p.is_zero():
        return False
    return poly_gcd(p, lam).degree() == 0


# ---------------------------------------------------------------------------
# distance to the resonant affine sets and the neighborhood inclusion
# ---------------------------------------------------------------------------


def dist_to_solution_set(a: LaurentMatrix, q: PolyVector, p: PolyVector) -> AbsValue:
    """Distance from a to {A in U : q A = p}, which is |qA - p| / |q|.

    The solution set meets the unit cube exactly when |p| < |q|; an
    empty set is an error.  A point A' at the minimal distance exists
    because the row with the top-degree coordinate of q can absorb the
    defect qA - p.
    """
    if q.is_zero():
        raise MeasureError("q must be nonzero")
    if q.m != a.m or p.m != a.n:
        raise MeasureError("shape mismatch")
    if not p.norm_inf() < q.norm_inf():
        raise MeasureError("solution set does not meet the unit cube (|p| >= |q|)")
    prod = row_times_matrix(q, a)
    defect = AbsValue.ZERO
    for j, series in enumerate(prod):
        diff = series - LaurentSeries.from_poly(p.entries[j])
        v = diff.abs_value()
        if v > defect:
            defect = v
    if defect.is_zero():
        return AbsValue.ZERO
    return defect / q.norm_inf()


def check_neighborhood_inclusion(
    q: PolyVector,
    block_exp: int,
    radius_exp: int,
    T: int,
    n: int = 1,
    widened_shift: Optional[int] = None,
) -> Tuple[bool, Optional[List[List[List[int]]]]]:
    """Whether every depth-T cylinder meeting the radius-k^-radius_exp
    neighborhood of q also meets the widened neighborhood of the union
    of solution sets, widened radius k^-radius_exp * k^(-block_exp + 1).

    q must lie in norm block block_exp.  Returns (True, None) or
    (False, counterexample cylinder words).  ``widened_shift``
    overrides the widening exponent shift (for sharpness probes).
    """
    d = q.norm_exponent()
    if d != block_exp:
        raise MeasureError(f"q has norm exponent {d}, not in block {block_exp}")
    shift = (block_exp - 1) if widened_shift is None else widened_shift
    tilde_exp = radius_exp + shift  # widened radius k^-tilde_exp
    r = max(radius_exp, 0)
    w = max(tilde_exp - d, 0)  # prefix depth that must vanish near a solution set
    if T < max(r + d, w + d):
        raise PrecisionError("precision too small to decide the inclusion")
    field = q.field
    n_vars = q.m * T
    rows_b = _frac_rows(q, r, T)
    rows_tilde = _frac_rows(q, w, T)
    base = LinearSystem(field, n_vars, rows_b)
    joint = LinearSystem(field, n_vars, rows_b + rows_tilde)
    if joint.rank == base.rank:
        return True, None
    # counterexample: a column prefix satisfying the base rows but not
    # some widened-neighborhood row
    for avoid in rows_tilde:
        aug = LinearSystem(field, n_vars, rows_b + [avoid])
        if aug.rank > base.rank:
            sol = solve_unique(field, n_vars, rows_b + [avoid], [0] * len(rows_b) + [1])
            assert sol is not None
            words = [
                [[0] * T for _ in range(n)] for _ in range(q.m)
            ]
            for i in range(q.m):
                for t in range(T):
                    words[i][0][t] = sol[i * T + t]
            return False, words
    raise AssertionError("rank increased but no single widened row is independent")


# ---------------------------------------------------------------------------
# cylinders and the scaling identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    """Depth-d cylinder in the space of m x n unit-cube matrices: the
    first d tail coefficients of every entry are fixed."""

    field: FieldSpec
    words: Tuple[Tuple[Tuple[int, ...], ...], ...]  # m x n x depth

    @property
    def m(self) -> int:
        return len(self.words)

    @property
    def n(self) -> int:
        return len(self.words[0])

    @property
    def depth(self) -> int:
        return len(self.words[0][0])

    def measure(self, T: int) -> KadicMeasure:
        """Counted honestly through the linear-system engine."""
        if T < self.depth:
            raise PrecisionError("precision below cylinder depth")
        cells = self.m * self.n
        n_vars = cells * T
        rows = []
        rhs = []
        for c in range(cells):
            i, j = divmod(c, self.n)
            for t, value in enumerate(self.words[i][j]):
                row = [0] * n_vars
                row[c * T + t] = 1
                rows.append(row)
                rhs.append(value)
        system = LinearSystem(self.field, n_vars, rows)
        exp = system.solution_count_exp(rhs)
        assert exp is not None
        return KadicMeasure.make(self.field.k, self.field.k**exp, n_vars)

    def scaled(self, r0: int) -> "Cylinder":
        """Multiply every entry by X^r0 and translate back into the unit
        cube: the first r0 fixed coefficients become polynomial parts
        and are absorbed by a lattice translation."""
        if r0 < 0:
            raise MeasureError("scale exponent must be >= 0")
        if r0 > self.depth:
            raise MeasureError("scaled cylinder no longer fits in the unit cube")
        return Cylinder(
            self.field,
            tuple(
                tuple(tuple(word[r0:]) for word in row) for row in self.words
            ),
        )


def scaling_identity_holds(r0: int, cyl: Cylinder, T: int) -> bool:
    """mu(X^r0 . C) = k^(mn r0) mu(C), checked by direct recount."""
    base = cyl.measure(T)
    scaled = cyl.scaled(r0).measure(T)
    cells = cyl.m * cyl.n
    inflated = KadicMeasure.make(
        cyl.field.k, base.num * cyl.field.k ** (cells * r0), base.exp
    )
    return scaled == inflated
