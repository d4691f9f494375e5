"""Truncated formal series in 1/X with a precision window.

A series sum_{i >= lead} a_i X^{-i} is stored as its lead index, the
coefficient word from the first nonzero position, and a precision
index: every coefficient up to ``precision`` is known exactly, nothing
is claimed beyond it.  ``precision = None`` means the series is exact
(all unstored coefficients are zero); only constructions from
polynomial data may assert that, since a finite window can never
certify an exact zero.

Arithmetic propagates the smallest valid window and raises
``PrecisionError`` instead of silently truncating when a requested
quantity (absolute value, polynomial part, distance) is not determined
by the window.

The absolute value is k^(-i0) with i0 the first nonzero index, so the
unit ball consists of the series supported on indices >= 1, and the
distance from a vector to the nearest polynomial vector is the max of
the absolute values of the fractional parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .ffield import FieldMismatchError, FieldSpec
from .polyring import AbsValue, Poly, PolyVector, abs_max


class PrecisionError(ArithmeticError):
    """The requested result is not determined by the precision window."""


@dataclass(frozen=True)
class LaurentSeries:
    field: FieldSpec
    lead: int  # first index that may carry a nonzero coefficient
    coeffs: Tuple[int, ...]  # indices lead .. lead+len-1, first entry nonzero
    precision: Optional[int]  # known through this index; None = exact

    # -- constructors -------------------------------------------------------

    @staticmethod
    def make(
        field: FieldSpec,
        lead: int,
        coeffs: Sequence[int],
        precision: Optional[int],
    ) -> "LaurentSeries":
        cs = list(int(c) for c in coeffs)
        if precision is not None and lead + len(cs) - 1 > precision:
            raise PrecisionError("coefficients extend beyond the stated precision")
        while cs and cs[0] == 0:
            cs.pop(0)
            lead += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            return LaurentSeries(field, 0, (), precision)
        if precision is not None and precision < lead:
            raise PrecisionError("empty precision window")
        return LaurentSeries(field, lead, tuple(cs), precision)

    @staticmethod
    def exact_zero(field: FieldSpec) -> "LaurentSeries":
        return LaurentSeries(field, 0, (), None)

    @staticmethod
    def window_zero(field: FieldSpec, precision: int) -> "LaurentSeries":
        return LaurentSeries(field, 0, (), precision)

    @staticmethod
    def from_poly(p: Poly) -> "LaurentSeries":
        """Exact embedding; |result| = k^(deg p)."""
        d = p.degree()
        if d is None:
            return LaurentSeries.exact_zero(p.field)
        return LaurentSeries.make(p.field, -d, tuple(reversed(p.coeffs)), None)

    @staticmethod
    def from_unit_prefix(field: FieldSpec, reps: Sequence[int], precision: int) -> "LaurentSeries":
        """Element of the unit ball with known coefficients at 1..len(reps)."""
        if len(reps) > precision:
            raise PrecisionError("prefix longer than precision")
        return LaurentSeries.make(
            field, 1, tuple(reps) + (0,) * (precision - len(reps)), precision
        )

    # -- structure ----------------------------------------------------------

    def is_exact(self) -> bool:
        return self.precision is None

    def known_zero(self) -> bool:
        """All known coefficients vanish (exact zero if also exact)."""
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.precision is None

    def coeff(self, i: int) -> int:
        """Coefficient at index i; raises if i is beyond the window."""
        if self.precision is not None and i > self.precision:
            raise PrecisionError(f"coefficient at index {i} is beyond the window")
        if not self.coeffs or i < self.lead or i >= self.lead + len(self.coeffs):
            return 0
        return self.coeffs[i - self.lead]

    def effective_lead(self) -> Optional[int]:
        """First index that may be nonzero; None for the exact zero."""
        if self.coeffs:
            return self.lead
        if self.precision is None:
            return None
        return self.precision + 1

    def abs_value(self) -> AbsValue:
        """k^(-first nonzero index); 0 only for certified exact zeros."""
        if self.coeffs:
            return AbsValue(-self.lead)
        if self.precision is None:
            return AbsValue.ZERO
        raise PrecisionError("all known coefficients vanish but series is not exact")

    def _check(self, other: "LaurentSeries") -> None:
        if self.field != other.field:
            raise FieldMismatchError("series over different fields")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        if self.precision is None:
            prec = other.precision
        elif other.precision is None:
            prec = self.precision
        else:
            prec = min(self.precision, other.precision)
        lo_candidates = [x.lead for x in (self, other) if x.coeffs]
        if not lo_candidates:
            return LaurentSeries(self.field, 0, (), prec)
        lo = min(lo_candidates)
        hi = max(x.lead + len(x.coeffs) - 1 for x in (self, other) if x.coeffs)
        if prec is not None:
            hi = min(hi, prec)
        f = self.field
        out = []
        for i in range(lo, hi + 1):
            a = self.coeffs[i - self.lead] if self.coeffs and self.lead <= i < self.lead + len(self.coeffs) else 0
            b = other.coeffs[i - other.lead] if other.coeffs and other.lead <= i < other.lead + len(other.coeffs) else 0
            out.append(f.add(a, b))
        return LaurentSeries.make(f, lo, out, prec)

    def __neg__(self) -> "LaurentSeries":
        f = self.field
        return LaurentSeries(self.field, self.lead, tuple(f.neg(c) for c in self.coeffs), self.precision)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        f = self.field
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.exact_zero(f)
        la, lb = self.effective_lead(), other.effective_lead()
        assert la is not None and lb is not None
        # product coefficient at s needs a-coeffs through s - lb and b-coeffs
        # through s - la, so the window ends at min(pa + lb, pb + la)
        if self.precision is None and other.precision is None:
            prec: Optional[int] = None
        elif self.precision is None:
            assert other.precision is not None
            prec = other.precision + la
        elif other.precision is None:
            prec = self.precision + lb
        else:
            prec = min(self.precision + lb, other.precision + la)
        if not self.coeffs or not other.coeffs:
            # a known-zero factor: the product is zero through the window
            return LaurentSeries(f, 0, (), prec)
        lo = self.lead + other.lead
        if prec is None:
            hi = self.lead + len(self.coeffs) - 1 + other.lead + len(other.coeffs) - 1
        else:
            hi = prec
            if hi < lo:
                raise PrecisionError("empty product window")
        out = [0] * (hi - lo + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            ia = self.lead + i
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                s = ia + other.lead + j
                if s > hi:
                    break
                out[s - lo] = f.add(out[s - lo], f.mul(a, b))
        return LaurentSeries.make(f, lo, out, prec)

    def scale(self, c: int) -> "LaurentSeries":
        f = self.field
        if c == 0:
            return LaurentSeries(f, 0, (), self.precision)
        return LaurentSeries.make(
            f, self.lead, tuple(f.mul(c, a) for a in self.coeffs), self.precision
        )

    def shift(self, n: int) -> "LaurentSeries":
        """Multiply by X^(-n): indices move by n."""
        prec = None if self.precision is None else self.precision + n
        if not self.coeffs:
            return LaurentSeries(self.field, 0, (), prec)
        return LaurentSeries(self.field, self.lead + n, self.coeffs, prec)

    def truncate(self, precision: int) -> "LaurentSeries":
        """Forget knowledge beyond the given index."""
        if self.precision is not None and precision > self.precision:
            raise PrecisionError("cannot extend a window by truncation")
        kept = [c for i, c in enumerate(self.coeffs) if self.lead + i <= precision]
        return LaurentSeries.make(self.field, self.lead, kept, precision)

    # -- polynomial/fractional split ------------------------------------------

    def frac_part(self) -> "LaurentSeries":
        """Drop all coefficients at indices <= 0; distance to the ring."""
        if not self.coeffs:
            return self
        kept = [(i, c) for i, c in enumerate(self.coeffs) if self.lead + i >= 1]
        if not kept:
            if self.precision is None:
                return LaurentSeries.exact_zero(self.field)
            return LaurentSeries.window_zero(self.field, self.precision)
        first = kept[0][0]
        return LaurentSeries.make(
            self.field,
            self.lead + first,
            [c for _, c in kept],
            self.precision,
        )

    def poly_part(self) -> Poly:
        """The polynomial carried by indices <= 0."""
        if self.precision is not None and self.precision < 0:
            raise PrecisionError("window does not cover the polynomial part")
        out = []
        for i, c in enumerate(self.coeffs):
            idx = self.lead + i
            if idx <= 0:
                out.append((-idx, c))
        if not out:
            return Poly.zero(self.field)
        deg = max(d for d, _ in out)
        cs = [0] * (deg + 1)
        for d, c in out:
            cs[d] = c
        return Poly.make(self.field, cs)

    def to_config(self) -> dict:
        return {"lead": self.lead, "coeffs": list(self.coeffs), "precision": self.precision}

    def __repr__(self) -> str:
        if not self.coeffs:
            tag = "0" if self.precision is None else f"0 (through index {self.precision})"
            return f"<series {tag}>"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                idx = self.lead + i
                terms.append(f"{c}*X^{-idx}")
        win = "exact" if self.precision is None else f"prec {self.precision}"
        return f"<series {' + '.join(terms)} [{win}]>"


def dist_nearest_poly(f: LaurentSeries) -> AbsValue:
    """Distance from a scalar series to the polynomial ring."""
    return f.frac_part().abs_value()


def dist_nearest_poly_vec(vs: Sequence[LaurentSeries]) -> AbsValue:
    """Max-norm distance from a vector of series to the polynomial lattice."""
    return abs_max([dist_nearest_poly(v) for v in vs])


@dataclass(frozen=True)
class LaurentMatrix:
    """m x n matrix of series over one field."""

    rows: Tuple[Tuple[LaurentSeries, ...], ...]

    @staticmethod
    def make(rows: Sequence[Sequence[LaurentSeries]]) -> "LaurentMatrix":
        if not rows or not rows[0]:
            raise ValueError("matrix needs at least one entry")
        field = rows[0][0].field
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged matrix")
            for e in r:
                if e.field != field:
                    raise FieldMismatchError("mixed fields in matrix")
        return LaurentMatrix(tuple(tuple(r) for r in rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def field(self) -> FieldSpec:
        return self.rows[0][0].field

    def entry(self, i: int, j: int) -> LaurentSeries:
        return self.rows[i][j]

    def norm_inf(self) -> AbsValue:
        return abs_max([e.abs_value() for r in self.rows for e in r])

    def in_unit_cube(self) -> bool:
        """Every entry supported on indices >= 1 (absolute value < 1)."""
        for r in self.rows:
            for e in r:
                el = e.effective_lead()
                if el is not None and el < 1:
                    return False
        return True

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("shape mismatch")
        return LaurentMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    @staticmethod
    def from_poly_matrix(entries: Sequence[Sequence[Poly]]) -> "LaurentMatrix":
        return LaurentMatrix.make(
            [[LaurentSeries.from_poly(p) for p in row] for row in entries]
        )

    @staticmethod
    def from_unit_prefixes(
        field: FieldSpec, prefixes: Sequence[Sequence[Sequence[int]]], precision: int
    ) -> "LaurentMatrix":
        """Matrix in the unit cube from per-entry coefficient words."""
        return LaurentMatrix.make(
            [
                [LaurentSeries.from_unit_prefix(field, word, precision) for word in row]
                for row in prefixes
            ]
        )


def row_times_matrix(q: PolyVector, a: LaurentMatrix) -> Tuple[LaurentSeries, ...]:
    """The row vector q A; windows shrink by the degrees of the q_i."""
    if q.m != a.m:
        raise ValueError(f"dimension mismatch: vector of length {q.m}, matrix with {a.m} rows")
    out = []
    for j in range(a.n):
        acc = LaurentSeries.exact_zero(a.field)
        for i in range(q.m):
            acc = acc + LaurentSeries.from_poly(q.entries[i]) * a.entry(i, j)
        out.append(acc)
    return tuple(out)


def resonance_distance(q: PolyVector, a: LaurentMatrix) -> AbsValue:
    """Distance from q A to the nearest polynomial vector."""
    return dist_nearest_poly_vec(row_times_matrix(q, a))
