"""Set families, approximation functions, and their growth exponents.

A ``SetFamily`` is a declarative, block-enumerable subset of the
nonzero polynomial vectors; an ``ApproxFunction`` assigns to each
vector an error radius from {k^e} (stored as the integer exponent e,
with None for the value 0).  Block N collects the members with norm
exactly k^N, and all counting is exact.

The limit-type quantities (convergence exponent of sum |q|^-v, the
counting exponent of the cumulative counts, the decay order of psi and
the critical exponent of the weighted series) are not computable from
finite data; following the usual desk-scale practice they are estimated
as the maximum slope over dyadic tail windows of exact counts, reported
together with the windows used.  Closed-form values are returned
alongside whenever the family or function carries one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .ffield import FieldSpec
from .laurent import LaurentMatrix
from .measures import resonant_contains, plain_set
from .polyring import Poly, PolyVector, enumerate_polys_upto

DEFAULT_TOLERANCE = 0.1


class FamilyError(ValueError):
    pass


def parse_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise FamilyError(f"cannot parse {x!r} as a rational")


# ---------------------------------------------------------------------------
# set families
# ---------------------------------------------------------------------------

ALL_NONZERO = "ALL_NONZERO"
MONIC_COORDS = "MONIC_COORDS"
LACUNARY = "LACUNARY"
DEGREE_PATTERN = "DEGREE_PATTERN"
EXPLICIT = "EXPLICIT"


@dataclass(frozen=True)
class SetFamily:
    """Declarative family of nonzero vectors, enumerable by norm block."""

    kind: str
    m: int
    field: FieldSpec
    lacunary_base: Optional[int] = None
    lacunary_degrees: Optional[Tuple[int, ...]] = None
    degree_sets: Optional[Tuple[Tuple[int, ...], ...]] = None  # -1 allows the zero poly
    explicit: Optional[Tuple[PolyVector, ...]] = None
    oracle_v: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise FamilyError("m must be >= 1")
        if self.kind == LACUNARY and self.lacunary_base is None and self.lacunary_degrees is None:
            raise FamilyError("lacunary families need a base or a degree list")
        if self.kind == DEGREE_PATTERN and (
            self.degree_sets is None or len(self.degree_sets) != self.m
        ):
            raise FamilyError("degree pattern needs one degree set per coordinate")
        if self.kind == EXPLICIT and self.explicit is None:
            raise FamilyError("explicit families need vectors")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def all_nonzero(field: FieldSpec, m: int) -> "SetFamily":
        return SetFamily(ALL_NONZERO, m, field, oracle_v=Fraction(m))

    @staticmethod
    def monic_coords(field: FieldSpec, m: int) -> "SetFamily":
        return SetFamily(MONIC_COORDS, m, field, oracle_v=Fraction(m))

    @staticmethod
    def lacunary(field: FieldSpec, m: int, base: int = 2) -> "SetFamily":
        if base < 2:
            raise FamilyError("lacunary base must be >= 2")
        return SetFamily(LACUNARY, m, field, lacunary_base=base, oracle_v=Fraction(m))

    @staticmethod
    def lacunary_list(field: FieldSpec, m: int, degrees: Sequence[int]) -> "SetFamily":
        return SetFamily(LACUNARY, m, field, lacunary_degrees=tuple(sorted(set(degrees))))

    @staticmethod
    def degree_pattern(field: FieldSpec, degree_sets: Sequence[Sequence[int]]) -> "SetFamily":
        return SetFamily(
            DEGREE_PATTERN,
            len(degree_sets),
            field,
            degree_sets=tuple(tuple(sorted(set(s))) for s in degree_sets),
        )

    @staticmethod
    def explicit_list(vectors: Sequence[PolyVector]) -> "SetFamily":
        if not vectors:
            raise FamilyError("explicit families must be nonempty")
        return SetFamily(
            EXPLICIT, vectors[0].m, vectors[0].field, explicit=tuple(vectors)
        )

    # -- structure ------------------------------------------------------------

    def is_finite(self) -> bool:
        if self.kind == EXPLICIT:
            return True
        if self.kind == LACUNARY and self.lacunary_degrees is not None:
            return True
        return False

    def _lacunary_block_nonzero(self, N: int) -> bool:
        if self.lacunary_degrees is not None:
            return N in self.lacunary_degrees
        b = self.lacunary_base
        assert b is not None
        if N < 1:
            return False
        while N % b == 0:
            N //= b
        return N == 1

    def contains(self, q: PolyVector) -> bool:
        if q.m != self.m or q.field != self.field or q.is_zero():
            return False
        N = q.norm_exponent()
        assert N is not None
        if self.kind == ALL_NONZERO:
            return True
        if self.kind == MONIC_COORDS:
            return all(e.is_monic() for e in q.entries)
        if self.kind == LACUNARY:
            return self._lacunary_block_nonzero(N)
        if self.kind == DEGREE_PATTERN:
            assert self.degree_sets is not None
            for e, allowed in zip(q.entries, self.degree_sets):
                d = e.degree()
                key = -1 if d is None else d
                if key not in allowed:
                    return False
            return True
        assert self.explicit is not None
        return q in self.explicit

    def block(self, N: int) -> Iterator[PolyVector]:
        """Members with norm exactly k^N."""
        if self.kind == EXPLICIT:
            assert self.explicit is not None
            for q in self.explicit:
                if q.norm_exponent() == N:
                    yield q
            return
        if self.kind == LACUNARY and not self._lacunary_block_nonzero(N):
            return
        k = self.field.k
        if self.kind in (ALL_NONZERO, LACUNARY):
            from .polyring import enumerate_vectors

            yield from enumerate_vectors(self.field, self.m, N)
            return
        if self.kind == MONIC_COORDS:
            pools = [
                [p for d in range(N + 1) for p in _monic_of_degree(self.field, d)]
            ] * self.m
            yield from _tuples_with_max_norm(pools, N, self.m)
            return
        assert self.degree_sets is not None
        pools = []
        for allowed in self.degree_sets:
            pool: List[Poly] = []
            for d in allowed:
                if d == -1:
                    pool.append(Poly.zero(self.field))
                elif 0 <= d <= N:
                    pool.extend(_all_of_degree(self.field, d))
            pools.append(pool)
        yield from _tuples_with_max_norm(pools, N, self.m)

    def block_count(self, N: int) -> int:
        """Exact size of block N via closed form where one exists."""
        k = self.field.k
        if self.kind in (ALL_NONZERO, LACUNARY):
            if self.kind == LACUNARY and not self._lacunary_block_nonzero(N):
                return 0
            return k ** (self.m * (N + 1)) - k ** (self.m * N)
        if self.kind == MONIC_COORDS:
            upto = lambda j: (k ** (j + 1) - 1) // (k - 1) if j >= 0 else 0
            return upto(N) ** self.m - upto(N - 1) ** self.m
        return sum(1 for _ in self.block(N))

    def cumulative_count(self, N: int) -> int:
        return sum(self.block_count(j) for j in range(N + 1))

    def to_config(self) -> dict:
        cfg: dict = {"kind": self.kind, "m": self.m}
        if self.lacunary_base is not None:
            cfg["base"] = self.lacunary_base
        if self.lacunary_degrees is not None:
            cfg["degrees"] = list(self.lacunary_degrees)
        if self.degree_sets is not None:
            cfg["degrees"] = [list(s) for s in self.degree_sets]
        if self.explicit is not None:
            cfg["vectors"] = [q.to_config() for q in self.explicit]
        return cfg

    @staticmethod
    def from_config(field: FieldSpec, cfg: dict) -> "SetFamily":
        kind = cfg["kind"]
        m = int(cfg.get("m", 1))
        if kind == ALL_NONZERO:
            return SetFamily.all_nonzero(field, m)
        if kind == MONIC_COORDS:
            return SetFamily.monic_coords(field, m)
        if kind == LACUNARY:
            if "degrees" in cfg:
                return SetFamily.lacunary_list(field, m, [int(d) for d in cfg["degrees"]])
            return SetFamily.lacunary(field, m, int(cfg.get("base", 2)))
        if kind == DEGREE_PATTERN:
            return SetFamily.degree_pattern(
                field, [[int(d) for d in s] for s in cfg["degrees"]]
            )
        if kind == EXPLICIT:
            vectors = [
                PolyVector.make([Poly.make(field, c) for c in vec])
                for vec in cfg["vectors"]
            ]
            return SetFamily.explicit_list(vectors)
        raise FamilyError(f"unknown family kind {kind!r}")


def _monic_of_degree(field: FieldSpec, d: int) -> List[Poly]:
    from .polyring import enumerate_polys

    return list(enumerate_polys(field, d, monic=True))


def _all_of_degree(field: FieldSpec, d: int) -> List[Poly]:
    from .polyring import enumerate_polys

    return list(enumerate_polys(field, d, monic=False))


def _tuples_with_max_norm(
    pools: Sequence[Sequence[Poly]], N: int, m: int
) -> Iterator[PolyVector]:
    import itertools

    for combo in itertools.product(*pools):
        degs = [p.degree() for p in combo]
        if max((d for d in degs if d is not None), default=None) == N:
            yield PolyVector.make(list(combo))


# ---------------------------------------------------------------------------
# approximation functions
# ---------------------------------------------------------------------------

POWER = "POWER"
POWER_LOG = "POWER_LOG"
INDICATOR_RESTRICTED = "INDICATOR_RESTRICTED"
TABLE = "TABLE"


@dataclass(frozen=True)
class ApproxFunction:
    """Error function with values in {k^e} union {0}, exponent-encoded.

    Power-type values are quantized downward, psi(q) = k^floor(-v N) for
    |q| = k^N, so quantization never admits extra solutions.
    """

    kind: str
    field: FieldSpec
    v: Optional[Fraction] = None
    log_exp: Optional[Fraction] = None
    inner: Optional["ApproxFunction"] = None
    support: Optional[SetFamily] = None
    table: Optional[Tuple[Tuple[int, Optional[int]], ...]] = None

    @staticmethod
    def power(field: FieldSpec, v) -> "ApproxFunction":
        return ApproxFunction(POWER, field, v=parse_fraction(v))

    @staticmethod
    def power_log(field: FieldSpec, v, log_exp=1) -> "ApproxFunction":
        return ApproxFunction(
            POWER_LOG, field, v=parse_fraction(v), log_exp=parse_fraction(log_exp)
        )

    @staticmethod
    def restricted(inner: "ApproxFunction", support: SetFamily) -> "ApproxFunction":
        return ApproxFunction(
            INDICATOR_RESTRICTED, inner.field, inner=inner, support=support
        )

    @staticmethod
    def from_table(field: FieldSpec, entries: Dict[int, Optional[int]]) -> "ApproxFunction":
        return ApproxFunction(
            TABLE, field, table=tuple(sorted(entries.items()))
        )

    def norm_only(self) -> bool:
        """Value depends only on |q| (holds for all kinds except restriction
        to a family that is not itself norm-determined)."""
        if self.kind == INDICATOR_RESTRICTED:
            assert self.support is not None
            return self.support.kind in (ALL_NONZERO, LACUNARY)
        return True

    def exponent_at_norm(self, N: int) -> Optional[int]:
        """psi exponent for |q| = k^N; None encodes psi = 0."""
        if self.kind == POWER:
            assert self.v is not None
            return math.floor(-self.v * N)
        if self.kind == POWER_LOG:
            assert self.v is not None and self.log_exp is not None
            base = -self.v * N
            if N >= 2:
                logk_n = math.log(N, self.field.k)
                return math.floor(base - float(self.log_exp) * logk_n)
            return math.floor(base)
        if self.kind == TABLE:
            assert self.table is not None
            for n0, e in self.table:
                if n0 == N:
                    return e
            return None
        assert self.inner is not None and self.support is not None
        if self.support.kind == ALL_NONZERO:
            return self.inner.exponent_at_norm(N)
        if self.support.kind == LACUNARY and self.support._lacunary_block_nonzero(N):
            return self.inner.exponent_at_norm(N)
        return None

    def exponent_at(self, q: PolyVector) -> Optional[int]:
        if q.is_zero():
            raise FamilyError("psi is evaluated on nonzero vectors")
        if self.kind == INDICATOR_RESTRICTED:
            assert self.inner is not None and self.support is not None
            if not self.support.contains(q):
                return None
            return self.inner.exponent_at(q)
        N = q.norm_exponent()
        assert N is not None
        return self.exponent_at_norm(N)

    def exact_decay_order(self) -> Optional[Fraction]:
        if self.kind in (POWER, POWER_LOG):
            return self.v
        if self.kind == INDICATOR_RESTRICTED:
            assert self.inner is not None
            return self.inner.exact_decay_order()
        return None

    def to_config(self) -> dict:
        cfg: dict = {"kind": self.kind}
        if self.v is not None:
            cfg["v"] = str(self.v)
        if self.log_exp is not None:
            cfg["log_exp"] = str(self.log_exp)
        if self.inner is not None:
            cfg["inner"] = self.inner.to_config()
        if self.support is not None:
            cfg["support"] = self.support.to_config()
        if self.table is not None:
            cfg["entries"] = {str(n): e for n, e in self.table}
        return cfg

    @staticmethod
    def from_config(field: FieldSpec, cfg: dict) -> "ApproxFunction":
        kind = cfg["kind"]
        if kind == POWER:
            return ApproxFunction.power(field, cfg["v"])
        if kind == POWER_LOG:
            return ApproxFunction.power_log(field, cfg["v"], cfg.get("log_exp", 1))
        if kind == INDICATOR_RESTRICTED:
            return ApproxFunction.restricted(
                ApproxFunction.from_config(field, cfg["inner"]),
                SetFamily.from_config(field, cfg["support"]),
            )
        if kind == TABLE:
            return ApproxFunction.from_table(
                field, {int(n): e for n, e in cfg["entries"].items()}
            )
        raise FamilyError(f"unknown psi kind {kind!r}")


def resonance_holds(
    q: PolyVector,
    a: LaurentMatrix,
    psi: ApproxFunction,
    family: Optional[SetFamily] = None,
) -> bool:
    """The membership predicate ||q A|| < psi(q), optionally restricted
    to q in a family; psi = 0 never holds."""
    if family is not None and not family.contains(q):
        return False
    e = psi.exponent_at(q)
    if e is None:
        return False
    return resonant_contains(plain_set(q, -e, a.n), a)


# ---------------------------------------------------------------------------
# block tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockRecord:
    N: int
    count: int
    cumulative: int


@dataclass(frozen=True)
class BlockTable:
    family_kind: str
    records: Tuple[BlockRecord, ...]

    def count(self, N: int) -> int:
        return self.records[N].count

    def cumulative(self, N: int) -> int:
        return self.records[N].cumulative

    @property
    def n_max(self) -> int:
        return len(self.records) - 1

    def nonempty_blocks(self) -> List[int]:
        return [rec.N for rec in self.records if rec.count > 0]

    def to_rows(self) -> List[dict]:
        return [
            {"N": rec.N, "count": rec.count, "cumulative": rec.cumulative}
            for rec in self.records
        ]


def block_counts(family: SetFamily, n_max: int) -> BlockTable:
    if n_max < 0:
        raise FamilyError("n_max must be >= 0")
    records = []
    cum = 0
    for N in range(n_max + 1):
        c = family.block_count(N)
        cum += c
        records.append(BlockRecord(N, c, cum))
    return BlockTable(family.kind, tuple(records))


# ---------------------------------------------------------------------------
# windowed-slope estimators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Estimate:
    """Desk-scale stand-in for a limit quantity: the max slope over the
    recorded dyadic tail windows, plus a closed form when known."""

    value: Optional[float]
    exact: Optional[Fraction]
    windows: Tuple[Tuple[int, int, float], ...] = ()
    flags: Tuple[str, ...] = ()

    def best(self) -> Fraction | float:
        return self.exact if self.exact is not None else self.value

    def to_config(self) -> dict:
        return {
            "estimate": self.value,
            "exact": None if self.exact is None else str(self.exact),
            "windows": [list(w) for w in self.windows],
            "flags": list(self.flags),
        }


def _logk(x: float, k: int) -> float:
    return math.log(x) / math.log(k)


def _tail_windows(points: Sequence[Tuple[int, int]], n_max: int, k: int):
    """Slopes (log_k y2 - log_k y1)/(N2 - N1) with N2 in the tail and N1
    the largest available point <= N2/2."""
    out = []
    tail_start = max(2, n_max // 2)
    for i2, (n2, y2) in enumerate(points):
        if n2 < tail_start or y2 <= 0:
            continue
        candidates = [(n1, y1) for n1, y1 in points[:i2] if n1 <= n2 // 2 and y1 > 0]
        if not candidates:
            continue
        n1, y1 = candidates[-1]
        slope = (_logk(y2, k) - _logk(y1, k)) / (n2 - n1)
        out.append((n1, n2, slope))
    return out


def convergence_exponent(family: SetFamily, n_max: int) -> Estimate:
    """Critical exponent of sum over the family of |q|^-v, estimated from
    block growth; the series converges iff v exceeds it."""
    if n_max < 4:
        raise FamilyError("need n_max >= 4")
    table = block_counts(family, n_max)
    points = [(rec.N, rec.count) for rec in table.records]
    windows = _tail_windows(points, n_max, family.field.k)
    flags: Tuple[str, ...] = ()
    if not windows:
        if family.is_finite():
            raise FamilyError("family has no members in the estimator tail")
        flags = ("no-tail-window",)
    value = max((w[2] for w in windows), default=None)
    return Estimate(value, family.oracle_v, tuple(windows), flags)


def counting_exponent(family: SetFamily, n_max: int) -> Estimate:
    """Growth exponent of the cumulative counts; equals the convergence
    exponent for infinite families."""
    if family.is_finite() and family.kind == EXPLICIT:
        raise FamilyError("counting exponent of a finite family is undefined")
    table = block_counts(family, n_max)
    points = [(rec.N, rec.cumulative) for rec in table.records]
    windows = _tail_windows(points, n_max, family.field.k)
    value = max((w[2] for w in windows), default=None)
    return Estimate(value, family.oracle_v, tuple(windows))


def decay_order(
    psi: ApproxFunction,
    family: SetFamily,
    n_max: int,
    spread_tolerance: float = DEFAULT_TOLERANCE,
) -> Estimate:
    """Limit of -log psi / log |q| along the family, when it exists.

    Slopes are taken over tail windows of the quantized exponents; if
    they spread more than the tolerance the limit is flagged as
    non-existent rather than averaged away.
    """
    table = block_counts(family, n_max)
    samples = []
    for rec in table.records:
        if rec.count == 0 or rec.N == 0:
            continue
        e = psi.exponent_at_norm(rec.N)
        if e is None:
            continue
        samples.append((rec.N, e))
    if not samples:
        raise FamilyError("psi vanishes on every sampled block")
    windows = []
    tail_start = max(2, n_max // 2)
    for i2, (n2, e2) in enumerate(samples):
        if n2 < tail_start:
            continue
        candidates = [(n1, e1) for n1, e1 in samples[:i2] if n1 <= n2 // 2]
        if not candidates:
            continue
        n1, e1 = candidates[-1]
        windows.append((n1, n2, ((-e2) - (-e1)) / (n2 - n1)))
    flags: List[str] = []
    value: Optional[float] = None
    if windows:
        slopes = [w[2] for w in windows]
        value = max(slopes)
        if max(slopes) - min(slopes) > spread_tolerance:
            flags.append("limit-does-not-exist")
    else:
        flags.append("no-tail-window")
    exact = psi.exact_decay_order() if not flags else None
    return Estimate(value, exact, tuple(windows), tuple(flags))


def critical_exponent(
    psi: ApproxFunction,
    n: int,
    n_max: int,
    family: Optional[SetFamily] = None,
    spread_tolerance: float = DEFAULT_TOLERANCE,
) -> Estimate:
    """Critical exponent of the series sum |q|^n (psi(q)/|q|)^eta.

    Per-block critical values (log_k count + nN)/(N - e_N) are exact up
    to the log of the count; the estimate is their max over the tail,
    with a slow-convergence flag when the tail has not stabilized.
    psi is clamped to values <= 1, which loses nothing for the series.
    """
    m = psi.support.m if psi.kind == INDICATOR_RESTRICTED and psi.support else 1
    if family is None:
        family = (
            psi.support
            if psi.kind == INDICATOR_RESTRICTED and psi.support is not None
            else SetFamily.all_nonzero(psi.field, m)
        )
    table = block_counts(family, n_max)
    k = family.field.k
    per_block = []
    for rec in table.records:
        if rec.count == 0 or rec.N == 0:
            continue
        e = psi.exponent_at_norm(rec.N)
        if e is None:
            continue
        e = min(e, 0)
        denom = rec.N - e
        per_block.append((rec.N, (_logk(rec.count, k) + n * rec.N) / denom))
    if not per_block:
        raise FamilyError("psi vanishes on every sampled block")
    tail = [v for N, v in per_block if N >= max(2, n_max // 2)]
    flags: List[str] = []
    if not tail:
        tail = [per_block[-1][1]]
        flags.append("short-tail")
    value = max(tail)
    if max(tail) - min(tail) > spread_tolerance:
        flags.append("slow-convergence")
    exact: Optional[Fraction] = None
    if psi.kind == POWER and family.kind == ALL_NONZERO:
        assert psi.v is not None
        exact = Fraction(family.m + n, 1) / (psi.v + 1)
    windows = tuple((N, N, v) for N, v in per_block)
    return Estimate(value, exact, windows, tuple(flags))


def closed_form_critical_exponent(m: int, n: int, v: Fraction) -> Fraction:
    """(m + n)/(v + 1): the critical exponent of the power error on the
    full family."""
    return Fraction(m + n) / (v + 1)


# ---------------------------------------------------------------------------
# counting quantities for general error functions
# ---------------------------------------------------------------------------


def count_upto(
    psi: ApproxFunction, v: Fraction, norm_exp: int, m: Optional[int] = None
) -> int:
    """Exact number of q with |q| <= k^norm_exp and psi(q) >= |q|^-v."""
    if m is None:
        m = psi.support.m if psi.kind == INDICATOR_RESTRICTED and psi.support else 1
    family = (
        psi.support
        if psi.kind == INDICATOR_RESTRICTED and psi.support is not None
        else SetFamily.all_nonzero(psi.field, m)
    )
    if not psi.norm_only():
        return _count_upto_enumerate(psi, v, norm_exp, family)
    total = 0
    for N in range(norm_exp + 1):
        e = psi.exponent_at_norm(N)
        if e is not None and Fraction(e) >= -v * N:
            total += family.block_count(N)
    return total


def _count_upto_enumerate(
    psi: ApproxFunction, v: Fraction, norm_exp: int, family: SetFamily
) -> int:
    total = 0
    for N in range(norm_exp + 1):
        for q in family.block(N):
            e = psi.exponent_at(q)
            if e is not None and Fraction(e) >= -v * N:
                total += 1
    return total


@dataclass(frozen=True)
class CountingReport:
    v: Fraction
    counts: Tuple[Tuple[int, int], ...]  # (N, C(k^N, v))
    unbounded: bool
    gamma: Optional[Estimate]

    def to_config(self) -> dict:
        return {
            "v": str(self.v),
            "counts": [list(c) for c in self.counts],
            "unbounded": self.unbounded,
            "gamma": None if self.gamma is None else self.gamma.to_config(),
        }


def counting_exponent_of_psi(
    psi: ApproxFunction, v: Fraction, n_max: int, m: Optional[int] = None
) -> CountingReport:
    """Cumulative counts of the super-level family of psi at power v and
    their growth exponent; the growth exponent is only defined when the
    counts are unbounded."""
    counts = [(N, count_upto(psi, v, N, m)) for N in range(n_max + 1)]
    # bounded iff the tail has stopped growing
    half = max(1, n_max // 2)
    unbounded = counts[n_max][1] > counts[half][1]
    gamma: Optional[Estimate] = None
    if unbounded:
        windows = _tail_windows(counts, n_max, psi.field.k)
        value = max((w[2] for w in windows), default=None)
        gamma = Estimate(value, None, tuple(windows))
    return CountingReport(v, tuple(counts), unbounded, gamma)


def counting_dimension(
    psi: ApproxFunction, v: Fraction, n: int, n_max: int, m: Optional[int] = None
) -> Tuple[float, CountingReport]:
    """(n + gamma(v))/(v + 1) when the super-level counts are unbounded,
    0 otherwise."""
    report = counting_exponent_of_psi(psi, v, n_max, m)
    if not report.unbounded or report.gamma is None or report.gamma.value is None:
        return 0.0, report
    return (n + report.gamma.value) / float(v + 1), report


def counting_dimension_sup(
    psi: ApproxFunction,
    n: int,
    grid: Sequence[Fraction],
    n_max: int,
    m: Optional[int] = None,
) -> Tuple[float, List[Tuple[Fraction, float]]]:
    """Supremum of the counting dimension over a finite v-grid."""
    if not grid:
        raise FamilyError("empty v grid")
    values = []
    for v in grid:
        d, _ = counting_dimension(psi, v, n, n_max, m)
        values.append((v, d))
    return max(d for _, d in values), values


# ---------------------------------------------------------------------------
# large blocks and the series partition
# ---------------------------------------------------------------------------


def large_block_witnesses(
    family: SetFamily,
    delta: Fraction,
    n_max: int,
    v: Optional[Fraction] = None,
) -> List[int]:
    """Blocks N with count >= k^(N (v - delta)); exact integer comparison."""
    if delta <= 0:
        raise FamilyError("delta must be positive")
    if v is None:
        v = family.oracle_v
        if v is None:
            est = convergence_exponent(family, n_max)
            assert est.value is not None
            v = Fraction(est.value).limit_denominator(64)
    table = block_counts(family, n_max)
    k = family.field.k
    out = []
    for rec in table.records:
        if rec.count == 0:
            continue
        exponent = (v - delta) * rec.N
        if exponent <= 0:
            out.append(rec.N)
            continue
        # count >= k^(a/b)  <=>  count^b >= k^a
        a, b = exponent.numerator, exponent.denominator
        if rec.count**b >= k**a:
            out.append(rec.N)
    return out


@dataclass(frozen=True)
class PartitionReport:
    mu: Fraction
    theta: Fraction
    eta: Fraction
    grid: Tuple[Fraction, ...]
    identity_holds: bool
    uncovered: Tuple[int, ...]  # norm exponents with an uncovered member
    tail_part_decaying: bool
    part_block_logs: Tuple[Tuple[str, Tuple[float, ...]], ...]

    def to_config(self) -> dict:
        return {
            "mu": str(self.mu),
            "theta": str(self.theta),
            "eta": str(self.eta),
            "grid": [str(v) for v in self.grid],
            "identity_holds": self.identity_holds,
            "uncovered": list(self.uncovered),
            "tail_part_decaying": self.tail_part_decaying,
            "part_block_logs": {name: list(vals) for name, vals in self.part_block_logs},
        }


def split_series_report(
    psi: ApproxFunction,
    eta: Fraction,
    theta: Fraction,
    n: int,
    n_max: int,
    m: Optional[int] = None,
) -> PartitionReport:
    """Cover of the vectors by the fast-decay part psi < |q|^-mu and the
    bands |q|^-v <= psi <= |q|^(-v+theta) for v on a theta-grid of
    (0, mu], with mu = (m+n)/eta; verifies the cover exhaustively up to
    the norm cutoff and reports block-sum decay of each part."""
    if theta <= 0:
        raise FamilyError("theta must be positive")
    if eta <= 0:
        raise FamilyError("eta must be positive")
    if m is None:
        m = psi.support.m if psi.kind == INDICATOR_RESTRICTED and psi.support else 1
    family = (
        psi.support
        if psi.kind == INDICATOR_RESTRICTED and psi.support is not None
        else SetFamily.all_nonzero(psi.field, m)
    )
    mu = Fraction(m + n) / eta
    n_cells = math.ceil(mu / theta)
    grid = tuple(theta * j for j in range(1, n_cells + 1))
    k = psi.field.k
    uncovered = []
    fast_logs: List[float] = []
    band_logs: Dict[Fraction, List[float]] = {v: [] for v in grid}
    full = SetFamily.all_nonzero(psi.field, m)

    def classify(exp: Optional[int], N: int) -> List[Fraction]:
        # Fraction(-1) marks the fast-decay part psi < |q|^-mu;
        # a vanishing psi always lands there.
        parts: List[Fraction] = []
        if exp is None or Fraction(exp) < -mu * N:
            parts.append(Fraction(-1))
        if exp is not None:
            for v in grid:
                if -v * N <= Fraction(exp) <= (-v + theta) * N:
                    parts.append(v)
        return parts

    for N in range(n_max + 1):
        if psi.norm_only():
            e = psi.exponent_at_norm(N)
            supported = family.block_count(N) if e is not None else 0
            # members with psi = 0 (off support) are always fast-decay
            if supported > 0:
                parts = classify(e, N)
                if not parts:
                    uncovered.append(N)
                assert e is not None
                term = _logk(supported, k) + (n - float(eta)) * N + float(eta) * e
                for v in parts:
                    if v == Fraction(-1):
                        fast_logs.append(term)
                    else:
                        band_logs[v].append(term)
        else:
            for q in full.block(N):
                if not classify(psi.exponent_at(q), N):
                    uncovered.append(N)
                    break
    identity = not uncovered
    decaying = True
    if len(fast_logs) >= 2:
        decaying = all(b < a for a, b in zip(fast_logs, fast_logs[1:]))
    logs: List[Tuple[str, Tuple[float, ...]]] = [("fast-decay", tuple(fast_logs))]
    for v in grid:
        logs.append((f"band v={v}", tuple(band_logs[v])))
    return PartitionReport(
        mu,
        theta,
        eta,
        grid,
        identity,
        tuple(sorted(set(uncovered))),
        decaying,
        tuple(logs),
    )
