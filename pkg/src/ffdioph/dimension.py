"""Dimension verdicts and the covering-cost diagnostic.

The two dimension formulas are evaluated in exact rational arithmetic:

  * from the convergence exponent of the family and the decay order of
    the error function: full measure when n * decay < conv_exp, and
    Hausdorff dimension n(m-1) + (n + conv_exp)/(1 + decay) otherwise
    (at equality the formula still applies but whether the measure is
    null or full is undecided, and flagged as such);
  * from the critical exponent of the weighted series:
    n(m-1) + min(critical, n).

``cover_cost_report`` prices the standard cover of the limsup set by
neighborhoods of the resonant affine sets: per norm block, (number of
members) x (number of translates p) x (balls per translate) x
radius^s, with the model exponents quantized to integer powers of k so
every term is an exact rational.  The report flags whether the partial
sums decay or grow across the tail, which is the convergence
dichotomy the dimension bound rests on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .exponents import (
    ApproxFunction,
    Estimate,
    SetFamily,
    convergence_exponent,
    critical_exponent,
)


class DimensionError(ValueError):
    pass


class Regime(enum.Enum):
    FULL_MEASURE = "FULL_MEASURE"
    DIMENSION = "DIMENSION"
    CRITICAL_UNDECIDED = "CRITICAL_UNDECIDED"


@dataclass(frozen=True)
class DimensionVerdict:
    regime: Regime
    dim_value: Fraction
    m: int
    n: int
    conv_exp: Optional[Fraction] = None
    decay: Optional[Fraction] = None
    critical: Optional[Fraction] = None

    def to_config(self) -> dict:
        out = {
            "regime": self.regime.value,
            "dim": str(self.dim_value),
            "m": self.m,
            "n": self.n,
        }
        if self.conv_exp is not None:
            out["vS"] = str(self.conv_exp)
        if self.decay is not None:
            out["lambda"] = str(self.decay)
        if self.critical is not None:
            out["eta"] = str(self.critical)
        return out


def thm1_verdict(m: int, n: int, conv_exp: Fraction, decay: Fraction) -> DimensionVerdict:
    """Verdict from the convergence exponent of the family and the decay
    order of the error function."""
    if m < 1 or n < 1:
        raise DimensionError("m and n must be >= 1")
    conv_exp = Fraction(conv_exp)
    decay = Fraction(decay)
    if not 0 <= conv_exp <= m:
        raise DimensionError(f"convergence exponent {conv_exp} outside [0, {m}]")
    if decay < 0:
        raise DimensionError("decay order must be >= 0")
    if n * decay < conv_exp:
        return DimensionVerdict(
            Regime.FULL_MEASURE, Fraction(m * n), m, n, conv_exp, decay
        )
    dim = n * (m - 1) + (n + conv_exp) / (1 + decay)
    regime = Regime.CRITICAL_UNDECIDED if n * decay == conv_exp else Regime.DIMENSION
    return DimensionVerdict(regime, dim, m, n, conv_exp, decay)


def thm2_verdict(m: int, n: int, critical: Fraction) -> DimensionVerdict:
    """Verdict from the critical exponent of the weighted series."""
    if m < 1 or n < 1:
        raise DimensionError("m and n must be >= 1")
    critical = Fraction(critical)
    if critical < 0:
        raise DimensionError("critical exponent must be >= 0")
    dim = n * (m - 1) + min(critical, Fraction(n))
    return DimensionVerdict(Regime.DIMENSION, dim, m, n, critical=critical)


@dataclass(frozen=True)
class ConsistencyReport:
    m: int
    n: int
    v: Fraction
    thm1: DimensionVerdict
    thm2: DimensionVerdict
    exact_match: Optional[bool]
    gap: float

    def to_config(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "v": str(self.v),
            "thm1": self.thm1.to_config(),
            "thm2": self.thm2.to_config(),
            "exact_match": self.exact_match,
            "gap": self.gap,
        }


def consistency_check(
    family: SetFamily, v: Fraction, n: int, n_max: int = 12
) -> ConsistencyReport:
    """Both dimension routes for the power error of exponent v restricted
    to the family; they must agree (exactly when closed forms exist)."""
    v = Fraction(v)
    m = family.m
    if family.oracle_v is not None:
        conv: Fraction | float = family.oracle_v
    else:
        est = convergence_exponent(family, n_max)
        assert est.value is not None
        conv = est.value
    psi = ApproxFunction.restricted(ApproxFunction.power(family.field, v), family)
    crit_est = critical_exponent(psi, n, n_max, family)
    crit: Fraction | float
    if crit_est.exact is not None:
        crit = crit_est.exact
    elif family.oracle_v is not None:
        # closed form for a power error on a family with known exponent
        crit = (n + family.oracle_v) / (1 + v)
    else:
        assert crit_est.value is not None
        crit = crit_est.value

    def _frac(x: Fraction | float) -> Fraction:
        return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**6)

    t1 = thm1_verdict(m, n, _frac(conv), v)
    t2 = thm2_verdict(m, n, _frac(crit))
    exact_match: Optional[bool] = None
    if isinstance(conv, Fraction) and isinstance(crit, Fraction):
        exact_match = t1.dim_value == t2.dim_value
    gap = abs(float(t1.dim_value) - float(t2.dim_value))
    return ConsistencyReport(m, n, v, t1, t2, exact_match, gap)


# ---------------------------------------------------------------------------
# covering cost
# ---------------------------------------------------------------------------


class CoverVerdict(enum.Enum):
    DECAYING = "DECAYING"
    GROWING = "GROWING"
    FLAT = "FLAT"


@dataclass(frozen=True)
class CoverRow:
    N: int
    members: int
    translates: int
    balls_exp: int
    radius_exp: int
    term: Fraction


@dataclass(frozen=True)
class CoverReport:
    s: Fraction
    m_cutoff: int
    s_length: Fraction
    rows: Tuple[CoverRow, ...]
    verdict: CoverVerdict
    threshold: Fraction

    def to_config(self) -> dict:
        return {
            "s": str(self.s),
            "M": self.m_cutoff,
            "s_length": str(self.s_length),
            "verdict": self.verdict.value,
            "threshold": str(self.threshold),
            "rows": [
                {
                    "N": r.N,
                    "members": r.members,
                    "translates": r.translates,
                    "balls_exp": r.balls_exp,
                    "radius_exp": r.radius_exp,
                    "term": str(r.term),
                }
                for r in self.rows
            ],
        }


def cover_cost_report(
    family: SetFamily,
    decay: Fraction,
    epsilon: Fraction,
    s: Fraction,
    m_cutoff: int,
    n_max: int,
    n: int = 1,
) -> CoverReport:
    """Exact partial sums of the block majorant of the cover cost.

    Per block N the majorant charges members(N) * k^(n(N+1)) translates,
    k^ceil((1 + decay - eps)(m-1) n N) balls per translate, each of
    diameter-cost k^(-floor(s (decay - eps + 1) N)).  Constants hidden by
    the asymptotic cover bounds are frozen at 1; only the decay/growth
    dichotomy of the tail is meaningful, not the absolute values.
    """
    if epsilon <= 0:
        raise DimensionError("epsilon must be positive")
    if s <= 0 or s > family.m * n:
        raise DimensionError("s must lie in (0, mn]")
    if m_cutoff < 0 or m_cutoff > n_max:
        raise DimensionError("cutoff must lie in [0, n_max]")
    k = family.field.k
    m = family.m
    rows: List[CoverRow] = []
    total = Fraction(0)
    for N in range(m_cutoff, n_max + 1):
        members = family.block_count(N)
        if members == 0:
            continue
        translates = k ** (n * (N + 1))
        balls_exp = math.ceil((1 + decay - epsilon) * (m - 1) * n * N)
        radius_exp = math.floor(s * (decay - epsilon + 1) * N)
        term = Fraction(members * translates * k**balls_exp, k**radius_exp)
        rows.append(CoverRow(N, members, translates, balls_exp, radius_exp, term))
        total += term
    if family.oracle_v is not None:
        conv = family.oracle_v
    else:
        est = convergence_exponent(family, n_max)
        assert est.value is not None
        conv = Fraction(est.value).limit_denominator(10**6)
    threshold = (m - 1) + (n + conv) / (1 + decay)
    if len(rows) >= 2:
        tail_from = max(m_cutoff, n_max // 2)
        tail = [r for r in rows if r.N >= tail_from] or rows
        first, last = tail[0], tail[-1]
        if last.term < first.term:
            verdict = CoverVerdict.DECAYING
        elif last.term > first.term:
            verdict = CoverVerdict.GROWING
        else:
            verdict = CoverVerdict.FLAT
    else:
        verdict = CoverVerdict.FLAT
    return CoverReport(s, m_cutoff, total, tuple(rows), verdict, threshold)
