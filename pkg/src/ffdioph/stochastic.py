"""Hit-count random variables over the unit cube and their moments.

For a norm block of a family and a shrinking radius schedule, the hit
count of a point A is the number of members q whose resonant
neighborhood (coprime flavor for m = 1, content-coprime for m >= 2)
contains A.  First and second moments are computed exactly as sums of
neighborhood and pairwise-intersection measures; a seeded Monte Carlo
estimator samples the same quantities for cross-checks, together with
the frequency of points hit by no neighborhood.

The radius schedule is rho(k^N) = k^(-N(conv - slack)/n) * log_k N,
used through its power-of-k quantization k^r <= rho < k^(r+1).  The
log factor makes the raw value transcendental, so the raw form is
reported as a float while the quantized exponent is what every exact
computation consumes; radii above 1 are capped at 1 and flagged.

Monte Carlo sampling is sharded over a fixed number of streams with
seeds derived from (seed, shard), so results are identical for any
worker count.
"""

from __future__ import annotations

import hashlib
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .exponents import SetFamily
from .laurent import LaurentMatrix
from .measures import (
    KadicMeasure,
    ResonantKind,
    ResonantSet,
    content_coprime_set,
    coprime_set,
    measure_intersection,
    measure_resonant,
    resonant_contains,
)
from .polyring import PolyVector

MC_SHARDS = 16  # fixed shard count: results never depend on worker count


class StochasticError(ValueError):
    pass


@dataclass(frozen=True)
class RadiusSchedule:
    """Shrinking radius k^(-N(conv - slack)/n) * log_k N at block N."""

    conv_exp: Fraction
    slack: Fraction
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.slack <= 0:
            raise StochasticError("slack must be positive")
        if self.n < 1:
            raise StochasticError("n must be >= 1")

    def raw(self, block_exp: int) -> float:
        if block_exp < 2:
            raise StochasticError("block exponent must be >= 2 so the log factor is positive")
        e = -(self.conv_exp - self.slack) * block_exp / self.n
        return self.k ** float(e) * math.log(block_exp, self.k)

    def quantized_exponent(self, block_exp: int) -> Tuple[int, bool]:
        """(r, capped) with k^r <= rho < k^(r+1), capped to r <= 0.

        The integer part of the exponent is exact rational arithmetic;
        only the log-log correction goes through floating point, which
        is ample at desk scale (the correction is nowhere near an
        integer boundary for the block sizes in range).
        """
        if block_exp < 2:
            raise StochasticError("block exponent must be >= 2 so the log factor is positive")
        e = -(self.conv_exp - self.slack) * block_exp / self.n
        a = math.floor(e)
        frac = e - a  # in [0, 1)
        loglog = math.log(math.log(block_exp, self.k), self.k)
        r = a + math.floor(float(frac) + loglog)
        if r > 0:
            return 0, True
        return r, False

    def to_config(self) -> dict:
        return {
            "vS": str(self.conv_exp),
            "delta": str(self.slack),
            "n": self.n,
        }


def resonant_for(q: PolyVector, radius_exp: int, n: int) -> ResonantSet:
    """The coprime-flavored neighborhood used by the hit counts."""
    if q.m == 1:
        return coprime_set(q.entries[0], radius_exp, n)
    return content_coprime_set(q, radius_exp, n)


@dataclass(frozen=True)
class MomentReport:
    block_exp: int
    radius_exp: int
    radius_capped: bool
    n_members: int
    mean: Fraction
    second_moment: Fraction
    variance: Fraction
    mode: str  # "exact" | "monte-carlo"
    samples: Optional[int] = None
    seed: Optional[int] = None
    zero_fraction: Optional[Fraction] = None

    def to_config(self) -> dict:
        return {
            "block_exp": self.block_exp,
            "radius_exp": self.radius_exp,
            "radius_capped": self.radius_capped,
            "n_members": self.n_members,
            "mean": str(self.mean),
            "second_moment": str(self.second_moment),
            "variance": str(self.variance),
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "zero_fraction": None if self.zero_fraction is None else str(self.zero_fraction),
        }


def _block_members(family: SetFamily, block_exp: int) -> List[PolyVector]:
    return list(family.block(block_exp))


def required_precision(block_exp: int, radius_exp: int) -> int:
    return block_exp + max(-radius_exp, 0, radius_exp)


def hit_count_exact_moments(
    family: SetFamily,
    block_exp: int,
    schedule: RadiusSchedule,
    T: Optional[int] = None,
) -> MomentReport:
    """Exact mean and second moment of the hit count over the block.

    The mean needs no independence: it is the sum of the neighborhood
    measures.  The second moment sums every pairwise intersection
    measure, diagonal included.
    """
    r, capped = schedule.quantized_exponent(block_exp)
    n = schedule.n
    members = _block_members(family, block_exp)
    if T is None:
        T = block_exp + max(-r, 0)
    # rho = k^r with r <= 0; resonant sets carry the positive decay exponent
    sets = [resonant_for(q, -r, n) for q in members]
    mean = Fraction(0)
    measures = []
    for rs in sets:
        mu = measure_resonant(rs, T).to_fraction()
        measures.append(mu)
        mean += mu
    second = Fraction(0)
    for i, sa in enumerate(sets):
        second += measures[i]  # diagonal: indicator squared
        for j in range(i + 1, len(sets)):
            mu = measure_intersection(sa, sets[j], T).to_fraction()
            second += 2 * mu
    variance = second - mean * mean
    return MomentReport(
        block_exp, r, capped, len(members), mean, second, variance, "exact"
    )


def _shard_seed(seed: int, shard: int) -> int:
    digest = hashlib.sha256(f"{seed}:{shard}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _sample_matrix(
    rng: random.Random, field, m: int, n: int, T: int
) -> LaurentMatrix:
    rows = [
        [[rng.randrange(field.k) for _ in range(T)] for _ in range(n)]
        for _ in range(m)
    ]
    return LaurentMatrix.from_unit_prefixes(field, rows, T)


def hit_count_monte_carlo(
    family: SetFamily,
    block_exp: int,
    schedule: RadiusSchedule,
    samples: int,
    seed: int,
    T: Optional[int] = None,
    threads: int = 1,
) -> MomentReport:
    """Seeded Monte Carlo estimate of the hit-count moments.

    Sampling the uniform coefficient prefix at precision T is exactly
    the Haar distribution on depth-T cylinders.  Work is split over
    MC_SHARDS fixed streams; the thread count only changes who consumes
    which shard, never the answer.
    """
    if samples < 1:
        raise StochasticError("need at least one sample")
    r, capped = schedule.quantized_exponent(block_exp)
    n = schedule.n
    members = _block_members(family, block_exp)
    if T is None:
        T = block_exp + max(-r, 0)
    sets = [resonant_for(q, -r, n) for q in members]
    field = family.field
    m = family.m
    per_shard = [samples // MC_SHARDS] * MC_SHARDS
    for i in range(samples % MC_SHARDS):
        per_shard[i] += 1

    def run_shard(shard: int) -> Tuple[int, int, int]:
        rng = random.Random(_shard_seed(seed, shard))
        total = 0
        total_sq = 0
        zeros = 0
        for _ in range(per_shard[shard]):
            a = _sample_matrix(rng, field, m, n, T)
            nu = sum(1 for rs in sets if resonant_contains(rs, a))
            total += nu
            total_sq += nu * nu
            if nu == 0:
                zeros += 1
        return total, total_sq, zeros

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_shard, range(MC_SHARDS)))
    else:
        results = [run_shard(s) for s in range(MC_SHARDS)]
    total = sum(x[0] for x in results)
    total_sq = sum(x[1] for x in results)
    zeros = sum(x[2] for x in results)
    mean = Fraction(total, samples)
    second = Fraction(total_sq, samples)
    variance = second - mean * mean
    return MomentReport(
        block_exp,
        r,
        capped,
        len(members),
        mean,
        second,
        variance,
        "monte-carlo",
        samples=samples,
        seed=seed,
        zero_fraction=Fraction(zeros, samples),
    )


def borel_cantelli_ratio(
    events: Sequence[ResonantSet], count: int, T: int
) -> Fraction:
    """(sum of measures)^2 over the sum of all pairwise intersection
    measures of the first ``count`` events; a lower bound proxy for the
    measure of the limsup of the events."""
    if count < 1 or count > len(events):
        raise StochasticError("count out of range")
    chosen = list(events[:count])
    measures = [measure_resonant(rs, T).to_fraction() for rs in chosen]
    numer = sum(measures) ** 2
    denom = Fraction(0)
    for i, sa in enumerate(chosen):
        denom += measures[i]
        for j in range(i + 1, count):
            denom += 2 * measure_intersection(sa, chosen[j], T).to_fraction()
    if denom == 0:
        raise StochasticError("all events have measure zero")
    return numer / denom
