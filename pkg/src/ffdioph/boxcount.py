"""Empirical box-counting of the resonant limsup set at finite depth.

A depth-T cylinder survives when it contains a point A with
||q A|| < psi(q) for some admissible q; the check is exact because the
prefix determines the fractional coefficients of q A up to index
T - deg q and the tail can always absorb the deeper ones.  The
dimension estimate is log_k(survivors)/T, compared against the
dimension calculators' prediction.

The q-range is the norm block at the cutoff exponent J (optionally
widened downward).  J is coupled to the depth so that the resonant
neighborhoods' granularity k^-(1+decay)J matches the cylinder size;
shallower blocks contribute neighborhoods of fixed positive measure,
which a box count at any scale sees as full-dimensional, so widening
the range only inflates the estimate (the documented bias of this
finite surrogate is upward anyway, since the limsup tail is replaced
by a finite union).

Counting is exact and deterministic; with several threads the prefix
space is partitioned into ranges whose disjoint counts are summed in
fixed order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exponents import ApproxFunction, SetFamily
from .polyring import PolyVector

EXHAUSTIVE_GUARD_BITS = 26


class BoxCountError(ValueError):
    pass


def choose_cutoff(T: int, decay: Fraction, margin: int = 1) -> int:
    """Block cutoff J with (1 + decay) J close to T, plus a margin.

    At this J the deepest neighborhoods have radius about k^-T, the
    finest feature a depth-T count can see.
    """
    decay = Fraction(decay)
    if decay <= 0:
        raise BoxCountError("decay order must be positive")
    return int(math.floor(T / (1 + decay))) + margin


@dataclass(frozen=True)
class BoxRow:
    depth: int
    survivors: int
    estimate: float
    prediction: Optional[float]

    def gap(self) -> Optional[float]:
        if self.prediction is None:
            return None
        return self.estimate - self.prediction


@dataclass(frozen=True)
class BoxCountReport:
    m: int
    n: int
    j_cutoff: int
    block_lo: int
    n_resonators: int
    rows: Tuple[BoxRow, ...]

    def final(self) -> BoxRow:
        return self.rows[-1]

    def to_config(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "J": self.j_cutoff,
            "block_lo": self.block_lo,
            "n_resonators": self.n_resonators,
            "rows": [
                {
                    "T": r.depth,
                    "survivors": r.survivors,
                    "estimate": r.estimate,
                    "prediction": r.prediction,
                }
                for r in self.rows
            ],
        }


@dataclass(frozen=True)
class _Resonator:
    q: PolyVector
    degree: int
    radius_exp: int  # full strength; <= 0 means trivially satisfied


def _collect_resonators(
    family: SetFamily, psi: ApproxFunction, block_lo: int, j_cutoff: int
) -> List[_Resonator]:
    out = []
    for N in range(block_lo, j_cutoff + 1):
        for q in family.block(N):
            e = psi.exponent_at(q)
            if e is None:
                continue
            out.append(_Resonator(q, N, -e))
    return out


def _constraint_masks_gf2(res: _Resonator, depth: int) -> List[int]:
    """Per vanishing index s, the bitmask of prefix positions entering
    the fractional coefficient of q A at s (m = n = 1, k = 2)."""
    q = res.q.entries[0]
    masks = []
    effective = min(res.radius_exp, depth - res.degree)
    for s in range(1, effective + 1):
        mask = 0
        for c, coeff in enumerate(q.coeffs):
            if coeff:
                mask |= 1 << (s + c - 1)
        masks.append(mask)
    return masks


def _count_depth_gf2(
    resonators: Sequence[_Resonator], depth: int, threads: int
) -> int:
    mask_sets = []
    for res in resonators:
        masks = _constraint_masks_gf2(res, depth)
        if not masks:
            return 1 << depth  # a trivially satisfied resonator: all survive
        mask_sets.append(masks)
    if not mask_sets:
        return 0
    total = 1 << depth

    def count_range(lo: int, hi: int) -> int:
        c = 0
        for word in range(lo, hi):
            for masks in mask_sets:
                for mask in masks:
                    if (word & mask).bit_count() & 1:
                        break
                else:
                    c += 1
                    break
        return c

    if threads > 1 and total >= 1 << 12:
        chunks = 4 * threads
        bounds = [(i * total // chunks, (i + 1) * total // chunks) for i in range(chunks)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(lambda b: count_range(*b), bounds))
    return count_range(0, total)


def _propagate_gf2(
    resonators: Sequence[_Resonator], depths: Sequence[int]
) -> List[Tuple[int, int]]:
    """Survivor counts by extending surviving prefixes one coefficient at
    a time (m = n = 1, k = 2); exact, memory-bound by the survivor set."""
    live = [0]
    depth = 0
    out = []
    want = set(depths)
    max_depth = max(depths)
    while depth < max_depth:
        depth += 1
        nxt = []
        for word in live:
            for bit in (0, 1):
                cand = word | (bit << (depth - 1))
                ok = False
                for res in resonators:
                    masks = _constraint_masks_gf2(res, depth)
                    if not masks:
                        ok = True
                        break
                    if all((cand & m).bit_count() & 1 == 0 for m in masks):
                        ok = True
                        break
                if ok:
                    nxt.append(cand)
        live = nxt
        if depth in want:
            out.append((depth, len(live)))
    return out


def _count_depth_generic(
    resonators: Sequence[_Resonator],
    family: SetFamily,
    n: int,
    depth: int,
) -> int:
    """Exhaustive survivor count for general k, m, n."""
    field = family.field
    k = field.k
    m = family.m
    cells = m * n
    total = k ** (cells * depth)
    count = 0
    for idx in range(total):
        rem = idx
        coeffs = []
        for _ in range(cells * depth):
            coeffs.append(rem % k)
            rem //= k
        if _word_survives(resonators, coeffs, field, m, n, depth):
            count += 1
    return count


def _word_survives(resonators, coeffs, field, m, n, depth) -> bool:
    for res in resonators:
        effective = min(res.radius_exp, depth - res.degree)
        if effective <= 0:
            # no constraint is visible at this depth: the tail absorbs all
            return True
        ok = True
        for j in range(n):
            for s in range(1, effective + 1):
                acc = 0
                for i, qi in enumerate(res.q.entries):
                    for c, coeff in enumerate(qi.coeffs):
                        if coeff:
                            t = s + c
                            if t <= depth:
                                cell = i * n + j
                                acc = field.add(
                                    acc, field.mul(coeff, coeffs[cell * depth + (t - 1)])
                                )
                if acc:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def box_count(
    family: SetFamily,
    psi: ApproxFunction,
    n: int,
    T: int,
    j_cutoff: int,
    block_lo: Optional[int] = None,
    depths: Optional[Sequence[int]] = None,
    prediction: Optional[float] = None,
    mode: str = "auto",
    threads: int = 1,
) -> BoxCountReport:
    """Survivor counts and dimension estimates over a depth series.

    ``depths`` defaults to every depth from max(j_cutoff + 1, T // 2)
    to T.  ``mode`` is one of auto, exhaustive, propagation; the
    propagation mode is restricted to m = n = 1 over the binary field,
    where it handles depths beyond the exhaustive guard.
    """
    m = family.m
    if block_lo is None:
        block_lo = j_cutoff
    if block_lo < 0 or block_lo > j_cutoff:
        raise BoxCountError("block range must satisfy 0 <= block_lo <= J")
    if depths is None:
        depths = list(range(max(j_cutoff + 1, T // 2), T + 1))
    depths = sorted(set(depths))
    if not depths or depths[-1] != T:
        raise BoxCountError("the depth series must end at T")
    resonators = _collect_resonators(family, psi, block_lo, j_cutoff)
    k = family.field.k
    cells = m * n
    gf2_scalar = k == 2 and m == 1 and n == 1
    bits = cells * T * math.log2(k)
    if mode == "auto":
        mode = "exhaustive" if bits <= EXHAUSTIVE_GUARD_BITS else "propagation"
    if mode == "exhaustive" and bits > EXHAUSTIVE_GUARD_BITS:
        raise BoxCountError(
            f"exhaustive mode needs {bits:.0f} bits > guard {EXHAUSTIVE_GUARD_BITS}"
        )
    if mode == "propagation" and not gf2_scalar:
        raise BoxCountError("propagation mode is implemented for m = n = 1 over GF(2)")

    rows = []
    if mode == "propagation":
        counts = _propagate_gf2(resonators, depths)
    else:
        counts = []
        for depth in depths:
            if gf2_scalar:
                counts.append((depth, _count_depth_gf2(resonators, depth, threads)))
            else:
                counts.append((depth, _count_depth_generic(resonators, family, n, depth)))
    for depth, survivors in counts:
        estimate = math.log(survivors, k) / depth if survivors > 0 else 0.0
        rows.append(BoxRow(depth, survivors, estimate, prediction))
    return BoxCountReport(m, n, j_cutoff, block_lo, len(resonators), tuple(rows))
