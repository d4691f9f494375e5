"""Desk-scale verification suites for the measure and counting lemmas.

Each checker sweeps an exhaustive grid, compares exact quantities
against closed forms or independent oracles, and returns a report with
the grid size, any failures (with witnesses), and the observed
constants for the asymptotic statements.  The command-line ``verify``
subcommand dispatches here; the test suite calls the same functions.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .dimension import thm1_verdict, thm2_verdict
from .exponents import (
    ApproxFunction,
    SetFamily,
    convergence_exponent,
    counting_dimension,
    counting_exponent,
    critical_exponent,
    large_block_witnesses,
)
from .ffield import FieldSpec
from .measures import (
    Cylinder,
    KadicMeasure,
    check_neighborhood_inclusion,
    content_coprime_set,
    coprime_measure_formula,
    coprime_set,
    count_paired_parts,
    measure_by_enumeration,
    measure_intersection,
    measure_resonant,
    plain_set,
    scaling_identity_holds,
)
from .polyring import (
    Poly,
    PolyVector,
    coprime_density,
    enumerate_polys,
    enumerate_vectors,
    totient,
    totient_bruteforce,
    totient_lower_constant,
    vectors_linearly_dependent,
)
from .stochastic import RadiusSchedule


def _report(lemma: str, params: dict, checked: int, failures: list, constants: dict) -> dict:
    return {
        "lemma": lemma,
        "params": params,
        "checked": checked,
        "failures": failures,
        "constants": constants,
        "pass": not failures,
    }


def _nonzero_scalars(field: FieldSpec, degmax: int, monic: bool = False):
    for d in range(degmax + 1):
        yield from enumerate_polys(field, d, monic=monic)


def _nonzero_vectors(field: FieldSpec, m: int, degmax: int):
    for N in range(degmax + 1):
        yield from enumerate_vectors(field, m, N)


def verify_phi(k: int = 2, degmax: int = 6) -> dict:
    """Totient: product formula against gcd enumeration, and the growth
    constants of totient(q)/|q|."""
    field = FieldSpec(k)
    failures = []
    checked = 0
    min_ratio = Fraction(1)
    lower = totient_lower_constant(field, degmax)
    for q in _nonzero_scalars(field, degmax, monic=True):
        d = q.degree()
        assert d is not None
        if d == 0:
            continue
        checked += 1
        formula = totient(q)
        brute = totient_bruteforce(q)
        if formula != brute:
            failures.append({"q": q.to_config(), "formula": formula, "brute": brute})
            continue
        ratio = Fraction(formula, k**d)
        min_ratio = min(min_ratio, ratio)
        if not 0 < ratio <= 1 or ratio < lower:
            failures.append({"q": q.to_config(), "ratio": str(ratio)})
    return _report(
        "phi",
        {"k": k, "degmax": degmax},
        checked,
        failures,
        {"min_ratio": str(min_ratio), "factor_table_lower_bound": str(lower)},
    )


def verify_measure(k: int = 2, m: int = 1, degmax: int = 4, rmax: int = 4, n: int = 1) -> dict:
    """Plain neighborhoods have measure exactly k^-rn for every nonzero q."""
    field = FieldSpec(k)
    failures = []
    checked = 0
    for q in _nonzero_vectors(field, m, degmax):
        d = q.norm_exponent()
        assert d is not None
        for r in range(0, rmax + 1):
            checked += 1
            got = measure_resonant(plain_set(q, r, n), r + d)
            want = KadicMeasure.make(k, 1, r * n)
            if got != want:
                failures.append({"q": q.to_config(), "r": r, "got": got.to_config()})
    return _report(
        "measure", {"k": k, "m": m, "degmax": degmax, "rmax": rmax, "n": n}, checked, failures, {}
    )


def verify_1d_measure(
    k: int = 2, degmax: int = 4, rmax: int = 4, nmax: int = 2, enum_T_cap: int = 8
) -> dict:
    """Coprime neighborhoods: solver measure equals the exact totient
    formula, cross-validated by full enumeration on the small subgrid.

    Unit rescalings of q give the same set, so monic q suffice.
    """
    field = FieldSpec(k)
    failures = []
    checked = 0
    enumerated = 0
    for q in _nonzero_scalars(field, degmax, monic=True):
        d = q.degree()
        assert d is not None
        for r in range(1, rmax + 1):
            for n in range(1, nmax + 1):
                checked += 1
                rs = coprime_set(q, r, n)
                got = measure_resonant(rs, r + d)
                want = coprime_measure_formula(rs)
                if got != want:
                    failures.append(
                        {"q": q.to_config(), "r": r, "n": n, "got": got.to_config(), "want": want.to_config()}
                    )
                    continue
                if k == 2 and n == 1 and r + d <= enum_T_cap:
                    enumerated += 1
                    oracle = measure_by_enumeration([rs], r + d)
                    if oracle != got:
                        failures.append(
                            {"q": q.to_config(), "r": r, "oracle": oracle.to_config(), "got": got.to_config()}
                        )
    return _report(
        "1D-measure",
        {"k": k, "degmax": degmax, "rmax": rmax, "nmax": nmax},
        checked,
        failures,
        {"enumeration_cross_checks": enumerated},
    )


def verify_independence(k: int = 2, degmax: int = 2, rmax: int = 3, n: int = 1) -> dict:
    """Exact product rule for plain neighborhoods of linearly independent
    pairs in two-coordinate families."""
    field = FieldSpec(k)
    failures = []
    checked = 0
    vectors = list(_nonzero_vectors(field, 2, degmax))
    for i, q in enumerate(vectors):
        for q2 in vectors[i + 1 :]:
            if vectors_linearly_dependent(q, q2):
                continue
            for r in range(1, rmax + 1):
                for r2 in range(1, rmax + 1):
                    checked += 1
                    sa = plain_set(q, r, n)
                    sb = plain_set(q2, r2, n)
                    T = max(sa.required_precision(), sb.required_precision())
                    inter = measure_intersection(sa, sb, T)
                    prod = measure_resonant(sa, T) * measure_resonant(sb, T)
                    if inter != prod:
                        failures.append(
                            {
                                "q": q.to_config(),
                                "q2": q2.to_config(),
                                "r": r,
                                "r2": r2,
                                "inter": inter.to_config(),
                                "prod": prod.to_config(),
                            }
                        )
    return _report(
        "independence", {"k": k, "degmax": degmax, "rmax": rmax, "n": n}, checked, failures, {}
    )


def _intersection_ratio_sweep(
    field: FieldSpec, sets_for: Callable[[int, int], list], rmax: int, n: int
) -> tuple[int, Fraction, list]:
    checked = 0
    max_ratio = Fraction(0)
    failures: list = []
    k = field.k
    for r in range(1, rmax + 1):
        for r2 in range(1, rmax + 1):
            for sa, sb in sets_for(r, r2):
                checked += 1
                T = max(sa.required_precision(), sb.required_precision())
                inter = measure_intersection(sa, sb, T).to_fraction()
                scale = Fraction(k ** (r * n)) * Fraction(k ** (r2 * n))
                max_ratio = max(max_ratio, inter * scale)
    return checked, max_ratio, failures


def verify_1d_intersection(k: int = 2, degmax: int = 3, rmax: int = 3, n: int = 1) -> dict:
    """Pairwise intersections of coprime neighborhoods are O(eps^n eps'^n);
    the maximal observed constant is reported for freezing."""
    field = FieldSpec(k)
    scalars = [q for q in _nonzero_scalars(field, degmax) if q.degree() is not None]

    def sets_for(r, r2):
        out = []
        for i, q in enumerate(scalars):
            for q2 in scalars[i + 1 :]:
                out.append((coprime_set(q, r, n), coprime_set(q2, r2, n)))
        return out

    checked, max_ratio, failures = _intersection_ratio_sweep(field, sets_for, rmax, n)
    return _report(
        "1D-intersection",
        {"k": k, "degmax": degmax, "rmax": rmax, "n": n},
        checked,
        failures,
        {"max_ratio": str(max_ratio)},
    )


def verify_big_m_measure(k: int = 2, m: int = 2, degmax: int = 3, rmax: int = 3, nmax: int = 2) -> dict:
    """Content-coprime neighborhoods: exact totient-density formula and
    the sandwich c1 k^-rn <= measure <= k^-rn."""
    field = FieldSpec(k)
    failures = []
    checked = 0
    for q in _nonzero_vectors(field, m, degmax):
        dens = coprime_density(q.content())
        for r in range(1, rmax + 1):
            for n in range(1, nmax + 1):
                checked += 1
                rs = content_coprime_set(q, r, n)
                got = measure_resonant(rs, rs.required_precision())
                want = coprime_measure_formula(rs)
                frac = got.to_fraction()
                upper = Fraction(1, k ** (r * n))
                lower = dens**n * upper
                if got != want or not lower <= frac <= upper:
                    failures.append(
                        {"q": q.to_config(), "r": r, "n": n, "got": got.to_config(), "want": want.to_config()}
                    )
    return _report(
        "big-m-measure",
        {"k": k, "m": m, "degmax": degmax, "rmax": rmax, "nmax": nmax},
        checked,
        failures,
        {},
    )


def verify_big_m_intersection(k: int = 2, m: int = 2, degmax: int = 2, rmax: int = 3, n: int = 1) -> dict:
    """Intersections of distinct content-coprime neighborhoods stay
    O(eps^n eps'^n) across both the independent and the parallel case."""
    field = FieldSpec(k)
    vectors = list(_nonzero_vectors(field, m, degmax))

    def sets_for(r, r2):
        out = []
        for i, q in enumerate(vectors):
            for q2 in vectors[i + 1 :]:
                out.append((content_coprime_set(q, r, n), content_coprime_set(q2, r2, n)))
        return out

    checked, max_ratio, failures = _intersection_ratio_sweep(field, sets_for, rmax, n)
    return _report(
        "big-m-intersection",
        {"k": k, "m": m, "degmax": degmax, "rmax": rmax, "n": n},
        checked,
        failures,
        {"max_ratio": str(max_ratio)},
    )


def verify_counting_N(k: int = 2, degmax: int = 3, rmax: int = 3, n: int = 1, m: int = 1) -> dict:
    """Paired-part counts along a common direction never exceed
    (|q'| eps + |q| eps')^n, over all distinct parallel pairs."""
    field = FieldSpec(k)
    vectors = list(_nonzero_vectors(field, m, degmax))
    failures = []
    checked = 0
    max_count = 0
    for i, q in enumerate(vectors):
        for q2 in vectors:
            if q2 == q:
                continue
            if not vectors_linearly_dependent(q, q2):
                continue
            try:
                for r in range(1, rmax + 1):
                    for r2 in range(1, rmax + 1):
                        checked += 1
                        count, bound = count_paired_parts(q, q2, r, r2, n)
                        max_count = max(max_count, count)
                        if count > bound:
                            failures.append(
                                {
                                    "q": q.to_config(),
                                    "q2": q2.to_config(),
                                    "r": r,
                                    "r2": r2,
                                    "count": count,
                                    "bound": str(bound),
                                }
                            )
            except ValueError:
                continue
    return _report(
        "counting-N",
        {"k": k, "m": m, "degmax": degmax, "rmax": rmax, "n": n},
        checked,
        failures,
        {"max_count": max_count},
    )


def verify_large_blocks(k: int = 2, m: int = 1, nmax_blocks: int = 12, delta: str = "1/2") -> dict:
    """Witness blocks with count >= k^(N(v - delta)) recur: beyond every
    cutoff below nmax - 4 there is another witness."""
    field = FieldSpec(k)
    families = {
        "all": SetFamily.all_nonzero(field, m),
        "monic": SetFamily.monic_coords(field, m),
        "lacunary": SetFamily.lacunary(field, m, 2),
    }
    d = Fraction(delta)
    failures = []
    checked = 0
    witness_map = {}
    for name, fam in families.items():
        witnesses = large_block_witnesses(fam, d, nmax_blocks)
        witness_map[name] = witnesses
        for cutoff in range(0, nmax_blocks - 4 + 1):
            checked += 1
            if not any(w >= cutoff for w in witnesses):
                failures.append({"family": name, "cutoff": cutoff})
    return _report(
        "large-blocks",
        {"k": k, "m": m, "nmax": nmax_blocks, "delta": delta},
        checked,
        failures,
        {"witnesses": witness_map},
    )


def verify_exponents_eq(k: int = 2, nmax: int = 12, tolerance: float = 0.1) -> dict:
    """Counting exponent and convergence exponent agree within tolerance
    for the built-in families, and match the closed forms."""
    field = FieldSpec(k)
    families = {
        "all-m1": SetFamily.all_nonzero(field, 1),
        "all-m2": SetFamily.all_nonzero(field, 2),
        "monic-m1": SetFamily.monic_coords(field, 1),
        "lacunary-m1": SetFamily.lacunary(field, 1, 2),
    }
    failures = []
    checked = 0
    observed = {}
    for name, fam in families.items():
        checked += 1
        v = convergence_exponent(fam, nmax)
        g = counting_exponent(fam, nmax)
        assert v.value is not None and g.value is not None
        observed[name] = {"v": v.value, "gamma": g.value}
        gap = abs(v.value - g.value)
        oracle_gap = abs(v.value - float(fam.oracle_v)) if fam.oracle_v is not None else 0.0
        if gap > tolerance or oracle_gap > tolerance:
            failures.append({"family": name, "v": v.value, "gamma": g.value})
    return _report(
        "exponents-eq", {"k": k, "nmax": nmax, "tolerance": tolerance}, checked, failures, observed
    )


def verify_compare_exponents(k: int = 2, nmax: int = 12, tolerance: float = 0.1) -> dict:
    """The counting-dimension supremum dominates the critical exponent
    (both capped at n), with equality for pure power errors."""
    field = FieldSpec(k)
    failures = []
    checked = 0
    observed = {}
    for v in (Fraction(2), Fraction(3)):
        for n in (1, 2):
            checked += 1
            psi = ApproxFunction.power(field, v)
            eta = critical_exponent(psi, n, nmax)
            delta, _ = counting_dimension(psi, v, n, nmax)
            assert eta.value is not None
            key = f"v={v},n={n}"
            observed[key] = {"eta": eta.value, "delta": delta}
            if min(delta, n) < min(eta.value, n) - tolerance:
                failures.append({"v": str(v), "n": n, "eta": eta.value, "delta": delta})
            exact = Fraction(1 + n, 1 + v)
            if abs(eta.value - float(exact)) > tolerance / 2 or abs(delta - float(exact)) > tolerance:
                failures.append({"v": str(v), "n": n, "eta": eta.value, "delta": delta, "exact": str(exact)})
    return _report(
        "compare-exponents", {"k": k, "nmax": nmax, "tolerance": tolerance}, checked, failures, observed
    )


def verify_inclusion_eq20(
    k: int = 2, m: int = 1, blockmax: int = 5, vS: Optional[str] = None, delta: str = "1/2", n: int = 1
) -> dict:
    """Every neighborhood at the schedule radius sits inside the widened
    neighborhood of the union of solution sets, for every member of the
    norm blocks up to blockmax."""
    field = FieldSpec(k)
    conv = Fraction(vS) if vS is not None else Fraction(m)
    schedule = RadiusSchedule(conv, Fraction(delta), n, k)
    failures = []
    checked = 0
    for N in range(2, blockmax + 1):
        r, _ = schedule.quantized_exponent(N)
        radius_exp = -r
        T = max(radius_exp + N, radius_exp + 1 + N)
        for q in enumerate_vectors(field, m, N):
            checked += 1
            ok, witness = check_neighborhood_inclusion(q, N, radius_exp, T, n)
            if not ok:
                failures.append({"q": q.to_config(), "N": N, "witness": witness})
    return _report(
        "inclusion-eq20",
        {"k": k, "m": m, "blockmax": blockmax, "delta": delta, "n": n},
        checked,
        failures,
        {},
    )


def verify_scaling(
    k: int = 2, m: int = 1, n: int = 1, trials: int = 100, seed: int = 0, depth: int = 6
) -> dict:
    """Multiplying a cylinder by X^r0 scales its measure by k^(mn r0)."""
    field = FieldSpec(k)
    rng = random.Random(seed)
    failures = []
    checked = 0
    for _ in range(trials):
        d = rng.randint(1, depth)
        words = tuple(
            tuple(tuple(rng.randrange(k) for _ in range(d)) for _ in range(n))
            for _ in range(m)
        )
        cyl = Cylinder(field, words)
        r0 = rng.randint(0, min(3, d))
        checked += 1
        if not scaling_identity_holds(r0, cyl, d + 1):
            failures.append({"depth": d, "r0": r0, "words": [list(map(list, row)) for row in words]})
    return _report(
        "scaling", {"k": k, "m": m, "n": n, "trials": trials, "seed": seed}, checked, failures, {}
    )


REGISTRY: Dict[str, Callable[..., dict]] = {
    "independence": verify_independence,
    "measure": verify_measure,
    "1D-measure": verify_1d_measure,
    "1D-intersection": verify_1d_intersection,
    "phi": verify_phi,
    "big-m-measure": verify_big_m_measure,
    "big-m-intersection": verify_big_m_intersection,
    "counting-N": verify_counting_N,
    "large-blocks": verify_large_blocks,
    "exponents-eq": verify_exponents_eq,
    "compare-exponents": verify_compare_exponents,
    "inclusion-eq20": verify_inclusion_eq20,
    "scaling": verify_scaling,
}
