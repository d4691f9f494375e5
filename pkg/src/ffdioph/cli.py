"""Command-line interface: verification suites, measure queries,
exponent estimators, dimension calculators, stochastic experiments,
and box-counting runs.

Outputs are machine-readable (JSON by default, CSV for tabular data)
and deterministic: no timestamps, sorted keys, and a config echo that
identifies the run.  Worker counts (--threads, or the FFDIOPH_THREADS
environment variable) never change any emitted value, so re-runs are
byte-identical for a fixed config and seed.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import verify as verify_mod
from .boxcount import BoxCountError, box_count, choose_cutoff
from .dimension import (
    CoverReport,
    DimensionError,
    cover_cost_report,
    thm1_verdict,
    thm2_verdict,
)
from .exponents import (
    ApproxFunction,
    FamilyError,
    SetFamily,
    block_counts,
    convergence_exponent,
    counting_dimension,
    counting_dimension_sup,
    counting_exponent,
    critical_exponent,
    decay_order,
    parse_fraction,
    split_series_report,
)
from .ffield import FieldError, FieldSpec
from .laurent import PrecisionError
from .measures import (
    MeasureError,
    ResonantKind,
    ResonantSet,
    measure_intersection,
    measure_resonant,
)
from .polyring import Poly, PolynomialError, PolyVector
from .stochastic import (
    RadiusSchedule,
    StochasticError,
    borel_cantelli_ratio,
    hit_count_exact_moments,
    hit_count_monte_carlo,
    resonant_for,
)

USAGE_ERROR = 2
VERIFY_FAILURE = 1

_CONFIG_ERRORS = (
    FieldError,
    FamilyError,
    MeasureError,
    DimensionError,
    StochasticError,
    BoxCountError,
    PolynomialError,
    PrecisionError,
    ValueError,
    KeyError,
)


class CliError(Exception):
    pass


def _emit(payload: dict, fmt: str, out: Optional[str], rows_key: Optional[str] = None) -> None:
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _to_csv(payload, rows_key)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(payload: dict, rows_key: Optional[str]) -> str:
    buf = io.StringIO()
    result = payload.get("result", {})
    rows = None
    if rows_key:
        rows = result
        for part in rows_key.split("."):
            rows = rows.get(part) if isinstance(rows, dict) else None
            if rows is None:
                break
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        fields = sorted(rows[0].keys())
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({f: row.get(f) for f in fields})
    else:
        writer = csv.writer(buf)
        writer.writerow(["key", "value"])
        for key in sorted(result) if isinstance(result, dict) else []:
            writer.writerow([key, json.dumps(result[key], sort_keys=True)])
    return buf.getvalue()


def _field_from_args(args) -> FieldSpec:
    modulus = json.loads(args.modulus) if getattr(args, "modulus", None) else None
    return FieldSpec(args.k, getattr(args, "l", 1) or 1, modulus)


def _family_from_args(field: FieldSpec, args) -> SetFamily:
    if getattr(args, "S", None):
        return SetFamily.from_config(field, json.loads(args.S))
    name = (getattr(args, "family", None) or "all").lower()
    m = getattr(args, "m", 1) or 1
    if name == "all":
        return SetFamily.all_nonzero(field, m)
    if name == "monic":
        return SetFamily.monic_coords(field, m)
    if name == "lacunary":
        degrees = getattr(args, "degrees", None)
        if degrees:
            return SetFamily.lacunary_list(field, m, json.loads(degrees))
        return SetFamily.lacunary(field, m, getattr(args, "base", 2) or 2)
    raise CliError(f"unknown family preset {name!r} (use --S for a JSON config)")


def _psi_from_args(field: FieldSpec, args) -> ApproxFunction:
    if getattr(args, "psi", None):
        return ApproxFunction.from_config(field, json.loads(args.psi))
    kind = (getattr(args, "psi_kind", None) or "POWER").upper()
    if kind == "POWER":
        return ApproxFunction.power(field, args.v if args.v is not None else "1")
    if kind == "POWER_LOG":
        return ApproxFunction.power_log(
            field, args.v if args.v is not None else "1", getattr(args, "log_exp", 1) or 1
        )
    raise CliError(f"psi kind {kind!r} needs a JSON --psi config")


def _vector_from_json(field: FieldSpec, text: str) -> PolyVector:
    data = json.loads(text)
    return PolyVector.make([Poly.make(field, coeffs) for coeffs in data])


def _kind(tag: str) -> ResonantKind:
    try:
        return ResonantKind(tag)
    except ValueError:
        raise CliError(
            f"unknown set kind {tag!r}; expected plain, coprime, or content-coprime"
        )


def _apply_config_file(args: argparse.Namespace, parser_defaults: Dict[str, object]) -> None:
    """Merge --config file values into unset arguments."""
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"config file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise CliError("config file must hold a JSON object")
    for key, value in data.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise CliError(f"unknown config key {key!r}")
        if getattr(args, attr) == parser_defaults.get(attr):
            setattr(args, attr, value)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return max(1, int(args.threads))
    env = os.environ.get("FFDIOPH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError("FFDIOPH_THREADS must be an integer")
    return 1


def _echo(args, keys: Sequence[str]) -> dict:
    out = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

_VERIFY_FLAGS = {
    "k": int,
    "m": int,
    "n": int,
    "degmax": int,
    "rmax": int,
    "nmax": int,
    "blockmax": int,
    "delta": str,
    "vS": str,
    "trials": int,
    "seed": int,
    "depth": int,
    "tolerance": float,
    "enum_T_cap": int,
    "nmax_blocks": int,
}


def _cmd_verify(args) -> int:
    name = args.lemma
    if name not in verify_mod.REGISTRY:
        raise CliError(
            f"unknown lemma {name!r}; choose from {', '.join(sorted(verify_mod.REGISTRY))}"
        )
    fn = verify_mod.REGISTRY[name]
    import inspect

    accepted = set(inspect.signature(fn).parameters)
    kwargs = {}
    for flag in _VERIFY_FLAGS:
        value = getattr(args, flag, None)
        if value is not None and flag in accepted:
            kwargs[flag] = value
    report = fn(**kwargs)
    payload = {
        "command": "verify",
        "config": {"lemma": name, **kwargs},
        "result": report,
    }
    _emit(payload, args.format, args.out)
    return 0 if report["pass"] else VERIFY_FAILURE


def _cmd_measure(args) -> int:
    field = _field_from_args(args)
    q = _vector_from_json(field, args.q)
    rs = ResonantSet(_kind(args.kind), q, args.r, args.n)
    T = args.T if args.T is not None else rs.required_precision()
    if args.intersect_q:
        q2 = _vector_from_json(field, args.intersect_q)
        rs2 = ResonantSet(
            _kind(args.intersect_kind or args.kind),
            q2,
            args.intersect_r if args.intersect_r is not None else args.r,
            args.n,
        )
        T = max(T, rs2.required_precision())
        measure = measure_intersection(rs, rs2, T)
    else:
        measure = measure_resonant(rs, T)
    payload = {
        "command": "measure",
        "config": {
            "field": field.to_config(),
            "kind": args.kind,
            "q": json.loads(args.q),
            "r": args.r,
            "n": args.n,
            "T": T,
            **(
                {
                    "intersect_q": json.loads(args.intersect_q),
                    "intersect_kind": args.intersect_kind or args.kind,
                    "intersect_r": args.intersect_r if args.intersect_r is not None else args.r,
                }
                if args.intersect_q
                else {}
            ),
        },
        "result": {"measure": measure.to_config(), "fraction": str(measure.to_fraction())},
    }
    _emit(payload, args.format, args.out)
    return 0


def _cmd_exponents(args) -> int:
    field = _field_from_args(args)
    family = _family_from_args(field, args)
    nmax = args.Nmax
    quantity = args.quantity
    result: dict
    rows_key = None
    if quantity == "vS":
        result = convergence_exponent(family, nmax).to_config()
    elif quantity == "gamma":
        result = counting_exponent(family, nmax).to_config()
    elif quantity == "lambda":
        psi = _psi_from_args(field, args)
        result = decay_order(psi, family, nmax).to_config()
    elif quantity == "eta":
        psi = _psi_from_args(field, args)
        result = critical_exponent(psi, args.n, nmax, family).to_config()
    elif quantity == "delta":
        psi = _psi_from_args(field, args)
        if args.v is not None:
            value, report = counting_dimension(psi, parse_fraction(args.v), args.n, nmax, family.m)
            result = {"delta": value, "counting": report.to_config()}
        else:
            theta = parse_fraction(args.theta or "1/4")
            eta_est = critical_exponent(psi, args.n, nmax, family)
            eta_val = eta_est.exact if eta_est.exact is not None else Fraction(
                eta_est.value
            ).limit_denominator(64)
            mu = Fraction(family.m + args.n) / eta_val if eta_val > 0 else Fraction(family.m + args.n)
            grid = [theta * j for j in range(1, int(mu / theta) + 2)]
            value, values = counting_dimension_sup(psi, args.n, grid, nmax, family.m)
            result = {
                "delta_sup": value,
                "grid": [{"v": str(v), "delta": d} for v, d in values],
            }
            rows_key = "grid"
    elif quantity == "blocks":
        table = block_counts(family, nmax)
        result = {"blocks": table.to_rows()}
        rows_key = "blocks"
    elif quantity == "partition":
        psi = _psi_from_args(field, args)
        eta = parse_fraction(args.eta or "1/2")
        theta = parse_fraction(args.theta or "1/4")
        result = split_series_report(psi, eta, theta, args.n, nmax, family.m).to_config()
    else:
        raise CliError(f"unknown exponents quantity {quantity!r}")
    payload = {
        "command": f"exponents {quantity}",
        "config": {
            "field": field.to_config(),
            "S": family.to_config(),
            "Nmax": nmax,
            **({"psi": json.loads(args.psi)} if args.psi else {}),
            **({"v": args.v} if args.v is not None else {}),
            "n": args.n,
        },
        "result": result,
    }
    _emit(payload, args.format, args.out, rows_key)
    return 0


def _cmd_dimension(args) -> int:
    if args.calc == "thm1":
        if args.vS is None or getattr(args, "lam", None) is None:
            raise CliError("thm1 needs --vS and --lambda")
        verdict = thm1_verdict(args.m, args.n, parse_fraction(args.vS), parse_fraction(args.lam))
        result = verdict.to_config()
        rows_key = None
        config = {"m": args.m, "n": args.n, "vS": args.vS, "lambda": args.lam}
    elif args.calc == "thm2":
        if args.eta is None:
            raise CliError("thm2 needs --eta")
        verdict = thm2_verdict(args.m, args.n, parse_fraction(args.eta))
        result = verdict.to_config()
        rows_key = None
        config = {"m": args.m, "n": args.n, "eta": args.eta}
    elif args.calc == "slength":
        if getattr(args, "lam", None) is None or args.s is None:
            raise CliError("slength needs --lambda and --s")
        field = _field_from_args(args)
        family = _family_from_args(field, args)
        report = cover_cost_report(
            family,
            parse_fraction(args.lam),
            parse_fraction(args.epsilon or "1/8"),
            parse_fraction(args.s),
            args.M,
            args.Nmax,
            args.n,
        )
        result = report.to_config()
        rows_key = "rows"
        config = {
            "field": field.to_config(),
            "S": family.to_config(),
            "s": args.s,
            "lambda": args.lam,
            "epsilon": args.epsilon or "1/8",
            "M": args.M,
            "Nmax": args.Nmax,
            "n": args.n,
        }
    else:
        raise CliError(f"unknown dimension calculator {args.calc!r}")
    payload = {"command": f"dimension {args.calc}", "config": config, "result": result}
    _emit(payload, args.format, args.out, rows_key)
    return 0


def _cmd_stochastic(args) -> int:
    field = _field_from_args(args)
    family = _family_from_args(field, args)
    schedule = RadiusSchedule(
        parse_fraction(args.vS if args.vS is not None else family.m),
        parse_fraction(args.delta),
        args.n,
        field.k,
    )
    threads = _threads(args)
    if args.experiment == "moments":
        exact = hit_count_exact_moments(family, args.block, schedule, args.T)
        result = {"exact": exact.to_config()}
        if args.samples:
            mc = hit_count_monte_carlo(
                family, args.block, schedule, args.samples, args.seed, args.T, threads
            )
            result["monte_carlo"] = mc.to_config()
    elif args.experiment == "ratio":
        blocks = json.loads(args.blocks) if args.blocks else [args.block]
        events = []
        T_needed = 0
        for N in blocks:
            r, _ = schedule.quantized_exponent(N)
            for q in family.block(N):
                rs = resonant_for(q, -r, args.n)
                events.append(rs)
                T_needed = max(T_needed, rs.required_precision())
        T = args.T if args.T is not None else T_needed
        ratio = borel_cantelli_ratio(events, len(events), T)
        result = {"ratio": str(ratio), "events": len(events)}
    else:
        raise CliError(f"unknown stochastic experiment {args.experiment!r}")
    payload = {
        "command": f"stochastic {args.experiment}",
        "config": {
            "field": field.to_config(),
            "S": family.to_config(),
            "schedule": schedule.to_config(),
            "block": args.block,
            "samples": args.samples,
            "seed": args.seed,
            **({"blocks": json.loads(args.blocks)} if args.blocks else {}),
        },
        "result": result,
    }
    _emit(payload, args.format, args.out)
    return 0


def _cmd_boxcount(args) -> int:
    field = _field_from_args(args)
    family = _family_from_args(field, args)
    psi = _psi_from_args(field, args)
    decay = psi.exact_decay_order()
    j_cutoff = args.J if args.J is not None else choose_cutoff(args.T, decay or Fraction(1))
    prediction = None
    if decay is not None and family.oracle_v is not None:
        verdict = thm1_verdict(family.m, args.n, family.oracle_v, decay)
        prediction = float(verdict.dim_value)
    depths = json.loads(args.depths) if args.depths else None
    report = box_count(
        family,
        psi,
        args.n,
        args.T,
        j_cutoff,
        block_lo=args.block_lo,
        depths=depths,
        prediction=prediction,
        mode=args.mode,
        threads=_threads(args),
    )
    payload = {
        "command": "boxcount",
        "config": {
            "field": field.to_config(),
            "S": family.to_config(),
            "psi": psi.to_config(),
            "n": args.n,
            "T": args.T,
            "J": j_cutoff,
            "mode": args.mode,
        },
        "result": report.to_config(),
    }
    _emit(payload, args.format, args.out, "rows")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")
    p.add_argument("--config", default=None, help="JSON file supplying argument values")
    p.add_argument("--threads", type=int, default=None, help="worker count (results identical for any value)")


def _add_field(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=2, help="field characteristic power base (prime)")
    p.add_argument("--l", type=int, default=1, help="extension degree")
    p.add_argument("--modulus", default=None, help="JSON coefficient list for the field modulus")


def _add_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default="all", help="all | monic | lacunary")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--base", type=int, default=2, help="lacunary degree base")
    p.add_argument("--degrees", default=None, help="JSON degree list for lacunary families")
    p.add_argument("--S", default=None, help="full JSON family config (overrides presets)")


def _add_psi(p: argparse.ArgumentParser) -> None:
    p.add_argument("--psi", default=None, help="full JSON psi config")
    p.add_argument("--psi-kind", dest="psi_kind", default=None, help="POWER | POWER_LOG")
    p.add_argument("--v", default=None, help="power exponent (rational string)")
    p.add_argument("--log-exp", dest="log_exp", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffdioph",
        description="Exact arithmetic and verification suites for Diophantine "
        "approximation over function fields.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="run a lemma verification suite")
    p.add_argument("lemma")
    for flag, typ in _VERIFY_FLAGS.items():
        p.add_argument(f"--{flag}", type=typ, default=None)
    _add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("measure", help="exact measure of a resonant neighborhood")
    _add_field(p)
    p.add_argument("--kind", default="plain", help="plain | coprime | content-coprime")
    p.add_argument("--q", required=True, help="JSON list of coefficient lists")
    p.add_argument("--r", type=int, required=True, help="radius exponent (radius k^-r)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--intersect-q", dest="intersect_q", default=None)
    p.add_argument("--intersect-kind", dest="intersect_kind", default=None)
    p.add_argument("--intersect-r", dest="intersect_r", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=_cmd_measure)

    p = sub.add_parser("exponents", help="block tables and growth exponents")
    p.add_argument("quantity", choices=["vS", "gamma", "lambda", "eta", "delta", "blocks", "partition"])
    _add_field(p)
    _add_family(p)
    _add_psi(p)
    p.add_argument("--Nmax", type=int, default=12)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--theta", default=None)
    p.add_argument("--eta", default=None)
    _add_common(p)
    p.set_defaults(handler=_cmd_exponents)

    p = sub.add_parser("dimension", help="dimension calculators and the cover diagnostic")
    p.add_argument("calc", choices=["thm1", "thm2", "slength"])
    _add_field(p)
    _add_family(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--vS", default=None)
    p.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("--eta", default=None)
    p.add_argument("--s", default=None)
    p.add_argument("--epsilon", default=None)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--Nmax", type=int, default=14)
    _add_common(p)
    p.set_defaults(handler=_cmd_dimension)

    p = sub.add_parser("stochastic", help="hit-count moments and limsup ratios")
    p.add_argument("experiment", choices=["moments", "ratio"])
    _add_field(p)
    _add_family(p)
    p.add_argument("--block", type=int, default=3, help="norm block exponent")
    p.add_argument("--blocks", default=None, help="JSON list of block exponents (ratio)")
    p.add_argument("--vS", default=None)
    p.add_argument("--delta", default="1/2")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(handler=_cmd_stochastic)

    p = sub.add_parser("boxcount", help="finite-depth box-counting estimate")
    _add_field(p)
    _add_family(p)
    _add_psi(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--J", type=int, default=None)
    p.add_argument("--block-lo", dest="block_lo", type=int, default=None)
    p.add_argument("--depths", default=None, help="JSON list of depths (default: T//2..T)")
    p.add_argument("--mode", choices=["auto", "exhaustive", "propagation"], default="auto")
    _add_common(p)
    p.set_defaults(handler=_cmd_boxcount)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = {
        action.dest: action.default
        for sp in parser._subparsers._group_actions  # type: ignore[union-attr]
        for choice in getattr(sp, "choices", {}).values()
        for action in choice._actions
    }
    try:
        _apply_config_file(args, defaults)
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
