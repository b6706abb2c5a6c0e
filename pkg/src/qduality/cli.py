"""Command-line front end.

Subcommands: ``compute`` (measures/monotones of one state), ``verify``
(relation checks over sampled or supplied states), ``sweep`` (CSV/JSON batch),
``roof`` (convex-roof estimate), ``criteria`` (reliability audit) and
``report`` (sweep plus rendered figures).

Exit codes: 0 success/verified, 1 verified-false (violation or criterion
failure), 2 usage or input error. All numeric output carries 12 significant
digits and every JSON report echoes the effective configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .criteria import TEST_DOUBLES, double_pair, full_audit
from .measures import MEASURES, entropy_report, get_measure, get_pair, registry
from .monotones import MONOTONES, monotone_pure
from .relations import CSV_HEADER, check_complete, check_incomplete, relation_csv_row
from .roof import RankExceedsEnsembleSize, RoofConfig, convex_roof_estimate
from .sampling import SeededStream, ginibre_density, haar_bipartite, haar_pure
from .states import (
    BipartitePureState,
    DensityMatrix,
    PureStateVector,
    StateValidationError,
    validate_density_matrix,
)
from .stateio import StateFileError, load_state, state_to_json

__all__ = ["main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return f"{x:.12g}"


def _round12(obj):
    """Round every float in a JSON-ready structure to 12 significant digits."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(text: str, out_path):
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc, out_path):
    _emit(json.dumps(_round12(doc), indent=2) + "\n", out_path)


def _parse_dims(spec: str):
    """'3' -> (3, None); '2x3' -> (2, 3)."""
    try:
        if "x" in spec:
            a, b = spec.lower().split("x")
            dims = (int(a), int(b))
            if dims[0] < 2 or dims[1] < 1:
                raise ValueError
            return dims
        d = int(spec)
        if d < 2:
            raise ValueError
        return (d, None)
    except ValueError:
        raise UsageError(f"bad --dims {spec!r}: expected 'd' or 'dAxdB' with d >= 2") from None


def _selected_pairs(names):
    if not names or "all" in names:
        return registry()
    out = []
    for name in names:
        out.append(double_pair() if name == "broken" else get_pair(name))
    return out


def _load_input_state(args):
    if getattr(args, "state", None):
        return load_state(args.state)
    if getattr(args, "dims", None):
        dim_a, dim_b = _parse_dims(args.dims)
        stream = SeededStream(args.seed)
        if dim_b is None:
            return ginibre_density(dim_a, args.rank or dim_a, stream)
        return haar_bipartite(dim_a, dim_b, stream)
    raise UsageError("provide --state FILE or --dims (with --seed) for a sampled state")


def _werner(p: float) -> DensityMatrix:
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"--werner must be in [0, 1], got {p}")
    bell = np.zeros(4)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    return validate_density_matrix(p * np.outer(bell, bell) + (1.0 - p) * np.eye(4) / 4.0)


# --- compute ----------------------------------------------------------------

def cmd_compute(args) -> int:
    state = _load_input_state(args)
    config = {"state": args.state or f"sampled dims={args.dims} seed={args.seed}", "format": args.format}
    if isinstance(state, PureStateVector):
        state = state.projector()
    if isinstance(state, DensityMatrix):
        rep = entropy_report(state)
        doc = {
            "kind": "density",
            "dim": state.dim,
            "measures": {name: fn(state) for name, fn in MEASURES.items()},
            "entropy": {"vn": rep.vn, "vn_diag": rep.vn_diag, "linear": rep.linear, "purity": rep.purity},
            "config": config,
        }
        rows = list(doc["measures"].items()) + [(f"entropy_{k}", v) for k, v in doc["entropy"].items()]
    else:
        values = {}
        normalized = {}
        schmidt = None
        for pair in registry():
            mv = monotone_pure(pair, state)
            values[mv.name] = mv.value
            normalized[mv.name] = mv.normalized
            schmidt = mv.schmidt
        doc = {
            "kind": "bipartite_pure",
            "dims": [state.dim_a, state.dim_b],
            "schmidt": list(np.asarray(schmidt)),
            "monotones": values,
            "config": config,
        }
        if args.normalized:
            doc["normalized"] = normalized
        rows = list(values.items()) + [(f"schmidt_{k}", v) for k, v in enumerate(np.asarray(schmidt))]

    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "value"])
        for name, value in rows:
            writer.writerow([name, _fmt(value)])
        _emit(buf.getvalue(), args.out)
    else:
        _emit_json(doc, args.out)
    return EXIT_OK


# --- verify -----------------------------------------------------------------

def _verify_reports(args):
    pairs = _selected_pairs(args.pair)
    dim_a, dim_b = _parse_dims(args.dims)
    stream = SeededStream(args.seed)
    complete = dim_b is not None
    for index in range(args.trials):
        sub = stream.child(index)
        if complete:
            state = haar_bipartite(dim_a, dim_b, sub)
            yield index, state, [check_complete(p, state) for p in pairs]
        elif args.pure:
            state = haar_pure(dim_a, sub).projector()
            yield index, state, [check_incomplete(p, state) for p in pairs]
        else:
            state = ginibre_density(dim_a, args.rank or dim_a, sub)
            yield index, state, [check_incomplete(p, state) for p in pairs]


def cmd_verify(args) -> int:
    if args.state:
        state = _load_input_state(args)
        if isinstance(state, PureStateVector):
            state = state.projector()
        pairs = _selected_pairs(args.pair)
        if isinstance(state, BipartitePureState):
            batches = [(0, state, [check_complete(p, state) for p in pairs])]
        else:
            batches = [(0, state, [check_incomplete(p, state) for p in pairs])]
        complete = isinstance(state, BipartitePureState)
        trials = 1
    else:
        dim_a, dim_b = _parse_dims(args.dims)
        complete = dim_b is not None
        batches = _verify_reports(args)
        trials = args.trials

    tol = args.tolerance
    summary = {}
    violations = []
    for index, state, reports in batches:
        for rep in reports:
            s = summary.setdefault(
                rep.pair_name, {"pair": rep.pair_name, "trials": 0, "min_slack": np.inf, "max_abs_slack": 0.0}
            )
            s["trials"] += 1
            s["min_slack"] = min(s["min_slack"], rep.slack)
            s["max_abs_slack"] = max(s["max_abs_slack"], abs(rep.slack))
            saturation_required = complete or args.pure
            bad = abs(rep.slack) > tol if saturation_required else rep.slack < -tol
            if bad:
                violations.append(
                    {"index": index, "pair": rep.pair_name, "slack": rep.slack, "state": state_to_json(state)}
                )

    doc = {
        "config": {
            "pairs": [p.name for p in _selected_pairs(args.pair)],
            "dims": args.dims,
            "trials": trials,
            "seed": args.seed,
            "pure": bool(args.pure),
            "tolerance": tol,
            "mode": "complete" if complete else ("pure-saturation" if args.pure else "incomplete"),
        },
        "results": sorted(summary.values(), key=lambda s: s["pair"]),
        "violations": violations,
        "passed": not violations,
    }
    _emit_json(doc, args.out)
    return EXIT_OK if not violations else EXIT_VIOLATION


# --- sweep ------------------------------------------------------------------

def _sweep_rows(args):
    pairs = _selected_pairs(args.pair)
    dim_a, dim_b = _parse_dims(args.dims)
    stream = SeededStream(args.seed)
    rows = []
    for index in range(args.trials):
        sub = stream.child(index)
        if dim_b is not None:
            state = haar_bipartite(dim_a, dim_b, sub)
            reports = [check_complete(p, state) for p in pairs]
        else:
            state = ginibre_density(dim_a, args.rank or dim_a, sub)
            reports = [check_incomplete(p, state) for p in pairs]
        rows.extend(reports)
    return rows


def cmd_sweep(args) -> int:
    reports = _sweep_rows(args)
    if args.format == "json":
        doc = {
            "config": {"dims": args.dims, "trials": args.trials, "seed": args.seed,
                       "pairs": [p.name for p in _selected_pairs(args.pair)]},
            "rows": [
                dict(zip(CSV_HEADER, relation_csv_row(rep, args.seed)))
                for rep in reports
            ],
        }
        _emit_json(doc, args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rep in reports:
            writer.writerow(relation_csv_row(rep, args.seed))
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


# --- roof -------------------------------------------------------------------

def _roof_config(args) -> RoofConfig:
    base = {}
    if args.config:
        try:
            base = json.loads(args.config)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad --config JSON: {exc}") from None
        if not isinstance(base, dict):
            raise UsageError("--config must be a JSON object")
    mapping = {"m": "ensemble_size"}
    kwargs = {mapping.get(k, k): v for k, v in base.items()}
    for flag, key in (
        ("ensemble_size", "ensemble_size"),
        ("restarts", "restarts"),
        ("max_iters", "max_iters"),
        ("step", "step"),
        ("seed", "seed"),
    ):
        value = getattr(args, flag)
        if value is not None:
            kwargs[key] = value
    try:
        return RoofConfig(**kwargs)
    except TypeError as exc:
        raise UsageError(f"bad roof config: {exc}") from None


def cmd_roof(args) -> int:
    if args.monotone not in MONOTONES:
        raise UsageError(f"unknown monotone {args.monotone!r}; known: {sorted(MONOTONES)}")
    config = _roof_config(args)
    if args.werner is not None:
        rho = _werner(args.werner)
        dims = (2, 2)
    else:
        if not args.dims:
            raise UsageError("roof needs bipartite --dims dAxdB (or --werner P)")
        dims = _parse_dims(args.dims)
        if dims[1] is None:
            raise UsageError("roof needs bipartite --dims dAxdB")
        total = dims[0] * dims[1]
        if args.state:
            state = load_state(args.state)
            if isinstance(state, PureStateVector):
                state = state.projector()
            elif isinstance(state, BipartitePureState):
                state = state.projector()
            rho = state
        else:
            rho = ginibre_density(total, args.rank or total, SeededStream(config.seed))
        if rho.dim != total:
            raise UsageError(f"state dim {rho.dim} does not match --dims {args.dims}")

    result = convex_roof_estimate(args.monotone, rho, dims, config)
    doc = {
        "monotone": result.monotone,
        "value": result.value,
        "converged": result.converged,
        "restarts": result.restarts,
        "iterations": list(result.iterations),
        "best_per_restart": list(result.best_per_restart),
        "trace_summary": {
            "length": len(result.trace),
            "initial": result.trace[0],
            "final": result.trace[-1],
        },
        "ensemble": [
            {"p": p, "state": state_to_json(psi)} for p, psi in result.ensemble
        ],
        "config": dict(result.config, dims=list(dims)),
    }
    _emit_json(doc, args.out)
    return EXIT_OK


# --- criteria ---------------------------------------------------------------

def _counterexample_json(ce):
    if ce is None:
        return None
    return {
        "states": [state_to_json(s) for s in ce.states],
        "detail": {k: (list(v) if isinstance(v, tuple) else v) for k, v in ce.detail.items()},
    }


def _report_json(rep) -> dict:
    return {
        "criterion": rep.criterion,
        "measure": rep.measure,
        "kind": rep.kind,
        "trials": rep.trials,
        "worst_violation": rep.worst_violation,
        "tolerance": rep.tolerance,
        "passed": rep.passed,
        "counterexample": _counterexample_json(rep.counterexample),
    }


def cmd_criteria(args) -> int:
    from .criteria import (
        check_c1_continuity,
        check_c2_permutation,
        check_c3_c4_extremes,
        check_c5_transfer,
        check_c6_convexity,
    )

    reports = []
    if args.measure:
        if args.measure in MEASURES:
            target, kind = args.measure, None
        elif args.measure in TEST_DOUBLES:
            fn, kind, _ = TEST_DOUBLES[args.measure]
            target = fn
        else:
            raise UsageError(
                f"unknown measure {args.measure!r}; known: {sorted(MEASURES)} plus doubles {sorted(TEST_DOUBLES)}"
            )
        stream = SeededStream(args.seed)
        reports.append(check_c1_continuity(target, args.dim, args.trials, stream.child(1), kind=kind))
        reports.append(check_c2_permutation(target, args.dim, stream.child(2), args.trials, kind=kind))
        kind_resolved = kind or ("P" if args.measure.startswith("p_") else "V")
        reports.extend(check_c3_c4_extremes(target, kind_resolved, args.dim, args.trials, stream.child(3)))
        reports.append(check_c5_transfer(target, kind_resolved, args.dim, args.trials, stream.child(4)))
        reports.append(check_c6_convexity(target, args.dim, args.trials, stream.child(5), kind=kind))
    else:
        for pair in _selected_pairs(args.pair):
            reports.extend(full_audit(pair, args.dim, SeededStream(args.seed), args.trials))

    lines = [json.dumps(_round12(_report_json(rep))) for rep in reports]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


# --- report (sweep + figures) ------------------------------------------------

def cmd_report(args) -> int:
    from .figures import render_sweep_figures

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = _sweep_rows(args)

    csv_path = out_dir / "sweep.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rep in reports:
            writer.writerow(relation_csv_row(rep, args.seed))

    rows = [
        {
            "pair_name": rep.pair_name,
            "P": rep.p_value,
            "C": rep.c_value,
            "E": rep.e_value,
            "alpha": rep.alpha,
            "slack": rep.slack,
            "purity": rep.purity,
        }
        for rep in reports
    ]
    figure_paths = render_sweep_figures(rows, out_dir)

    per_pair = {}
    for rep in reports:
        s = per_pair.setdefault(rep.pair_name, {"pair": rep.pair_name, "rows": 0,
                                                "min_slack": np.inf, "max_slack": -np.inf})
        s["rows"] += 1
        s["min_slack"] = min(s["min_slack"], rep.slack)
        s["max_slack"] = max(s["max_slack"], rep.slack)
    summary = {
        "config": {"dims": args.dims, "trials": args.trials, "seed": args.seed,
                   "pairs": [p.name for p in _selected_pairs(args.pair)]},
        "csv": str(csv_path),
        "figures": [str(p) for p in figure_paths],
        "pairs": sorted(per_pair.values(), key=lambda s: s["pair"]),
    }
    (out_dir / "summary.json").write_text(json.dumps(_round12(summary), indent=2) + "\n")
    sys.stdout.write(f"wrote {csv_path}\n")
    for p in figure_paths:
        sys.stdout.write(f"wrote {p}\n")
    sys.stdout.write(f"wrote {out_dir / 'summary.json'}\n")
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def _add_common(sub, *, dims=True, seed=True, out=True):
    if dims:
        sub.add_argument("--dims", help="single dimension 'd' or bipartite 'dAxdB'")
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="stream seed (echoed in reports)")
    if out:
        sub.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qduality",
        description="Wave-particle duality measures, complementarity checks and induced entanglement monotones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="measures/monotones of one state")
    p.add_argument("--state", help="input state JSON file")
    p.add_argument("--rank", type=int, help="rank for a sampled density matrix")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--normalized", action="store_true", help="include monotones divided by alpha")
    _add_common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check complementarity relations over sampled states")
    p.add_argument("--state", help="verify a single state from file instead of sampling")
    p.add_argument("--pair", action="append", help="pair name or 'all' (repeatable)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--rank", type=int, help="rank of sampled density matrices")
    p.add_argument("--pure", action="store_true", help="sample pure states and require saturation")
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV/JSON batch of relation evaluations")
    p.add_argument("--pair", action="append")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--rank", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("roof", help="convex-roof estimate of a monotone on a mixed state")
    p.add_argument("--state", help="density matrix JSON file on the A(x)B space")
    p.add_argument("--werner", type=float, help="two-qubit Werner state weight p")
    p.add_argument("--monotone", required=True, help="s_vn | s_l | w_l1 | w_wy")
    p.add_argument("--rank", type=int, help="rank for a sampled density matrix")
    p.add_argument("--ensemble-size", dest="ensemble_size", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--step", type=float)
    p.add_argument("--config", help="JSON block {\"m\":..,\"restarts\":..,\"max_iters\":..,\"seed\":..}")
    _add_common(p, seed=False)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_roof)

    p = sub.add_parser("criteria", help="audit measures against the reliability criteria")
    p.add_argument("--pair", action="append", help="pair name, 'all', or 'broken'")
    p.add_argument("--measure", help="audit a single measure (built-in or test double)")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--trials", type=int, default=10_000)
    _add_common(p, dims=False)
    p.set_defaults(func=cmd_criteria)

    p = sub.add_parser("report", help="sweep plus rendered figures")
    p.add_argument("--pair", action="append")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--rank", type=int)
    p.add_argument("--out-dir", dest="out_dir", required=True)
    _add_common(p, out=False)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StateFileError, StateValidationError, RankExceedsEnsembleSize) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
