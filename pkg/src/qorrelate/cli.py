"""Command line front end.

Subcommands: table (ensemble percentage sweeps), state (all measures of one
named or file-loaded state), dicke-scan (closed-form Dicke scores over a
parameter range), fit (power-law exponent from a table of percentages).

Output is CSV (default) or JSON, to stdout or atomically to --output.
Every output embeds the tool version and the full run configuration, and
contains no timestamps, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .dicke import dicke_discord_score, dicke_tangle, dicke_workdeficit_score
from .measures import Direction, MeasureKind, OptimizerOptions
from .monogamy import (
    InvariantViolation,
    evaluate_state,
    percentage_table,
    scaling_fit,
    theorem4_bound_check,
)
from .states import EnsembleSpec, Family, PureState, dicke_state, ghz_state, w_state

CONVENTION = "fwd = measure/dephase the first (nodal) subsystem, bwd = the second"


class RunConfig:
    """Serializable record of one invocation, echoed into output headers."""

    def __init__(self, command: str, options: dict):
        self.command = command
        self.options = dict(options)

    def to_json(self) -> str:
        return json.dumps({"command": self.command, **self.options}, sort_keys=True)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".qorrelate-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, columns: list[str], rows: list[dict], fmt: str, path: str | None):
    if fmt == "csv":
        lines = [
            f"# qorrelate {__version__}",
            f"# config: {cfg.to_json()}",
            f"# convention: {CONVENTION}",
            ",".join(columns),
        ]
        for row in rows:
            lines.append(",".join(_fmt(row.get(c)) if not isinstance(row.get(c), str) else row[c] for c in columns))
        _write_text(path, "\n".join(lines) + "\n")
    else:
        doc = {
            "tool": "qorrelate",
            "version": __version__,
            "config": {"command": cfg.command, **cfg.options},
            "convention": CONVENTION,
            "rows": rows,
        }
        _write_text(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _parse_measures(text: str) -> list[MeasureKind]:
    if text.strip() == "all":
        return list(MeasureKind)
    kinds = []
    for flag in text.split(","):
        flag = flag.strip()
        if flag:
            kinds.append(MeasureKind.from_flag(flag))
    if not kinds:
        raise ValueError("no measures selected")
    return list(dict.fromkeys(kinds))


def _resolve_workers(flag_value: int | None) -> int:
    if flag_value is not None:
        if flag_value < 1:
            raise ValueError(f"--workers must be >= 1, got {flag_value}")
        return flag_value
    env = os.environ.get("QORRELATE_WORKERS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError:
            raise ValueError(f"QORRELATE_WORKERS={env!r} is not an integer") from None
        if workers < 1:
            raise ValueError(f"QORRELATE_WORKERS must be >= 1, got {workers}")
        return workers
    return os.cpu_count() or 1


def _optimizer_from_args(args) -> OptimizerOptions:
    return OptimizerOptions(
        grid_theta=args.grid_theta,
        grid_phi=args.grid_phi,
        starts=args.starts,
        step_tol=args.refine_tol,
        objective_tol=args.objective_tol,
    )


def _optimizer_options_dict(args) -> dict:
    return {
        "grid_theta": args.grid_theta,
        "grid_phi": args.grid_phi,
        "starts": args.starts,
        "refine_tol": args.refine_tol,
        "objective_tol": args.objective_tol,
    }


def cmd_table(cfg: RunConfig, args) -> int:
    kinds = _parse_measures(args.measures)
    ensemble = EnsembleSpec(
        family=Family(args.family),
        n=args.n,
        r=args.r,
        samples=args.samples,
        master_seed=args.seed,
    )
    rows = percentage_table(
        ensemble,
        kinds,
        nodal=args.nodal,
        eps=args.eps,
        options=_optimizer_from_args(args),
        workers=_resolve_workers(args.workers),
        check=args.check,
    )
    columns = [
        "family", "n", "r", "kind", "samples",
        "monogamous_count", "percentage", "eps", "seed",
    ]
    out = [
        {
            "family": row.ensemble.family.value,
            "n": row.ensemble.n,
            "r": row.ensemble.r,
            "kind": row.kind.flag,
            "samples": row.total,
            "monogamous_count": row.monogamous_count,
            "percentage": row.percentage,
            "eps": row.classification_epsilon,
            "seed": row.ensemble.master_seed,
        }
        for row in rows
    ]
    _emit(cfg, columns, out, args.format, args.output)
    return 0


def _load_amplitude_file(path: str) -> PureState:
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{line_no}: expected 're im', got {line!r}")
            try:
                rows.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise ValueError(f"{path}:{line_no}: non-numeric amplitude {line!r}") from None
    dim = len(rows)
    n = dim.bit_length() - 1
    if dim < 4 or 2**n != dim:
        raise ValueError(f"{path}: {dim} amplitudes is not 2^n for n >= 2")
    amps = np.asarray(rows, dtype=np.complex128)
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise ValueError(f"{path}: all amplitudes are zero")
    return PureState(n, amps / norm)


def cmd_state(cfg: RunConfig, args) -> int:
    if args.amplitude_file is not None:
        psi = _load_amplitude_file(args.amplitude_file)
    else:
        if args.name is None:
            raise ValueError("need --name or --amplitude-file")
        if args.n is None:
            raise ValueError("--name needs --n")
        if args.name == "ghz":
            psi = ghz_state(args.n)
        elif args.name == "w":
            psi = w_state(args.n)
        else:
            if args.r is None:
                raise ValueError("--name dicke needs --r")
            psi = dicke_state(args.n, args.r)
    options = _optimizer_from_args(args)
    records = evaluate_state(psi, list(MeasureKind), nodal=args.nodal, options=options)
    # the conditional-entropy bound is a statement about >= 2 pairs
    check = theorem4_bound_check(psi, nodal=args.nodal, options=options) if psi.n >= 3 else None
    tau = records[MeasureKind.CONCURRENCE_SQ].score

    columns = ["quantity", "kind", "nodal", "cut_value", "pair_values", "score", "bound", "tangle"]
    rows = []
    for kind in MeasureKind:
        rec = records[kind]
        rows.append(
            {
                "quantity": "measure",
                "kind": kind.flag,
                "nodal": rec.nodal,
                "cut_value": rec.cut_value,
                "pair_values": ";".join(repr(v) for v in rec.pair_values),
                "score": rec.score,
                "bound": None,
                "tangle": None,
            }
        )
    rows.append(
        {
            "quantity": "tangle",
            "kind": MeasureKind.CONCURRENCE_SQ.flag,
            "nodal": args.nodal,
            "cut_value": None,
            "pair_values": "",
            "score": tau,
            "bound": None,
            "tangle": None,
        }
    )
    if check is not None:
        rows.append(
            {
                "quantity": "theorem4",
                "kind": MeasureKind.DISCORD_BWD.flag,
                "nodal": args.nodal,
                "cut_value": None,
                "pair_values": "",
                "score": check.score,
                "bound": check.bound,
                "tangle": check.tangle,
            }
        )
    _emit(cfg, columns, rows, args.format, args.output)
    return 0


def cmd_dicke_scan(cfg: RunConfig, args) -> int:
    if args.n_min < 3:
        raise ValueError(f"--n-min must be >= 3, got {args.n_min}")
    if args.n_max < args.n_min:
        raise ValueError(f"--n-max {args.n_max} below --n-min {args.n_min}")
    if args.n_max > 1000:
        raise ValueError(f"--n-max {args.n_max} above 1000")
    options = _optimizer_from_args(args)
    columns = ["n", "r", "discord_score", "workdeficit_score_fwd", "workdeficit_score_bwd", "tangle"]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        r_lo = max(1, args.r_min)
        r_hi = n - 1 if args.r_max is None else min(n - 1, args.r_max)
        for r in range(r_lo, r_hi + 1):
            rows.append(
                {
                    "n": n,
                    "r": r,
                    "discord_score": dicke_discord_score(n, r),
                    "workdeficit_score_fwd": dicke_workdeficit_score(
                        n, r, Direction.ON_FIRST, options
                    ),
                    "workdeficit_score_bwd": dicke_workdeficit_score(
                        n, r, Direction.ON_SECOND, options
                    ),
                    "tangle": dicke_tangle(n, r),
                }
            )
    _emit(cfg, columns, rows, args.format, args.output)
    return 0


def _load_fit_points(path: str) -> list[tuple[float, float]]:
    points = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) < 2:
                raise ValueError(f"{path}:{line_no}: expected 'n,percentage', got {line!r}")
            try:
                points.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if points:
                    raise ValueError(f"{path}:{line_no}: non-numeric row {line!r}") from None
                continue  # header row
    if not points:
        raise ValueError(f"{path}: no data points found")
    return points


def cmd_fit(cfg: RunConfig, args) -> int:
    fit = scaling_fit(_load_fit_points(args.input), args.p_c)
    columns = ["alpha", "intercept", "residual", "p_c", "points"]
    rows = [
        {
            "alpha": fit.alpha,
            "intercept": fit.intercept,
            "residual": fit.residual,
            "p_c": fit.p_c,
            "points": len(fit.points),
        }
    ]
    _emit(cfg, columns, rows, args.format, args.output)
    return 0


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="output path (default: stdout)")


def _add_optimizer_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-theta", type=int, default=60)
    p.add_argument("--grid-phi", type=int, default=120)
    p.add_argument("--starts", type=int, default=3)
    p.add_argument("--refine-tol", type=float, default=1e-5)
    p.add_argument("--objective-tol", type=float, default=1e-7)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qorrelate",
        description="Monogamy of bipartite quantum correlations in n-qubit pure states",
    )
    parser.add_argument("--version", action="version", version=f"qorrelate {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="monogamous percentage of a random ensemble")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="excitation count (Dicke families)")
    p.add_argument("--measures", default="all", help="comma-separated flags, or 'all'")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodal", type=int, default=1)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=None,
                   help="process count (default: QORRELATE_WORKERS or cpu count)")
    p.add_argument("--check", action="store_true",
                   help="run per-sample consistency assertions; nonzero exit on violation")
    _add_optimizer_args(p)
    _add_output_args(p)

    p = sub.add_parser("state", help="all measures of one pure state")
    p.add_argument("--name", choices=("w", "ghz", "dicke"), default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--amplitude-file", default=None,
                   help="text file, one 're im' pair per basis amplitude")
    p.add_argument("--nodal", type=int, default=1)
    _add_optimizer_args(p)
    _add_output_args(p)

    p = sub.add_parser("dicke-scan", help="closed-form Dicke scores over a range")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--r-min", type=int, default=1)
    p.add_argument("--r-max", type=int, default=None)
    _add_optimizer_args(p)
    _add_output_args(p)

    p = sub.add_parser("fit", help="power-law fit of percentage vs n")
    p.add_argument("--input", required=True, help="CSV of n,percentage rows")
    p.add_argument("--p-c", type=float, default=0.0, dest="p_c",
                   help="critical percentage, same units as the input column")
    _add_output_args(p)
    return parser


_COMMANDS = {
    "table": cmd_table,
    "state": cmd_state,
    "dicke-scan": cmd_dicke_scan,
    "fit": cmd_fit,
}

# result-defining options only: execution details (worker count, output
# path, --check) stay out of the header so they cannot break byte-identity
_CONFIG_KEYS = {
    "table": ("family", "n", "r", "measures", "samples", "seed", "nodal", "eps",
              "grid_theta", "grid_phi", "starts", "refine_tol", "objective_tol"),
    "state": ("name", "n", "r", "amplitude_file", "nodal",
              "grid_theta", "grid_phi", "starts", "refine_tol", "objective_tol"),
    "dicke-scan": ("n_min", "n_max", "r_min", "r_max",
                   "grid_theta", "grid_phi", "starts", "refine_tol", "objective_tol"),
    "fit": ("input", "p_c"),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    values = vars(args)
    cfg = RunConfig(args.command, {k: values[k] for k in _CONFIG_KEYS[args.command]})
    try:
        return _COMMANDS[args.command](cfg, args)
    except (ValueError, OSError, InvariantViolation) as exc:
        print(f"qorrelate: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
