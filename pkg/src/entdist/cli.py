"""Command-line interface.

Exit codes: 0 success, 1 invariant or domain violation, 2 file error,
3 failed verification, 4 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import oracles
from .ed_mixed import OptimizerOptions, ed
from .pure_ed import pure_ed
from .qcd import qcd
from .qstate import PureState, StateError, as_density, bloch_vector, purity
from .stateio import StateFileError, load_state
from .verify import report, run_checks

EXIT_OK, EXIT_INVALID, EXIT_FILE, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 3, 4
WORKERS_ENV = "ENTDIST_WORKERS"

FAMILIES = ("werner", "bd-face", "bd-custom")
MEASURES = ("qcd", "ed", "concurrence", "ppt")
DEFAULT_MEASURES = {"werner": "qcd,ed,concurrence", "bd-face": "qcd,ed,ppt", "bd-custom": "qcd,ed,ppt"}
DEFAULT_GRID = {"werner": "0:1:0.05", "bd-face": "21", "bd-custom": "-1:1:11"}

# option name -> default; these may come from flags or from a --config file
DEFAULTS = {
    "restarts": 16,
    "seed": 0,
    "mode": "eigen-only",
    "m_max": None,
    "zero_threshold": 1e-3,
    "workers": None,
    "paper_normalization": False,
    "grid": None,
    "measures": None,
    "family": None,
    "warm_start": True,
}


class UsageError(ValueError):
    pass


class DomainError(ValueError):
    """A sweep specification leaves the family's valid domain."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- Sweep specification ------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    family: str
    points: tuple[tuple[float, ...], ...]
    measures: tuple[str, ...]
    opts: OptimizerOptions = field(default_factory=OptimizerOptions)
    paper_normalization: bool = False
    warm_start: bool = True


def _range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} must be start:stop:step")
    return tuple(float(x) for x in parts)


def werner_grid(text: str) -> tuple[float, ...]:
    start, stop, step = _range(text)
    if step <= 0:
        raise UsageError("grid step must be positive")
    n = int(round((stop - start) / step)) + 1
    pts = tuple(float(np.round(start + i * step, 12)) for i in range(n))
    if len(pts) < 2:
        raise DomainError("grid needs at least 2 points")
    if min(pts) < 0 or max(pts) > 1:
        raise DomainError(f"Werner parameter range [{min(pts)}, {max(pts)}] leaves [0, 1]")
    return pts


def bd_face_grid(text: str) -> tuple[tuple[float, float], ...]:
    """Points (c1, c3) of the section c2 = c1 of the BD tetrahedron."""
    try:
        n = int(text)
    except ValueError as exc:
        raise UsageError(f"bd-face grid must be a point count per axis, got {text!r}") from exc
    if n < 2:
        raise DomainError("grid needs at least 2 points per axis")
    axis = np.linspace(-1.0, 1.0, n)
    pts = []
    for c3 in axis:
        for c1 in axis:
            if oracles.in_tetrahedron((c1, c1, c3), tol=1e-12):
                pts.append((float(c1), float(c3)))
    return tuple(pts)


def bd_custom_grid(text: str) -> tuple[tuple[float, float, float], ...]:
    """``lo:hi:n`` for all three axes, or three comma-separated ranges.
    Grid points outside the tetrahedron are skipped."""
    parts = text.split(",")
    if len(parts) == 1:
        parts = parts * 3
    if len(parts) != 3:
        raise UsageError("bd-custom grid needs one or three lo:hi:n ranges")
    axes = []
    for part in parts:
        lo, hi, n = _range(part)
        if int(n) != n or n < 2:
            raise DomainError(f"point count in {part!r} must be an integer >= 2")
        if lo < -1 or hi > 1 or lo > hi:
            raise DomainError(f"range {part!r} must lie inside [-1, 1]")
        axes.append(np.linspace(lo, hi, int(n)))
    pts = []
    for c1 in axes[0]:
        for c2 in axes[1]:
            for c3 in axes[2]:
                if oracles.in_tetrahedron((c1, c2, c3), tol=1e-12):
                    pts.append((float(c1), float(c2), float(c3)))
    return tuple(pts)


def build_spec(family: str, grid: str | None, measures: str | None, opts, paper_normalization=False, warm_start=True):
    if family not in FAMILIES:
        raise UsageError(f"family must be one of {FAMILIES}, got {family!r}")
    grid = grid or DEFAULT_GRID[family]
    chosen = tuple(m.strip() for m in (measures or DEFAULT_MEASURES[family]).split(",") if m.strip())
    bad = [m for m in chosen if m not in MEASURES]
    if bad or not chosen:
        raise UsageError(f"unknown measures {bad}; choose from {MEASURES}")
    if family == "werner":
        points = tuple((p,) for p in werner_grid(grid))
    elif family == "bd-face":
        points = bd_face_grid(grid)
    else:
        points = bd_custom_grid(grid)
    if not points:
        raise DomainError("grid contains no valid states")
    return SweepSpec(family, points, chosen, opts, paper_normalization, warm_start)


# --- Sweep evaluation --------------------------------------------------------


def _columns(spec: SweepSpec) -> list[str]:
    ms = spec.measures
    if spec.family == "werner":
        cols = ["p"]
        cols += ["qcd"] if "qcd" in ms else []
        cols += ["ed"] if "ed" in ms else []
        cols += ["qcd_closed"] if "qcd" in ms else []
        cols += ["ed_closed"] if "ed" in ms else []
    elif spec.family == "bd-face":
        cols = ["c1", "c3"] + [m for m in ("qcd", "ed") if m in ms]
    else:
        cols = ["c1", "c2", "c3"] + [m for m in ("qcd", "ed") if m in ms]
    cols += ["concurrence"] if "concurrence" in ms else []
    cols += ["ppt_separable"] if "ppt" in ms else []
    return cols


def _state_for(spec: SweepSpec, point):
    if spec.family == "werner":
        return oracles.werner_state(point[0])
    if spec.family == "bd-face":
        c1, c3 = point
        c = (c1, c1, c3)
    else:
        c = point
    # clip rounding excursions just outside the simplex
    w = np.clip(oracles.weights_from_c(c), 0.0, None)
    return oracles.bd_state(w / w.sum())


def _evaluate_point(spec: SweepSpec, point, warm=None):
    rho = _state_for(spec, point)
    half = 0.5 if spec.paper_normalization else 1.0
    row = {}
    if spec.family == "werner":
        row["p"] = point[0]
    elif spec.family == "bd-face":
        row["c1"], row["c3"] = point
    else:
        row["c1"], row["c2"], row["c3"] = point
    result = None
    if "qcd" in spec.measures:
        row["qcd"] = qcd(rho).total * half
        if spec.family == "werner":
            row["qcd_closed"] = oracles.werner_qcd(point[0]) * half
    if "ed" in spec.measures:
        result = ed(rho, spec.opts, warm_start=warm)
        row["ed"] = result.total * half
        if spec.family == "werner":
            row["ed_closed"] = oracles.werner_ed(point[0]) * half
    if "concurrence" in spec.measures:
        row["concurrence"] = oracles.concurrence(rho)
    if "ppt" in spec.measures:
        row["ppt_separable"] = oracles.is_ppt(rho, 0)
    return row, result


def _point_job(args):
    spec, point = args
    return _evaluate_point(spec, point)[0]


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """Evaluate every grid point; rows come back in grid order.

    A Werner sweep with ED and warm starts runs as one sequential chain
    (each point seeds the next); everything else is farmed out to
    ``workers`` processes.
    """
    chained = spec.family == "werner" and "ed" in spec.measures and spec.warm_start
    if chained:
        rows, warm = [], None
        for point in spec.points:
            row, result = _evaluate_point(spec, point, warm)
            rows.append(row)
            warm = result.witness
        return rows
    if workers <= 1:
        return [_point_job((spec, p)) for p in spec.points]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_point_job, [(spec, p) for p in spec.points]))


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return f"{float(value) + 0.0:.12g}"


def rows_to_csv(spec: SweepSpec, rows: list[dict]) -> str:
    cols = _columns(spec)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


# --- Measure -----------------------------------------------------------------


def measure_report(state, opts: OptimizerOptions | None = None, with_ed: bool = False) -> dict:
    rho = as_density(state)
    q = qcd(rho)
    out = {
        "num_qubits": rho.num_qubits,
        "purity": purity(rho),
        "bloch_vectors": [bloch_vector(rho, mu).tolist() for mu in range(rho.num_qubits)],
        "qcd": {
            "total": q.total,
            "per_qubit": [
                {"value": c.value, "lambda_max": c.lambda_max, "direction": c.direction.tolist()}
                for c in q.per_qubit
            ],
        },
    }
    if isinstance(state, PureState):
        out["pure_ed"] = pure_ed(state)
    if rho.num_qubits == 2:
        out["concurrence"] = oracles.concurrence(rho)
        out["ppt"] = oracles.is_ppt(rho, 0)
    if with_ed:
        res = ed(rho, opts or OptimizerOptions())
        rep = res.report
        out["ed"] = {
            "total": res.total,
            "per_qubit": list(res.per_qubit),
            "optimizer_report": {
                "mode": rep.mode,
                "raw_total": rep.raw_total,
                "raw_per_qubit": list(rep.raw_per_qubit),
                "restarts_used": list(rep.restarts_used),
                "best_per_restart": [list(b) for b in rep.best_per_restart],
                "converged": list(rep.converged),
                "decompositions_tried": rep.decompositions_tried,
                "clamped": rep.clamped,
            },
        }
    return out


# --- Argument handling -------------------------------------------------------


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StateFileError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"config {path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise StateFileError(f"config {path} must hold a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(cfg) - set(DEFAULTS) - {"measure_ed"})
    if unknown:
        raise UsageError(f"unknown config keys {unknown}")
    return cfg


def _settings(args) -> dict:
    """Flags beat config, config beats built-in defaults."""
    cfg = _load_config(getattr(args, "config", None))
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else cfg.get(key, default)
    if out["workers"] is None:
        env = os.environ.get(WORKERS_ENV)
        try:
            out["workers"] = int(env) if env else 1
        except ValueError as exc:
            raise UsageError(f"{WORKERS_ENV}={env!r} is not an integer") from exc
    out["measure_ed"] = cfg.get("measure_ed", False)
    return out


def _options(s: dict) -> OptimizerOptions:
    try:
        return OptimizerOptions(
            restarts=int(s["restarts"]),
            seed=int(s["seed"]),
            mode=s["mode"],
            m_max=None if s["m_max"] is None else int(s["m_max"]),
            zero_threshold=float(s["zero_threshold"]),
        )
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _add_optimizer_flags(p):
    p.add_argument("--restarts", type=int, help="random restarts per inner minimization (default 16)")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--mode", choices=("eigen-only", "full"), help="ensemble search (default eigen-only)")
    p.add_argument("--m-max", dest="m_max", type=int, help="largest ensemble size in full mode")
    p.add_argument("--zero-threshold", dest="zero_threshold", type=float, help="clamp ED below this to 0")
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entdist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pm = sub.add_parser("measure", help="QCD, purity, Bloch vectors and optionally ED of a state file")
    pm.add_argument("--state", required=True, help="JSON state file")
    pm.add_argument("--ed", action="store_true", default=None, help="also compute the entanglement distance")
    _add_optimizer_flags(pm)

    ps = sub.add_parser("sweep", help="CSV sweep over a state family")
    ps.add_argument("--family", choices=FAMILIES)
    ps.add_argument("--grid", help="werner: start:stop:step; bd-face: points per axis; bd-custom: lo:hi:n[,..]")
    ps.add_argument("--measures", help=f"comma-separated subset of {','.join(MEASURES)}")
    ps.add_argument("--paper-normalization", dest="paper_normalization", action="store_true", default=None,
                    help="report qcd and ed divided by 2")
    ps.add_argument("--no-warm-start", dest="warm_start", action="store_false", default=None,
                    help="solve each Werner point from scratch")
    ps.add_argument("--workers", type=int, help=f"worker processes (default ${WORKERS_ENV} or 1)")
    _add_optimizer_flags(ps)

    pv = sub.add_parser("verify", help="run the cross-oracle property checks")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--count", type=int, default=20, help="samples per randomized check")
    pv.add_argument("--out", help="write the JSON report here")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise StateFileError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_measure(args) -> int:
    s = _settings(args)
    state = load_state(args.state)
    with_ed = bool(args.ed) or bool(s["measure_ed"])
    result = measure_report(state, _options(s), with_ed)
    _emit(json.dumps(result, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    s = _settings(args)
    if s["family"] is None:
        raise UsageError("--family is required (flag or config)")
    spec = build_spec(
        s["family"], s["grid"], s["measures"], _options(s), bool(s["paper_normalization"]), bool(s["warm_start"])
    )
    workers = int(s["workers"])
    if workers < 1:
        raise UsageError("--workers must be >= 1")
    rows = run_sweep(spec, workers)
    _emit(rows_to_csv(spec, rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    results = run_checks(args.seed, args.count)
    rep = report(results, args.seed, args.count)
    _emit(json.dumps(rep, indent=2) + "\n", args.out)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} max_error={r.max_error:.3e} tol={r.tolerance:g}",
              file=sys.stderr)
    return EXIT_OK if rep["passed"] else EXIT_VERIFY


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"measure": cmd_measure, "sweep": cmd_sweep, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except StateError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except StateFileError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FILE
    except UsageError as exc:
        print(f"error: UsageError: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # domain violations raised by the library (e.g. Werner p outside [0, 1])
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
