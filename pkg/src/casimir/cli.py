"""Command-line front end: ``casimir <model> [--param value ...] [--sweep ...]``.

Every model reports a dimensionless number (``e0 = E ell^d / L^(d-1)``, or
``S`` for the photon rate) next to the physical value for the given
``--ell`` and ``--L``.  Output is one JSON object or a CSV table.

Exit codes: 0 success, 2 invalid input, 3 some point did not converge
(records are still written), 4 output could not be written.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .kappa import KappaConfig, kappa_casimir_energy, photon_rate
from .kernel import (
    SlabConfig,
    casimir_energy_slab,
    default_fermion_degeneracy,
    dirichlet_scalar_kernel,
    mit_fermion_kernel,
)
from .magnetic import MagneticConfig, boson_energy_magnetic, fermion_energy_magnetic
from .quadrature import QuadratureSpec, SeriesSpec

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED, EXIT_IO = 0, 2, 3, 4
PHOTON_UNDERFLOW = 1e-100

# model -> (parameters it accepts, parameters it requires)
MODELS = {
    "dirichlet-scalar": (("d", "mu", "ell", "L", "degeneracy"), ()),
    "mit-fermion": (("d", "mu", "ell", "L", "degeneracy"), ()),
    "boson-magnetic": (("b", "mu", "ell", "L"), ("b",)),
    "fermion-magnetic": (("b", "mu", "ell", "L"), ("b",)),
    "kappa-energy": (("delta", "mu", "ell", "L"), ("delta",)),
    "kappa-photon-rate": (("delta", "ell", "L"), ("delta",)),
}
DEFAULTS = {"d": 3, "mu": 0.0, "ell": 1.0, "L": 1.0}
CSV_COLUMNS = ("value", "dimensionless_value", "error_estimate", "converged", "evaluations")


class UsageError(ValueError):
    """Invalid request; reported with exit code 2."""


@dataclass(frozen=True)
class Sweep:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> list:
        if self.spacing == "log":
            pts = np.geomspace(self.start, self.stop, self.count)
        else:
            pts = np.linspace(self.start, self.stop, self.count)
        pts[0], pts[-1] = self.start, self.stop
        if self.name == "d":
            return [int(round(v)) for v in pts]
        return [float(v) for v in pts]

    def as_dict(self) -> dict:
        return {"param": self.name, "start": self.start, "stop": self.stop,
                "count": self.count, "spacing": self.spacing}


def parse_sweep(text: str, model: str) -> Sweep:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise UsageError(f"sweep must be name:start:stop:count[:linear|log], got {text!r}")
    name = parts[0]
    if name not in MODELS[model][0]:
        raise UsageError(f"sweep: parameter {name!r} is not used by model {model}")
    try:
        start, stop = float(parts[1]), float(parts[2])
        count = int(parts[3])
    except ValueError:
        raise UsageError(f"sweep: start, stop must be numbers and count an integer, got {text!r}") from None
    spacing = parts[4] if len(parts) == 5 else "linear"
    if spacing not in ("linear", "log"):
        raise UsageError(f"sweep: spacing must be linear or log, got {spacing!r}")
    if count < 2:
        raise UsageError(f"sweep: count must be at least 2, got {count}")
    if not (math.isfinite(start) and math.isfinite(stop)) or not start < stop:
        raise UsageError(f"sweep: need finite start < stop, got {start!r}, {stop!r}")
    if spacing == "log" and not start > 0:
        raise UsageError(f"sweep: log spacing requires start > 0, got {start!r}")
    sweep = Sweep(name, start, stop, count, spacing)
    if name == "d" and any(abs(v - round(v)) > 1e-9 for v in np.linspace(start, stop, count)):
        raise UsageError("sweep: d must take integer values")
    return sweep


def resolve_params(model: str, given: dict) -> dict:
    accepted, required = MODELS[model]
    for name, value in given.items():
        if value is not None and name not in accepted:
            raise UsageError(f"parameter {name!r} does not apply to model {model}")
    params = {}
    for name in accepted:
        value = given.get(name)
        if value is None:
            if name in required:
                raise UsageError(f"parameter {name!r} is required for model {model}")
            if name == "degeneracy":
                continue
            value = DEFAULTS[name]
        params[name] = value
    return params


def _check_params(model: str, p: dict):
    """Validate one point before anything is computed; messages name the parameter."""
    d = p.get("d")
    if d is not None and (isinstance(d, bool) or int(d) != d or d < 1):
        raise UsageError(f"parameter 'd' must be a positive integer, got {d!r}")
    for name in ("ell", "L", "b", "delta", "degeneracy"):
        if name in p and not (math.isfinite(p[name]) and p[name] > 0):
            raise UsageError(f"parameter {name!r} must be positive and finite, got {p[name]!r}")
    if "mu" in p and not (math.isfinite(p["mu"]) and p["mu"] >= 0):
        raise UsageError(f"parameter 'mu' must be non-negative and finite, got {p['mu']!r}")


def _record(model, params, value, dimensionless, error, converged, evaluations, started, notes=()):
    return {
        "model": model,
        "params": params,
        "value": value,
        "dimensionless_value": dimensionless,
        "error_estimate": error,
        "converged": bool(converged),
        "evaluations": int(evaluations),
        "wall_time_ms": (time.perf_counter() - started) * 1e3,
        "notes": list(notes),
    }


def compute_point(task) -> dict:
    """Evaluate one parameter point; ``task = (model, params, QuadratureSpec, SeriesSpec)``."""
    model, p, spec, series = task
    started = time.perf_counter()
    if model in ("dirichlet-scalar", "mit-fermion"):
        d = int(p["d"])
        cfg = SlabConfig(d=d, ell=p["ell"], big_l=p["L"], mu=p["mu"])
        if model == "dirichlet-scalar":
            kernel = dirichlet_scalar_kernel(p.get("degeneracy", 1.0))
        else:
            kernel = mit_fermion_kernel(p["mu"], p.get("degeneracy", default_fermion_degeneracy(d)))
        res = casimir_energy_slab(kernel, cfg, spec)
    elif model in ("boson-magnetic", "fermion-magnetic"):
        cfg = MagneticConfig(b=p["b"], mu=p["mu"], ell=p["ell"], big_l=p["L"])
        if model == "boson-magnetic":
            res = boson_energy_magnetic(cfg, series)
        else:
            res = fermion_energy_magnetic(cfg, series, spec)
    elif model == "kappa-energy":
        cfg = KappaConfig.from_delta(p["delta"], ell=p["ell"], m=p["mu"] / p["ell"], big_l=p["L"])
        res = kappa_casimir_energy(cfg, spec)
    else:
        cfg = KappaConfig.from_delta(p["delta"], ell=p["ell"], big_l=p["L"])
        value, num = photon_rate(cfg, series, spec, full_output=True)
        dimensionless = value / cfg.geometry
        notes = []
        if value < PHOTON_UNDERFLOW:
            notes.append(f"underflow: S below {PHOTON_UNDERFLOW:g} reported as 0")
            value = dimensionless = 0.0
        rec = _record(model, p, value, dimensionless, num.error_estimate, num.converged,
                      num.evaluations, started, notes)
        rec["vacuum_persistence"] = math.exp(-value)
        return rec
    return _record(model, p, res.energy, res.dimensionless_energy, res.error_estimate,
                   res.converged, res.diagnostics.get("evaluations", 0), started)


def _workers() -> int:
    raw = os.environ.get("CASIMIR_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"CASIMIR_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError(f"CASIMIR_THREADS must be non-negative, got {n}")
    return max(n, 1)


def run(model: str, params: dict, sweep: Sweep | None = None, *,
        spec: QuadratureSpec | None = None, series: SeriesSpec | None = None,
        workers: int = 1) -> list:
    """Validate every point, then evaluate them; records come back in sweep order."""
    points = []
    if sweep is None:
        points.append(dict(params))
    else:
        for v in sweep.values():
            points.append({**params, sweep.name: v})
    for p in points:
        _check_params(model, p)
    spec = spec or QuadratureSpec()
    series = series or SeriesSpec()
    tasks = [(model, p, spec, series) for p in points]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(compute_point, tasks))
    return [compute_point(t) for t in tasks]


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def format_json(request: dict, records: list) -> str:
    # repr of a float is the shortest string that round-trips exactly
    doc = {"schema_version": SCHEMA_VERSION, "request": request, "records": records}
    return json.dumps(_json_safe(doc), indent=2, allow_nan=False) + "\n"


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else ""
    return str(v)


def format_csv(records: list, sweep: Sweep | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    lead = [sweep.name] if sweep is not None else []
    writer.writerow(lead + list(CSV_COLUMNS))
    for rec in records:
        row = [rec["params"][sweep.name]] if sweep is not None else []
        writer.writerow([_csv_cell(v) for v in row + [rec[c] for c in CSV_COLUMNS]])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir",
        description="Regularised vacuum energies of fields between parallel plates.",
    )
    parser.add_argument("model", choices=sorted(MODELS), help="which model to evaluate")
    parser.add_argument("--d", type=int, help="spatial dimension (slab models, default 3)")
    parser.add_argument("--mu", type=float, help="reduced mass m*ell (default 0)")
    parser.add_argument("--ell", type=float, help="plate separation (default 1)")
    parser.add_argument("--L", dest="L", type=float, help="plate side length (default 1)")
    parser.add_argument("--b", type=float, help="reduced magnetic field eB*ell^2 (magnetic models)")
    parser.add_argument("--delta", type=float, help="reduced deformation eta/ell (kappa models)")
    parser.add_argument("--degeneracy", type=float,
                        help="internal degeneracy (slab models; fermion default 2^floor((d+1)/2)/2)")
    parser.add_argument("--sweep", help="name:start:stop:count[:linear|log]")
    parser.add_argument("--tol", type=float, default=1e-10, help="quadrature relative tolerance")
    parser.add_argument("--abs-tol", type=float, default=1e-14, help="quadrature absolute tolerance")
    parser.add_argument("--series-tol", type=float, default=1e-12, help="series relative tolerance")
    parser.add_argument("--max-terms", type=int, default=10_000, help="series term budget")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="output file (default stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    given = {k: getattr(args, k) for k in ("d", "mu", "ell", "L", "b", "delta", "degeneracy")}
    try:
        if not 0 < args.tol < 1e-2:
            raise UsageError(f"parameter 'tol' must lie in (0, 1e-2), got {args.tol!r}")
        if not 0 <= args.abs_tol < 1e-2:
            raise UsageError(f"parameter 'abs-tol' must lie in [0, 1e-2), got {args.abs_tol!r}")
        if not 0 < args.series_tol < 1e-2:
            raise UsageError(f"parameter 'series-tol' must lie in (0, 1e-2), got {args.series_tol!r}")
        if args.max_terms < 1:
            raise UsageError(f"parameter 'max-terms' must be at least 1, got {args.max_terms!r}")
        spec = QuadratureSpec(rel_tol=args.tol, abs_tol=args.abs_tol)
        series = SeriesSpec(rel_tol=args.series_tol, max_terms=args.max_terms)
        params = resolve_params(args.model, given)
        sweep = parse_sweep(args.sweep, args.model) if args.sweep else None
        records = run(args.model, params, sweep, spec=spec, series=series, workers=_workers())
    except (UsageError, ValueError) as exc:
        print(f"casimir: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    request = {
        "model": args.model,
        "params": params,
        "sweep": sweep.as_dict() if sweep is not None else None,
        "tolerances": {"quadrature_rel_tol": args.tol, "quadrature_abs_tol": args.abs_tol,
                       "series_rel_tol": args.series_tol, "series_max_terms": args.max_terms},
        "format": args.format,
    }
    text = format_json(request, records) if args.format == "json" else format_csv(records, sweep)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"casimir: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    failed = [i for i, r in enumerate(records) if not r["converged"]]
    if failed:
        print(f"casimir: warning: {len(failed)} point(s) did not converge: {failed}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
