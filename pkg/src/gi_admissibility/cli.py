"""Command-line entry point.

Every command prints one JSON document ``{command, input, result, diagnostics,
version}`` to stdout. Exit codes: 0 ok, 1 input error, 2 ambiguous or
inconclusive, 3 grid resolution, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .branch_cuts import LAYOUTS, make_evaluator
from .closed_forms import gi_soliton, plane_wave
from .contour import extract_contour
from .errors import (AmbiguousCase, DomainError, GIAdmissibilityError, InconclusiveError,
                     ResolutionError, UnsupportedCase)
from .export import contour_csv, cuts_csv, regions_csv, write_svg
from .figures import figure_checks
from .identities import identity_errors, random_off_cut_points
from .params import CaseLabel, ParameterTriple, classify, plane_wave_triple, soliton_parameters
from .pde_verify import background_tpart_residual, convergence_factors, gi_residual, zero_curvature_residual
from .regions import build_region_map, lemma_obstruction_test
from .scattering import sample_closed_d1, scattering_data

EXIT_OK, EXIT_INPUT, EXIT_AMBIGUOUS, EXIT_RESOLUTION, EXIT_VERIFY = 0, 1, 2, 3, 4
THREADS_ENV = "GI_ADMISSIBILITY_THREADS"
SUITES = ("identities", "pde", "lax", "global-relation", "all")

# acceptance thresholds used by ``verify``
IDENTITY_TOL = 1e-10
GI_TOL = {"soliton": 1e-6, "plane-wave": 1e-8}
CONVERGENCE_RANGE = (12.0, 20.0)
ZERO_CURVATURE_TOL = 1e-5
TPART_TOL = 1e-6
GLOBAL_RELATION_TOL = 1e-6


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise InputError(f"{THREADS_ENV} must be positive")
    return n


def parse_complex(text: str) -> complex:
    """``"re,im"`` to a complex number."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from exc


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gi-admissibility", description="Admissible boundary triples for the GI equation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, triple_required=True):
        sp.add_argument("--alpha", type=float, required=triple_required)
        sp.add_argument("--omega", type=float, required=triple_required)
        sp.add_argument("--c", type=parse_complex, required=triple_required, metavar="RE,IM")
        sp.add_argument("--tol", type=_positive(float), default=1e-9)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", type=Path, default=None)
        sp.add_argument("--format", choices=("json", "csv", "svg"), default="json")

    def geometry(sp):
        sp.add_argument("--bounds", type=_positive(float), default=None, metavar="R")
        sp.add_argument("--resolution", type=_positive(int), default=512)
        sp.add_argument("--layout", choices=LAYOUTS, default="traced")

    sp = sub.add_parser("classify", help="case label and admissibility verdict")
    common(sp)
    geometry(sp)
    sp.add_argument("--geometry", action="store_true", help="also run the grid obstruction test")

    sp = sub.add_parser("contour", help="export contour, regions and cuts")
    common(sp)
    geometry(sp)

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp, triple_required=False)
    sp.add_argument("--suite", choices=SUITES, default="all")
    sp.add_argument("--solution", choices=("soliton", "plane-wave"), default="soliton")
    sp.add_argument("--b", type=float, default=-1.0, help="plane-wave wavenumber")
    sp.add_argument("--samples", type=_positive(int), default=None)

    sp = sub.add_parser("scatter", help="spectral functions and global relation for the soliton")
    common(sp, triple_required=False)
    sp.add_argument("--k", type=parse_complex, action="append", default=None, metavar="RE,IM")
    sp.add_argument("--samples", type=_positive(int), default=10)
    sp.add_argument("--radius", type=_positive(float), default=3.0)

    sp = sub.add_parser("report", help="classification, geometry and figure checks in one document")
    common(sp)
    geometry(sp)
    return p


def _triple(args) -> ParameterTriple:
    try:
        return ParameterTriple(args.alpha, args.omega, args.c)
    except (DomainError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _input_dict(args) -> dict:
    out = {}
    for key, val in vars(args).items():
        if isinstance(val, complex):
            val = [val.real, val.imag]
        elif isinstance(val, Path):
            val = str(val)
        elif isinstance(val, list):
            val = [[v.real, v.imag] if isinstance(v, complex) else v for v in val]
        out[key] = val
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str)):
        return obj.value
    return obj


# ----------------------------------------------------------------- commands
def run_classify(args, diag) -> tuple[dict, int]:
    triple = _triple(args)
    verdict = classify(triple, args.tol)
    result = verdict.as_dict()
    if args.geometry and verdict.case_label is CaseLabel.OUTSIDE_SCOPE:
        result["lemma_obstruction"] = {"skipped": "no branch-cut geometry outside both families"}
    elif args.geometry:
        ev = make_evaluator(triple, args.layout, args.tol, verdict.case_label)
        t0 = time.perf_counter()
        obstructed, witness = lemma_obstruction_test(triple, ev, bounds=args.bounds,
                                                     resolution=args.resolution)
        diag["lemma_seconds"] = time.perf_counter() - t0
        result["lemma_obstruction"] = {"obstructed": obstructed, "witness": witness}
    return result, EXIT_OK


def _geometry(args, triple):
    verdict = classify(triple, args.tol)
    ev = make_evaluator(triple, args.layout, args.tol, verdict.case_label)
    contour = extract_contour(ev, args.bounds, args.resolution)
    rm = build_region_map(ev, args.bounds, args.resolution)
    return verdict, ev, contour, rm


def run_contour(args, diag) -> tuple[dict, int]:
    triple = _triple(args)
    verdict, ev, contour, rm = _geometry(args, triple)
    files = []
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        if args.format == "csv":
            for name, fn, obj in (("contour.csv", contour_csv, contour), ("cuts.csv", cuts_csv, ev.cuts),
                                  ("regions.csv", regions_csv, rm)):
                fn(obj, args.out / name)
                files.append(str(args.out / name))
        elif args.format == "svg":
            path = args.out / "contour.svg"
            write_svg(path, contour.bounds, contour, ev.cuts, rm, title=verdict.case_label.value)
            files.append(str(path))
        else:
            path = args.out / "contour.json"
            path.write_text(json.dumps(_jsonable({"contour": contour.as_dict(),
                                                  "cuts": ev.cuts.as_dict()})))
            files.append(str(path))
    tags = contour.classification
    result = {"case_label": verdict.case_label.value, "files": files,
              "branch_points": list(ev.cuts.branch_points),
              "polylines": len(contour.polylines),
              "tags": {t: tags.count(t) for t in sorted(set(tags))},
              "regions": rm.counts()}
    if args.format == "json" and args.out is None:
        result["contour"] = contour.as_dict()
    return result, EXIT_OK


def _suite_identities(args, rng) -> dict:
    triple = _triple(args) if args.alpha is not None else soliton_parameters(args.omega or 1.0)
    ev = make_evaluator(triple, tol=args.tol)
    ks = random_off_cut_points(ev, rng, args.samples or 1000)
    errs = identity_errors(ev, ks)
    return {"passed": max(errs.values()) < IDENTITY_TOL, "max_relative_error": errs,
            "threshold": IDENTITY_TOL, "points": len(ks)}


def _profile(args):
    if args.solution == "plane-wave":
        alpha = args.alpha or 1.0
        return plane_wave(alpha, args.b), plane_wave_triple(alpha, args.b)
    omega = args.omega or 1.0
    return gi_soliton(omega), soliton_parameters(omega)


def _suite_pde(args, rng) -> dict:
    q, _ = _profile(args)
    region = (0.1, 5.0, 0.0, 5.0)
    rep = gi_residual(q, region, 1e-3)
    tol = GI_TOL[args.solution]
    out = {"max_abs": rep.max_abs, "mean_abs": rep.mean_abs, "threshold": tol, "step": rep.step}
    ok = rep.max_abs < tol
    if args.solution == "soliton":
        f = convergence_factors(q, region)
        out["convergence_factors"] = f
        ok = ok and all(CONVERGENCE_RANGE[0] <= v <= CONVERGENCE_RANGE[1] for v in f)
    out["passed"] = ok
    return out


def _suite_lax(args, rng) -> dict:
    q, triple = _profile(args)
    worst, worst_ratio = 0.0, math.inf
    n = args.samples or 20
    for _ in range(n):
        x, t = rng.uniform(0.1, 5.0), rng.uniform(0.0, 5.0)
        k = 2.0 * math.sqrt(rng.uniform()) * complex(math.cos(th := rng.uniform(0, 2 * math.pi)),
                                                    math.sin(th))
        r = zero_curvature_residual(q, x, t, k)
        rp = zero_curvature_residual(q.scaled(1.1), x, t, k)
        worst = max(worst, r)
        worst_ratio = min(worst_ratio, rp / max(r, 1e-300))
    ev = make_evaluator(triple, tol=args.tol)
    tpart = max(background_tpart_residual(triple, ev, t, k)
                for t, k in ((0.7, 1 + 0.3j), (1.3, 0.6 + 0.2j), (0.0, 1.5 - 0.4j)))
    return {"passed": worst < ZERO_CURVATURE_TOL and worst_ratio > 1e3 and tpart < TPART_TOL,
            "zero_curvature_max": worst, "perturbed_ratio_min": worst_ratio,
            "background_tpart_max": tpart, "points": n}


def _suite_global_relation(args, rng) -> dict:
    omega = args.omega or 1.0
    triple, q = soliton_parameters(omega), gi_soliton(omega)
    ev = make_evaluator(triple, tol=args.tol)
    rm = build_region_map(ev, resolution=256)
    ks = sample_closed_d1(ev, rng, args.samples or 50, 3.0, rm)
    with ThreadPoolExecutor(worker_count()) as pool:
        data = list(pool.map(lambda k: scattering_data(triple, q, k, ev, rm), ks))
    worst = max(d.residual_global for d in data)
    return {"passed": worst < GLOBAL_RELATION_TOL, "max_residual": worst,
            "threshold": GLOBAL_RELATION_TOL, "points": len(ks)}


_SUITES = {"identities": _suite_identities, "pde": _suite_pde, "lax": _suite_lax,
           "global-relation": _suite_global_relation}


def run_verify(args, diag) -> tuple[dict, int]:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    rng = np.random.default_rng(args.seed)
    result, failed = {}, None
    for name in names:
        t0 = time.perf_counter()
        result[name] = _SUITES[name](args, rng)
        diag[f"{name}_seconds"] = time.perf_counter() - t0
        if not result[name]["passed"] and failed is None:
            failed = name
    result["passed"] = failed is None
    if failed is not None:
        result["first_failure"] = failed
    return result, EXIT_OK if failed is None else EXIT_VERIFY


def run_scatter(args, diag) -> tuple[dict, int]:
    omega = args.omega or 1.0
    triple, q = soliton_parameters(omega), gi_soliton(omega)
    ev = make_evaluator(triple, tol=args.tol)
    rm = build_region_map(ev, resolution=256)
    ks = args.k or sample_closed_d1(ev, np.random.default_rng(args.seed), args.samples, args.radius, rm)
    with ThreadPoolExecutor(worker_count()) as pool:
        data = list(pool.map(lambda k: scattering_data(triple, q, k, ev, rm), ks))
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "scattering.json").write_text(json.dumps([d.as_dict() for d in data], indent=1))
    return {"triple": triple.as_dict(), "points": [d.as_dict() for d in data],
            "max_residual": max(d.residual_global for d in data)}, EXIT_OK


def run_report(args, diag) -> tuple[dict, int]:
    triple = _triple(args)
    verdict = classify(triple, args.tol)
    result = {"classification": verdict.as_dict()}
    try:
        verdict, ev, contour, _ = _geometry(args, triple)
    except UnsupportedCase as exc:
        result["geometry"] = {"skipped": str(exc)}
        return result, EXIT_OK
    checks = figure_checks(ev, contour, verdict.case_label)
    obstructed, witness = lemma_obstruction_test(triple, ev, bounds=args.bounds,
                                                 resolution=args.resolution)
    result["geometry"] = {"branch_points": list(ev.cuts.branch_points),
                          "lemma_obstruction": {"obstructed": obstructed, "witness": witness},
                          "figure_checks": [c.as_dict() for c in checks]}
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        write_svg(args.out / "contour.svg", contour.bounds, contour, ev.cuts,
                  build_region_map(ev, args.bounds, args.resolution), verdict.case_label.value)
    return result, EXIT_OK


COMMANDS = {"classify": run_classify, "contour": run_contour, "verify": run_verify,
            "scatter": run_scatter, "report": run_report}


def main(argv=None) -> int:
    diag: dict = {}
    doc = {"command": None, "input": None, "result": None, "diagnostics": diag,
           "version": __version__}
    try:
        args = build_parser().parse_args(argv)
        doc["command"], doc["input"] = args.command, _input_dict(args)
        worker_count()
        t0 = time.perf_counter()
        doc["result"], code = COMMANDS[args.command](args, diag)
        diag["seconds"] = time.perf_counter() - t0
    except (InputError, DomainError) as exc:
        diag["error"], code = f"{type(exc).__name__}: {exc}", EXIT_INPUT
    except (AmbiguousCase, InconclusiveError) as exc:
        diag["error"], code = f"{type(exc).__name__}: {exc}", EXIT_AMBIGUOUS
    except ResolutionError as exc:
        diag["error"], code = f"{type(exc).__name__}: {exc}", EXIT_RESOLUTION
    except GIAdmissibilityError as exc:
        diag["error"], code = f"{type(exc).__name__}: {exc}", EXIT_INPUT
    except OSError as exc:
        diag["error"], code = f"{type(exc).__name__}: {exc}", EXIT_INPUT
    diag["exit_code"] = code
    sys.stdout.write(json.dumps(_jsonable(doc), indent=1) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
