"""Command-line surface: build frequency sets from region-spec files, verify
them spectrally, and run the exhaustive selection searches.

Rationals travel as "p/q" strings in both directions; floating-point numbers
appear only in report bound fields, formatted at a stated precision, so that
identical inputs produce byte-identical reports under --deterministic.

Exit codes: 0 success, 2 parse error, 3 search cap exceeded, 4 contract
violation, 5 verification failure, 6 enumeration bound exceeded.
"""

import argparse
import datetime
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .construct import (STRATEGY_RECURSIVE, coherent_bases_d, normalize_strategy,
                        riesz_basis_d)
from .errors import (CoherenceCapExceeded, EnumerationBoundExceeded,
                     FoldCapExceeded, GridAlignmentError, NestingViolation,
                     RieszboxError, SpecFormatError)
from .freqset import PeriodicSet
from .geometry import Region
from .verify import (DEFAULT_TOLERANCE, VERDICT_BASIS, brute_force_selection_search,
                     density_check, dual_complement_check, exact_riesz_bounds,
                     gram_truncation_sweep, universal_row_selection_check)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_CONTRACT = 4
EXIT_VERIFY = 5
EXIT_BOUND = 6

PRECISION = 12

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise SpecFormatError(f"not an exact rational: {text!r} (use 'p/q' strings)")
    return Fraction(text.strip())


def _fmt(value: float) -> str:
    if value != value or value in (float("inf"), float("-inf")):
        return str(value)
    return f"{value:.{PRECISION}e}"


def load_region_spec(path):
    """Parse a region-spec file: named box unions plus declared inclusions."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read spec {path}: {exc}") from exc
    if not isinstance(payload, dict) or "dim" not in payload or "sets" not in payload:
        raise SpecFormatError("spec must be an object with 'dim' and 'sets'")
    dim = int(payload["dim"])
    names, regions = [], []
    for entry in payload["sets"]:
        name = entry.get("name")
        if not isinstance(name, str) or name in names:
            raise SpecFormatError(f"missing or duplicate set name: {name!r}")
        boxes = []
        for box in entry.get("boxes", []):
            if len(box) != dim:
                raise SpecFormatError(f"set {name}: box {box} is not {dim}-dimensional")
            boxes.append(tuple((parse_rational(lo), parse_rational(hi)) for lo, hi in box))
        try:
            region = Region.from_boxes(dim, boxes)
        except (ValueError, TypeError) as exc:
            raise SpecFormatError(f"set {name}: {exc}") from exc
        names.append(name)
        regions.append(region)
    inclusions = []
    for pair in payload.get("inclusions", []):
        if len(pair) != 2 or pair[0] not in names or pair[1] not in names:
            raise SpecFormatError(f"inclusion {pair} does not name two known sets")
        inclusions.append((names.index(pair[0]), names.index(pair[1])))
    return dim, names, regions, inclusions


def _emit(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _finish_json(args, payload: dict) -> int:
    if not args.deterministic:
        payload["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    _emit(args, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def cmd_build(args) -> int:
    dim, names, regions, inclusions = load_region_spec(args.spec)
    for i, j in inclusions:
        if not regions[i].is_subset(regions[j]):
            sys.stderr.write(
                f"declared inclusion {names[i]} <= {names[j]} does not hold\n")
            return EXIT_CONTRACT
    strategy = normalize_strategy(args.strategy)
    trace: list = []
    if len(regions) == 1 and not inclusions:
        bases = [riesz_basis_d(regions[0], strategy, args.max_fold_modulus, trace)]
        coherent = False
    else:
        family = coherent_bases_d(regions, strategy, args.max_fold_modulus, trace)
        bases = [family.basis(i) for i in range(len(regions))]
        coherent = True
    sets = []
    for name, region, basis in zip(names, regions, bases):
        sets.append({
            "name": name,
            "moduli": list(basis.moduli),
            "residues": [list(r) for r in basis.sorted_residues()],
            "density": str(basis.density),
            "measure": str(region.measure),
        })
    payload = {
        "kind": "build",
        "dim": dim,
        "strategy": strategy,
        "coherent": coherent,
        "sets": sets,
        "inclusions": [[names[i], names[j]] for i, j in inclusions],
        "trace": trace,
    }
    if args.format == "csv":
        lines = ["name,moduli,residue_count,density"]
        for entry in sets:
            lines.append(f"{entry['name']},{' '.join(map(str, entry['moduli']))},"
                         f"{len(entry['residues'])},{entry['density']}")
        _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK
    return _finish_json(args, payload)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def load_basis_file(path):
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFormatError(f"cannot read basis file {path}: {exc}") from exc
    sets = payload.get("sets")
    if not isinstance(sets, list):
        raise SpecFormatError("basis file must carry a 'sets' list")
    out = {}
    for entry in sets:
        try:
            out[entry["name"]] = PeriodicSet.make(
                entry["moduli"], [tuple(r) for r in entry["residues"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecFormatError(f"malformed basis entry: {exc}") from exc
    return out


def _default_radii(sigma: PeriodicSet):
    r0 = max(1, max(sigma.moduli) // 2 + 1)
    return (r0, r0 + 2)


def _verify_one(name, region, sigma, radii, tolerance):
    density_ok = density_check(region, sigma)
    spectral = exact_riesz_bounds(region, sigma, tolerance)
    dual = dual_complement_check(region, sigma, tolerance)
    sweep = gram_truncation_sweep(region, sigma, radii or _default_radii(sigma)) \
        if not sigma.is_empty else None
    bessel_ok = sweep is None or (
        all(m <= 1 + tolerance for m in sweep.max_eigs)
        and all(m >= -tolerance for m in sweep.min_eigs))
    above_lower = sweep is None or all(
        m >= spectral.lower_bound - tolerance for m in sweep.min_eigs)
    ok = (density_ok and spectral.verdict == VERDICT_BASIS
          and dual.consistent and bessel_ok and above_lower)
    report = {
        "name": name,
        "pass": ok,
        "density": {"ok": density_ok, "density": str(sigma.density),
                    "measure": str(region.measure)},
        "spectral": {
            "verdict": spectral.verdict,
            "lower_bound": _fmt(spectral.lower_bound),
            "upper_bound": _fmt(spectral.upper_bound),
            "condition": _fmt(spectral.condition),
            "cells": spectral.cell_count,
            "residues": spectral.residue_count,
            "sigma_values": [_fmt(s) for s in spectral.sigma_values],
        },
        "dual": {"consistent": dual.consistent,
                 "complement_verdict": dual.complement.verdict},
    }
    if sweep is not None:
        report["sweep"] = {
            "radii": list(sweep.radii),
            "counts": list(sweep.counts),
            "min_eigs": [_fmt(v) for v in sweep.min_eigs],
            "max_eigs": [_fmt(v) for v in sweep.max_eigs],
            "bessel_ok": bessel_ok,
            "above_exact_lower": above_lower,
        }
    return report


def cmd_verify(args) -> int:
    dim, names, regions, _ = load_region_spec(args.spec)
    bases = load_basis_file(args.basis)
    missing = [name for name in names if name not in bases]
    if missing:
        sys.stderr.write(f"basis file lacks sets: {', '.join(missing)}\n")
        return EXIT_CONTRACT
    radii = tuple(int(r) for r in args.radii.split(",")) if args.radii else None
    jobs = max(1, args.jobs)
    tasks = [(name, region, bases[name]) for name, region in zip(names, regions)]
    if jobs == 1:
        reports = [_verify_one(name, region, sigma, radii, args.tolerance)
                   for name, region, sigma in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_verify_one, name, region, sigma, radii,
                                   args.tolerance) for name, region, sigma in tasks]
            reports = [f.result() for f in futures]
    overall = all(r["pass"] for r in reports)
    payload = {
        "kind": "verify",
        "dim": dim,
        "tolerance": _fmt(args.tolerance),
        "precision": PRECISION,
        "pass": overall,
        "sets": reports,
    }
    if args.format == "csv":
        lines = ["name,radius,count,min_eig,max_eig"]
        for report in reports:
            for r, c, lo, hi in zip(*(report.get("sweep", {}).get(k, [])
                                      for k in ("radii", "counts", "min_eigs", "max_eigs"))):
                lines.append(f"{report['name']},{r},{c},{lo},{hi}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _finish_json(args, payload)
    return EXIT_OK if overall else EXIT_VERIFY


# ---------------------------------------------------------------------------
# oracle / counterexample
# ---------------------------------------------------------------------------

def _parse_moduli(text):
    return tuple(int(x) for x in text.split(","))


def _parse_cells(text):
    return [tuple(int(x) for x in part.split(",")) for part in text.split(";")]


def cmd_oracle(args) -> int:
    result = brute_force_selection_search(
        _parse_moduli(args.moduli), _parse_cells(args.cells),
        tolerance=args.tolerance, max_enumeration=args.max_enumeration)
    payload = {
        "kind": "oracle",
        "moduli": list(result.moduli),
        "cells": [list(c) for c in result.cells],
        "invertible": [[list(r) for r in sel] for sel in result.invertible],
        "singular": [[list(r) for r in sel] for sel in result.singular],
    }
    if args.format == "csv":
        lines = ["selection,invertible"]
        for sel in result.invertible:
            lines.append(f"{';'.join(','.join(map(str, r)) for r in sel)},1")
        for sel in result.singular:
            lines.append(f"{';'.join(','.join(map(str, r)) for r in sel)},0")
        _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK
    return _finish_json(args, payload)


def cmd_counterexample(args) -> int:
    result = universal_row_selection_check(
        _parse_moduli(args.moduli), args.size,
        tolerance=args.tolerance, max_enumeration=args.max_enumeration)
    payload = {
        "kind": "counterexample",
        "moduli": list(result.moduli),
        "size": result.size,
        "universal": result.universal,
        "rows": [list(r) for r in result.rows] if result.rows else None,
        "witnesses": [{"rows": [list(r) for r in rows],
                       "singular_columns": [list(c) for c in cols]}
                      for rows, cols in result.witnesses],
    }
    if args.format == "csv":
        lines = ["rows,singular_columns"]
        for rows, cols in result.witnesses:
            lines.append(f"{';'.join(','.join(map(str, r)) for r in rows)},"
                         f"{';'.join(','.join(map(str, c)) for c in cols)}")
        _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK
    return _finish_json(args, payload)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rieszbox",
        description="Construct and certify exponential frequency sets for "
                    "rational box unions in the unit cube.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--deterministic", action="store_true",
                       help="suppress the timestamp field for byte-stable output")
        p.add_argument("-o", "--output", default=None, help="write report to a file")

    build = sub.add_parser("build", help="construct frequency sets for a spec file")
    build.add_argument("spec")
    build.add_argument("--strategy", default=STRATEGY_RECURSIVE,
                       choices=("direct", "recursive", "paper"),
                       help="'direct' collapses at the common denominator; "
                            "'recursive' folds at minimal moduli ('paper' is "
                            "an accepted alias)")
    build.add_argument("--max-fold-modulus", type=int, default=None)
    common(build)
    build.set_defaults(func=cmd_build)

    verify = sub.add_parser("verify", help="spectrally certify a built basis")
    verify.add_argument("spec")
    verify.add_argument("basis")
    verify.add_argument("--radii", default=None,
                        help="comma-separated truncation radii (default: auto)")
    verify.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    verify.add_argument("--jobs", type=int, default=1)
    common(verify)
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="classify residue selections exhaustively")
    oracle.add_argument("--moduli", required=True, help="e.g. 2,2")
    oracle.add_argument("--cells", required=True, help="e.g. 0,0;1,1")
    oracle.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    oracle.add_argument("--max-enumeration", type=int, default=200_000)
    common(oracle)
    oracle.set_defaults(func=cmd_oracle)

    ce = sub.add_parser("counterexample",
                        help="search for a universally invertible row selection")
    ce.add_argument("--moduli", required=True)
    ce.add_argument("--size", type=int, required=True)
    ce.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    ce.add_argument("--max-enumeration", type=int, default=200_000)
    common(ce)
    ce.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (FoldCapExceeded, CoherenceCapExceeded) as exc:
        sys.stderr.write(f"search cap exceeded: {exc}\n")
        return EXIT_CAP
    except (NestingViolation, GridAlignmentError) as exc:
        sys.stderr.write(f"contract violation: {exc}\n")
        return EXIT_CONTRACT
    except EnumerationBoundExceeded as exc:
        sys.stderr.write(f"enumeration bound exceeded: {exc}\n")
        return EXIT_BOUND
    except RieszboxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
