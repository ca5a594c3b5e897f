"""File-driven front end.

Input is a sectioned key-value file ([surface], [params], [precanonical],
[run]); coefficient expressions follow the expression grammar.  Commands
print human-readable text by default and stable, compact JSON with
--json (reports are always JSON).  Exit codes: 0 all assertions hold,
1 an assertion failed (nonzero residuals under check, catalog mismatch),
2 parse failure, 3 precondition failure, 4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

from . import __version__
from .connection import classify_growth, curvature
from .errors import ConsistencyError, EvaluationError, ExprParseError, PreconditionError
from .expr import to_text
from .forms import cauchy_characteristics, derived_flag
from .projective import (
    CanonicalSystem,
    PreCanonicalSystem,
    SurfaceWorkspace,
    applicability_residuals,
    bar_connection,
    canonicalize,
    catalog,
    classify,
    derived_reduction,
    growth_dictionary,
    hat_distribution,
    integrability_residuals,
    invariants,
    m6_distribution,
    rank4_connection,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_CONSISTENCY = 4

COMMANDS = ("check", "invariants", "classify", "growth", "curvature", "report", "catalog")


class SurfaceFileError(ExprParseError):
    pass


def data_file(name):
    """Path to a bundled surface description file."""
    return resources.files("projdist").joinpath("data").joinpath(name)


def _parse_function_decl(text):
    out = []
    for tok in text.split():
        if "(" in tok:
            name, _, deps = tok.partition("(")
            deps = deps.rstrip(")")
            if deps not in ("x", "y", "xy"):
                raise SurfaceFileError(f"bad function dependence {tok!r}")
            out.append((name, deps))
        else:
            out.append((tok, "xy"))
    return out


def load_surface(path):
    """Parse a surface description file into (system, requested commands)."""
    cp = configparser.RawConfigParser()
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as ex:
        raise SurfaceFileError(f"cannot read {path}: {ex}")
    except configparser.Error as ex:
        raise SurfaceFileError(f"bad surface file: {ex}")
    if not cp.has_section("surface"):
        raise SurfaceFileError("missing [surface] section")
    surface = dict(cp.items("surface"))
    mode = surface.get("mode")
    if mode not in ("concrete", "symbolic"):
        raise SurfaceFileError("mode must be 'concrete' or 'symbolic'")
    params = ()
    if cp.has_section("params"):
        params = tuple(cp.get("params", "names", fallback="").split())
    functions = _parse_function_decl(surface.get("functions", ""))
    if mode == "symbolic" and not functions:
        functions = [("b", "xy"), ("c", "xy"), ("mu", "xy"), ("nu", "xy")]
    ws = SurfaceWorkspace(params=params, functions=functions)

    def coeff(name):
        if name in surface:
            return ws.parse(surface[name])
        if mode == "symbolic" and ws.table.function(name) is not None:
            return ws.parse(name)
        raise SurfaceFileError(f"missing coefficient {name!r} in [surface]")

    b, c, mu, nu = (coeff(n) for n in ("b", "c", "mu", "nu"))
    symbolic = mode == "symbolic" or bool(functions)
    if cp.has_section("precanonical"):
        pre = dict(cp.items("precanonical"))
        for key in ("alpha", "delta", "theta"):
            if key not in pre:
                raise SurfaceFileError(f"missing {key!r} in [precanonical]")
        system = canonicalize(
            PreCanonicalSystem(
                ws,
                ws.parse(pre["alpha"]),
                ws.parse(pre["delta"]),
                b,
                c,
                mu,
                nu,
                ws.parse(pre["theta"]),
            )
        )
        system.symbolic = symbolic
    else:
        system = CanonicalSystem(ws, b, c, mu, nu, symbolic=symbolic)
    commands = None
    if cp.has_section("run"):
        commands = tuple(cp.get("run", "commands", fallback="").split())
        for cmd in commands:
            if cmd not in ("check", "invariants", "classify", "growth", "curvature"):
                raise SurfaceFileError(f"unknown command {cmd!r} in [run]")
    return system, commands


# ---------------------------------------------------------------------------
# report assembly


def _growth_payload(gv):
    return {
        "growth": list(gv.ranks),
        "certificate": [to_text(c) for c in gv.certificate],
    }


def _matrix_payload(m):
    return [[to_text(e) for e in row] for row in m]


def _space_distribution(system, space, s0):
    if space == "m6":
        return m6_distribution(system)
    if space == "m6hat":
        return hat_distribution(system, s0)
    return derived_reduction(system, s0)


def run_check(system):
    residuals = integrability_residuals(system)
    return {
        "residuals_integrability": [to_text(r) for r in residuals],
        "integrable": all(r.is_zero() for r in residuals),
    }


def run_invariants(system, require_curvature=True):
    if require_curvature and (system.b * system.c).is_zero():
        raise PreconditionError("Gaussian curvature requested with b*c = 0")
    report = invariants(system)
    return {
        "invariants": {
            "phi_coefficient": to_text(report.phi_coefficient),
            "cubic": [to_text(report.cubic[0]), to_text(report.cubic[1])],
            "fubini": to_text(report.fubini),
            "ell": [to_text(e) for e in report.ell],
            "r": [to_text(e) for e in report.r_form],
            "gaussian_curvature": None
            if report.gaussian_curvature is None
            else to_text(report.gaussian_curvature),
        },
        "residuals_integrability": [to_text(r) for r in report.integrability],
        "residuals_applicability": None
        if report.applicability is None
        else [to_text(r) for r in report.applicability],
    }


def run_classify(system):
    c = classify(system)
    return {
        "classification": c.stratum,
        "ruled_side": c.ruled_side,
        "applicable": c.applicable,
        "prediction": list(c.prediction),
    }


def run_growth(system, space="m5", s0=0):
    dist = _space_distribution(system, space, s0)
    _, gv = derived_flag(dist)
    payload = {f"{space}_growth": _growth_payload(gv)["growth"],
               f"{space}_certificate": _growth_payload(gv)["certificate"]}
    if space != "m6":
        payload["s0"] = to_text(s0) if not isinstance(s0, int) else str(s0)
    return payload


def run_curvature(system, bundle="b3"):
    if bundle == "e4":
        m = curvature(rank4_connection(system)).entries
        return {"curvature_e4": _matrix_payload(m)}
    m = curvature(bar_connection(system)).entries
    return {"curvature_b3": _matrix_payload(m)}


def run_dictionary(system):
    rep = growth_dictionary(system)
    return {
        "classification": rep.classification.stratum,
        "ruled_side": rep.classification.ruled_side,
        "applicable": rep.classification.applicable,
        "prediction": list(rep.classification.prediction),
        "prediction_confirmed": rep.prediction_confirmed,
        "bar_growth": list(rep.growth),
        "bar_certificate": [to_text(c) for c in rep.certificate],
        "witness": None if rep.witness is None else str(rep.witness),
        "integrable_stratum": rep.integrable_stratum,
    }


def build_report(system, source, sections=None):
    """The full machine-readable report; sections may restrict the content."""
    payload = {
        "tool": "projdist",
        "version": __version__,
        "source": source,
        "mode": "symbolic" if system.symbolic else "concrete",
        "params": sorted(system.ws.params),
        "coefficients": {
            "b": to_text(system.b),
            "c": to_text(system.c),
            "mu": to_text(system.mu),
            "nu": to_text(system.nu),
        },
    }
    if sections is None:
        sections = ("check", "classify", "growth", "curvature", "invariants")
    if "check" in sections:
        payload.update(run_check(system))
    if "classify" in sections or "growth" in sections:
        payload.update(run_dictionary(system))
    if "growth" in sections:
        payload.update(run_growth(system, "m6"))
        payload.update(run_growth(system, "m6hat", 0))
    if "curvature" in sections:
        payload.update(run_curvature(system, "b3"))
        payload.update(run_curvature(system, "e4"))
    if "invariants" in sections:
        payload.update(run_invariants(system, require_curvature=False))
    return payload


def emit_json(payload):
    """Stable serialization: sorted keys, compact separators."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _print_payload(payload, as_json):
    if as_json:
        print(emit_json(payload))
        return
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            print(f"{key}:")
            for k2 in sorted(value):
                print(f"  {k2} = {value[k2]}")
        elif isinstance(value, list) and value and isinstance(value[0], list):
            print(f"{key}:")
            for row in value:
                print("  [" + ", ".join(str(v) for v in row) + "]")
        else:
            print(f"{key} = {value}")


# ---------------------------------------------------------------------------
# catalog command


def _catalog_row(entry):
    system = entry.make()
    rep = growth_dictionary(system)
    ok = rep.growth == entry.growth and rep.classification.stratum == entry.stratum
    witness_text = None if rep.witness is None else str(rep.witness)
    if entry.witness is not None:
        if rep.witness is None:
            ok = False
        else:
            f1, f2 = rep.witness.comps[0], rep.witness.comps[1]
            e1 = system.ws.parse(entry.witness[0])
            e2 = system.ws.parse(entry.witness[1])
            if not (f1 * e2 - f2 * e1).is_zero():
                ok = False
    if entry.certificate_contains is not None:
        if entry.certificate_contains not in {to_text(c) for c in rep.certificate}:
            ok = False
    return {
        "name": entry.name,
        "expected_stratum": entry.stratum,
        "computed_stratum": rep.classification.stratum,
        "expected_growth": list(entry.growth),
        "computed_growth": list(rep.growth),
        "witness": witness_text,
        "provenance": entry.provenance,
        "ok": ok,
    }


def run_catalog(name=None):
    entries = catalog()
    if name is not None:
        if name not in entries:
            raise PreconditionError(f"unknown catalog entry {name!r}")
        selected = [entries[name]]
    else:
        selected = list(entries.values())
    with ThreadPoolExecutor(max_workers=min(4, len(selected))) as pool:
        rows = list(pool.map(_catalog_row, selected))
    return rows


# ---------------------------------------------------------------------------
# entry point


def _build_argparser():
    ap = argparse.ArgumentParser(
        prog="projdist",
        description="growth vectors, curvature, and projective invariants of canonical surface systems",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", nargs="?", help="surface description file (not needed for catalog)")
    ap.add_argument("--space", choices=("m5", "m6", "m6hat"), default="m5")
    ap.add_argument("--s0", default="0", help="constant section value for m5/m6hat")
    ap.add_argument("--bundle", choices=("b3", "e4"), default="b3")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--name", default=None, help="catalog entry name")
    return ap


def main(argv=None):
    ap = _build_argparser()
    args = ap.parse_intermixed_args(argv)
    try:
        if args.command == "catalog":
            name = args.name if args.name else (args.file or None)
            rows = run_catalog(name)
            if args.json:
                print(emit_json({"catalog": rows}))
            else:
                for row in rows:
                    status = "ok" if row["ok"] else "MISMATCH"
                    print(
                        f"{row['name']:12s} expected {tuple(row['expected_growth'])} "
                        f"computed {tuple(row['computed_growth'])} "
                        f"stratum {row['computed_stratum']:12s} [{status}]"
                    )
            return EXIT_OK if all(r["ok"] for r in rows) else EXIT_ASSERTION

        if not args.file:
            ap.error(f"command {args.command!r} needs a surface file")
        system, file_commands = load_surface(args.file)

        if args.command == "check":
            payload = run_check(system)
            _print_payload(payload, args.json)
            if not args.json:
                print("status:", "PASS" if payload["integrable"] else "FAIL")
            return EXIT_OK if payload["integrable"] else EXIT_ASSERTION
        if args.command == "invariants":
            _print_payload(run_invariants(system), args.json)
            return EXIT_OK
        if args.command == "classify":
            _print_payload(run_classify(system), args.json)
            return EXIT_OK
        if args.command == "growth":
            s0 = system.ws.parse(args.s0)
            payload = run_growth(system, args.space, s0)
            _print_payload(payload, args.json)
            return EXIT_OK
        if args.command == "curvature":
            _print_payload(run_curvature(system, args.bundle), args.json)
            return EXIT_OK
        if args.command == "report":
            payload = build_report(system, args.file, sections=file_commands)
            print(emit_json(payload))
            return EXIT_OK
    except (ExprParseError, SurfaceFileError) as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, EvaluationError, ZeroDivisionError) as ex:
        print(f"precondition failure: {ex}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConsistencyError as ex:
        print(f"internal consistency failure: {ex}", file=sys.stderr)
        return EXIT_CONSISTENCY
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
