"""Command-line front end.

Every subcommand builds a report dictionary; ``--json`` prints it as a single
JSON document with sorted keys, otherwise a short text summary is printed.
Complex numbers are written as ``[re, im]`` and angles are in radians.

Exit status: 0 success, 1 analysis failure (e.g. separable state),
2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bell import (
    ProbabilityError,
    SettingsAssignment,
    evaluate_functional,
    hardy_functional,
    lhv_max,
    persistence_functional,
)
from .hardy import SeparableStateError, check_hardy_conditions, construct_hardy_measurements
from .majorana import (
    DEFAULT_CLUSTER_TOL,
    MajoranaSpectrum,
    NumericalError,
    degeneracy_profile,
    points_to_state,
    state_to_points,
)
from .optimize import OptimizationConfig, closed_form_thetas, dicke_theta_search, optimize_settings
from .symcore import DomainError, PureQubit, ResourceError, SymmetricState, from_named

DEFAULT_RESIDUAL_TOL = 1e-9

REPORT_FIELDS = (
    "input", "state", "spectrum", "degeneracy_profile", "branch", "measurements", "conditions",
    "bell_values", "lhv", "optimizer", "version", "seed", "tolerances",
)


class SpecError(ValueError):
    """Malformed state or settings document."""


class UsageError(ValueError):
    pass


# -- documents -----------------------------------------------------------------

def _complex(x, where: str) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    raise SpecError(f"{where}: expected a number or an [re, im] pair, got {x!r}")


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _point(entry, where: str) -> tuple[PureQubit, int]:
    if not isinstance(entry, dict):
        raise SpecError(f"{where}: expected an object with 'bloch' or 'amplitudes' and 'deg'")
    deg = entry.get("deg", 1)
    if not isinstance(deg, int) or deg < 1:
        raise SpecError(f"{where}.deg: expected a positive integer, got {deg!r}")
    if ("bloch" in entry) == ("amplitudes" in entry):
        raise SpecError(f"{where}: give exactly one of 'bloch' or 'amplitudes'")
    if "bloch" in entry:
        b = entry["bloch"]
        if not (isinstance(b, (list, tuple)) and len(b) == 2):
            raise SpecError(f"{where}.bloch: expected [t, phi]")
        return PureQubit.from_bloch(float(b[0]), float(b[1])), deg
    amps = entry["amplitudes"]
    if not (isinstance(amps, (list, tuple)) and len(amps) == 2):
        raise SpecError(f"{where}.amplitudes: expected two complex entries")
    a, b = (_complex(v, f"{where}.amplitudes[{i}]") for i, v in enumerate(amps))
    return PureQubit(a, b), deg


def parse_state_spec(text) -> SymmetricState:
    """State from a JSON document (or an already-parsed dict).

    Exactly one of ``named`` (``{"name", "n", "k"}``), ``dicke_coeffs`` (list of
    complex entries) or ``majorana_points`` (list of ``{"bloch": [t, phi]}`` or
    ``{"amplitudes": [a, b]}`` objects with an optional ``deg``) must be given.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SpecError("state document must be a JSON object")
    keys = [k for k in ("named", "dicke_coeffs", "majorana_points") if k in doc]
    if len(keys) != 1:
        raise SpecError("state document needs exactly one of named, dicke_coeffs, majorana_points")
    key = keys[0]
    body = doc[key]
    if key == "named":
        if not isinstance(body, dict) or "name" not in body:
            raise SpecError("named: expected an object with a 'name'")
        try:
            return from_named(body["name"], body.get("n"), body.get("k"))
        except DomainError:
            raise
        except ValueError as exc:
            raise SpecError(f"named.name: {exc}") from None
    if not isinstance(body, list) or not body:
        raise SpecError(f"{key}: expected a non-empty list")
    if key == "dicke_coeffs":
        coeffs = [_complex(v, f"dicke_coeffs[{i}]") for i, v in enumerate(body)]
        if len(coeffs) < 2:
            raise SpecError("dicke_coeffs: need at least two coefficients")
        return SymmetricState(coeffs)
    clusters = [_point(e, f"majorana_points[{i}]") for i, e in enumerate(body)]
    return points_to_state(MajoranaSpectrum(sum(d for _, d in clusters), tuple(clusters)))


def state_to_spec(state: SymmetricState) -> dict:
    return {"dicke_coeffs": [_pair(c) for c in state.coeffs]}


def parse_settings(text, n: int) -> SettingsAssignment:
    """Settings from ``{"per_party": [[[t0, phi0], [t1, phi1]], ...]}`` or ``{"identical": [[t0, phi0], [t1, phi1]]}``.

    Each angle pair is the outcome-0 vector of that setting's basis.
    """
    doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    if not isinstance(doc, dict):
        raise SpecError("settings document must be a JSON object")
    try:
        if "identical" in doc:
            pair = np.asarray(doc["identical"], dtype=float)
            angles = np.broadcast_to(pair.reshape(1, 2, 2), (n, 2, 2))
        elif "per_party" in doc:
            angles = np.asarray(doc["per_party"], dtype=float)
        else:
            raise SpecError("settings document needs 'per_party' or 'identical'")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"settings angles: {exc}") from None
    if angles.shape != (n, 2, 2):
        raise SpecError(f"settings: expected {n} parties x 2 settings x [t, phi], got shape {angles.shape}")
    return SettingsAssignment.from_angles(angles)


def _settings_doc(settings: SettingsAssignment) -> dict:
    return {"per_party": settings.angles().tolist()}


def _spectrum_doc(spec: MajoranaSpectrum) -> list[dict]:
    return [{"amplitudes": [_pair(p.a), _pair(p.b)], "bloch": list(p.bloch_angles()), "deg": d}
            for p, d in spec.clusters]


# -- commands ------------------------------------------------------------------

def _load_state(args) -> SymmetricState:
    if args.state is None:
        raise UsageError("--state is required")
    path = Path(args.state)
    if path.suffix == ".json" or path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read state file: {exc}") from None
        return parse_state_spec(text)
    return parse_state_spec({"named": {"name": args.state, "n": args.n, "k": args.k}})


def _functional(args, n: int):
    if args.functional == "persistence":
        if args.d is None:
            raise UsageError("--functional persistence needs --d")
        return persistence_functional(n, args.d)
    return hardy_functional(n)


def cmd_majorana(args, report):
    state = _load_state(args)
    spec = state_to_points(state, args.tol_cluster)
    report["input"] = state_to_spec(state)
    report["spectrum"] = _spectrum_doc(spec)
    report["degeneracy_profile"] = list(degeneracy_profile(spec))


def cmd_reconstruct(args, report):
    state = _load_state(args)
    report["input"] = {"state": args.state}
    report["state"] = state_to_spec(state)
    report["spectrum"] = _spectrum_doc(state_to_points(state, args.tol_cluster))
    report["degeneracy_profile"] = sorted((e["deg"] for e in report["spectrum"]), reverse=True)


def cmd_hardy(args, report):
    state = _load_state(args)
    report["input"] = state_to_spec(state)
    spec = state_to_points(state, args.tol_cluster)
    report["spectrum"] = _spectrum_doc(spec)
    report["degeneracy_profile"] = list(degeneracy_profile(spec))
    m = construct_hardy_measurements(state, args.tol_cluster)
    r = check_hardy_conditions(state, m, args.tol_residual)
    settings = m.settings(state.n)
    report["branch"] = m.branch
    report["measurements"] = {
        "anchor_mp": list(m.anchor_mp.bloch_angles()),
        "new_mp": list(m.new_mp.bloch_angles()),
        "setting0": [list(m.setting0.outcome0.bloch_angles()), list(m.setting0.outcome1.bloch_angles())],
        "setting1": [list(m.setting1.outcome0.bloch_angles()), list(m.setting1.outcome1.bloch_angles())],
        "theta": m.theta,
    }
    report["conditions"] = {"max_p2_residual": r.max_p2_residual, "p1": r.p1,
                            "p5_residual": r.p5_residual, "satisfied": r.satisfied}
    report["bell_values"] = {"hardy": evaluate_functional(state, hardy_functional(state.n), settings)}


def cmd_bell(args, report):
    state = _load_state(args)
    n = state.n
    report["input"] = state_to_spec(state)
    if args.settings:
        try:
            settings = parse_settings(Path(args.settings).read_text(encoding="utf-8"), n)
        except OSError as exc:
            raise UsageError(f"cannot read settings file: {exc}") from None
        report["branch"] = "given"
    else:
        m = construct_hardy_measurements(state, args.tol_cluster)
        settings = m.settings(n)
        report["branch"] = m.branch
    report["measurements"] = _settings_doc(settings)
    values = {"hardy": evaluate_functional(state, hardy_functional(n), settings)}
    if args.d is not None:
        values[f"persistence_{args.d}"] = evaluate_functional(state, persistence_functional(n, args.d), settings)
    report["bell_values"] = values


def cmd_lhv(args, report):
    if args.n is None:
        raise UsageError("lhv needs --n")
    f = _functional(args, args.n)
    value, witness = lhv_max(f)
    report["input"] = {"functional": f.name, "n": args.n}
    report["lhv"] = {"functional": f.name, "value": value,
                     "witness": [list(p) for p in witness.per_party]}


def cmd_optimize(args, report):
    state = _load_state(args)
    f = _functional(args, state.n)
    config = OptimizationConfig(restarts=args.restarts, seed=args.seed, identical_settings=args.identical_settings)
    res = optimize_settings(state, f, config)
    report["input"] = state_to_spec(state)
    report["measurements"] = _settings_doc(res.best_settings)
    report["bell_values"] = {f.name: res.best_value}
    report["optimizer"] = {
        "best_value": res.best_value, "converged": res.converged, "functional": f.name,
        "identical_settings": args.identical_settings, "restarts": args.restarts,
        "restart_values": res.restart_values, "trace": [[i, v] for i, v in res.trace],
    }


def cmd_dicke_theta(args, report):
    if args.n is None or args.k is None:
        raise UsageError("dicke-theta needs --n and --k")
    theta, value = dicke_theta_search(args.n, args.k)
    report["input"] = {"k": args.k, "n": args.n}
    report["measurements"] = {"theta": theta}
    report["bell_values"] = {"rescaled_hardy": value}
    report["optimizer"] = {"closed_form_roots": closed_form_thetas(args.n, args.k), "theta_star": theta,
                           "value": value}


def cmd_reproduce(args, report):
    from .reproduce import run_checks

    only = [int(x) for x in args.only.split(",")] if args.only else None
    try:
        results = run_checks(only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report["optimizer"] = {"checks": [
        {"detail": r.detail, "name": r.name, "number": r.number, "passed": r.passed, "seconds": r.seconds}
        for r in results
    ]}
    report["_lines"] = [r.line() for r in results]
    report["_failed"] = not all(r.passed for r in results)


COMMANDS = {
    "majorana": cmd_majorana,
    "reconstruct": cmd_reconstruct,
    "hardy": cmd_hardy,
    "bell": cmd_bell,
    "lhv": cmd_lhv,
    "optimize": cmd_optimize,
    "dicke-theta": cmd_dicke_theta,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", help="state name (ghz, w, dicke, tetrahedron, d3plus) or a JSON file")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--functional", choices=("hardy", "persistence"), default="hardy")
    common.add_argument("--settings", help="JSON settings file")
    common.add_argument("--json", action="store_true", help="print one JSON document")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=64)
    common.add_argument("--tol-residual", type=float, default=DEFAULT_RESIDUAL_TOL)
    common.add_argument("--tol-cluster", type=float, default=DEFAULT_CLUSTER_TOL)
    common.add_argument("--identical-settings", action="store_true")

    parser = argparse.ArgumentParser(prog="symnonlocal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "reproduce":
            p.add_argument("--only", help="comma-separated check numbers")
    return parser


def _text(report) -> str:
    if "_lines" in report:
        return "\n".join(report["_lines"])
    lines = []
    for key in REPORT_FIELDS:
        value = report.get(key)
        if value is not None and key not in ("version", "tolerances"):
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    return "\n".join(lines)


def run_command(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = {key: None for key in REPORT_FIELDS}
    report.update(version=__version__, seed=args.seed,
                  tolerances={"cluster": args.tol_cluster, "residual": args.tol_residual})
    try:
        COMMANDS[args.command](args, report)
    except (UsageError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SeparableStateError, DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ProbabilityError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    failed = report.pop("_failed", False)
    if args.json:
        report.pop("_lines", None)
        out.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        out.write(_text(report) + "\n")
    return 1 if failed else 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
