"""Command-line surface.

Exit codes: 0 success, 2 precondition violation, 3 inconclusive
(finiteness not certified or truncation fired), 4 verification failure.
Errors are emitted as structured JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from .fdalg import AlgebraError
from .fixtures import FIXTURE_NAMES, fixture
from .jacobian import UnboundedAtD, fd_algebra
from .pathalg import PathAlgebraError
from .qpcore import DEFAULT_BOUND, DEFAULT_CAP, MutationError, QP, ViolationReport, check_mutability, mutate
from .qpdoc import DocumentError, document_name, emit_qp, emit_qp_text, parse_qp_text, report_text
from .selfinj import NotSelfinjective, is_selfinjective, nakayama_permutation, sigma_orbits
from .silting import SiltingError, verify_theorem

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_INCONCLUSIVE = 3
EXIT_VERIFICATION = 4


class CliError(Exception):
    def __init__(self, code: int, message: str, details=None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details


def _fail(code: int, message: str, details=None):
    raise CliError(code, message, details)


def _emit_error(err: CliError) -> None:
    sys.stderr.write(json.dumps(
        {"code": err.code, "message": err.message, "details": err.details},
        default=str) + "\n")


def _load_settings(args) -> dict:
    settings = {"degree_bound": DEFAULT_BOUND, "cap": DEFAULT_CAP, "seed": 0}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _fail(EXIT_PRECONDITION, f"cannot read config file: {exc}")
        for key in settings:
            if key in cfg:
                settings[key] = int(cfg[key])
    for key, env in (("degree_bound", "QPMUT_DEGREE_BOUND"),
                     ("cap", "QPMUT_CAP"), ("seed", "QPMUT_SEED")):
        if os.environ.get(env):
            settings[key] = int(os.environ[env])
    # flags win
    if getattr(args, "degree_bound", None) is not None:
        settings["degree_bound"] = args.degree_bound
    if getattr(args, "cap", None) is not None:
        settings["cap"] = args.cap
    if getattr(args, "seed", None) is not None:
        settings["seed"] = args.seed
    return settings


def _read_qp(path: str) -> QP:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        _fail(EXIT_PRECONDITION, f"cannot read input: {exc}")
    try:
        return parse_qp_text(text)
    except DocumentError as exc:
        _fail(EXIT_PRECONDITION, f"invalid QP document: {exc}")


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_vertices(qp: QP, spec: str) -> List:
    by_str = {str(v): v for v in qp.quiver.vertices}
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok not in by_str:
            _fail(EXIT_PRECONDITION, f"unknown vertex label {tok!r}",
                  {"known": [str(v) for v in qp.quiver.vertices]})
        out.append(by_str[tok])
    if not out:
        _fail(EXIT_PRECONDITION, "empty vertex list")
    return out


def _require_mutable(qp: QP, vertices: Sequence):
    plan = check_mutability(qp, vertices)
    if isinstance(plan, ViolationReport):
        _fail(EXIT_PRECONDITION, "mutation preconditions violated",
              plan.messages())
    return plan


def cmd_parse(args) -> int:
    qp = _read_qp(args.input)
    _write(emit_qp_text(qp, name=args.name), args.output)
    return EXIT_OK


def cmd_fixture(args) -> int:
    try:
        qp = fixture(args.name)
    except KeyError as exc:
        _fail(EXIT_PRECONDITION, str(exc), {"known": FIXTURE_NAMES})
    _write(emit_qp_text(qp, name=args.name.upper()), args.output)
    return EXIT_OK


def cmd_mutate(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    vertices = _parse_vertices(qp, args.vertices)
    _require_mutable(qp, vertices)
    try:
        result = mutate(qp, vertices, settings["degree_bound"], settings["cap"])
    except MutationError as exc:
        _fail(EXIT_PRECONDITION, str(exc))
    _write(emit_qp_text(result, name=args.name), args.output)
    if result.potential.truncated:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_jacobian(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    A = fd_algebra(qp, settings["degree_bound"])
    if isinstance(A, UnboundedAtD):
        _fail(EXIT_INCONCLUSIVE,
              f"finite-dimensionality not certified at bound {A.bound}",
              {"layer_sizes": A.layer_sizes})
    out = {"dimension": A.dim}
    if args.cartan:
        out["cartan"] = A.cartan_matrix()
    if args.radical:
        out["radical_layers"] = A.radical_layers()
        out["loewy_length"] = A.loewy_length()
    _write(json.dumps(out, indent=2, default=str) + "\n", args.output)
    return EXIT_OK


def _algebra_or_fail(qp: QP, bound: int):
    A = fd_algebra(qp, bound)
    if isinstance(A, UnboundedAtD):
        _fail(EXIT_INCONCLUSIVE,
              f"finite-dimensionality not certified at bound {A.bound}",
              {"layer_sizes": A.layer_sizes})
    return A


def cmd_nakayama(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    A = _algebra_or_fail(qp, settings["degree_bound"])
    sigma = nakayama_permutation(A, seed=settings["seed"])
    if isinstance(sigma, NotSelfinjective):
        _fail(EXIT_VERIFICATION, f"not selfinjective: {sigma.note}")
    _write(sigma.cycle_notation(list(qp.quiver.vertices)) + "\n", args.output)
    return EXIT_OK


def cmd_check_selfinjective(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    A = fd_algebra(qp, settings["degree_bound"])
    if isinstance(A, UnboundedAtD):
        _fail(EXIT_INCONCLUSIVE,
              f"finite-dimensionality not certified at bound {A.bound}",
              {"layer_sizes": A.layer_sizes})
    verdict = is_selfinjective(qp, settings["degree_bound"], seed=settings["seed"])
    out = {
        "selfinjective": bool(verdict),
        "dimension": verdict.dim,
        "nakayama": verdict.nakayama.cycle_notation(list(qp.quiver.vertices))
        if verdict.nakayama else None,
        "reason": verdict.reason,
    }
    _write(json.dumps(out, indent=2, default=str) + "\n", args.output)
    return EXIT_OK


def cmd_orbits(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    A = _algebra_or_fail(qp, settings["degree_bound"])
    try:
        orbits = sigma_orbits(A, seed=settings["seed"])
    except AlgebraError as exc:
        _fail(EXIT_VERIFICATION, str(exc))
    listing = []
    for orb in orbits:
        plan = check_mutability(qp, list(orb))
        listing.append({
            "vertices": list(orb),
            "mutable": not isinstance(plan, ViolationReport),
        })
    _write(json.dumps({"orbits": listing}, indent=2, default=str) + "\n", args.output)
    return EXIT_OK


def _report_exit(report) -> int:
    if report.truncated:
        return EXIT_INCONCLUSIVE
    if not (report.iso_verdict and report.all_exactness_ok and report.silting):
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_verify(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    vertices = _parse_vertices(qp, args.vertices)
    _require_mutable(qp, vertices)
    try:
        report = verify_theorem(qp, vertices, settings["degree_bound"],
                                seed=settings["seed"])
    except (MutationError, SiltingError) as exc:
        _fail(EXIT_VERIFICATION, str(exc))
    _write(report_text(report.to_dict(with_timings=args.timings)), args.output)
    return _report_exit(report)


def cmd_chain(args) -> int:
    settings = _load_settings(args)
    qp = _read_qp(args.input)
    steps = []
    status = EXIT_OK
    current = qp
    for chunk in args.orbits.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vertices = _parse_vertices(current, chunk)
        _require_mutable(current, vertices)
        try:
            report = verify_theorem(current, vertices, settings["degree_bound"],
                                    seed=settings["seed"])
        except (MutationError, SiltingError) as exc:
            _fail(EXIT_VERIFICATION, str(exc))
        current = mutate(current, vertices, settings["degree_bound"], settings["cap"])
        steps.append({
            "vertices": [str(v) for v in vertices],
            "report": report.to_dict(with_timings=args.timings),
            "document": emit_qp(current),
        })
        step_status = _report_exit(report)
        status = max(status, step_status)
    out = {"steps": steps, "final": emit_qp(current)}
    _write(json.dumps(out, indent=2, default=str) + "\n", args.output)
    return status


def cmd_serve(args) -> int:
    settings = _load_settings(args)
    from .server import serve
    serve(host=args.host, port=args.port, settings=settings,
          static_dir=args.static)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qpmut",
        description="Exact mutation of quivers with potential and "
                    "silting-complex verification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, vertices=False):
        p.add_argument("-i", "--input", required=True, help="QP document (JSON)")
        p.add_argument("-o", "--output", help="output file (default stdout)")
        p.add_argument("--degree-bound", type=int, default=None)
        p.add_argument("--cap", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", help="JSON config file (flags win)")
        p.add_argument("--name", help="name recorded in output metadata")
        if vertices:
            p.add_argument("-v", "--vertices", required=True,
                           help="comma-separated vertex labels")

    p = sub.add_parser("parse", help="validate and re-emit a canonical document")
    common(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("fixture", help="emit a built-in fixture document")
    p.add_argument("name", help="HEX, GRID3, TUB(2), TUB(3)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("mutate", help="mutate at a vertex set")
    common(p, vertices=True)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("jacobian", help="Jacobian algebra dimension and invariants")
    common(p)
    p.add_argument("--dim", action="store_true", help="(default) report the dimension")
    p.add_argument("--cartan", action="store_true", help="include the Cartan matrix")
    p.add_argument("--radical", action="store_true", help="include radical layers")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("nakayama", help="Nakayama permutation in cycle notation")
    common(p)
    p.set_defaults(func=cmd_nakayama)

    p = sub.add_parser("check-selfinjective", help="selfinjectivity verdict")
    common(p)
    p.set_defaults(func=cmd_check_selfinjective)

    p = sub.add_parser("orbits", help="sigma orbits and their mutability")
    common(p)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("verify-theorem", help="full verification report")
    common(p, vertices=True)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chain", help="verify and apply a sequence of orbit mutations")
    common(p)
    p.add_argument("--orbits", required=True,
                   help="semicolon-separated vertex lists, e.g. '1,9;3,7'")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("serve", help="HTTP JSON service")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", help="serve a built frontend from this directory")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config")
    p.set_defaults(func=cmd_serve)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        _emit_error(err)
        return err.code
    except (MutationError, PathAlgebraError, DocumentError) as exc:
        _emit_error(CliError(EXIT_PRECONDITION, str(exc)))
        return EXIT_PRECONDITION
    except SiltingError as exc:
        _emit_error(CliError(EXIT_VERIFICATION, str(exc)))
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
