"""Command-line interface with JSON input and output.

Every command prints one report object::

    {"command": ..., "inputs": {"digest": ...}, "outputs": {...},
     "residuals": {...}, "elapsed": null}

Exit codes: 0 success, 1 usage error, 2 precondition or input failure,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import geodesics as geo
from .errors import NumericalError, PreconditionError
from .halmos import halmos_decompose, principal_angles_from_form, reconstruct
from .isometry import (
    apply_isometry,
    classify_map,
    connect_chain_lt1,
    isometry_residual,
    orthogonality_counterexample,
    sample_projections,
    stratum,
)
from .metric import gap_direct, gap_formula, gap_lower_bound
from .projection import TOL_PROJ, Projection, complement, opnorm
from .relations import AdmissibilityModel, perp_chain, sharp_chain, validate_chain
from .serialization import (
    chain_to_json,
    dumps,
    form_to_json,
    matrix_from_json,
    matrix_to_json,
    path_to_json,
    projection_from_json,
    projection_to_json,
    spec_from_json,
    spec_to_json,
)

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3

SCHEMA = """\
matrix JSON: {"field": "real"|"complex", "rows": R, "cols": C,
              "data": row-major numbers, complex entries as [re, im]}
map JSON:    {"kind": "unitary"|"antiunitary"|"unitary_complement"|
                      "antiunitary_complement", "U": matrix JSON}
reparam:     {"kind": "identity"|"triangle"|"pwl", "params": [...]}
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- helpers ---------------------------------------------------------------------

def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path} is not valid JSON: {exc}") from None


def _proj(path, tol) -> Projection:
    return projection_from_json(_load_json(path), tol)


def _grid(args, default=None):
    if getattr(args, "theta", None) is not None:
        return [args.theta]
    n = args.grid if getattr(args, "grid", None) is not None else default
    return list(np.linspace(0.0, np.pi / 2, n)) if n else []


def _digest(argv, files) -> str:
    h = hashlib.sha256()
    h.update("\0".join(argv).encode())
    for f in files:
        h.update(b"\0")
        h.update(Path(f).read_bytes())
    return h.hexdigest()


# -- commands ----------------------------------------------------------------------

def cmd_decompose(args):
    p, q = _proj(args.p, args.tol), _proj(args.q, args.tol)
    form = halmos_decompose(p, q)
    rp, rq = reconstruct(form)
    out = form_to_json(form)
    out["angles"] = list(principal_angles_from_form(form))
    return out, {"reconstruction": max(opnorm(rp.matrix - p.matrix), opnorm(rq.matrix - q.matrix))}


def cmd_gap(args):
    p, q = _proj(args.p, args.tol), _proj(args.q, args.tol)
    out, res = {}, {}
    if args.method in ("direct", "both"):
        out["direct"] = gap_direct(p, q)
    if args.method in ("formula", "both"):
        out["formula"] = gap_formula(p, q)
    if args.method == "both":
        res["direct_vs_formula"] = abs(out["direct"] - out["formula"])
    out["lower_bound"] = gap_lower_bound(p, q)
    return out, res


def cmd_geodesic(args):
    p, q = _proj(args.p, args.tol), _proj(args.q, args.tol)
    path = geo.geodesic(p, q)
    thetas = _grid(args, 9)
    res = {"start": opnorm(path.eval(0.0).matrix - p.matrix),
           "end": opnorm(path.eval(np.pi / 2).matrix - q.matrix)}
    if len(thetas) > 1:
        res["distance_law"] = geo.law_residual(path, thetas)
    return path_to_json(path, thetas), res


def cmd_midpoint(args):
    p, q = _proj(args.p, args.tol), _proj(args.q, args.tol)
    u = matrix_from_json(_load_json(args.u)) if args.u else None
    r = geo.midpoint_element(p, q, args.theta, u)
    return ({"R": projection_to_json(r), "rank": r.rank,
             "gap_to_p": gap_direct(r, p), "gap_to_q": gap_direct(r, q)},
            {"gap_to_p - sin": gap_direct(r, p) - np.sin(args.theta),
             "gap_to_q - cos": gap_direct(r, q) - np.cos(args.theta)})


def cmd_three_point(args):
    p, q, r = (_proj(x, args.tol) for x in (args.p, args.q, args.r))
    path = geo.three_point_geodesic(p, q, r)
    thetas = _grid(args, 9)
    res = {"start": opnorm(path.eval(0.0).matrix - p.matrix),
           "mid": opnorm(path.eval(np.pi / 4).matrix - r.matrix),
           "end": opnorm(path.eval(np.pi / 2).matrix - q.matrix)}
    if len(thetas) > 1:
        res["distance_law"] = geo.law_residual(path, thetas)
    out = path_to_json(path, thetas)
    out["complemented"] = path.complemented
    return out, res


def _reparam(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError:
        d = _load_json(text)
    return geo.ReparamFunction.from_dict(d)


def cmd_branch(args):
    params = json.loads(args.params) if args.params else {}
    if args.seed is not None:
        params["seed"] = args.seed
        params["field"] = args.field
    pair = geo.branching_pair(args.config, params, _reparam(args.f1), _reparam(args.f2))
    thetas = _grid(args, 33)
    return ({"R": projection_to_json(pair.midpoint), "separation": pair.separation,
             "first": path_to_json(pair.first, thetas), "second": path_to_json(pair.second, thetas)},
            {"first_distance_law": geo.law_residual(pair.first, thetas),
             "second_distance_law": geo.law_residual(pair.second, thetas),
             "midpoint_mismatch": opnorm(pair.first.eval(np.pi / 4).matrix
                                         - pair.second.eval(np.pi / 4).matrix)})


def cmd_chain(args):
    p, q = _proj(args.p, args.tol), _proj(args.q, args.tol)
    model = AdmissibilityModel(p.dim, args.margin)
    build = perp_chain if args.relation == "perp" else sharp_chain
    chain = build(p, q, model)
    return chain_to_json(chain), {"valid": 0.0 if validate_chain(chain, model) else 1.0,
                                  "max_link": max(chain.residuals)}


def cmd_edmon(args):
    p, q, r = (_proj(x, args.tol) for x in (args.p, args.q, args.r))
    x = matrix_from_json(_load_json(args.x)).reshape(-1)
    cert = geo.edmon_extract(p, q, r, x, args.theta)
    return {"y": matrix_to_json(cert.y.reshape(-1, 1)), "ok": cert.ok()}, cert.residuals


def cmd_verify_map(args):
    spec = spec_from_json(_load_json(args.spec))
    ps = sample_projections(spec.dim, args.samples, args.seed, spec.field)
    resid = isometry_residual([(p, apply_isometry(spec, p)) for p in ps])
    return {"kind": spec.kind, "normalized": spec.normalized, "samples": args.samples}, \
        {"isometry": resid}


_ORACLES = {
    "identity": lambda p: p,
    "complement": complement,
    "conjugate": lambda p: Projection(p.matrix.conj(), p.rank),
}


def cmd_classify(args):
    if args.spec:
        spec = spec_from_json(_load_json(args.spec))
        oracle, n, fld = (lambda p: apply_isometry(spec, p)), spec.dim, args.field
    else:
        if args.n is None:
            raise UsageError("classify: --n is required with --oracle")
        oracle, n, fld = _ORACLES[args.oracle], args.n, args.field
    rep = classify_map(oracle, n, fld, args.samples, args.seed)
    return ({"spec": spec_to_json(rep.spec), "ambiguous": rep.ambiguous,
             "per_kind": rep.residuals},
            {"fit": rep.residual})


def cmd_counterexample(args):
    rep = orthogonality_counterexample(args.k)
    return ({"PQ_zero": rep.orthogonal_before, "phiP_phiQ_zero": rep.orthogonal_after,
             "orthogonal": [rep.orthogonal_before, rep.orthogonal_after],
             "sim": [rep.sim_before, rep.sim_after],
             "gap": [rep.gap_before, rep.gap_after]},
            {"||PQ||": rep.pq_norm, "||phiP phiQ||": rep.phi_product_norm})


def cmd_stratum(args):
    p = _proj(args.p, args.tol)
    lab = stratum(p, AdmissibilityModel(p.dim, args.margin))
    return {"kind": lab.kind, "n": lab.n, "rank": p.rank, "label": str(lab)}, {}


def cmd_connect(args):
    p, q = _proj(args.p, args.tol), _proj(args.q, args.tol)
    ch = connect_chain_lt1(p, q)
    return ({"nodes": [projection_to_json(x) for x in ch.nodes], "links": list(ch.links),
             "delta": ch.delta}, {"max_link": max(ch.links)})


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="grassgap", description="Gap-metric geometry of projections.",
                 epilog=SCHEMA, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--timing", action="store_true",
                    help="record wall time in the report (breaks byte-identical output)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, fn, help_, files=("p", "q")):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        for f in files:
            sp.add_argument(f"--{f}", required=True, metavar="FILE", help=f"matrix JSON for {f.upper()}")
        sp.add_argument("--tol", type=float, default=TOL_PROJ, help="projection validation tolerance")
        return sp

    cmd("decompose", cmd_decompose, "canonical two-projection form")
    sp = cmd("gap", cmd_gap, "gap metric")
    sp.add_argument("--method", choices=("direct", "formula", "both"), default="both")
    for name, fn, files in (("geodesic", cmd_geodesic, ("p", "q")),
                            ("three-point", cmd_three_point, ("p", "q", "r"))):
        sp = cmd(name, fn, f"{name} curve sampled at --theta or on --grid points", files)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--theta", type=float)
        g.add_argument("--grid", type=int)
    sp = cmd("midpoint", cmd_midpoint, "element of the midpoint set")
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--u", metavar="FILE", help="matrix JSON for U (default identity)")

    sp = sub.add_parser("branch", help="two distinct curves through the same three points")
    sp.set_defaults(func=cmd_branch)
    sp.add_argument("--config", required=True, choices=[c.value for c in geo.BranchConfig])
    sp.add_argument("--params", help='JSON object, e.g. {"l": 1, "h3": 2, "h4": 2, "sines": [0.5]}')
    sp.add_argument("--f1", required=True, help="reparam JSON (inline or file)")
    sp.add_argument("--f2", required=True, help="reparam JSON (inline or file)")
    sp.add_argument("--grid", type=int)
    sp.add_argument("--seed", type=int, help="conjugate by a Haar unitary drawn from this seed")
    sp.add_argument("--field", choices=("real", "complex"), default="real")

    sp = cmd("chain", cmd_chain, "orthogonal or sharp chain")
    sp.add_argument("--relation", choices=("perp", "sharp"), default="perp")
    sp.add_argument("--margin", type=int, default=3)
    sp = cmd("edmon", cmd_edmon, "recover y from R and a fixed vector x", ("p", "q", "r"))
    sp.add_argument("--x", required=True, metavar="FILE", help="matrix JSON (N x 1) for x")
    sp.add_argument("--theta", type=float, required=True)

    sp = sub.add_parser("verify-map", help="isometry residual of a map on random samples")
    sp.set_defaults(func=cmd_verify_map)
    sp.add_argument("--spec", required=True, metavar="FILE")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("classify", help="recover the kind and unitary of a map")
    sp.set_defaults(func=cmd_classify)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", metavar="FILE", help="map JSON used as the oracle")
    src.add_argument("--oracle", choices=sorted(_ORACLES))
    sp.add_argument("--n", type=int, help="dimension (with --oracle)")
    sp.add_argument("--field", choices=("real", "complex"), default="complex")
    sp.add_argument("--samples", type=int, default=8)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("counterexample", help="orthogonality is not preserved by P -> I - P")
    sp.set_defaults(func=cmd_counterexample)
    sp.add_argument("--k", type=int, default=1)

    sp = cmd("stratum", cmd_stratum, "rank stratum of a projection", ("p",))
    sp.add_argument("--margin", type=int, default=3)
    cmd("connect", cmd_connect, "chain of links with gap below one")
    return ap


def _input_files(args):
    names = ("p", "q", "r", "u", "x", "spec")
    return [getattr(args, n) for n in names if getattr(args, n, None)]


def run(argv=None, stdout=None, stderr=None) -> int:
    """Execute one command; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=stderr)
        parser.print_help(stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    start = time.perf_counter()
    report = {"command": args.command}
    try:
        files = _input_files(args)
        report["inputs"] = {"digest": _digest([a for a in argv if a != args.out], files),
                            "files": files}
        outputs, residuals = args.func(args)
        report.update(outputs=outputs, residuals=residuals)
        code = EXIT_OK
    except UsageError as exc:
        print(str(exc), file=stderr)
        parser.print_help(stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_PRECONDITION
    except NumericalError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_NUMERICAL
    except OSError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_PRECONDITION
    report["elapsed"] = time.perf_counter() - start if args.timing else None
    text = dumps(report) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
