"""Command-line interface: ``gdspec <subcommand> ...``.

Output is JSON by default with sorted keys, so identical invocations
produce identical bytes.  Exact rationals appear as "p/q" strings next to
a parallel ``*_float`` field.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from gdspec.drg import SpectralPolynomialSet, SpectralTable, spectral_polynomials, spectral_table
from gdspec.errors import GdspecError, OutOfRange, UnknownGraph, UnsupportedFamily
from gdspec.families import (
    CROWN_NOTE,
    FamilySpec,
    closed_form_phi,
    crown_uniform_pd,
    intersection_array,
    parse_family,
    srg_uniform_pd,
    taylor_uniform_pd,
)

log = logging.getLogger("gdspec")

PARSE_ERRORS = (UnknownGraph, OutOfRange, UnsupportedFamily)
TABLE_GRAPHS = ("hamming:8,2", "cubic:heawood", "cubic:pappus", "cubic:desargues", "cubic:dodecahedral")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def rat(x) -> Optional[str]:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return None


def put(out: dict, key: str, value) -> None:
    """Store ``value`` as exact strings (when rational) plus a float field."""
    if isinstance(value, (list, tuple)):
        exact = [rat(v) for v in value]
        out[key] = exact if all(e is not None for e in exact) else None
        out[key + "_float"] = [float(v) for v in value]
    else:
        out[key] = rat(value)
        out[key + "_float"] = float(value)


def dump(obj, fmt: str) -> str:
    if fmt == "text":
        return "".join(f"{k}: {v}\n" for k, v in sorted(obj.items())) if isinstance(obj, dict) else f"{obj}\n"
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def phi_to_dict(phis: SpectralPolynomialSet) -> dict:
    polys = []
    for p in phis:
        entry = {"mult": p.mult}
        put(entry, "coeffs", list(p.exact) if p.exact is not None else list(p.coeffs))
        polys.append(entry)
    return {"polynomials": polys, "conjectured": phis.conjectured, "note": phis.note,
            "order": phis.order, "degree": phis.degree}


def table_to_dict(table: SpectralTable) -> dict:
    out = {"intersection_array": table.ia.to_dict(), "shells": list(table.shells.n),
           "order": table.order, "exact": table.is_exact()}
    out.update(table.to_dict())
    out["lambdas_exact"] = [rat(x) if x is not None else None for x in table.exact_lambdas]
    out["coeff_exact"] = [[rat(v) for v in row] if row is not None else None
                          for row in table.exact_coeff]
    return out


def _family(text: str) -> FamilySpec:
    return parse_family(text)


def _table(args) -> SpectralTable:
    if getattr(args, "array", None):
        from gdspec.drg import IntersectionArray

        b, _, c = args.array.partition(";")
        try:
            ia = IntersectionArray(tuple(int(x) for x in b.split(",")), tuple(int(x) for x in c.split(",")))
        except ValueError as exc:
            raise UsageError(f"bad intersection array {args.array!r}: {exc}") from exc
        return spectral_table(ia, strict=not args.lenient)
    if not args.family:
        raise UsageError("need --family or --array")
    return spectral_table(intersection_array(_family(args.family)), strict=not args.lenient)


def _floats(text: str) -> list[float]:
    try:
        return [float(Fraction(x)) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number list {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    sys.stdout.write(dump(table_to_dict(_table(args)), args.format))
    return 0


def cmd_phi(args) -> int:
    table = _table(args)
    phis = spectral_polynomials(table)
    out = phi_to_dict(phis)
    if args.family:
        try:
            closed = closed_form_phi(_family(args.family))
            out["closed_form"] = phi_to_dict(closed)
            out["closed_form_matches"] = closed.matches(phis, tol=1e-9)
        except GdspecError as exc:
            out["closed_form"] = None
            out["closed_form_note"] = str(exc)
    if args.format == "text":
        lines = []
        for p in phis:
            terms = " + ".join(f"({rat(c) or f'{c:.10g}'})z^{m}"
                               for m, c in enumerate(p.exact if p.exact is not None else p.coeffs))
            lines.append(f"[{p.mult}] {terms}\n")
        sys.stdout.write("".join(lines))
    else:
        sys.stdout.write(dump(out, args.format))
    if out.get("closed_form_matches") is False:
        return 1
    return 0


def cmd_positivity(args) -> int:
    from gdspec.positivity import positivity_report

    table = _table(args)
    report = positivity_report(table, spectral_polynomials(table))
    out = report.to_dict()
    if args.family:
        spec = _family(args.family)
        if spec.kind == "srg":
            v = srg_uniform_pd(*spec.params)
            out["srg"] = {"uniform": v.uniform, "theta": v.theta, "tau": v.tau,
                          "condition_holds": v.condition_holds, "z_star": v.z_star,
                          "interval_bound": v.interval_bound}
        elif spec.kind in ("taylor", "crown"):
            v = crown_uniform_pd(*spec.params) if spec.kind == "crown" else taylor_uniform_pd(*spec.params)
            out["taylor"] = {"uniform": v.uniform, "theta_plus": v.theta.theta_plus,
                             "theta_minus": v.theta.theta_minus,
                             "criterion_holds": v.criterion_holds, "triple_root": v.triple_root}
            if spec.kind == "crown":
                out["note"] = CROWN_NOTE
    sys.stdout.write(dump(out, args.format))
    return 0


def _markov_row(sol, table: SpectralTable) -> dict:
    row = {"d_prime": sol.d_prime, "kind": sol.kind, "active_rows": list(sol.active_eigenrows),
           "exact": sol.exact}
    put(row, "nu_max" if sol.kind == "dtmc" else "gap", sol.value)
    put(row, "mu" if sol.kind == "dtmc" else "rho", list(sol.weights.weights))
    put(row, "per_vertex", list(sol.per_vertex))
    return row


def _markov_csv(rows: list[dict], graph: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph", "d_prime", "value", "weights", "per_vertex"])
    for r in rows:
        key = "nu_max" if r["kind"] == "dtmc" else "gap"
        wkey = "mu" if r["kind"] == "dtmc" else "rho"
        val = r[key] or f"{r[key + '_float']:.12g}"
        ws = r[wkey] or [f"{x:.12g}" for x in r[wkey + "_float"]]
        pv = r["per_vertex"] or [f"{x:.12g}" for x in r["per_vertex_float"]]
        w.writerow([graph, r["d_prime"], val, " ".join(ws), " ".join(pv)])
    return buf.getvalue()


def _markov_rows(table: SpectralTable, dprimes, ctmc: bool) -> list[dict]:
    from gdspec.markov import solve_ctmc, solve_dtmc

    solve = solve_ctmc if ctmc else solve_dtmc
    return [_markov_row(solve(table, dp), table) for dp in dprimes]


def cmd_markov(args) -> int:
    table = _table(args)
    dprimes = [args.dprime] if args.dprime else list(range(1, table.d + 1))
    rows = _markov_rows(table, dprimes, args.ctmc)
    if args.format == "csv":
        sys.stdout.write(_markov_csv(rows, args.family or args.array))
    elif args.dprime:
        sys.stdout.write(dump(rows[0], args.format))
    else:
        sys.stdout.write(dump({"graph": args.family or args.array, "rows": rows}, args.format))
    return 0


def cmd_tables(args) -> int:
    out = {}
    csv_parts = []
    for name in args.graphs or TABLE_GRAPHS:
        table = spectral_table(intersection_array(_family(name)))
        rows = _markov_rows(table, range(1, table.d + 1), args.ctmc)
        out[name] = rows
        csv_parts.append(_markov_csv(rows, name))
    if args.format == "csv":
        head, *rest = csv_parts[0].splitlines(keepends=True)
        sys.stdout.write(head + "".join(rest) + "".join(
            "".join(p.splitlines(keepends=True)[1:]) for p in csv_parts[1:]))
    else:
        sys.stdout.write(dump(out, args.format))
    return 0


def cmd_product(args) -> int:
    from gdspec.products import product_spectrum

    if len(args.family) < 2:
        raise UsageError("product needs at least two --family arguments")
    factors = [spectral_polynomials(spectral_table(intersection_array(_family(f)))) for f in args.family]
    prod = product_spectrum(factors)
    out = phi_to_dict(prod.combined)
    out["factors"] = list(args.family)
    out["candidate_count"] = prod.candidate_count
    out["distinct_count"] = prod.distinct_count
    status = 0
    if args.check:
        from gdspec.verify import verify_linearity

        rep = verify_linearity("*".join(args.family), trials=args.trials, seed=args.seed)
        out["check"] = rep.to_dict()
        status = 0 if rep.ok else 1
    sys.stdout.write(dump(out, args.format))
    return status


def cmd_glvc(args) -> int:
    from gdspec import glvc

    if args.verb == "stabilize":
        spec = _family(args.family)
        if spec.kind != "hamming" or spec.params[1] != 2:
            raise UsageError("stabilize uses the point-mutation kernel and needs hamming:d,2")
        rep = glvc.stabilizing_mutation(spec.params[0], _floats(args.f))
        out = {"mu_star": rep.mu_star, "stable_at_zero": rep.stable_at_zero,
               "stable_at_half": rep.stable_at_half, "route_max_at_star": rep.route_max_at_star,
               "dense_max_at_star": rep.dense_max_at_star,
               "grid": [list(p) for p in rep.grid]}
        sys.stdout.write(dump(out, args.format))
        return 0 if rep.stable_at_half else 1

    graph = args.family
    f = _floats(args.f)
    g = None
    if args.mu is not None:
        spec = _family(graph)
        if spec.kind != "hamming" or spec.params[1] != 2:
            raise UsageError("--mu uses the point-mutation kernel and needs hamming:d,2")
        g = glvc.point_mutation_kernel(spec.params[0], args.mu)
    elif args.g:
        g = _floats(args.g)
    system = glvc.build_system(graph, f, g, normalize=args.normalize)

    if args.verb == "jacobian":
        _, v = glvc.jacobian(system)
        out = {"jacobian_eigen_max": v.jacobian_eigen_max, "stable": v.stable,
               "matrix_route_eigen_max": v.matrix_route_eigen_max,
               "nonprincipal_max": v.nonprincipal_max,
               "route_nonprincipal_max": v.route_nonprincipal_max,
               "r": float(system.r[0])}
        sys.stdout.write(dump(out, args.format))
        return 0

    rng = np.random.default_rng(args.seed)
    x0 = system.x_star * (1.0 + args.perturb * rng.uniform(-1.0, 1.0, system.n))
    traj = glvc.integrate(system, x0, args.t_end, args.dt, record_every=args.every)
    if args.format == "json":
        out = {"t": traj.t.tolist(), "x": traj.x.tolist(),
               "final_distance": float(np.max(np.abs(traj.x[-1] - system.x_star)))}
        sys.stdout.write(dump(out, "json"))
    else:
        sys.stdout.write(traj.to_csv())
    return 0


def cmd_verify(args) -> int:
    from gdspec.oracle import read_edgelist
    from gdspec.verify import verify_linearity

    if args.edges:
        graph = read_edgelist(Path(args.edges))
    elif args.graph:
        graph = args.graph
    else:
        raise UsageError("need --graph or --edges")
    rep = verify_linearity(graph, trials=args.trials, seed=args.seed)
    sys.stdout.write(dump(rep.to_dict(), args.format))
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdspec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True, formats=("json", "text"), default="json"):
        if family:
            p.add_argument("--family", help="family spec, e.g. hamming:8,2 or cubic:heawood")
            p.add_argument("--array", help="intersection array 'b0,b1,..;c1,c2,..'")
            p.add_argument("--lenient", action="store_true",
                           help="accept non-integral multiplicities")
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("spectrum", help="eigenvalues, multiplicities and lambda_{i,m}")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("phi", help="spectral polynomials Phi(z;G)")
    common(p)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("positivity", help="positive-definiteness report")
    common(p)
    p.set_defaults(func=cmd_positivity)

    p = sub.add_parser("markov", help="fastest-mixing step distribution")
    common(p, formats=("json", "csv", "text"))
    p.add_argument("--dprime", type=int, help="longest allowed step (default: all)")
    p.add_argument("--ctmc", action="store_true", help="continuous-time spectral gap")
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("tables", help="mixing tables for H(8,2) and the cubic graphs")
    common(p, family=False, formats=("json", "csv"))
    p.add_argument("--graphs", nargs="*", help="family specs (default: the standard set)")
    p.add_argument("--ctmc", action="store_true")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("product", help="Phi of a Cartesian product")
    p.add_argument("--family", action="append", default=[], help="factor (repeat)")
    p.add_argument("--check", action="store_true", help="compare with a dense oracle")
    p.add_argument("--trials", type=int, default=20)
    common(p, family=False)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("glvc", help="Lotka-Volterra competition dynamics")
    p.add_argument("verb", choices=("simulate", "jacobian", "stabilize"))
    p.add_argument("--family", required=True)
    p.add_argument("--f", required=True, help="competition vector f_0,..,f_d")
    p.add_argument("--g", help="mutation vector g_0,..,g_d")
    p.add_argument("--mu", type=float, help="point-mutation rate on hamming:d,2")
    p.add_argument("--normalize", action="store_true", help="rescale g to unit row sums")
    p.add_argument("--t-end", type=float, default=20.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--every", type=int, default=10, help="record every k-th step")
    p.add_argument("--perturb", type=float, default=0.01)
    common(p, family=False, formats=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_glvc)

    p = sub.add_parser("verify", help="theory vs dense oracle on random f")
    p.add_argument("--graph", help="family spec; join factors with '*' for products")
    p.add_argument("--edges", help="edge-list file (one 'u v' pair per line)")
    p.add_argument("--trials", type=int, default=20)
    common(p, family=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, *PARSE_ERRORS) as exc:
        sys.stderr.write(f"gdspec: error: {exc}\n")
        return 2
    except (GdspecError, AssertionError, ValueError) as exc:
        sys.stderr.write(f"gdspec: failed: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
