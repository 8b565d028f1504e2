"""Command-line interface: ``magheight <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import catalog
from .bounds import BoundViolation, bound_report
from .constructions import (add_edge, bridge_join, cartesian_product, cyclic_lift, lift_spectrum_check,
                            split_vertex, subdivide_edge, suspension)
from .curvature import curvature_report
from .families import complete_family, cycle_family, tree_suspension_potential, verify_family, wheel_family
from .graph import Graph, GraphError, ParseError, is_regular, load_graph, summary
from .potential import TWO_PI, MagneticPotential, anti_balanced, trivial
from .solver import SolverConfig, nu_estimate
from .spectra import HolonomyLaplacian, eigenvalues, standard_laplacian

SEED_ENV = "MAGHEIGHT_SEED"
DIGITS = 12

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_BOUND = 2


class WrongBetti(ValueError):
    pass


def fmt(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def _round(obj):
    """Round floats to 12 significant digits for output."""
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return str(obj)
        return float(fmt(obj))
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def emit(obj: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    obj = _round(obj)
    if as_json:
        out.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")
        return
    for key, val in obj.items():
        if isinstance(val, (dict, list)):
            val = json.dumps(val)
        out.write(f"{key}: {val}\n")


def read_graph(arg: str) -> Graph:
    """A path to an edge-list or JSON file, or the name of a bundled fixture."""
    p = Path(arg)
    if p.exists():
        return load_graph(p)
    name = p.name.split(".")[0]
    if name in catalog.FIXTURES:
        return catalog.fixture(name)
    raise ParseError(f"no such graph file or fixture: {arg}")


def read_potential(arg: str | None, g: Graph) -> MagneticPotential:
    if arg is None or arg == "trivial":
        return trivial(g)
    if arg == "anti-balanced":
        return anti_balanced(g)
    text = Path(arg).read_text() if Path(arg).exists() else arg
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad potential JSON: {exc}") from exc
    angles = data["angles"] if isinstance(data, dict) else data
    if len(angles) != g.n_edges:
        raise ParseError(f"potential has {len(angles)} angles, graph has {g.n_edges} edges")
    return MagneticPotential(angles)


def solver_config(args) -> SolverConfig:
    seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV, "0"))
    return SolverConfig(grid_points_per_dim=args.grid, n_multistarts=args.starts, rng_seed=seed,
                        workers=args.workers)


def spectral_gap(g: Graph) -> float:
    w = np.linalg.eigvalsh(standard_laplacian(g))
    return float(w[1]) if len(w) > 1 else 0.0


# subcommands ------------------------------------------------------------


def cmd_nu(args) -> int:
    g = read_graph(args.graph)
    t0 = time.perf_counter()
    est = nu_estimate(g, solver_config(args))
    report = {"graph": summary(g), "nu": est.to_json(), "spectral_gap": spectral_gap(g)}
    try:
        rep = bound_report(g, est)
        report["bounds"] = rep.to_json()
        status = EXIT_OK
    except BoundViolation as exc:
        report["bounds"] = exc.report.to_json()
        report["violations"] = exc.violations
        status = EXIT_BOUND
    if args.timing:
        report["timing_s"] = time.perf_counter() - t0
    emit(report, args.json)
    return status


def cmd_bounds(args) -> int:
    g = read_graph(args.graph)
    est = nu_estimate(g, solver_config(args))
    try:
        rep = bound_report(g, est)
    except BoundViolation as exc:
        emit({**exc.report.to_json(), "violations": exc.violations}, args.json)
        return EXIT_BOUND
    emit(rep.to_json(), args.json)
    return EXIT_OK


def curves_table(g: Graph, samples: int) -> tuple[list[str], np.ndarray]:
    lap = HolonomyLaplacian(g)
    b1 = lap.dim
    if b1 not in (1, 2):
        raise WrongBetti(f"curves need b1 in {{1, 2}}, got {b1}")
    axis = np.linspace(0.0, TWO_PI, samples)
    if b1 == 1:
        params = axis.reshape(-1, 1)
        head = ["t"]
    else:
        aa, bb = np.meshgrid(axis, axis, indexing="ij")
        params = np.column_stack([aa.ravel(), bb.ravel()])
        head = ["alpha", "beta"]
    vals = np.array([np.linalg.eigvalsh(lap.matrix(p)) for p in params])
    head += [f"lambda{i + 1}" for i in range(g.n_vertices)]
    return head, np.hstack([params, vals])


def cmd_curves(args) -> int:
    g = read_graph(args.graph)
    head, table = curves_table(g, args.samples)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(head)
    for row in table:
        writer.writerow([fmt(v) for v in row])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_families(args) -> int:
    if args.family == "tree-suspension":
        if not args.graph:
            raise ParseError("tree-suspension needs --graph")
        res = tree_suspension_potential(read_graph(args.graph))
    else:
        fn = {"cycle": cycle_family, "complete": complete_family, "wheel": wheel_family}[args.family]
        res = fn(args.d)
    out = res.to_json()
    out["verified"] = verify_family(res, 1e-8)
    emit(out, args.json)
    return EXIT_OK


def cmd_curvature(args) -> int:
    g = read_graph(args.graph)
    sigma = read_potential(args.potential, g)
    n = math.inf if args.n in ("inf", "infinity") else float(args.n)
    rows = curvature_report(g, sigma, args.K, n)
    emit({"K": args.K, "n": args.n, "global": all(r["cd"] for r in rows), "vertices": rows}, args.json)
    return EXIT_OK


def _pair(text: str) -> tuple[int, int]:
    a, b = text.split(",")
    return int(a), int(b)


def cmd_construct(args) -> int:
    g = read_graph(args.graph)
    op = args.op
    extra = {}
    if op == "add-edge":
        out = add_edge(g, *_pair(args.edge))
    elif op == "bridge":
        h = read_graph(args.other)
        u, v = _pair(args.edge)
        out = bridge_join(g, h, u, v)
    elif op == "split-vertex":
        part = [int(t) for t in args.part.split(",") if t] if args.part else []
        out = split_vertex(g, args.vertex, part)
    elif op == "subdivide":
        out = subdivide_edge(g, _pair(args.edge))
    elif op == "product":
        h = read_graph(args.other)
        out, sigma = cartesian_product(g, read_potential(args.potential, g), h, read_potential(args.other_potential, h))
        extra["potential"] = sigma.to_json()
    elif op == "suspend":
        out = suspension(g)
    elif op == "lift":
        lg = cyclic_lift(g, read_potential(args.potential, g), args.k)
        out = lg.lift
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(op)
    if args.json:
        emit({"graph": out.to_json(), **extra}, True)
    else:
        sys.stdout.write(out.to_edgelist())
    return EXIT_OK


def cmd_lift(args) -> int:
    g = read_graph(args.graph)
    if args.exponents:
        exps = [int(t) for t in args.exponents.split(",")]
        if len(exps) != g.n_edges:
            raise ParseError(f"need {g.n_edges} exponents, got {len(exps)}")
        sigma = MagneticPotential(np.array(exps) * (TWO_PI / args.k))
    else:
        sigma = read_potential(args.potential, g)
    lg = cyclic_lift(g, sigma, args.k)
    emit({"k": args.k, "lift": lg.lift.to_json(), "spectrum_check": lift_spectrum_check(lg)}, args.json)
    return EXIT_OK


def cospectral_demo(cfg: SolverConfig) -> dict:
    w6, gh = catalog.fixture("w6"), catalog.fixture("ghat")
    sw, sg = np.linalg.eigvalsh(standard_laplacian(w6)), np.linalg.eigvalsh(standard_laplacian(gh))
    target = np.array([0, 2, 2, 4, 4, 5, 7], dtype=float)
    cospectral = bool(np.max(np.abs(sw - sg)) < 1e-8 and np.max(np.abs(sw - target)) < 1e-8)
    nu_w6 = nu_estimate(w6, cfg)
    nu_gh = nu_estimate(gh, cfg)
    sig = float(eigenvalues(gh, catalog.ghat_signature(gh))[0])
    floor = (7 - math.sqrt(17)) / 2
    result = {
        "cospectral": cospectral,
        "standard_spectrum": [float(v) for v in sw],
        "nu_w6": nu_w6.value,
        "nu_ghat": nu_gh.value,
        "ghat_signature_lambda1": sig,
        "distinguished": bool(nu_gh.value >= floor - 1e-6 > nu_w6.value),
    }
    if not (cospectral and result["distinguished"]):
        raise AssertionError(f"cospectral demo failed: {result}")
    return result


def cmd_cospectral(args) -> int:
    emit(cospectral_demo(solver_config(args)), args.json)
    return EXIT_OK


def cmd_gap_compare(args) -> int:
    g = read_graph(args.graph)
    est = nu_estimate(g, solver_config(args))
    gap = spectral_gap(g)
    out = {"lambda2": gap, "nu": est.value, "ratio": est.value / gap if gap > 0 else None}
    if g.n_vertices and is_regular(g):
        d = g.degree(0)
        lam_n = float(np.linalg.eigvalsh(standard_laplacian(g))[-1])
        abal = float(eigenvalues(g, anti_balanced(g))[0])
        out.update({"degree": d, "2d_minus_lambdaN": 2 * d - lam_n, "lambda1_anti_balanced": abal,
                    "identity_holds": abs(2 * d - lam_n - abal) <= 1e-9})
    emit(out, args.json)
    return EXIT_OK


# parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magheight", description="Magneto-spectral height of finite graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, solver=False):
        p.add_argument("--json", action="store_true", help="emit JSON instead of key: value lines")
        if solver:
            p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
            p.add_argument("--starts", type=int, default=50, help="number of multistarts")
            p.add_argument("--grid", type=int, default=24, help="grid points per dimension")
            p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("nu", help="estimate nu(G) with bounds")
    p.add_argument("graph")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    common(p, True)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("bounds", help="bound report around the estimate")
    p.add_argument("graph")
    common(p, True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("curves", help="eigenvalue curves over the holonomy torus as CSV")
    p.add_argument("graph")
    p.add_argument("--samples", type=int, default=361)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("families", help="closed-form family results")
    p.add_argument("--family", choices=["cycle", "complete", "wheel", "tree-suspension"], required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--graph", help="tree for tree-suspension")
    common(p)
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("curvature", help="CD(K, n) check per vertex")
    p.add_argument("graph")
    p.add_argument("--potential", help="'trivial', 'anti-balanced', or JSON angles / file")
    p.add_argument("--K", type=float, default=0.0)
    p.add_argument("--n", default="inf")
    common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("construct", help="graph constructions")
    p.add_argument("graph")
    p.add_argument("--op", required=True,
                   choices=["add-edge", "bridge", "split-vertex", "subdivide", "product", "suspend", "lift"])
    p.add_argument("--edge", help="u,v")
    p.add_argument("--other", help="second graph for bridge/product")
    p.add_argument("--vertex", type=int)
    p.add_argument("--part", help="comma-separated neighbours kept by the split vertex")
    p.add_argument("--potential")
    p.add_argument("--other-potential")
    p.add_argument("--k", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("lift", help="cyclic k-lift and its spectrum check")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--exponents", help="comma-separated S_k exponents per canonical edge")
    p.add_argument("--potential")
    common(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("cospectral-demo", help="W6 versus G-hat")
    common(p, True)
    p.set_defaults(func=cmd_cospectral)

    p = sub.add_parser("gap-compare", help="spectral gap versus nu")
    p.add_argument("graph")
    common(p, True)
    p.set_defaults(func=cmd_gap_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, WrongBetti, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
