"""Command-line front end: graph inspection, Dirichlet experiments,
isoperimetric profiles, spanning-line search, random-walk contrast, and
canned reproduction suites.

Exit codes: 0 success, 1 a verdict failed (or the search proved the
target absent), 2 usage or descriptor error, 3 budget or timeout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .descriptors import DescriptorError, parse_descriptor
from .graphs import (
    DEFAULT_VERTEX_BUDGET,
    BudgetExceededError,
    ball,
    edge_list_text,
    end_estimate,
    graph_distances,
    vertex_table_text,
)
from .isoperimetry import default_family, growth_exponent, iso_profile
from .keys import format_key
from .potential import (
    DirichletProblem,
    NonConvergenceError,
    SPLIT_RULES,
    harmonic_residual,
    oscillation_probe,
    annulus_capacity,
    p_energy,
    solve_dirichlet,
)
from .report import ExperimentReport, dirichlet_json, fmt_value, write_csv
from .spanning import find_spanning_line
from .walks import WalkConfig, liouville_contrast
from .graphs import (
    grid_graph,
    lamplighter,
    line_graph,
    path_graph,
    free_group_graph,
)
from .keys import IntPoint

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

OSCILLATION_SUITE = "lamplighter-oscillation"
GROWTH_SUITE = "product-growth"


def _resolve_budget(args):
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("LAMPHARM_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DescriptorError(
                f"LAMPHARM_BUDGET must be an integer, got {env!r}"
            )
    return DEFAULT_VERTEX_BUDGET


def _load_descriptor(text):
    """Descriptor argument: inline JSON (starts with '{') or a file path."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return json.loads(stripped), parse_descriptor(stripped)
    with open(text) as fh:
        desc = json.load(fh)
    return desc, parse_descriptor(desc)


def _write_report(report, args, stem):
    out_dir = getattr(args, "out_dir", None)
    if out_dir is None:
        return
    os.makedirs(out_dir, exist_ok=True)
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        path = os.path.join(out_dir, f"{stem}.json")
        with open(path, "w") as fh:
            fh.write(report.to_json() + "\n")
    else:
        path = os.path.join(out_dir, f"{stem}.csv")
        with open(path, "w") as fh:
            fh.write(report.to_csv())
    print(f"wrote {path}")


def _echo_verdicts(report):
    for name, v in report.verdicts.items():
        state = "pass" if v["passed"] else "FAIL"
        print(
            f"[{state}] {name}: value {fmt_value(v['value'])} "
            f"vs threshold {v['threshold']}"
        )


def cmd_build_graph(args):
    desc, G = _load_descriptor(args.descriptor)
    budget = _resolve_budget(args)
    R = args.radius
    print(f"family: {G.name}")
    print(f"degree bound: {G.degree_bound}")
    print(f"origin: {format_key(G.origin)}")
    sizes = []
    for r in range(1, R + 1):
        g = ball(G, G.origin, r, budget=budget)
        sizes.append((r, g.n, g.n_edges()))
    print("R |B_R| edges")
    for r, n, m in sizes:
        print(f"{r} {n} {m}")
    inner = max(1, R // 2)
    ends = end_estimate(G, inner, R, budget=budget)
    print(f"end estimate (r={inner}, R={R}): {ends}")
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        g = ball(G, G.origin, R, budget=budget)
        epath = os.path.join(args.out_dir, "ball_edges.txt")
        vpath = os.path.join(args.out_dir, "ball_vertices.txt")
        with open(epath, "w") as fh:
            fh.write(edge_list_text(g))
        with open(vpath, "w") as fh:
            fh.write(vertex_table_text(g))
        print(f"wrote {epath}")
        print(f"wrote {vpath}")
    report = ExperimentReport(
        manifest={"command": "build-graph", "descriptor": desc, "radius": R}
    )
    report.add_series("ball_sizes", [(r, n) for r, n, _ in sizes])
    report.add_series("ball_edges", [(r, m) for r, _, m in sizes])
    report.add_series("end_estimate", [(R, ends)])
    _write_report(report, args, "build_graph")
    return EXIT_OK


def _boundary_from_file(path, g):
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        items = {int(k): float(v) for k, v in data.items()}
    else:
        items = {int(i): float(v) for i, v in data}
    return items


def cmd_solve(args):
    desc, G = _load_descriptor(args.descriptor)
    budget = _resolve_budget(args)
    g = ball(G, G.origin, args.radius, budget=budget)
    if args.boundary_file is not None:
        bvals = _boundary_from_file(args.boundary_file, g)
    else:
        rule = SPLIT_RULES[args.split]
        bvals = {
            int(i): float(rule(g.verts[i]))
            for i in np.where(g.boundary_mask)[0]
        }
    prob = DirichletProblem(
        g, bvals, p=args.p, tolerance=args.tolerance
    )
    sol = solve_dirichlet(prob)
    residual = harmonic_residual(sol, g)
    energy = p_energy(sol, g, args.p)
    dist = graph_distances(g, 0)
    inner = sol.values[dist <= args.radius // 2]
    osc = float(inner.max() - inner.min())
    print(f"vertices: {g.n}  boundary: {len(bvals)}")
    print(f"p: {args.p}  residual: {fmt_value(residual)}")
    print(f"energy: {fmt_value(energy)}")
    print(f"inner oscillation: {fmt_value(osc)}")
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, "solution.json")
        with open(path, "w") as fh:
            fh.write(
                dirichlet_json(
                    desc, args.radius, args.p, bvals, sol.values,
                    residual, energy,
                )
                + "\n"
            )
        print(f"wrote {path}")
    report = ExperimentReport(
        manifest={
            "command": "solve",
            "descriptor": desc,
            "radius": args.radius,
            "p": args.p,
            "tolerance": args.tolerance,
            "split": args.split if args.boundary_file is None else "file",
            "interpretation": (
                "probe of conditions (3_p)/(4_p): inner oscillation of the "
                "energy-minimizing extension of a two-valued boundary split"
            ),
        }
    )
    report.add_series(
        "solution_summary",
        [("residual", residual), ("energy", energy), ("oscillation", osc)],
    )
    _write_report(report, args, "solve")
    return EXIT_OK


def cmd_capacity(args):
    desc, G = _load_descriptor(args.descriptor)
    budget = _resolve_budget(args)
    cap = annulus_capacity(
        G, G.origin, args.inner, args.radius, p=args.p,
        tolerance=args.tolerance, budget=budget,
    )
    print(f"capacity(r={args.inner}, R={args.radius}, p={args.p}): "
          f"{fmt_value(cap)}")
    report = ExperimentReport(
        manifest={
            "command": "capacity",
            "descriptor": desc,
            "r": args.inner,
            "R": args.radius,
            "p": args.p,
            "tolerance": args.tolerance,
            "interpretation": (
                "probe of condition (2_p): decay of annulus capacity "
                "with the outer radius"
            ),
        }
    )
    report.add_series("capacity", [(args.radius, cap)])
    _write_report(report, args, "capacity")
    return EXIT_OK


def cmd_isoprofile(args):
    desc, G = _load_descriptor(args.descriptor)
    budget = _resolve_budget(args)
    d_list = [float(x) for x in args.d_list.split(",")]
    family = default_family(G, args.rmax, seed=args.seed, budget=budget)
    report = ExperimentReport(
        manifest={
            "command": "isoprofile",
            "descriptor": desc,
            "d_list": d_list,
            "rmax": args.rmax,
            "seed": args.seed,
            "interpretation": (
                "witness-based lower bounds for the IS_d inequality "
                "constant; growth exponent feeds the dimension hypothesis"
            ),
        }
    )
    rows = []
    for d in d_list:
        points = iso_profile(G, d, family)
        kappa = max(pt.ratio for pt in points)
        print(f"d={d}: witness kappa lower bound {fmt_value(kappa)} "
              f"over {len(points)} sets")
        report.add_series(
            f"kappa_d_{d:g}", [(pt.set_size, pt.ratio) for pt in points]
        )
        rows.extend(
            (pt.set_size, pt.boundary_size, pt.d, pt.ratio) for pt in points
        )
    est = growth_exponent(G, args.rmax, budget=budget)
    print(
        f"growth exponent: {fmt_value(est.exponent)} "
        f"CI [{fmt_value(est.ci_low)}, {fmt_value(est.ci_high)}] "
        f"superpolynomial: {est.superpolynomial}"
    )
    report.add_series(
        "growth",
        [
            ("exponent", est.exponent),
            ("ci_low", est.ci_low),
            ("ci_high", est.ci_high),
            ("superpolynomial", est.superpolynomial),
        ],
    )
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, "isoprofile.csv")
        write_csv(path, ["set_size", "boundary_size", "d", "ratio"], rows)
        print(f"wrote {path}")
    _write_report(report, args, "isoprofile")
    return EXIT_OK


def cmd_spanline(args):
    budget = _resolve_budget(args)
    if args.edge_list is not None:
        from .graphs import FiniteGraph

        edges = []
        n = 0
        with open(args.edge_list) as fh:
            for ln in fh:
                ln = ln.strip()
                if not ln:
                    continue
                u, v = (int(x) for x in ln.split())
                edges.append((u, v))
                n = max(n, u + 1, v + 1)
        g = FiniteGraph.from_edges(n, edges, boundary=[])
        desc = {"edge_list": args.edge_list}
    else:
        desc, G = _load_descriptor(args.descriptor)
        g = ball(G, G.origin, args.radius, budget=budget)
    limit = g.n + 1 if args.exact else None
    from . import spanning

    old_limit = spanning.EXACT_LIMIT
    if limit is not None:
        spanning.EXACT_LIMIT = limit
    try:
        res = find_spanning_line(
            g, args.k, time_budget=args.time_budget, seed=args.seed
        )
    finally:
        spanning.EXACT_LIMIT = old_limit
    print(f"status: {res.status}")
    if res.line is not None:
        keys = [format_key(g.verts[i]) for i in res.line.order]
        blob = {"k": res.line.k, "order": keys, "status": res.status}
    else:
        blob = {"k": args.k, "order": None, "status": res.status}
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, "spanline.json")
        with open(path, "w") as fh:
            json.dump(blob, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {path}")
    if res.status == "timeout":
        return EXIT_BUDGET
    if res.status == "proved_absent":
        return EXIT_VERDICT
    return EXIT_OK


def cmd_liouville(args):
    desc_a, GA = _load_descriptor(args.descriptor_a)
    desc_b, GB = _load_descriptor(args.descriptor_b)
    budget = _resolve_budget(args)
    cfg = WalkConfig(
        steps=args.steps,
        trials=args.trials,
        laziness=args.laziness,
        seed=args.seed,
    )
    rep = liouville_contrast(GA, GB, cfg, budget=budget)
    report = ExperimentReport(
        manifest={
            "command": "liouville",
            "descriptor_a": desc_a,
            "descriptor_b": desc_b,
            "steps": args.steps,
            "trials": args.trials,
            "laziness": args.laziness,
            "seed": args.seed,
            "interpretation": (
                "empirical probe of the bounded-harmonic (Liouville) "
                "dichotomy feeding condition (4_p): total-variation decay "
                "of paired walks versus a persistent plateau"
            ),
        }
    )
    for label, ser in (("graph_a", rep.liouville),
                       ("graph_b", rep.nonliouville)):
        print(f"{label} ({ser.graph}):")
        for t, tv, base in zip(ser.checkpoints, ser.tv, ser.baseline):
            print(f"  steps {t}: tv {fmt_value(tv)} baseline {fmt_value(base)}")
        report.add_series(f"{label}_tv", list(zip(ser.checkpoints, ser.tv)))
        report.add_series(
            f"{label}_baseline", list(zip(ser.checkpoints, ser.baseline))
        )
    sa = rep.liouville
    decay = sa.tv[0] - sa.tv[-1]
    base_drift = sa.baseline[0] - sa.baseline[-1]
    report.add_verdict(
        "tv_decay_beats_baseline",
        decay > base_drift,
        "TV margin between first and last checkpoints exceeds the "
        "split-half baseline's margin (TV sinks toward the noise floor)",
        decay - base_drift,
    )
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        for label, ser in (("a", rep.liouville), ("b", rep.nonliouville)):
            path = os.path.join(args.out_dir, f"liouville_{label}.csv")
            write_csv(
                path,
                ["steps", "tv", "baseline_tv", "trials"],
                [
                    (t, tv, base, args.trials)
                    for t, tv, base in zip(
                        ser.checkpoints, ser.tv, ser.baseline
                    )
                ],
            )
            print(f"wrote {path}")
    _echo_verdicts(report)
    _write_report(report, args, "liouville")
    return EXIT_OK if report.all_passed else EXIT_VERDICT


def _reproduce_oscillation(args):
    budget = _resolve_budget(args)
    G = lamplighter(path_graph(2), line_graph(), IntPoint((0,)))
    F = free_group_graph(2)
    report = ExperimentReport(
        manifest={
            "command": "reproduce",
            "suite": OSCILLATION_SUITE,
            "seed": args.seed,
            "interpretation": (
                "probe of conditions (3_p)/(4_p): oscillation of harmonic "
                "extensions of a sign split, on a fixed inner window as "
                "the boundary recedes (decay expected) and on the moving "
                "half-ball (recorded for contrast); plateau expected on "
                "the rank-2 free group"
            ),
        }
    )
    for p in (1.5, 2.0):
        fixed, moving = [], []
        for R in (4, 6, 8):
            osc_f, _ = oscillation_probe(
                G, G.origin, R, p, budget=budget, inner_radius=2
            )
            osc_m, en = oscillation_probe(G, G.origin, R, p, budget=budget)
            fixed.append((R, osc_f))
            moving.append((R, osc_m))
            print(f"lamplighter p={p} R={R}: fixed-window osc "
                  f"{fmt_value(osc_f)}  half-ball osc {fmt_value(osc_m)}  "
                  f"energy {fmt_value(en)}")
        report.add_series(f"lamplighter_fixed_window_p{p:g}", fixed)
        report.add_series(f"lamplighter_half_ball_p{p:g}", moving)
        drops = [a[1] - b[1] for a, b in zip(fixed, fixed[1:])]
        report.add_verdict(
            f"fixed_window_decay_p{p:g}",
            all(d > 1e-3 for d in drops),
            "oscillation strictly decreasing with margin 1e-3",
            min(drops),
        )
    free_vals = []
    for R in (3, 4, 5):
        osc, _ = oscillation_probe(F, F.origin, R, 2.0, budget=budget)
        free_vals.append((R, osc))
        print(f"free-group p=2 R={R}: osc {fmt_value(osc)}")
    report.add_series("free_group_half_ball_p2", free_vals)
    report.add_verdict(
        "free_group_plateau",
        all(v > 0.2 for _, v in free_vals),
        "oscillation stays above 0.2",
        min(v for _, v in free_vals),
    )
    line_caps = []
    for R in (4, 8, 16):
        cap = annulus_capacity(line_graph(), IntPoint((0,)), 1, R, p=2.0,
                               budget=budget)
        line_caps.append((R, cap))
        print(f"line capacity r=1 R={R}: {fmt_value(cap)}")
    report.add_series("line_capacity", line_caps)
    report.add_verdict(
        "line_capacity_closed_form",
        all(abs(c - 2.0 / (R - 1)) <= 1e-8 for R, c in line_caps),
        "matches 2/(R-1) within 1e-8",
        max(abs(c - 2.0 / (R - 1)) for R, c in line_caps),
    )
    grid_caps = []
    for R in (4, 8, 16):
        cap = annulus_capacity(grid_graph(2), IntPoint((0, 0)), 1, R, p=2.0,
                               budget=budget)
        grid_caps.append((R, cap))
        print(f"grid capacity r=1 R={R}: {fmt_value(cap)}")
    report.add_series("grid_capacity", grid_caps)
    report.add_verdict(
        "grid_capacity_decay",
        grid_caps[0][1] > grid_caps[1][1] > grid_caps[2][1],
        "strictly decreasing over R in {4, 8, 16}",
        grid_caps[-1][1],
    )
    return report


def _reproduce_growth(args):
    budget = _resolve_budget(args)
    report = ExperimentReport(
        manifest={
            "command": "reproduce",
            "suite": GROWTH_SUITE,
            "seed": args.seed,
            "interpretation": (
                "growth-dimension hypothesis behind the product "
                "construction, plus solver closed-form checks"
            ),
        }
    )
    est_grid = growth_exponent(grid_graph(2), 15, budget=budget)
    print(f"grid growth exponent @15: {fmt_value(est_grid.exponent)}")
    report.add_series(
        "grid_growth", list(zip(est_grid.radii,
                                (float(s) for s in est_grid.sizes)))
    )
    report.add_verdict(
        "grid_growth_dimension",
        abs(est_grid.exponent - 2.0) <= 0.15,
        "2.0 +/- 0.15",
        est_grid.exponent,
    )
    est_line = growth_exponent(line_graph(), 20, budget=budget)
    print(f"line growth exponent @20: {fmt_value(est_line.exponent)}")
    report.add_verdict(
        "line_growth_dimension",
        abs(est_line.exponent - 1.0) <= 0.1,
        "1.0 +/- 0.1",
        est_line.exponent,
    )
    from .graphs import direct_product

    est_prod = growth_exponent(
        direct_product(line_graph(), line_graph()), 15, budget=budget
    )
    print(f"line x line growth exponent @15: {fmt_value(est_prod.exponent)}")
    report.add_verdict(
        "product_additivity",
        abs(est_prod.exponent - est_grid.exponent) <= 0.2,
        "product exponent within 0.2 of the grid's",
        est_prod.exponent - est_grid.exponent,
    )
    G = lamplighter(path_graph(2), line_graph(), IntPoint((0,)))
    est_lamp = growth_exponent(G, 8, budget=budget)
    print(f"lamplighter superpolynomial @8: {est_lamp.superpolynomial}")
    report.add_verdict(
        "lamplighter_superpolynomial",
        est_lamp.superpolynomial,
        "exponential fit beats polynomial (residual ratio < 0.5)",
        est_lamp.superpolynomial,
    )
    # solver closed forms
    from .graphs import FiniteGraph

    g = FiniteGraph.from_edges(
        11, [(i, i + 1) for i in range(10)], boundary=[0, 10]
    )
    worst = 0.0
    for p in (1.5, 2.0, 3.0):
        sol = solve_dirichlet(
            DirichletProblem(g, {0: 0.0, 10: 1.0}, p=p, tolerance=0.0)
        )
        worst = max(
            worst, float(np.max(np.abs(sol.values - np.arange(11) / 10)))
        )
    print(f"path closed-form worst error: {fmt_value(worst)}")
    report.add_verdict(
        "path_linear_interpolation",
        worst < 1e-8,
        "max abs error below 1e-8 across p in {1.5, 2, 3}",
        worst,
    )
    return report


def cmd_reproduce(args):
    if args.suite == OSCILLATION_SUITE:
        report = _reproduce_oscillation(args)
    elif args.suite == GROWTH_SUITE:
        report = _reproduce_growth(args)
    else:
        raise DescriptorError(f"unknown suite {args.suite!r}")
    _echo_verdicts(report)
    _write_report(report, args, args.suite.replace("-", "_"))
    return EXIT_OK if report.all_passed else EXIT_VERDICT


def _add_common(sub, *, radius=False, p=False):
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--budget", type=int, default=None,
                     help="vertex budget (default LAMPHARM_BUDGET or "
                          f"{DEFAULT_VERTEX_BUDGET})")
    sub.add_argument("--tolerance", type=float, default=1e-10)
    sub.add_argument("--out-dir", default=None)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    if radius:
        sub.add_argument("--radius", "-R", type=int, required=True)
    if p:
        sub.add_argument("--p", type=float, default=2.0)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lampharm",
        description=(
            "finite-scale probes of harmonic functions with finite "
            "p-energy on lamplighter and product graphs"
        ),
    )
    ap.add_argument("--version", action="version", version=__version__)
    sp = ap.add_subparsers(dest="command", required=True)

    b = sp.add_parser("build-graph", help="materialize balls and summarize")
    b.add_argument("--descriptor", required=True)
    _add_common(b, radius=True)
    b.set_defaults(fn=cmd_build_graph)

    s = sp.add_parser("solve", help="Dirichlet solve on a ball")
    s.add_argument("--descriptor", required=True)
    s.add_argument("--split", choices=sorted(SPLIT_RULES), default="sign")
    s.add_argument("--boundary-file", default=None,
                   help="JSON {index: value} or [[index, value], ...]")
    _add_common(s, radius=True, p=True)
    s.set_defaults(fn=cmd_solve)

    c = sp.add_parser("capacity", help="annulus capacity")
    c.add_argument("--descriptor", required=True)
    c.add_argument("--inner", "-r", type=int, required=True)
    _add_common(c, radius=True, p=True)
    c.set_defaults(fn=cmd_capacity)

    i = sp.add_parser("isoprofile", help="isoperimetric witnesses + growth")
    i.add_argument("--descriptor", required=True)
    i.add_argument("--d-list", default="1,2,3")
    i.add_argument("--rmax", type=int, default=8)
    _add_common(i)
    i.set_defaults(fn=cmd_isoprofile)

    l = sp.add_parser("spanline", help="spanning-line search in the k-fuzz")
    l.add_argument("--descriptor", default=None)
    l.add_argument("--edge-list", default=None,
                   help="file of 'u v' lines (vertex indices)")
    l.add_argument("--radius", "-R", type=int, default=3)
    l.add_argument("-k", type=int, default=1)
    l.add_argument("--exact", action="store_true",
                   help="force exhaustive backtracking at any size")
    l.add_argument("--time-budget", type=float, default=10.0)
    l.add_argument("--seed", type=int, default=42)
    l.add_argument("--budget", type=int, default=None)
    l.add_argument("--out-dir", default=None)
    l.add_argument("--format", choices=("json", "csv"), default="json")
    l.set_defaults(fn=cmd_spanline)

    w = sp.add_parser("liouville", help="paired random-walk TV contrast")
    w.add_argument("--descriptor-a", required=True)
    w.add_argument("--descriptor-b", required=True)
    w.add_argument("--steps", type=int, default=200)
    w.add_argument("--trials", type=int, default=100_000)
    w.add_argument("--laziness", type=float, default=0.5)
    _add_common(w)
    w.set_defaults(fn=cmd_liouville)

    r = sp.add_parser("reproduce", help="canned experiment suites")
    r.add_argument("suite", choices=(OSCILLATION_SUITE, GROWTH_SUITE))
    _add_common(r)
    r.set_defaults(fn=cmd_reproduce)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors already
        raise
    try:
        return args.fn(args)
    except DescriptorError as e:
        print(json.dumps({"error": "descriptor", "detail": str(e)}),
              file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, json.JSONDecodeError) as e:
        print(json.dumps({"error": "input", "detail": str(e)}),
              file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as e:
        print(json.dumps({"error": "budget", "detail": str(e)}),
              file=sys.stderr)
        return EXIT_BUDGET
    except NonConvergenceError as e:
        print(json.dumps({"error": "no_convergence", "detail": str(e)}),
              file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
