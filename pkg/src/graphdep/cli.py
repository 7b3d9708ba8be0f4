"""``graphdep`` command line.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 2 usage
error, 3 size-limit refusal, 4 input validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .concentration import FAMILIES, BoundError, bound_reports
from .covers import (
    CoverError,
    SizeLimitError,
    chi_f_exact,
    chi_f_upper,
    multiclass_cover,
    ranking_cover,
    validate_cover,
)
from .graph import Graph, GraphError, connected_components, generate, multiclass_graph, rook_graph
from .learning import (
    LearningBoundError,
    StabilityProfile,
    auc_empirical_risk,
    bipartite_ranking_bound,
    frac_rademacher_gen_bound,
    linear_class_rademacher,
    m_dependent_stability_bound,
    multiclass_bound,
    multiclass_empirical_risk,
    stability_gen_bound,
)
from .partitions import (
    TreePartitionError,
    construction_value,
    forest_complexity_exact,
    forest_complexity_heuristic,
    partition_cost,
    partition_to_dict,
)
from .simulation import PRESETS, SimulationError, run_config, run_preset

EXIT_USAGE, EXIT_LIMIT, EXIT_INVALID = 2, 3, 4


class UsageError(Exception):
    pass


def _emit(doc: dict) -> None:
    doc = {"version": __version__, **doc}
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_graph(path: str) -> Graph:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: not valid JSON ({exc})") from exc
    # accept both a bare graph and the ``graph gen`` payload
    if isinstance(doc, dict) and isinstance(doc.get("graph"), dict):
        doc = doc["graph"]
    return Graph.from_dict(doc)


def _load_c(spec: str | None, n: int) -> list[float] | None:
    if spec is None:
        return None
    if spec.startswith("uniform:"):
        return [float(spec.split(":", 1)[1])] * n
    text = _read_text(spec).strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [float(tok) for tok in text.replace(",", " ").split()]
    return [float(v) for v in values]


def _grid(spec: str) -> list[float]:
    """``a,b,c`` or ``start:stop:count``."""
    try:
        if ":" in spec:
            start, stop, count = spec.split(":")
            return np.linspace(float(start), float(stop), int(count)).tolist()
        return [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad t grid {spec!r}") from None


def _delta(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"delta must lie in (0, 1), got {value}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


# --- subcommands --------------------------------------------------------------


_GEN_ARGS = {
    "empty": ("n",),
    "path": ("n",),
    "cycle": ("n",),
    "grid": ("m",),
    "complete": ("n",),
    "complete_bipartite": ("a", "b"),
    "m_dependent_chain": ("n", "m"),
    "mchain": ("n", "m"),
    "star": ("n",),
    "rook": ("pos", "neg"),
    "multiclass": ("m", "K"),
}


def cmd_graph_gen(args) -> None:
    names = _GEN_ARGS[args.family]
    values = [getattr(args, name) for name in names]
    missing = [f"--{name}" for name, v in zip(names, values) if v is None]
    if missing:
        raise UsageError(f"family {args.family} needs {' '.join(missing)}")
    family = "m_dependent_chain" if args.family == "mchain" else args.family
    _emit({"graph": generate(family, *values).to_dict(), "family": family})


def _is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s], stack = 0, [s]
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if side[v] < 0:
                    side[v] = 1 - side[u]
                    stack.append(v)
                elif side[v] == side[u]:
                    return False
    return True


def _closed_form_chif(g: Graph) -> float | None:
    """Closed forms for edgeless, bipartite, complete and odd-cycle graphs."""
    if g.n == 0:
        return None
    if g.num_edges == 0:
        return 1.0
    if _is_bipartite(g):
        return 2.0
    if g.num_edges == g.n * (g.n - 1) // 2:
        return float(g.n)
    if g.n % 2 and all(g.degree(v) == 2 for v in range(g.n)) and len(connected_components(g)) == 1:
        return g.n / ((g.n - 1) // 2)
    return None


def cmd_chif(args) -> None:
    g = _load_graph(args.graph)
    res = chi_f_upper(g) if args.greedy else chi_f_exact(g)
    doc = {"chi_f": res.to_dict()}
    if args.closed_forms:
        doc["closed_form_value"] = _closed_form_chif(g)
    _emit(doc)


def _closed_form_lambda(g: Graph, construction: str) -> int | None:
    if construction == "forest":
        return 4 * g.n - 3 * len(connected_components(g))
    if construction == "cycle":
        return construction_value("cycle", n=g.n)
    if construction == "grid":
        return construction_value("grid", m=math.isqrt(g.n))
    if construction == "m_dependent_chain":
        # recover m from the edge count m*n - m(m+1)/2
        m = next(k for k in range(1, g.n) if k * g.n - k * (k + 1) // 2 == g.num_edges)
        return construction_value("m_dependent_chain", n=g.n, m=m)
    return None


def cmd_lambda(args) -> None:
    g = _load_graph(args.graph)
    c = _load_c(args.c, g.n)
    if args.exact:
        cost, tp = forest_complexity_exact(g, c)
    else:
        _, tp = forest_complexity_heuristic(g)
        cost = partition_cost(tp, c)
    doc = {"partition": partition_to_dict(tp, cost, exact=args.exact)}
    if args.closed_forms:
        _, heur = forest_complexity_heuristic(g) if args.exact else (None, tp)
        doc["closed_form_value"] = _closed_form_lambda(g, heur.construction)
    _emit(doc)


def cmd_bound(args) -> None:
    g = _load_graph(args.graph)
    c = _load_c(args.c, g.n)
    families = FAMILIES if args.family == "all" else tuple(args.family.split(","))
    reports = bound_reports(g, c, args.t, families, chi_f=args.chi_f, search=args.search)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "family", "bound"])
        for rep in reports:
            for t, p in rep.tail:
                w.writerow([repr(t), rep.family, repr(p)])
        sys.stdout.write(buf.getvalue())
        return
    _emit({"reports": [r.to_dict() for r in reports]})


def cmd_learn_bound(args) -> None:
    fam = args.family
    need = {
        "rademacher": ("n", "chi_f"),
        "rademacher-empirical": ("n", "chi_f"),
        "linear-rademacher": ("n", "chi_f"),
        "stability": ("n", "beta", "Lambda"),
        "mdependent": ("n", "beta", "m"),
        "ranking": ("pos", "neg"),
        "multiclass": ("m", "K"),
    }[fam]
    missing = [f"--{k.lower() if k == 'Lambda' else k}" for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"learn-bound {fam} needs {' '.join(missing)}")
    if fam != "linear-rademacher" and args.delta is None:
        raise UsageError(f"learn-bound {fam} needs --delta")
    if fam in ("rademacher", "rademacher-empirical"):
        res = frac_rademacher_gen_bound(
            args.rhat, args.rademacher, args.chi_f, args.n, args.delta, args.M, fam == "rademacher-empirical"
        )
    elif fam == "linear-rademacher":
        _emit({"family": fam, "bound": linear_class_rademacher(args.B, args.Gamma, args.chi_f, args.n)})
        return
    elif fam == "stability":
        prof = StabilityProfile(args.beta, args.beta_delta or args.beta, args.degree, args.M)
        res = stability_gen_bound(args.rhat, prof, args.Lambda, args.n, args.delta)
    elif fam == "mdependent":
        beta_delta = args.beta_delta if args.beta_delta is not None else args.beta
        prof = StabilityProfile(args.beta, beta_delta, 2 * args.m, args.M)
        res = m_dependent_stability_bound(args.rhat, prof, args.m, args.n, args.delta)
    elif fam == "ranking":
        res = bipartite_ranking_bound(args.B, args.Gamma, args.pos, args.neg, args.rhat, args.delta)
    else:
        res = multiclass_bound(args.B, args.Gamma, args.m, args.K, args.rhat, args.delta)
    _emit({"family": fam, **res.to_dict()})


def cmd_simulate(args) -> None:
    target = args.target
    if target in PRESETS:
        report = run_preset(target, args.trials, args.seed, args.workers)
    elif Path(target).is_file():
        report = run_config(json.loads(Path(target).read_text()), args.trials, args.seed, args.workers)
    else:
        raise UsageError(f"{target!r} is neither a preset ({', '.join(PRESETS)}) nor a config file")
    nviol = len(report.violations)
    print(f"{nviol} violation(s) over {len(report.curve.t_grid)} grid points", file=sys.stderr)
    if args.format == "csv":
        sys.stdout.write(report.curve.to_csv())
        return
    _emit({"simulation": report.to_dict(), "violation_count": nviol})


def cmd_rank_cover(args) -> None:
    cover = ranking_cover(args.pos, args.neg)
    check = validate_cover(rook_graph(args.pos, args.neg), cover)
    assert check, check.reason
    _emit({"cover": cover.to_dict(exact=True)})


def cmd_multi_cover(args) -> None:
    cover = multiclass_cover(args.m, args.K)
    check = validate_cover(multiclass_graph(args.m, args.K), cover)
    assert check, check.reason
    _emit({"cover": cover.to_dict(exact=True)})


def _read_score_rows(path: str) -> list[list[str]]:
    rows = [r for r in csv.reader(io.StringIO(_read_text(path))) if r]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]  # header
    return rows


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def cmd_loss(args) -> None:
    rows = _read_score_rows(args.scores)
    if args.kind == "auc":
        # columns: score,label with label in {1, -1} or {1, 0}
        pos = [float(r[0]) for r in rows if float(r[1]) > 0]
        neg = [float(r[0]) for r in rows if float(r[1]) <= 0]
        value = auc_empirical_risk(pos, neg)
    else:
        # columns: score_0, ..., score_{K-1}, label
        scores = [[float(x) for x in r[:-1]] for r in rows]
        labels = [int(r[-1]) for r in rows]
        value = multiclass_empirical_risk(scores, labels)
    _emit({"loss": args.kind, "empirical_risk": value})


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphdep", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    gp = sub.add_parser("graph", help="graph utilities")
    gsub = gp.add_subparsers(dest="graph_command", required=True)
    gen = gsub.add_parser("gen", help="generate a named graph family")
    gen.add_argument("family", choices=sorted(_GEN_ARGS))
    for name in ("n", "m", "a", "b", "pos", "neg", "K"):
        gen.add_argument(f"--{name}", type=_positive_int)
    gen.set_defaults(func=cmd_graph_gen)

    cp = sub.add_parser("chif", help="fractional chromatic number")
    cp.add_argument("graph")
    mode = cp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--greedy", action="store_true")
    cp.add_argument("--closed-form", "--paper-values", dest="closed_forms", action="store_true", help="also report the closed-form value for recognised families")
    cp.set_defaults(func=cmd_chif)

    lp = sub.add_parser("lambda", help="forest complexity / weighted tree-partition cost")
    lp.add_argument("graph")
    mode = lp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    lp.add_argument("--c", help="Lipschitz coefficients file (JSON list or whitespace/comma separated)")
    lp.add_argument("--closed-form", "--paper-values", dest="closed_forms", action="store_true", help="also report the closed-form value for recognised families")
    lp.set_defaults(func=cmd_lambda)

    bp = sub.add_parser("bound", help="concentration tail bounds")
    bp.add_argument("graph")
    bp.add_argument("--c", required=True, help="file or uniform:<value>")
    bp.add_argument("--t", required=True, type=_grid, help="a,b,c or start:stop:count")
    bp.add_argument("--family", default="all")
    bp.add_argument("--chi-f", type=float, dest="chi_f")
    bp.add_argument("--search", choices=("exact", "heuristic"))
    bp.add_argument("--format", choices=("json", "csv"), default="json")
    bp.set_defaults(func=cmd_bound)

    lb = sub.add_parser("learn-bound", help="generalisation bounds")
    lb.add_argument(
        "family",
        choices=("rademacher", "rademacher-empirical", "linear-rademacher", "stability", "mdependent", "ranking", "multiclass"),
    )
    lb.add_argument("--n", type=_positive_int)
    lb.add_argument("--m", type=_positive_int)
    lb.add_argument("--K", type=_positive_int)
    lb.add_argument("--pos", type=_positive_int)
    lb.add_argument("--neg", type=_positive_int)
    lb.add_argument("--delta", type=_delta)
    lb.add_argument("--M", type=float, default=1.0)
    lb.add_argument("--B", type=float, default=1.0)
    lb.add_argument("--Gamma", type=float, default=1.0)
    lb.add_argument("--rhat", type=float, default=0.0)
    lb.add_argument("--rademacher", type=float, default=0.0)
    lb.add_argument("--chi-f", type=float, dest="chi_f")
    lb.add_argument("--beta", type=float)
    lb.add_argument("--beta-delta", type=float, dest="beta_delta")
    lb.add_argument("--lambda", type=float, dest="Lambda")
    lb.add_argument("--degree", type=int, default=0)
    lb.set_defaults(func=cmd_learn_bound)

    sp = sub.add_parser("simulate", help="Monte Carlo check of the bounds")
    sp.add_argument("target", help=f"preset ({', '.join(PRESETS)}) or config JSON file")
    sp.add_argument("--trials", type=_positive_int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=_positive_int, default=1)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_simulate)

    rc = sub.add_parser("rank-cover", help="bipartite ranking cover")
    rc.add_argument("--pos", type=_positive_int, required=True)
    rc.add_argument("--neg", type=_positive_int, required=True)
    rc.set_defaults(func=cmd_rank_cover)

    mc = sub.add_parser("multi-cover", help="multiclass cover")
    mc.add_argument("--m", type=_positive_int, required=True)
    mc.add_argument("--K", type=int, required=True)
    mc.set_defaults(func=cmd_multi_cover)

    ls = sub.add_parser("loss", help="empirical pairwise losses from a CSV of scores")
    ls.add_argument("kind", choices=("auc", "multiclass"))
    ls.add_argument("scores")
    ls.set_defaults(func=cmd_loss)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"graphdep: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"graphdep: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (
        GraphError,
        CoverError,
        TreePartitionError,
        BoundError,
        LearningBoundError,
        SimulationError,
        ValueError,
        OSError,
    ) as exc:
        print(f"graphdep: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
