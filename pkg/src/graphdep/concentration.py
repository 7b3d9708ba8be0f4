"""One-sided tail bounds for Lipschitz functions of graph-dependent variables.

Every bound has the shape ``exp(-2 t**2 / denominator)``; only the
denominator changes between families.  Evaluation happens in log space and
values are clamped to ``[0, 1]``; ``t <= 0`` always gives 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .covers import chi_f_exact, chi_f_upper, chif_exact_limit
from .graph import Graph, connected_components, is_forest
from .partitions import (
    TreePartition,
    forest_complexity_exact,
    forest_complexity_heuristic,
    lambda_exact_limit,
    partition_cost,
)

FAMILIES = ("mcdiarmid", "janson_fractional", "forest", "graph_general", "graph_uniform")


class BoundError(ValueError):
    pass


def lipschitz_vector(c: Iterable[float], n: int | None = None) -> list[float]:
    out = [float(x) for x in c]
    if any(not math.isfinite(x) or x < 0 for x in out):
        raise BoundError("Lipschitz coefficients must be finite and non-negative")
    if n is not None and len(out) != n:
        raise BoundError(f"expected {n} Lipschitz coefficients, got {len(out)}")
    return out


def sum_sq(c: Sequence[float]) -> float:
    return math.fsum(x * x for x in c)


def exp_tail(t: float, denominator: float) -> float:
    """``exp(-2 t^2 / denominator)`` with the edge cases pinned down.

    A zero denominator means the function is constant: the tail is 0 for any
    ``t > 0``.
    """
    if t <= 0:
        return 1.0
    if denominator <= 0:
        return 0.0
    return min(1.0, math.exp(-2.0 * t * t / denominator))


@dataclass
class BoundReport:
    family: str
    parameters: dict
    tail: list[tuple[float, float]]
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def denominator(self) -> float:
        return self.parameters["denominator"]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "parameters": self.parameters,
            "tail": [[t, p] for t, p in self.tail],
            "degenerate": self.degenerate,
            "notes": self.notes,
        }


def _report(family: str, denominator: float, ts: Iterable[float], **params) -> BoundReport:
    ts = [float(t) for t in ts]
    params["denominator"] = denominator
    return BoundReport(family, params, [(t, exp_tail(t, denominator)) for t in ts], denominator <= 0)


# --- denominators -----------------------------------------------------------


def janson_denominator(c: Sequence[float], chi_f: float) -> float:
    if chi_f < 1:
        raise BoundError(f"fractional chromatic number is at least 1, got {chi_f}")
    return chi_f * sum_sq(c)


def forest_denominator(g: Graph, c: Sequence[float]) -> float:
    if not is_forest(g):
        raise BoundError("graph is not a forest; use graph_general_bound")
    c = lipschitz_vector(c, g.n)
    trees = math.fsum(min(c[v] for v in comp) ** 2 for comp in connected_components(g))
    edges = math.fsum((c[u] + c[v]) ** 2 for u, v in g.edges)
    return trees + edges


# --- bounds -----------------------------------------------------------------


def mcdiarmid_bound(c: Sequence[float], t: float) -> float:
    return exp_tail(t, sum_sq(lipschitz_vector(c)))


def janson_fractional_bound(c: Sequence[float], chi_f: float, t: float) -> float:
    """Tail bound for sums of (or decomposable Lipschitz functions of) G-dependent
    variables, scaled by the fractional chromatic number."""
    return exp_tail(t, janson_denominator(lipschitz_vector(c), chi_f))


def forest_bound(g: Graph, c: Sequence[float], t: float) -> float:
    return exp_tail(t, forest_denominator(g, c))


def _general_partition(g: Graph, c: Sequence[float], search: str) -> tuple[float, TreePartition]:
    if search == "exact":
        cost, tp = forest_complexity_exact(g, c)
    elif search == "heuristic":
        _, tp = forest_complexity_heuristic(g)
        cost = partition_cost(tp, c)
    else:
        raise BoundError(f"search must be 'exact' or 'heuristic', got {search!r}")
    return cost.weighted_value, tp


def graph_general_bound(g: Graph, c: Sequence[float], t: float, search: str = "heuristic"):
    """Bound through the weighted tree-partition cost ``D(G, c)``.

    Returns ``(probability, partition)``.  In heuristic mode the denominator is
    the weighted cost of the heuristic partition, an upper bound on the true
    minimum.
    """
    c = lipschitz_vector(c, g.n)
    d, tp = _general_partition(g, c, search)
    return exp_tail(t, d), tp


def _lambda(g: Graph, search: str) -> int:
    if search == "exact":
        return forest_complexity_exact(g)[0].lambda_value
    if search == "heuristic":
        return forest_complexity_heuristic(g)[0].lambda_value
    raise BoundError(f"search must be 'exact' or 'heuristic', got {search!r}")


def graph_uniform_bound(g: Graph, c_scalar: float, t: float, search: str = "heuristic") -> float:
    if c_scalar < 0:
        raise BoundError("Lipschitz constant must be non-negative")
    return exp_tail(t, _lambda(g, search) * c_scalar**2)


# --- reports ----------------------------------------------------------------


def bound_reports(
    g: Graph,
    c: Sequence[float],
    ts: Sequence[float],
    families: Sequence[str] = FAMILIES,
    chi_f: float | None = None,
    search: str | None = None,
) -> list[BoundReport]:
    """Evaluate each requested, applicable family on the grid ``ts``.

    ``chi_f`` overrides the computed fractional chromatic number.  ``search``
    picks exact or heuristic tree-partitions; by default exact is used when
    the graph is within the exact limit.
    """
    c = lipschitz_vector(c, g.n)
    if search is None:
        search = "exact" if g.n <= lambda_exact_limit() else "heuristic"
    out = []
    for fam in families:
        if fam not in FAMILIES:
            raise BoundError(f"unknown bound family {fam!r}")
        if fam == "mcdiarmid":
            if g.num_edges:
                continue
            out.append(_report(fam, sum_sq(c), ts, sum_sq=sum_sq(c)))
        elif fam == "janson_fractional":
            if chi_f is not None:
                value, how = float(chi_f), "override"
            elif g.n <= chif_exact_limit():
                value, how = chi_f_exact(g).value, "exact"
            else:
                value, how = chi_f_upper(g).value, "greedy"
            rep = _report(fam, value * sum_sq(c), ts, chi_f=value, chi_f_source=how, sum_sq=sum_sq(c))
            if value < 1:
                rep.notes.append("chi_f override below 1 is not a valid fractional chromatic number")
            out.append(rep)
        elif fam == "forest":
            if not is_forest(g):
                continue
            out.append(_report(fam, forest_denominator(g, c), ts))
        elif fam == "graph_general":
            d, tp = _general_partition(g, c, search)
            rep = _report(fam, d, ts, D=d, search=search, bags=len(tp.bags))
            if search == "heuristic":
                rep.notes.append("denominator from a heuristic partition (upper bound on D)")
            out.append(rep)
        elif fam == "graph_uniform":
            if len(set(c)) > 1:
                continue
            level = c[0] if c else 0.0
            lam = _lambda(g, search)
            out.append(_report(fam, lam * level**2, ts, Lambda=lam, c=level, search=search))
    return out


@dataclass
class BoundComparison:
    reports: list[BoundReport]
    best: str

    def to_dict(self) -> dict:
        return {"best": self.best, "reports": [r.to_dict() for r in self.reports]}


def tightest_bound(g: Graph, c: Sequence[float], t: float) -> BoundComparison:
    """Evaluate every applicable family at ``t`` and flag the smallest.

    The winner is the family with the smallest denominator, which is the
    smallest bound for every ``t > 0``; ties keep the family order of
    :data:`FAMILIES`.
    """
    reports = bound_reports(g, c, [t])
    best = min(reports, key=lambda r: r.denominator)
    return BoundComparison(reports, best.family)
