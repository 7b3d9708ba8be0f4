"""Monte Carlo generators of G-dependent data and empirical checks of the bounds.

Randomness is split into fixed-size chunks of trials.  Chunk ``k`` draws from
``SeedSequence(seed, spawn_key=(k,))``, so a run is bit-identical whether the
chunks are produced serially or by a thread pool.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .concentration import FAMILIES, BoundReport, bound_reports
from .covers import FractionalCover
from .graph import Graph, m_dependent_chain, make_graph

CHUNK = 4096
KERNELS = ("mean", "max", "indicator-threshold")


class SimulationError(ValueError):
    pass


@dataclass
class DependentSample:
    values: np.ndarray  # (trials, n)
    graph: Graph
    generator: dict
    lipschitz: np.ndarray  # range length of each coordinate
    analytic_mean: np.ndarray | None = None
    clip_events: int = 0

    @property
    def trials(self) -> int:
        return self.values.shape[0]

    @property
    def clip_frequency(self) -> float:
        return self.clip_events / self.values.size if self.values.size else 0.0


def _chunked(trials: int, seed: int, draw: Callable[[np.random.Generator, int], np.ndarray], workers: int = 1):
    if trials < 1:
        raise SimulationError("need at least one trial")
    sizes = [min(CHUNK, trials - s) for s in range(0, trials, CHUNK)]
    seqs = [np.random.SeedSequence(seed, spawn_key=(k,)) for k in range(len(sizes))]

    def run(k: int) -> np.ndarray:
        return draw(np.random.Generator(np.random.PCG64(seqs[k])), sizes[k])

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]
    return np.concatenate(parts, axis=0)


def gen_m_dependent(
    n: int,
    m: int,
    kernel: str = "mean",
    trials: int = 10_000,
    seed: int = 0,
    threshold: float = 0.5,
    workers: int = 1,
) -> DependentSample:
    """Block factors ``X_i = kernel(U_i, ..., U_{i+m})`` of i.i.d. uniforms.

    ``X_i`` and ``X_j`` share no uniforms when ``|i - j| > m``, so the
    m-dependent chain is a dependency graph.  Every kernel maps into
    ``[0, 1]``.
    """
    if kernel not in KERNELS:
        raise SimulationError(f"unknown kernel {kernel!r}; choose from {', '.join(KERNELS)}")
    if m < 0 or n <= m:
        raise SimulationError(f"need 0 <= m < n, got n={n}, m={m}")

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random((size, n + m))
        win = np.lib.stride_tricks.sliding_window_view(u, m + 1, axis=1)
        if kernel == "mean":
            return win.mean(axis=2)
        if kernel == "max":
            return win.max(axis=2)
        return (win.mean(axis=2) > threshold).astype(float)

    values = _chunked(trials, seed, draw, workers)
    if kernel == "mean":
        mu = 0.5
    elif kernel == "max":
        mu = (m + 1) / (m + 2)
    else:
        mu = 0.5 if threshold == 0.5 else None
    desc = {"family": "m_dependent", "n": n, "m": m, "kernel": kernel, "trials": trials, "seed": seed}
    if kernel == "indicator-threshold":
        desc["threshold"] = threshold
    return DependentSample(
        values,
        m_dependent_chain(n, m),
        desc,
        np.ones(n),
        None if mu is None else np.full(n, mu),
    )


def intervals_graph(regions: Sequence[tuple[float, float]]) -> Graph:
    """Edge ``{i, j}`` iff closed intervals ``i`` and ``j`` intersect."""
    edges = [
        (i, j)
        for i, (a, b) in enumerate(regions)
        for j, (c, d) in enumerate(regions)
        if i < j and a <= d and c <= b
    ]
    return make_graph(len(regions), edges)


def default_cap(mean_count: float) -> int:
    return math.ceil(mean_count + 10.0 * math.sqrt(mean_count))


def gen_poisson_regions(
    regions: Sequence[tuple[float, float]],
    rate: float,
    trials: int = 10_000,
    seed: int = 0,
    caps: Sequence[int] | None = None,
    workers: int = 1,
) -> DependentSample:
    """Counts of a homogeneous Poisson process on the line inside each interval.

    The line is cut at every interval endpoint; counts in the resulting
    elementary segments are independent Poisson variables, and each region's
    count is the sum over the segments it contains.  Counts are clipped to
    ``caps`` (default ``ceil(mu + 10 sqrt(mu))`` with ``mu = rate * length``)
    so each coordinate has range length ``cap``.
    """
    if not rate > 0:
        raise SimulationError(f"rate must be positive, got {rate}")
    regions = [(float(a), float(b)) for a, b in regions]
    if not regions or any(not (math.isfinite(a) and math.isfinite(b) and a < b) for a, b in regions):
        raise SimulationError("regions must be a non-empty list of finite intervals (a, b) with a < b")
    cuts = sorted({x for ab in regions for x in ab})
    segs = list(zip(cuts[:-1], cuts[1:]))
    member = np.array(
        [[1.0 if a <= lo and hi <= b else 0.0 for (a, b) in regions] for lo, hi in segs]
    )
    seg_mean = rate * np.array([hi - lo for lo, hi in segs])
    mean_count = np.array([rate * (b - a) for a, b in regions])
    cap = np.array(caps if caps is not None else [default_cap(mu) for mu in mean_count], dtype=float)
    if cap.shape != (len(regions),) or np.any(cap <= 0):
        raise SimulationError("need one positive cap per region")

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.poisson(seg_mean, size=(size, len(segs))).astype(float) @ member

    raw = _chunked(trials, seed, draw, workers)
    clipped = np.minimum(raw, cap)
    return DependentSample(
        clipped,
        intervals_graph(regions),
        {"family": "poisson_regions", "regions": regions, "rate": rate, "trials": trials, "seed": seed},
        cap,
        mean_count,
        int(np.count_nonzero(raw > cap)),
    )


# --- empirical tails --------------------------------------------------------


@dataclass
class TailCurve:
    t_grid: np.ndarray
    empirical: np.ndarray
    standard_error: np.ndarray
    trials: int
    center: str
    bounds: dict[str, np.ndarray] = field(default_factory=dict)

    def rows(self):
        for fam, vals in (self.bounds or {"": None}).items():
            for k, t in enumerate(self.t_grid):
                yield (float(t), float(self.empirical[k]), float(self.standard_error[k]), fam,
                       None if vals is None else float(vals[k]))

    def to_csv(self) -> str:
        lines = ["t,empirical,se,bound_family,bound"]
        for t, e, s, fam, b in self.rows():
            lines.append(f"{t:.10g},{e:.10g},{s:.10g},{fam},{'' if b is None else f'{b:.10g}'}")
        return "\n".join(lines) + "\n"


def _statistic(sample: DependentSample, statistic: str) -> np.ndarray:
    if statistic == "sum":
        return sample.values.sum(axis=1)
    if statistic == "mean":
        return sample.values.mean(axis=1)
    raise SimulationError(f"statistic must be 'sum' or 'mean', got {statistic!r}")


def statistic_lipschitz(sample: DependentSample, statistic: str) -> np.ndarray:
    c = np.asarray(sample.lipschitz, dtype=float)
    return c / sample.values.shape[1] if statistic == "mean" else c


def empirical_tail(
    sample: DependentSample, statistic: str = "sum", t_grid: Sequence[float] = (), center: str = "sample"
) -> TailCurve:
    """Fraction of trials with ``f(X) - centre >= t`` and its binomial standard error.

    ``center="sample"`` uses the across-trial mean of the statistic;
    ``"analytic"`` uses the generator's known expectation.
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.size == 0:
        raise SimulationError("empty t grid")
    if np.any(np.diff(grid) <= 0):
        raise SimulationError("t grid must be strictly increasing")
    f = _statistic(sample, statistic)
    if center == "sample":
        mu = f.mean()
    elif center == "analytic":
        if sample.analytic_mean is None:
            raise SimulationError("generator has no analytic mean")
        mu = sample.analytic_mean.sum()
        if statistic == "mean":
            mu /= sample.values.shape[1]
    else:
        raise SimulationError(f"center must be 'sample' or 'analytic', got {center!r}")
    dev = np.sort(f - mu)
    # count of dev >= t for each t
    exceed = dev.size - np.searchsorted(dev, grid, side="left")
    p = exceed / dev.size
    se = np.sqrt(p * (1 - p) / dev.size)
    return TailCurve(grid, p, se, dev.size, center)


def default_grid(sample: DependentSample, statistic: str = "sum", points: int = 25, max_sd: float = 5.0) -> np.ndarray:
    sd = float(_statistic(sample, statistic).std())
    top = max_sd * sd if sd > 0 else 1.0
    return np.linspace(0.0, top, points)


# --- Rademacher -------------------------------------------------------------


def empirical_fractional_rademacher(
    features, cover: FractionalCover, B: float = 1.0, sigma_trials: int = 2000, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate of the empirical fractional Rademacher complexity
    of ``{x -> <w, phi(x)> : ||w|| <= B}``.

    The supremum over the ball is ``B * ||sum_{i in I_j} sigma_i phi(x_i)||``.
    Returns ``(estimate, standard_error)``.
    """
    phi = np.asarray(features, dtype=float)
    if phi.ndim != 2 or phi.shape[1] == 0:
        raise SimulationError("features must be an (n, d) matrix with d >= 1")
    n = phi.shape[0]
    if cover.host_n != n:
        raise SimulationError(f"cover is over {cover.host_n} items, features have {n}")
    cov = cover.coverage()
    if np.any(np.abs(cov - 1.0) > 1e-9):
        raise SimulationError("cover does not cover every item with weight 1")
    if sigma_trials < 1:
        raise SimulationError("need at least one sigma draw")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    sigma = rng.choice(np.array([-1.0, 1.0]), size=(sigma_trials, n))
    per_trial = np.zeros(sigma_trials)
    for members, w in cover.parts:
        idx = list(members)
        per_trial += w * np.linalg.norm(sigma[:, idx] @ phi[idx], axis=1)
    per_trial *= B / n
    se = per_trial.std(ddof=1) / math.sqrt(sigma_trials) if sigma_trials > 1 else 0.0
    return float(per_trial.mean()), float(se)


# --- bound vs empirical -----------------------------------------------------


@dataclass
class Violation:
    t: float
    family: str
    empirical: float
    se: float
    bound: float


@dataclass
class SimulationReport:
    curve: TailCurve
    reports: list[BoundReport]
    violations: list[Violation]
    sample_info: dict

    def to_dict(self) -> dict:
        return {
            "sample": self.sample_info,
            "t": self.curve.t_grid.tolist(),
            "empirical": self.curve.empirical.tolist(),
            "se": self.curve.standard_error.tolist(),
            "bounds": {r.family: {"values": [p for _, p in r.tail], "parameters": r.parameters} for r in self.reports},
            "violations": [v.__dict__ for v in self.violations],
        }


def bound_vs_empirical_report(
    g: Graph,
    c: Sequence[float],
    sample: DependentSample,
    families: Sequence[str] = FAMILIES,
    t_grid: Sequence[float] | None = None,
    statistic: str = "sum",
    chi_f: float | None = None,
    search: str | None = None,
    center: str = "sample",
) -> SimulationReport:
    """Put the empirical tail next to each bound and flag points where
    ``empirical - 3 SE > bound``."""
    if g != sample.graph:
        raise SimulationError("sample was generated for a different dependency graph")
    grid = default_grid(sample, statistic) if t_grid is None else np.asarray(t_grid, dtype=float)
    curve = empirical_tail(sample, statistic, grid, center)
    reports = bound_reports(g, list(c), grid.tolist(), families, chi_f=chi_f, search=search)
    violations = []
    for rep in reports:
        vals = np.array([p for _, p in rep.tail])
        curve.bounds[rep.family] = vals
        for k in np.flatnonzero(curve.empirical - 3 * curve.standard_error > vals):
            violations.append(
                Violation(float(grid[k]), rep.family, float(curve.empirical[k]), float(curve.standard_error[k]), float(vals[k]))
            )
    info = dict(sample.generator)
    info["clip_frequency"] = sample.clip_frequency
    return SimulationReport(curve, reports, violations, info)


# --- presets ----------------------------------------------------------------


def _path_intervals(n: int, step: float = 1.0, length: float = 1.5):
    return [(i * step, i * step + length) for i in range(n)]


PRESETS: dict[str, dict] = {
    "mchain-janson": {
        "generator": "m_dependent",
        "params": {"n": 200, "m": 2, "kernel": "mean"},
        "families": ["janson_fractional", "graph_uniform", "graph_general"],
    },
    "poisson-path": {
        "generator": "poisson_regions",
        "params": {"regions": _path_intervals(50), "rate": 2.0},
        "families": ["janson_fractional", "forest", "graph_general"],
    },
    "iid-signs": {
        "generator": "m_dependent",
        "params": {"n": 100, "m": 0, "kernel": "indicator-threshold"},
        "families": ["mcdiarmid", "janson_fractional", "forest", "graph_general"],
    },
    # chi_f deliberately halved: these must report violations
    "falsify-halved": {
        "generator": "m_dependent",
        "params": {"n": 100, "m": 0, "kernel": "indicator-threshold"},
        "families": ["janson_fractional"],
        "chi_f": 0.5,
    },
    "falsify-mchain-halved": {
        "generator": "m_dependent",
        "params": {"n": 200, "m": 2, "kernel": "indicator-threshold"},
        "families": ["janson_fractional"],
        "chi_f": 1.5,
    },
}


def make_sample(config: dict, trials: int, seed: int, workers: int = 1) -> DependentSample:
    params = dict(config.get("params", {}))
    gen = config.get("generator")
    if gen == "m_dependent":
        return gen_m_dependent(trials=trials, seed=seed, workers=workers, **params)
    if gen == "poisson_regions":
        params["regions"] = [tuple(r) for r in params["regions"]]
        return gen_poisson_regions(trials=trials, seed=seed, workers=workers, **params)
    raise SimulationError(f"unknown generator {gen!r}")


def run_config(config: dict, trials: int, seed: int, workers: int = 1) -> SimulationReport:
    """Generate a sample and compare it with the configured bound families.

    Recognised keys: ``generator``, ``params``, ``families``, ``chi_f``,
    ``statistic``, ``center``, ``grid_points``, ``grid_max_sd``.
    """
    sample = make_sample(config, trials, seed, workers)
    statistic = config.get("statistic", "sum")
    grid = default_grid(sample, statistic, config.get("grid_points", 25), config.get("grid_max_sd", 5.0))
    return bound_vs_empirical_report(
        sample.graph,
        statistic_lipschitz(sample, statistic).tolist(),
        sample,
        config.get("families", list(FAMILIES)),
        grid,
        statistic,
        chi_f=config.get("chi_f"),
        search=config.get("search"),
        center=config.get("center", "sample"),
    )


def run_preset(name: str, trials: int, seed: int, workers: int = 1) -> SimulationReport:
    try:
        config = PRESETS[name]
    except KeyError:
        raise SimulationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return run_config(config, trials, seed, workers)
