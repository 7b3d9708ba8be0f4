"""Generalisation bounds for learning from graph-dependent samples, and the
pairwise empirical losses they are stated for."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class LearningBoundError(ValueError):
    pass


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise LearningBoundError(f"confidence delta must lie in (0, 1), got {delta}")


def _positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0:
            raise LearningBoundError(f"{name} must be positive, got {v}")


@dataclass(frozen=True)
class StabilityProfile:
    """Uniform-stability constants for one sample size.

    ``beta_n_delta`` is ``max(beta_{n-i} for i in 0..Delta)``.
    """

    beta_n: float
    beta_n_delta: float
    delta_max_degree: int
    loss_bound: float

    def __post_init__(self):
        if self.beta_n < 0 or self.beta_n_delta < self.beta_n:
            raise LearningBoundError("need 0 <= beta_n <= beta_n_delta")
        if self.delta_max_degree < 0:
            raise LearningBoundError("maximum degree must be non-negative")
        if not self.loss_bound > 0:
            raise LearningBoundError("loss bound M must be positive")

    @classmethod
    def from_beta(cls, beta: Callable[[int], float], n: int, max_degree: int, loss_bound: float):
        """Evaluate a closed-form ``beta(size)`` at ``n, n-1, ..., n-max_degree``."""
        if max_degree >= n:
            raise LearningBoundError("maximum degree must be below the sample size")
        values = [beta(n - i) for i in range(max_degree + 1)]
        return cls(values[0], max(values), max_degree, loss_bound)


@dataclass(frozen=True)
class GenBound:
    value: float
    components: dict
    vacuous: bool

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {"bound": self.value, "components": self.components, "vacuous": self.vacuous}


def _result(value: float, loss_bound: float, **components: float) -> GenBound:
    return GenBound(value, components, value > loss_bound)


def linear_class_rademacher(B: float, Gamma: float, chi_f: float, n: int) -> float:
    """``B * Gamma * sqrt(chi_f / n)`` for norm-bounded linear predictors."""
    _positive(B=B, Gamma=Gamma, chi_f=chi_f, n=n)
    return B * Gamma * math.sqrt(chi_f / n)


def frac_rademacher_gen_bound(
    empirical_risk: float,
    rademacher: float,
    chi_f: float,
    n: int,
    delta: float,
    M: float = 1.0,
    empirical_variant: bool = False,
) -> GenBound:
    """Fractional-Rademacher generalisation bound.

    Expectation variant:  ``R_hat + 2 r + M sqrt(chi_f / (2n) ln(1/delta))``.
    Empirical variant:    ``R_hat + 2 r_hat + 3 M sqrt(chi_f / (2n) ln(2/delta))``.
    """
    _check_delta(delta)
    _positive(chi_f=chi_f, n=n, M=M)
    if rademacher < 0 or empirical_risk < 0:
        raise LearningBoundError("risk and complexity terms must be non-negative")
    if empirical_variant:
        conf = 3 * M * math.sqrt(chi_f / (2 * n) * math.log(2 / delta))
    else:
        conf = M * math.sqrt(chi_f / (2 * n) * math.log(1 / delta))
    comp = 2 * rademacher
    return _result(empirical_risk + comp + conf, M, complexity=comp, confidence=conf)


def stability_gen_bound(
    empirical_risk: float, prof: StabilityProfile, lambda_g: float, n: int, delta: float
) -> GenBound:
    """Uniform-stability bound for a sample with dependency graph of max degree
    ``prof.delta_max_degree`` and forest complexity ``lambda_g``.

    Components: ``expectation = 2 beta_{n,Delta} (Delta + 1)`` and
    ``deviation = (4 n beta_n + M) / n * sqrt(Lambda / 2 * ln(1/delta))``;
    ``lipschitz`` is the per-coordinate coefficient ``4 beta_n + M / n``.
    """
    _check_delta(delta)
    _positive(n=n)
    if lambda_g < 0:
        raise LearningBoundError("forest complexity must be non-negative")
    expectation = 2 * prof.beta_n_delta * (prof.delta_max_degree + 1)
    lipschitz = 4 * prof.beta_n + prof.loss_bound / n
    deviation = (4 * n * prof.beta_n + prof.loss_bound) / n * math.sqrt(lambda_g / 2 * math.log(1 / delta))
    return _result(
        empirical_risk + expectation + deviation,
        prof.loss_bound,
        expectation=expectation,
        deviation=deviation,
        lipschitz=lipschitz,
    )


def _pairwise_bound(B, Gamma, m, empirical_risk, delta) -> GenBound:
    _check_delta(delta)
    _positive(B=B, Gamma=Gamma, m=m)
    comp = 4 * B * Gamma / math.sqrt(m)
    conf = 3 * math.sqrt(math.log(2 / delta) / (2 * m))
    # the 0/1 pairwise loss is bounded by 1
    return _result(empirical_risk + comp + conf, 1.0, complexity=comp, confidence=conf, m=m)


def bipartite_ranking_bound(B, Gamma, m_plus: int, m_minus: int, empirical_risk: float, delta: float) -> GenBound:
    if m_plus < 1 or m_minus < 1:
        raise LearningBoundError("both classes need at least one instance")
    return _pairwise_bound(B, Gamma, min(m_plus, m_minus), empirical_risk, delta)


def multiclass_bound(B, Gamma, m: int, K: int, empirical_risk: float, delta: float) -> GenBound:
    if K < 2:
        raise LearningBoundError(f"need at least 2 classes, got {K}")
    return _pairwise_bound(B, Gamma, m, empirical_risk, delta)


def m_dependent_stability_bound(
    empirical_risk: float, prof: StabilityProfile, m: int, n: int, delta: float
) -> GenBound:
    """Stability bound for an m-dependent sample, using ``Lambda <= 4 m n``.

    ``prof.beta_n_delta`` must be taken over ``i in [0, 2m]`` (the chain's
    maximum degree); ``prof.delta_max_degree`` is ignored in favour of ``2m``.
    """
    _check_delta(delta)
    if m < 1:
        raise LearningBoundError("m-dependent bound needs m >= 1; use stability_gen_bound for m = 0")
    if n <= 2 * m:
        raise LearningBoundError(f"need n > 2m, got n={n}, m={m}")
    expectation = 2 * prof.beta_n_delta * (2 * m + 1)
    deviation = (4 * n * prof.beta_n + prof.loss_bound) * math.sqrt(2 * m / n * math.log(1 / delta))
    return _result(
        empirical_risk + expectation + deviation,
        prof.loss_bound,
        expectation=expectation,
        deviation=deviation,
    )


# --- empirical losses -------------------------------------------------------


def auc_empirical_risk(positive_scores: Sequence[float], negative_scores: Sequence[float]) -> float:
    """Fraction of positive/negative pairs with ``s_pos <= s_neg`` (ties are errors)."""
    pos = np.asarray(positive_scores, dtype=float)
    neg = np.sort(np.asarray(negative_scores, dtype=float))
    if pos.size == 0 or neg.size == 0:
        raise LearningBoundError("both classes need at least one score")
    # negatives scoring >= each positive
    errors = neg.size - np.searchsorted(neg, pos, side="left")
    return float(errors.sum()) / (pos.size * neg.size)


def multiclass_empirical_risk(scores, labels: Sequence[int]) -> float:
    """Average, over examples, of the fraction of wrong classes scored at
    least as high as the true class."""
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    if s.ndim != 2 or s.shape[0] != y.shape[0]:
        raise LearningBoundError(f"scores shape {s.shape} does not match {y.shape[0]} labels")
    m, K = s.shape
    if m < 1:
        raise LearningBoundError("need at least one example")
    if K < 2:
        raise LearningBoundError("need at least 2 classes")
    if y.size and (y.min() < 0 or y.max() >= K or not np.issubdtype(y.dtype, np.integer)):
        raise LearningBoundError(f"labels must be integers in [0, {K})")
    true = s[np.arange(m), y][:, None]
    errors = (true <= s).sum(axis=1) - 1  # the true class always ties with itself
    return float(errors.sum()) / (m * (K - 1))
