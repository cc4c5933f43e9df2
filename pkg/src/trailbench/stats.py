"""Tie-aware average rankings and the Bayesian correlated t-test.

Rankings: within each slice of a score grid the competing methods are
ranked (1 = best), with ties receiving the arithmetic mean of the ranks
they span; per-slice ranks are then averaged, and lower average rank
means better overall performance.

Bayesian test: for per-fold score differences x_i = a_i - b_i from a
k-fold cross-validation, the posterior of the mean difference is a
Student-t with k - 1 degrees of freedom, location mean(x) and scale
sqrt((1/k + rho / (1 - rho)) * var(x)), where rho accounts for the
correlation induced by overlapping training sets (rho = test fraction,
1/k, by default). The three reported probabilities split the posterior
mass at the region of practical equivalence (ROPE): below -rope, inside
[-rope, +rope], above +rope, with x = a - b. Both a Monte Carlo
estimate and the closed-form Student-t evaluation are computed; the
closed form is deterministic and is what reports use by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.stats import t as student_t

RankingAxis = Literal["architectures_over_encoders", "encoders_over_architectures"]


def rank_with_ties(scores: Sequence[float], higher_is_better: bool = True) -> list[float]:
    """Rank scores 1..n (1 = best); tied entries share the mean of their ranks."""
    values = [float(s) for s in scores]
    if not values:
        raise ValueError("cannot rank an empty score list")
    if any(math.isnan(v) for v in values):
        raise ValueError("scores contain NaN")

    order = sorted(range(len(values)), key=lambda i: values[i], reverse=higher_is_better)
    ranks = [0.0] * len(values)
    pos = 0
    while pos < len(order):
        end = pos
        while end + 1 < len(order) and values[order[end + 1]] == values[order[pos]]:
            end += 1
        # ranks pos+1 .. end+1 are shared by the tie group
        mean_rank = (pos + 1 + end + 1) / 2.0
        for idx in order[pos : end + 1]:
            ranks[idx] = mean_rank
        pos = end + 1
    return ranks


@dataclass(frozen=True)
class ScoreGrid:
    """Per-fold scores for every architecture x encoder cell.

    `per_fold` has shape (n_architectures, n_encoders, k). Cell means are
    derived from it, never stored separately.
    """

    architectures: tuple[str, ...]
    encoders: tuple[str, ...]
    per_fold: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.per_fold, dtype=np.float64)
        expected = (len(self.architectures), len(self.encoders))
        if arr.ndim != 3 or arr.shape[:2] != expected:
            raise ValueError(
                f"per_fold must have shape ({expected[0]}, {expected[1]}, k), got {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise ValueError("per-fold scores must be finite")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "per_fold", arr)
        object.__setattr__(self, "architectures", tuple(self.architectures))
        object.__setattr__(self, "encoders", tuple(self.encoders))

    @property
    def k(self) -> int:
        return self.per_fold.shape[2]

    @property
    def mean_score(self) -> np.ndarray:
        """Cell means, shape (n_architectures, n_encoders)."""
        return self.per_fold.mean(axis=2)

    @classmethod
    def from_fold_scores(
        cls,
        architectures: Sequence[str],
        encoders: Sequence[str],
        scores: dict[tuple[str, str], Sequence[float]],
    ) -> "ScoreGrid":
        """Assemble a grid from per-cell fold score lists; missing cells are named."""
        missing = [
            f"{a}/{e}" for a in architectures for e in encoders if (a, e) not in scores
        ]
        if missing:
            raise ValueError(f"missing grid cells: {', '.join(missing)}")
        lengths = {len(scores[(a, e)]) for a in architectures for e in encoders}
        if len(lengths) != 1:
            raise ValueError(f"inconsistent fold counts across cells: {sorted(lengths)}")
        k = lengths.pop()
        arr = np.empty((len(architectures), len(encoders), k))
        for i, a in enumerate(architectures):
            for j, e in enumerate(encoders):
                arr[i, j, :] = scores[(a, e)]
        return cls(tuple(architectures), tuple(encoders), arr)


def average_rankings(grid: ScoreGrid, axis: RankingAxis) -> list[tuple[str, float]]:
    """Average tie-aware ranks along one grid axis.

    architectures_over_encoders ranks the architectures within every
    encoder column and averages over encoders; encoders_over_architectures
    does the transpose. Output is sorted by mean rank (best first), ties
    broken by name for determinism.
    """
    means = grid.mean_score
    if axis == "architectures_over_encoders":
        names = grid.architectures
        slices = means.T  # one row of architecture scores per encoder
    elif axis == "encoders_over_architectures":
        names = grid.encoders
        slices = means
    else:
        raise ValueError(f"unknown ranking axis {axis!r}")

    rank_sum = np.zeros(len(names))
    for scores in slices:
        rank_sum += np.array(rank_with_ties(list(scores), higher_is_better=True))
    mean_ranks = rank_sum / slices.shape[0]
    result = [(name, float(r)) for name, r in zip(names, mean_ranks)]
    result.sort(key=lambda pair: (pair[1], pair[0]))
    return result


@dataclass(frozen=True)
class BayesResult:
    """Outcome of one Bayesian correlated t-test.

    p_left / p_rope / p_right are the Monte Carlo estimates of the
    posterior mass of mean(a - b) below -rope, inside the ROPE, and
    above +rope; cf_left / cf_rope / cf_right are the same three
    probabilities evaluated in closed form from the Student-t
    distribution function. posterior_* expose the t parameters (df is 0
    for the degenerate zero-variance case, where the posterior is a
    point mass at the location).
    """

    method_a: str
    method_b: str
    rope: float
    rho: float
    n_samples: int
    seed: int
    posterior_df: int
    posterior_loc: float
    posterior_scale: float
    p_left: float
    p_rope: float
    p_right: float
    cf_left: float
    cf_rope: float
    cf_right: float


def _degenerate_triple(m: float, rope: float) -> tuple[float, float, float]:
    if m < -rope:
        return (1.0, 0.0, 0.0)
    if m > rope:
        return (0.0, 0.0, 1.0)
    return (0.0, 1.0, 0.0)


def correlated_bayes_ttest(
    a_scores: Sequence[float],
    b_scores: Sequence[float],
    rope: float = 0.01,
    rho: float | None = None,
    n_samples: int = 50_000,
    seed: int = 0,
    method_a: str = "a",
    method_b: str = "b",
) -> BayesResult:
    """Bayesian correlated t-test on paired per-fold scores.

    rho defaults to the test fraction 1/k. The Monte Carlo path draws
    `n_samples` posterior samples from the seeded generator; the closed
    form evaluates the same three probabilities exactly and is symmetric
    under swapping a and b.
    """
    a = np.asarray(a_scores, dtype=np.float64)
    b = np.asarray(b_scores, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("a_scores and b_scores must be 1-D and equally long")
    k = a.shape[0]
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if rope < 0:
        raise ValueError(f"rope must be nonnegative, got {rope}")
    if rho is None:
        rho = 1.0 / k
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie strictly inside (0, 1), got {rho}")
    if n_samples < 1:
        raise ValueError(f"n_samples must be positive, got {n_samples}")

    x = a - b
    m = float(x.mean())
    v = float(x.var(ddof=1))

    if v == 0.0:
        triple = _degenerate_triple(m, rope)
        return BayesResult(
            method_a=method_a,
            method_b=method_b,
            rope=rope,
            rho=rho,
            n_samples=n_samples,
            seed=seed,
            posterior_df=0,
            posterior_loc=m,
            posterior_scale=0.0,
            p_left=triple[0],
            p_rope=triple[1],
            p_right=triple[2],
            cf_left=triple[0],
            cf_rope=triple[1],
            cf_right=triple[2],
        )

    df = k - 1
    scale = math.sqrt((1.0 / k + rho / (1.0 - rho)) * v)

    # Closed form via the survival function only, so that swapping a and b
    # (m -> -m) exchanges left and right bit-exactly.
    cf_left = float(student_t.sf((m + rope) / scale, df))
    cf_right = float(student_t.sf((rope - m) / scale, df))
    cf_rope = max(0.0, 1.0 - (cf_left + cf_right))

    rng = np.random.default_rng(seed)
    samples = m + scale * rng.standard_t(df, size=n_samples)
    n_left = int(np.count_nonzero(samples < -rope))
    n_right = int(np.count_nonzero(samples > rope))
    p_left = n_left / n_samples
    p_right = n_right / n_samples
    p_rope = (n_samples - n_left - n_right) / n_samples

    return BayesResult(
        method_a=method_a,
        method_b=method_b,
        rope=rope,
        rho=rho,
        n_samples=n_samples,
        seed=seed,
        posterior_df=df,
        posterior_loc=m,
        posterior_scale=scale,
        p_left=p_left,
        p_rope=p_rope,
        p_right=p_right,
        cf_left=cf_left,
        cf_rope=cf_rope,
        cf_right=cf_right,
    )


@dataclass(frozen=True)
class PairwiseMatrix:
    """All off-diagonal pairwise test results for a set of methods.

    cells[(i, j)] compares method i (row) against method j (column) with
    x = row - column, so cell.p_right is the probability that the row
    method is practically better and cell.p_left that the column method
    is. The diagonal is omitted.
    """

    names: tuple[str, ...]
    cells: dict[tuple[int, int], BayesResult]


def _cell_seed(seed: int, i: int, j: int) -> int:
    return int(np.random.SeedSequence((seed, i, j)).generate_state(1)[0])


def pairwise_matrix(
    methods: Sequence[tuple[str, Sequence[float]]],
    rope: float = 0.01,
    rho: float | None = None,
    n_samples: int = 50_000,
    seed: int = 0,
) -> PairwiseMatrix:
    """Run the correlated t-test for every ordered pair of methods.

    Each cell derives its own seed from (seed, row, column) so results do
    not depend on evaluation order.
    """
    if len(methods) < 2:
        raise ValueError(f"need at least 2 methods to compare, got {len(methods)}")
    names = tuple(name for name, _ in methods)
    cells: dict[tuple[int, int], BayesResult] = {}
    for i, (name_i, scores_i) in enumerate(methods):
        for j, (name_j, scores_j) in enumerate(methods):
            if i == j:
                continue
            try:
                cells[(i, j)] = correlated_bayes_ttest(
                    scores_i,
                    scores_j,
                    rope=rope,
                    rho=rho,
                    n_samples=n_samples,
                    seed=_cell_seed(seed, i, j),
                    method_a=name_i,
                    method_b=name_j,
                )
            except ValueError as exc:
                raise ValueError(f"pair ({name_i}, {name_j}): {exc}") from exc
    return PairwiseMatrix(names=names, cells=cells)
