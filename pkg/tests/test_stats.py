from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import rankdata
from scipy.stats import t as student_t

from trailbench.stats import (
    ScoreGrid,
    average_rankings,
    correlated_bayes_ttest,
    pairwise_matrix,
    rank_with_ties,
)

# ---------------------------------------------------------------------------
# rank_with_ties
# ---------------------------------------------------------------------------


def test_two_tied_leaders_get_one_point_five():
    assert rank_with_ties([0.9, 0.9, 0.5]) == [1.5, 1.5, 3.0]


def test_strict_order():
    assert rank_with_ties([0.1, 0.2, 0.3]) == [3.0, 2.0, 1.0]


def test_full_tie_gets_mean_of_all_ranks():
    assert rank_with_ties([0.7] * 4) == [2.5, 2.5, 2.5, 2.5]


def test_lower_is_better_orientation():
    assert rank_with_ties([0.1, 0.2, 0.3], higher_is_better=False) == [1.0, 2.0, 3.0]


def test_matches_scipy_rankdata(rng):
    for _ in range(50):
        scores = rng.integers(0, 6, size=int(rng.integers(1, 20))).astype(float)
        got = rank_with_ties(list(scores))
        want = rankdata(-scores, method="average")
        assert got == list(want)


def test_rejects_empty_and_nan():
    with pytest.raises(ValueError):
        rank_with_ties([])
    with pytest.raises(ValueError):
        rank_with_ties([0.1, float("nan")])


@given(st.lists(st.integers(0, 9), min_size=1, max_size=30))
@settings(max_examples=300, deadline=None)
def test_rank_sum_is_always_n_n_plus_1_over_2(values):
    ranks = rank_with_ties([float(v) for v in values])
    n = len(values)
    assert sum(ranks) == pytest.approx(n * (n + 1) / 2, abs=1e-9)


@given(st.lists(st.integers(-100, 100), min_size=1, max_size=15))
@settings(max_examples=100, deadline=None)
def test_monotone_transform_invariance(values):
    # a strictly increasing map leaves the ranks unchanged; integer inputs
    # keep the float evaluation of exp itself strictly increasing
    scores = [float(v) for v in values]
    transformed = [math.exp(v / 50.0) + 3.0 for v in scores]
    assert rank_with_ties(scores) == rank_with_ties(transformed)


# ---------------------------------------------------------------------------
# ScoreGrid / average_rankings
# ---------------------------------------------------------------------------


def grid_from_means(means: np.ndarray) -> ScoreGrid:
    archs = [f"arch{i}" for i in range(means.shape[0])]
    encs = [f"enc{j}" for j in range(means.shape[1])]
    return ScoreGrid(tuple(archs), tuple(encs), means[:, :, None])


def test_grid_mean_matches_per_fold_mean(rng):
    per_fold = rng.random((3, 4, 5))
    grid = ScoreGrid(("a", "b", "c"), ("w", "x", "y", "z"), per_fold)
    assert np.all(np.abs(grid.mean_score - per_fold.mean(axis=2)) <= 1e-12)


def test_grid_names_missing_cells():
    with pytest.raises(ValueError, match="a2/e1"):
        ScoreGrid.from_fold_scores(["a1", "a2"], ["e1"], {("a1", "e1"): [0.5, 0.6]})


def test_grid_rejects_ragged_fold_counts():
    with pytest.raises(ValueError, match="fold counts"):
        ScoreGrid.from_fold_scores(
            ["a1"], ["e1", "e2"], {("a1", "e1"): [0.5], ("a1", "e2"): [0.5, 0.6]}
        )


def test_one_architecture_dominant():
    grid = grid_from_means(np.array([[0.9, 0.8], [0.1, 0.2]]))
    assert average_rankings(grid, "architectures_over_encoders") == [
        ("arch0", 1.0),
        ("arch1", 2.0),
    ]


def test_symmetric_split_gives_one_point_five():
    grid = grid_from_means(np.array([[0.9, 0.1], [0.1, 0.9]]))
    ranks = dict(average_rankings(grid, "architectures_over_encoders"))
    assert ranks == {"arch0": 1.5, "arch1": 1.5}


def oracle_average_ranks(means: np.ndarray) -> list[float]:
    """Count-based tie ranks, averaged across columns (independent oracle)."""
    n_rows, n_cols = means.shape
    totals = [0.0] * n_rows
    for c in range(n_cols):
        col = means[:, c]
        for r in range(n_rows):
            better = int(np.sum(col > col[r]))
            equal = int(np.sum(col == col[r]))
            totals[r] += better + (equal + 1) / 2.0
    return [t / n_cols for t in totals]


def test_random_grid_matches_two_loop_oracle(rng):
    means = rng.integers(0, 50, size=(5, 14)).astype(float) / 50.0  # with ties
    grid = grid_from_means(means)
    got = dict(average_rankings(grid, "architectures_over_encoders"))
    want = oracle_average_ranks(means)
    for i in range(5):
        assert got[f"arch{i}"] == pytest.approx(want[i], abs=1e-12)

    got_enc = dict(average_rankings(grid, "encoders_over_architectures"))
    want_enc = oracle_average_ranks(means.T)
    for j in range(14):
        assert got_enc[f"enc{j}"] == pytest.approx(want_enc[j], abs=1e-12)


def test_output_sorted_by_rank_then_name(rng):
    means = rng.random((4, 6))
    ranked = average_rankings(grid_from_means(means), "architectures_over_encoders")
    assert ranked == sorted(ranked, key=lambda p: (p[1], p[0]))


def test_unknown_axis_rejected(rng):
    grid = grid_from_means(rng.random((2, 2)))
    with pytest.raises(ValueError):
        average_rankings(grid, "diagonal")


# ---------------------------------------------------------------------------
# correlated_bayes_ttest
# ---------------------------------------------------------------------------


def test_zero_difference_is_pure_rope():
    r = correlated_bayes_ttest([0.5] * 10, [0.5] * 10, rope=0.01)
    assert (r.p_left, r.p_rope, r.p_right) == (0.0, 1.0, 0.0)
    assert (r.cf_left, r.cf_rope, r.cf_right) == (0.0, 1.0, 0.0)


def test_zero_variance_outside_rope_is_point_mass():
    a = [0.6] * 5
    b = [0.5] * 5
    r = correlated_bayes_ttest(a, b, rope=0.01)
    assert (r.p_left, r.p_rope, r.p_right) == (0.0, 0.0, 1.0)
    r = correlated_bayes_ttest(b, a, rope=0.01)
    assert (r.p_left, r.p_rope, r.p_right) == (1.0, 0.0, 0.0)


def test_mc_triple_sums_to_one_exactly(rng):
    a = list(rng.normal(0.55, 0.02, size=10))
    b = list(rng.normal(0.5, 0.02, size=10))
    r = correlated_bayes_ttest(a, b, n_samples=5000, seed=123)
    assert r.p_left + r.p_rope + r.p_right == 1.0
    assert 0.0 <= r.p_left <= 1.0 and 0.0 <= r.p_rope <= 1.0 and 0.0 <= r.p_right <= 1.0


def test_closed_form_triple_sums_to_one(rng):
    a = list(rng.normal(0.52, 0.03, size=10))
    b = list(rng.normal(0.5, 0.03, size=10))
    r = correlated_bayes_ttest(a, b)
    assert abs(r.cf_left + r.cf_rope + r.cf_right - 1.0) <= 1e-9


def test_closed_form_matches_scipy_posterior_cdf(rng):
    # independent oracle: evaluate the posterior t with loc/scale directly
    k = 10
    x = rng.normal(0.05, 0.02, size=k)
    a = list(0.5 + x)
    b = [0.5] * k
    rope, rho = 0.01, 0.1
    r = correlated_bayes_ttest(a, b, rope=rope, rho=rho)
    m = float(np.mean(np.asarray(a) - 0.5))
    v = float(np.var(np.asarray(a) - 0.5, ddof=1))
    scale = math.sqrt((1.0 / k + rho / (1.0 - rho)) * v)
    post = student_t(df=k - 1, loc=m, scale=scale)
    assert r.cf_left == pytest.approx(post.cdf(-rope), abs=1e-12)
    assert r.cf_right == pytest.approx(post.sf(rope), abs=1e-12)
    assert r.cf_rope == pytest.approx(post.cdf(rope) - post.cdf(-rope), abs=1e-9)


def test_mc_agrees_with_closed_form():
    # deterministic seeds; bound 4 * sqrt(0.25 / n)
    n = 50_000
    bound = 4.0 * math.sqrt(0.25 / n)
    rng = np.random.default_rng(99)
    for seed in range(20):
        x = rng.normal(0.05, 0.02, size=10)
        a = list(0.5 + x)
        b = [0.5] * 10
        r = correlated_bayes_ttest(a, b, rope=0.01, rho=0.1, n_samples=n, seed=seed)
        assert abs(r.p_left - r.cf_left) <= bound
        assert abs(r.p_rope - r.cf_rope) <= bound
        assert abs(r.p_right - r.cf_right) <= bound


def test_swap_exchanges_left_and_right_exactly_in_closed_form(rng):
    a = list(rng.normal(0.55, 0.03, size=8))
    b = list(rng.normal(0.5, 0.03, size=8))
    fwd = correlated_bayes_ttest(a, b, seed=5)
    rev = correlated_bayes_ttest(b, a, seed=5)
    assert fwd.cf_left == rev.cf_right
    assert fwd.cf_right == rev.cf_left
    assert fwd.cf_rope == rev.cf_rope
    # sampled path only agrees within Monte Carlo error
    assert abs(fwd.p_left - rev.p_right) <= 0.02
    assert abs(fwd.p_right - rev.p_left) <= 0.02


def test_shift_equivariance_is_exact_on_dyadic_scores():
    # 1/64-grid scores and k = 8 keep every mean and difference exact
    rng = np.random.default_rng(11)
    a = list(rng.integers(0, 65, size=8) / 64.0)
    b = list(rng.integers(0, 65, size=8) / 64.0)
    c = 0.25
    base = correlated_bayes_ttest(a, b)
    shifted = correlated_bayes_ttest([x + c for x in a], b)
    assert shifted.posterior_loc == base.posterior_loc + c
    assert shifted.posterior_scale == base.posterior_scale


def test_rho_defaults_to_test_fraction(rng):
    a = list(rng.random(10))
    b = list(rng.random(10))
    assert correlated_bayes_ttest(a, b).rho == pytest.approx(0.1)
    assert correlated_bayes_ttest(a[:5], b[:5]).rho == pytest.approx(0.2)


def test_parameter_validation(rng):
    a = list(rng.random(10))
    b = list(rng.random(10))
    with pytest.raises(ValueError):
        correlated_bayes_ttest(a[:1], b[:1])
    with pytest.raises(ValueError):
        correlated_bayes_ttest(a, b[:5])
    with pytest.raises(ValueError):
        correlated_bayes_ttest(a, b, rope=-0.01)
    with pytest.raises(ValueError):
        correlated_bayes_ttest(a, b, rho=1.0)
    with pytest.raises(ValueError):
        correlated_bayes_ttest(a, b, n_samples=0)


# ---------------------------------------------------------------------------
# pairwise_matrix
# ---------------------------------------------------------------------------


def test_identical_methods_are_equivalent(rng):
    scores = list(rng.random(10))
    matrix = pairwise_matrix([("m1", scores), ("m2", scores)])
    assert set(matrix.cells) == {(0, 1), (1, 0)}
    for cell in matrix.cells.values():
        assert cell.p_rope == 1.0


def test_antisymmetry_of_mirrored_cells(rng):
    methods = [(f"m{i}", list(rng.normal(0.5 + 0.03 * i, 0.02, size=10))) for i in range(3)]
    matrix = pairwise_matrix(methods, seed=7)
    for i in range(3):
        for j in range(3):
            if i == j:
                assert (i, j) not in matrix.cells  # diagonal omitted
                continue
            fwd = matrix.cells[(i, j)]
            rev = matrix.cells[(j, i)]
            assert fwd.cf_left == rev.cf_right
            assert fwd.cf_right == rev.cf_left


def test_separated_methods_dominance_matches_mean_order(rng):
    methods = [
        ("low", list(rng.normal(0.3, 0.01, size=10))),
        ("mid", list(rng.normal(0.5, 0.01, size=10))),
        ("high", list(rng.normal(0.7, 0.01, size=10))),
    ]
    matrix = pairwise_matrix(methods, seed=1)
    means = {name: float(np.mean(s)) for name, s in methods}
    names = matrix.names
    for (i, j), cell in matrix.cells.items():
        if means[names[i]] > means[names[j]]:
            assert cell.cf_right > cell.cf_left  # row better mass dominates
        else:
            assert cell.cf_left > cell.cf_right


def test_pairwise_is_deterministic(rng):
    methods = [(f"m{i}", list(rng.normal(0.5, 0.05, size=10))) for i in range(3)]
    m1 = pairwise_matrix(methods, seed=3)
    m2 = pairwise_matrix(methods, seed=3)
    for key in m1.cells:
        assert m1.cells[key] == m2.cells[key]


def test_pairwise_requires_two_methods(rng):
    with pytest.raises(ValueError):
        pairwise_matrix([("only", list(rng.random(10)))])


def test_pairwise_propagates_errors_with_pair_identity():
    with pytest.raises(ValueError, match=r"\(good, bad\)"):
        pairwise_matrix([("good", [0.5, 0.6]), ("bad", [0.5])])
