import numpy as np

from egocontext.forest import rf_predict, rf_train
from egocontext.fusion import rank_dimensions, rf_evaluator, som_vote_evaluator, stepwise_curve
from egocontext.som import SomTrainConfig


def planted_concat_fixture(n=150, d=400, signal_dims=(5, 300), seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    score = X[:, signal_dims[0]] + X[:, signal_dims[1]]
    labels = np.where(score > 0, "pos", "neg")
    return X, labels


def toy_provenance(d=400, split=200):
    return [("RGB_HIST", i) for i in range(split)] + [("GIST", i) for i in range(d - split)]


def test_planted_dimensions_occupy_first_ranks():
    X, labels = planted_concat_fixture()
    ranking = rank_dimensions(X, labels, n_trees=60, seed=1)
    assert set(ranking[:2].tolist()) == {5, 300}


def test_ranking_is_permutation_of_all_dims():
    X, labels = planted_concat_fixture(n=80, d=120, signal_dims=(3, 60), seed=2)
    ranking = rank_dimensions(X, labels, n_trees=20, seed=2)
    assert sorted(ranking.tolist()) == list(range(120))


def test_ranking_deterministic():
    X, labels = planted_concat_fixture(n=80, d=50, signal_dims=(3, 30), seed=3)
    a = rank_dimensions(X, labels, n_trees=20, seed=5)
    b = rank_dimensions(X, labels, n_trees=20, seed=5)
    assert np.array_equal(a, b)


def test_identity_prefix_matches_raw_rf():
    X, labels = planted_concat_fixture(n=100, d=12, signal_dims=(2, 9), seed=4)
    test_X, test_labels = planted_concat_fixture(n=50, d=12, signal_dims=(2, 9), seed=14)
    ranking = rank_dimensions(X, labels, n_trees=20, seed=4)
    trace = stepwise_curve(
        ranking, X, labels, test_X, test_labels,
        evaluators={"rf": rf_evaluator(n_trees=20, seed=7)},
        provenance=toy_provenance(12, 6),
        step=11, max_dims=12,
    )
    full_step = trace.steps[-1]
    assert full_step.dims_used == 12
    # prefix columns are re-sorted into original order, so the full prefix
    # is the raw matrix and the forest is bit-identical
    model = rf_train(X, labels, n_trees=20, seed=7)
    pred = rf_predict(model, test_X)
    assert full_step.evaluator_scores["rf"] == (pred == test_labels).mean()


def test_family_counts_sum_to_dims_used_and_grow_monotonically():
    X, labels = planted_concat_fixture(n=90, d=60, signal_dims=(4, 40), seed=6)
    test_X, test_labels = planted_concat_fixture(n=40, d=60, signal_dims=(4, 40), seed=16)
    ranking = rank_dimensions(X, labels, n_trees=20, seed=6)
    trace = stepwise_curve(
        ranking, X, labels, test_X, test_labels,
        evaluators={"rf": rf_evaluator(n_trees=15, seed=6)},
        provenance=toy_provenance(60, 30),
        step=5, max_dims=31,
    )
    previous = {}
    for s in trace.steps:
        assert sum(s.family_counts.values()) == s.dims_used
        for fam, c in previous.items():
            assert s.family_counts.get(fam, 0) >= c
        previous = s.family_counts
        assert all(0.0 <= v <= 1.0 for v in s.evaluator_scores.values())


def test_som_evaluator_runs_in_trace():
    rng = np.random.default_rng(8)
    X = np.hstack([rng.normal(size=(120, 4)), np.repeat([[0.0], [4.0]], 60, axis=0)])
    labels = np.array(["a"] * 60 + ["b"] * 60)
    ranking = rank_dimensions(X, labels, n_trees=20, seed=8)
    trace = stepwise_curve(
        ranking, X, labels, X, labels,
        evaluators={"som": som_vote_evaluator(grid_size=3, config=SomTrainConfig(seed=8, epochs=5))},
        provenance=[("RGB_HIST", i) for i in range(5)],
        step=2, max_dims=5,
    )
    assert trace.steps[0].evaluator_scores["som"] >= 0.9  # signal dim ranked first
