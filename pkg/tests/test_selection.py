import numpy as np
import pytest

from egocontext.selection import (
    RESIDUAL_VARIANCE,
    TCQ,
    SweepCurve,
    pick_knee,
    sweep_isomap_neighbors,
    sweep_som_sizes,
)
from egocontext.som import SomTrainConfig
from tests.conftest import smooth_sequence


def test_knee_hand_evaluated_two_percent_rule():
    curve = SweepCurve([4, 8, 12, 16, 20], [0.9, 0.5, 0.3, 0.295, 0.294], RESIDUAL_VARIANCE)
    assert pick_knee(curve) == 12


def test_knee_fallback_to_best_score():
    steep = SweepCurve([1, 2, 3], [1.0, 0.5, 0.25], RESIDUAL_VARIANCE)
    assert pick_knee(steep) == 3
    steep_tcq = SweepCurve([1, 2, 3], [0.2, 0.5, 0.9], TCQ)
    assert pick_knee(steep_tcq) == 3


def test_knee_constant_curve_picks_first():
    curve = SweepCurve([2, 4, 6, 8], [0.5, 0.5, 0.5, 0.5], RESIDUAL_VARIANCE)
    assert pick_knee(curve) == 2


def test_knee_requires_three_points():
    with pytest.raises(ValueError):
        pick_knee(SweepCurve([1, 2], [0.5, 0.4], RESIDUAL_VARIANCE))


def test_knee_member_of_parameters():
    rng = np.random.default_rng(3)
    for _ in range(20):
        params = sorted(rng.choice(np.arange(1, 50), size=5, replace=False).tolist())
        scores = rng.uniform(0, 1, size=5).tolist()
        curve = SweepCurve(params, scores, RESIDUAL_VARIANCE)
        assert pick_knee(curve) in params


def test_isomap_sweep_on_plane(plane_fixture):
    X, _ = plane_fixture
    curve = sweep_isomap_neighbors(X, [8, 12, 16], m=2)
    assert curve.metric == RESIDUAL_VARIANCE
    assert all(np.isfinite(curve.scores))
    # plane geodesics track euclidean distances for every connected k
    for score, flag in zip(curve.scores, curve.flags):
        if not flag:
            assert score < 0.02


def test_isomap_sweep_single_k(plane_fixture):
    X, _ = plane_fixture
    curve = sweep_isomap_neighbors(X, [12], m=2)
    assert len(curve.scores) == 1


def test_isomap_sweep_flags_disconnected():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(size=(12, 3)), rng.normal(size=(12, 3)) + 50.0])
    curve = sweep_isomap_neighbors(X, [2, 3], m=1)
    assert curve.scores[0] == 1.0
    assert curve.flags[0].startswith("disconnected")


def test_isomap_sweep_empty_rejected(plane_fixture):
    with pytest.raises(ValueError):
        sweep_isomap_neighbors(plane_fixture[0], [], m=2)


def test_som_sweep_scores_in_range_and_deterministic():
    X = smooth_sequence(n=120, dim=8, seed=19)
    cfg = SomTrainConfig(seed=19, epochs=5)
    a = sweep_som_sizes(X, [2, 4, 6], cfg)
    b = sweep_som_sizes(X, [2, 4, 6], cfg)
    assert a.metric == TCQ
    assert all(0.0 <= s <= 1.0 for s in a.scores)
    assert a.scores == b.scores


def test_som_sweep_small_grid_topological_advantage():
    X = smooth_sequence(n=300, dim=12, seed=42)
    curve = sweep_som_sizes(X, [2, 30], SomTrainConfig(seed=42))
    assert curve.scores[0] >= curve.scores[1]


def test_som_sweep_empty_rejected():
    with pytest.raises(ValueError):
        sweep_som_sizes(np.zeros((5, 2)), [])
