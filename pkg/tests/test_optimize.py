from math import pi, sin, sqrt, tan

import numpy as np
import pytest

from polyapprox.bodies import Ball, make_regular_polygon
from polyapprox.errors import BudgetTooSmall
from polyapprox.measures import ball_intrinsic_volume, intrinsic_volumes_exact
from polyapprox.optimize import (OptimizerConfig, best_circumscribed, best_inscribed,
                                 oracle_2d, simultaneous_ratio)

CFG = OptimizerConfig(restarts=6, steps=1200, seed=2024)


def test_oracle_2d_values():
    assert oracle_2d(4, "inscribed") == pytest.approx(pi - 2.0)
    assert oracle_2d(6, "inscribed") == pytest.approx(pi - 1.5 * sqrt(3.0))
    assert oracle_2d(6, "circumscribed") == pytest.approx(2.0 * sqrt(3.0) - pi)
    # N^2-scaled limits of the closed forms
    n_big = 4096
    assert n_big ** 2 * oracle_2d(n_big, "inscribed") == pytest.approx(
        2.0 * pi ** 3 / 3.0, rel=1e-5)
    assert n_big ** 2 * oracle_2d(n_big, "circumscribed") == pytest.approx(
        pi ** 3 / 3.0, rel=1e-5)


def test_best_inscribed_area_matches_regular_polygons():
    for nv in (3, 5, 8):
        res = best_inscribed(Ball(2), nv, j=2, config=CFG)
        oracle = oracle_2d(nv, "inscribed")
        assert abs(res.value - oracle) / oracle < 1e-6
        assert res.polytope.num_vertices <= nv
        assert np.abs(np.linalg.norm(res.polytope.vertices, axis=1) - 1.0).max() < 1e-9


def test_best_inscribed_width_triangle():
    # the regular inscribed triangle is not beaten for Delta_1 either
    res = best_inscribed(Ball(2), 3, j=1, config=CFG)
    oracle = pi - 3.0 * sin(pi / 3.0)            # equals pi - 3 sqrt(3)/2
    assert oracle == pytest.approx(pi - 1.5 * sqrt(3.0))
    assert res.value >= oracle - 1e-9 * oracle
    assert abs(res.value - oracle) / oracle < 1e-6


def test_best_circumscribed_polygons():
    res4 = best_circumscribed(Ball(2), 4, j=2, config=CFG)
    assert abs(res4.value - (4.0 - pi)) / (4.0 - pi) < 1e-6
    res6 = best_circumscribed(Ball(2), 6, j=2, config=CFG)
    oracle = 2.0 * sqrt(3.0) - pi
    assert abs(res6.value - oracle) / oracle < 1e-6
    # circumscribed polytopes contain the ball
    u = np.stack([np.cos(np.linspace(0, 2 * pi, 90)), np.sin(np.linspace(0, 2 * pi, 90))], 1)
    u /= np.linalg.norm(u, axis=1)[:, None]
    assert np.all(res6.polytope.support(u) >= 1.0 - 1e-9)


def test_budget_too_small():
    with pytest.raises(BudgetTooSmall):
        best_inscribed(Ball(2), 2, j=2, config=CFG)


def test_restart_stability():
    res = best_inscribed(Ball(2), 7, j=2, config=OptimizerConfig(restarts=10, steps=1200,
                                                                 seed=7))
    best = min(res.history)
    close = sum(1 for h in res.history if abs(h - best) / best < 1e-4)
    assert close >= 9          # >= 90% of restarts reach the best basin


def test_budget_monotonicity():
    values = [best_inscribed(Ball(2), nv, j=2,
                             config=OptimizerConfig(restarts=4, steps=800, seed=5)).value
              for nv in range(4, 13)]
    for a, b in zip(values, values[1:]):
        assert b <= a + 1e-9


def test_inscribed_isoperimetric_sandwich():
    # every inscribed candidate obeys the chain between the j = 1 and j = n ends
    res = best_inscribed(Ball(2), 6, j=2, config=CFG)
    vec = intrinsic_volumes_exact(res.polytope)
    d1 = pi - vec[1]
    d2 = pi - vec[2]
    lhs = 1.0 - (1.0 - d1 / pi) ** 2
    mid = d2 / pi
    rhs = 1.0 - (1.0 - d2 / pi)                  # j = n case collapses
    assert lhs <= mid + 1e-12
    assert mid <= rhs + 1e-12


def test_tetrahedron_in_ball():
    cfg = OptimizerConfig(restarts=4, steps=600, seed=3)
    res = best_inscribed(Ball(3), 4, j=3, config=cfg)
    target = 4.0 * pi / 3.0 - 8.0 * sqrt(3.0) / 27.0
    assert abs(res.value - target) / target < 0.01


def test_simultaneous_ratio_examples():
    hexa = make_regular_polygon(6)
    res = simultaneous_ratio(Ball(2), hexa)
    expected = max((pi - 3.0) / pi, (pi - 1.5 * sqrt(3.0)) / pi)
    assert res.value == pytest.approx(expected, abs=1e-12)
    assert res.argmax_j == 2                      # volume maximizes for inscribed
    # a ball approximated by itself: use a fine polygon as the degenerate stand-in
    fine = make_regular_polygon(4096)
    res2 = simultaneous_ratio(Ball(2), fine)
    assert res2.value < 1e-5
    # improving the budget improves the ratio
    res12 = simultaneous_ratio(Ball(2), make_regular_polygon(12))
    assert res12.value < res.value


def test_circumscribed_scaled_limit_extrapolates():
    cfg = OptimizerConfig(restarts=4, steps=900, seed=11)
    budgets = [32, 64, 128]
    scaled = []
    for nv in budgets:
        res = best_circumscribed(Ball(2), nv, j=2, config=cfg)
        scaled.append(nv ** 2 * res.value)
    x = np.array([1.0 / nv ** 2 for nv in budgets])
    design = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(design, np.array(scaled), rcond=None)
    assert coef[0] == pytest.approx(pi ** 3 / 3.0, rel=1e-2)
