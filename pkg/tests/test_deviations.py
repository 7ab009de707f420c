from math import acos, asin, cos, pi, sin, sqrt, tan

import numpy as np
import pytest
from scipy.integrate import quad

from polyapprox.bodies import (EMPTY, Ball, box_polytope, circumscribed_polygon,
                               make_cap, make_regular_polygon, make_triangle_T)
from polyapprox.deviations import (Delta1Comparison, MomentSequence, delta1_comparison,
                                   delta_j, delta_lambda, delta_sigma, dual_delta,
                                   dual_delta_lambda, dual_delta_sigma, dual_wills,
                                   figure1_closed, figure1_curves, intersect,
                                   stochastic_wills, triangle_violation, wills)
from polyapprox.measures import ball_volume


def combined(*reports):
    return sqrt(sum(r.std_error ** 2 for r in reports))


# -- intersections --------------------------------------------------------------------


def test_intersect_inscribed_triangle_is_triangle():
    tri = make_triangle_T(0.0)
    inter = intersect(Ball(2), tri)
    # T(0) ⊆ D_2, so the intersection has the triangle's support function
    u = np.array([[0.0, 1.0], [1.0, 0.0], [-0.6, 0.8]])
    assert inter.support(u) == pytest.approx(tri.support(u), abs=1e-9)


def test_intersect_shifted_squares():
    sq = box_polytope([-1, -1], [1, 1])
    inter = intersect(sq, sq.translate([1.0, 0.0]))
    assert inter.volume() == pytest.approx(2.0)
    assert inter.bounding_box()[0] == pytest.approx([0.0, -1.0])
    assert inter.bounding_box()[1] == pytest.approx([1.0, 1.0])


def test_intersect_disjoint_caps_empty():
    assert intersect(make_cap(2, 0.1), make_cap(2, 0.1, -1)) is EMPTY
    assert intersect(make_cap(3, 0.05), make_cap(3, 0.05, -1)) is EMPTY
    # far-apart polytopes
    sq = box_polytope([-1, -1], [1, 1])
    assert intersect(sq, sq.translate([5.0, 0.0])) is EMPTY


# -- Delta_j -----------------------------------------------------------------------------


def test_delta_j_inscribed_polygons():
    for nv in (4, 6, 12):
        rep = delta_j(Ball(2), make_regular_polygon(nv), 2)
        assert rep.value == pytest.approx(pi - 0.5 * nv * sin(2.0 * pi / nv), abs=1e-12)
        assert rep.std_error == 0.0


def test_delta_j_cap():
    rep = delta_j(Ball(2), make_cap(2, 0.1), 1)
    assert rep.value == pytest.approx(pi - (acos(0.1) + sqrt(0.99)), abs=1e-12)


def test_delta_j_identical_is_zero():
    assert delta_j(Ball(3), Ball(3), 2).value == 0.0
    sq = box_polytope([-1, -1], [1, 1])
    assert delta_j(sq, sq, 1).value == 0.0


def test_delta_j_general_position_mc():
    # disk vs unit square shifted to general position; oracle by fine grid
    sq = box_polytope([-0.4, -0.4], [1.2, 1.2])
    rep = delta_j(Ball(2), sq, 2, samples=400_000, seed=3)
    xs = np.linspace(-1.05, 1.25, 1301)
    grid = np.stack(np.meshgrid(xs, xs), axis=-1).reshape(-1, 2)
    cell = (xs[1] - xs[0]) ** 2
    in_disk = np.linalg.norm(grid, axis=1) <= 1.0
    in_sq = np.all((grid >= [-0.4, -0.4]) & (grid <= [1.2, 1.2]), axis=1)
    oracle = pi + 1.6 ** 2 - 2.0 * cell * np.count_nonzero(in_disk & in_sq)
    assert rep.value == pytest.approx(oracle, abs=4.0 * rep.std_error + 2e-3)


# -- Wills functionals --------------------------------------------------------------------


def test_wills_segment_value():
    # W(D_1) = V_0 + V_1 of the segment [-1, 1]
    assert 1.0 + ball_volume(1) == pytest.approx(3.0)


def test_wills_cube_and_ball():
    cube = box_polytope(np.zeros(3), np.ones(3))
    rep = wills(cube, samples=150_000, seed=4)
    assert rep.sum_form.value == pytest.approx(8.0, abs=1e-12)
    assert rep.agree_within(3.0)
    rep2 = wills(Ball(2), samples=150_000, seed=5)
    assert rep2.sum_form.value == pytest.approx(1.0 + 2.0 * pi, abs=1e-12)
    assert rep2.agree_within(3.0)


def test_wills_ball_exponential_bound():
    from polyapprox.constants import wills_ball
    from polyapprox.measures import ball_intrinsic_volume
    for n in range(2, 11):
        assert wills_ball(n) <= np.exp(ball_intrinsic_volume(n, 1))


def test_stochastic_wills_constant_radius_is_parallel_volume():
    cube = box_polytope(np.zeros(3), np.ones(3))
    r = 0.5
    val = stochastic_wills(cube, MomentSequence.constant(r, 3)).value
    exact = sum(ball_volume(3 - j) * r ** (3 - j) * v
                for j, v in enumerate([1.0, 3.0, 3.0, 1.0]))
    assert val == pytest.approx(exact, abs=1e-12)
    # direct Monte Carlo of |K + r D_n|
    rng = np.random.default_rng(0)
    pts = rng.uniform(-r, 1 + r, size=(400_000, 3))
    box_vol = (1 + 2 * r) ** 3
    frac = np.count_nonzero(cube.dist(pts) <= r) / len(pts)
    sigma = box_vol * sqrt(frac * (1 - frac) / len(pts))
    assert val == pytest.approx(box_vol * frac, abs=4.0 * sigma)


def test_stochastic_wills_weibull_recovers_wills():
    cube = box_polytope(np.zeros(3), np.ones(3))
    val = stochastic_wills(cube, MomentSequence.wills_weibull(3)).value
    assert val == pytest.approx(8.0, abs=1e-10)


def test_delta_lambda_zero_and_reductions():
    sq = box_polytope([-1, -1], [1, 1])
    assert delta_lambda(sq, sq, MomentSequence.wills_weibull(2)).value == 0.0
    # point mass at 0 reduces the stochastic deviation to Delta_n
    hexa = make_regular_polygon(6)
    rep = delta_lambda(Ball(2), hexa, MomentSequence.point_mass_zero(2))
    dn = delta_j(Ball(2), hexa, 2)
    assert rep.value == pytest.approx(dn.value, abs=1e-12)
    # Weibull moments turn the stochastic deviation into the Wills deviation
    rep2 = delta_lambda(Ball(2), hexa, MomentSequence.wills_weibull(2))
    ds = delta_sigma(Ball(2), hexa)
    assert rep2.value == pytest.approx(ds.value, abs=1e-12)


def test_moment_sequence_validation():
    with pytest.raises(ValueError):
        MomentSequence(np.array([2.0, 1.0, 1.0]))       # m_0 != 1
    with pytest.raises(ValueError):
        MomentSequence(np.array([1.0, 1.0, 0.5]))       # not log-convex
    m = MomentSequence.wills_weibull(5)
    assert m.order == 5 and m[0] == 1.0


# -- dual deviations --------------------------------------------------------------------


def test_dual_delta_equals_volume_difference_at_q_n():
    sq = box_polytope([-1, -1], [1, 1])
    shifted = sq.translate([0.5, 0.0])
    rep = dual_delta(sq, shifted, 2.0, samples=300_000, seed=6)
    # symmetric difference of the two squares has volume 2 * (0.5 * 2) = 2
    assert rep.value == pytest.approx(2.0, abs=3.0 * rep.std_error)
    assert rep.cross_value == pytest.approx(2.0, abs=3.0 * rep.cross_std_error)


def test_dual_delta_circumscribed_polygon_closed_form():
    nv = 8
    q = circumscribed_polygon(nv)
    rep = dual_delta(Ball(2), q, 1.0, samples=400_000, seed=7)
    closed = pi * ((nv / pi) * np.log(1.0 / cos(pi / nv) + tan(pi / nv)) - 1.0)
    # and independently via quadrature of the polygon radial function
    quad_val = pi * ((nv / pi) * quad(lambda t: 1.0 / np.cos(t), 0.0, pi / nv)[0] - 1.0)
    assert closed == pytest.approx(quad_val, abs=1e-12)
    assert rep.value == pytest.approx(closed, abs=3.0 * rep.std_error)
    assert rep.cross_value == pytest.approx(closed, abs=3.0 * rep.cross_std_error)


def test_dual_delta_zero_kinds():
    sq = box_polytope([-1, -1], [1, 1])
    rep = dual_delta(sq, sq, 0.0, samples=1_000, seed=8)
    assert rep.kind == "dual_delta_0hat"
    assert rep.value == 0.0
    assert dual_delta_sigma(sq, sq, samples=1_000, seed=8).value == 0.0
    assert dual_delta_lambda(sq, sq, MomentSequence.wills_weibull(2),
                             samples=1_000, seed=8).value == 0.0


def test_dual_wills_ball_and_square():
    rep = dual_wills(Ball(3), samples=50_000, seed=9)
    target = sum(ball_volume(3) if j == 3 else 0 for j in range(4))  # placeholder
    from polyapprox.measures import ball_intrinsic_volume
    target = sum(ball_intrinsic_volume(3, j) for j in range(4))
    assert rep.sum_form.value == pytest.approx(target, rel=1e-12)
    assert rep.agree_within(3.0)
    sq = box_polytope([-1, -1], [1, 1])
    rep2 = dual_wills(sq, samples=200_000, seed=10)
    assert rep2.agree_within(3.0)


# -- Delta_1 vs delta_1 ---------------------------------------------------------------------


def test_delta1_comparison_nested_equality():
    res = delta1_comparison(Ball(2), make_regular_polygon(6), samples=150_000, seed=11)
    assert res.union_convex
    assert abs(res.gap) <= 3.0 * res.gap_std + 1e-9


def test_delta1_comparison_caps_gap_positive():
    res = delta1_comparison(make_cap(2, 0.3), make_cap(2, 0.3, -1),
                            samples=150_000, seed=12)
    assert not res.union_convex
    assert res.gap > 3.0 * res.gap_std


def test_delta1_comparison_identical():
    res = delta1_comparison(Ball(2), Ball(2), samples=20_000, seed=13)
    assert res.gap == 0.0 and res.union_convex


# -- triangle inequality failure ----------------------------------------------------------


def test_triangle_violation_plane():
    res = triangle_violation(2, 1, 0.1, seed=14)
    assert res.violated
    assert res.rhs == pytest.approx(2.0 * (acos(0.1) + sqrt(0.99)), abs=1e-12)
    # a nearly vanishing cap cannot violate the inequality
    res2 = triangle_violation(2, 1, 0.999, seed=15)
    assert not res2.violated


def test_triangle_violation_3d_surface():
    res = triangle_violation(3, 2, 0.1, samples=150_000, seed=16)
    assert res.violated
    # oracle: 2 V_2(L_eps) = zone area + disk area = 2 pi (1 - eps) + pi (1 - eps^2)
    oracle = 2.0 * pi * 0.9 + pi * 0.99
    assert res.rhs == pytest.approx(oracle, abs=4.0 * res.rhs_std + 0.02)


# -- disk/triangle curves -------------------------------------------------------------------


def test_figure1_branch_values():
    pd, d1 = figure1_closed(0.0)
    assert pd == d1 == pytest.approx(pi - 1.5 * sqrt(3.0))
    pd, d1 = figure1_closed(1.0)
    assert pd == d1 == pytest.approx(3.0 * sqrt(3.0) - pi)
    pd, _ = figure1_closed(0.5)
    assert pd == pytest.approx(-2.0 * pi - 9.0 * sqrt(3.0) / 4.0
                               + 6.0 * sqrt(1.25) + 6.0 * asin(2.0 / 3.0), abs=1e-12)


def test_figure1_branch_continuity():
    for h0 in (0.0, 1.0):
        below = figure1_closed(h0 - 1e-11)
        above = figure1_closed(h0 + 1e-11)
        assert below[0] == pytest.approx(above[0], abs=1e-9)
        assert below[1] == pytest.approx(above[1], abs=1e-9)


def test_figure1_mc_matches_closed_forms():
    rows = figure1_curves([-0.5, 0.0, 0.5, 1.0, 2.0], samples=200_000, seed=17)
    for r in rows:
        assert r.pi_delta1_mc == pytest.approx(r.pi_delta1_closed,
                                               abs=3.0 * r.pi_delta1_mc_std + 1e-9)
        assert r.delta1_mc == pytest.approx(r.delta1_closed,
                                            abs=3.0 * r.delta1_mc_std + 1e-9)


def test_figure1_minima_locations():
    grid = np.round(np.arange(-0.9, 3.0001, 0.005), 10)
    rows = figure1_curves(grid)
    pd = np.array([r.pi_delta1_closed for r in rows])
    d1 = np.array([r.delta1_closed for r in rows])
    h_pd = grid[int(np.argmin(pd))]
    h_d1 = grid[int(np.argmin(d1))]
    assert 0.0 < h_pd < 1.0
    assert h_d1 == pytest.approx(0.0, abs=1e-12)
