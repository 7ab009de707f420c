from math import acos, factorial, pi, sqrt

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from polyapprox.bodies import (Ball, Ellipsoid, box_polytope, convex_hull,
                               make_cap, make_regular_polygon)
from polyapprox.errors import IllConditioned, UnsupportedDimension
from polyapprox.measures import (ball_intrinsic_volume, ball_surface, ball_volume,
                                 ball_volume_analytic, dual_volume,
                                 intrinsic_volumes_exact, kubota_estimate,
                                 l1_metric, omega_q, radial_steiner_fit,
                                 steiner_fit)


def agrees(value, target, sigma, k=3.0):
    return abs(value - target) <= k * max(sigma, 1e-12)


# -- exact ball formulas -------------------------------------------------------


def test_ball_volume_values():
    assert ball_volume(0) == pytest.approx(1.0)
    assert ball_volume(1) == pytest.approx(2.0)
    assert ball_volume(2) == pytest.approx(pi)
    assert ball_volume(3) == pytest.approx(4.0 * pi / 3.0)
    # log-Gamma evaluation stays accurate in high dimension
    assert ball_volume(1000) == pytest.approx(float(
        mpmath.pi ** 500 / mpmath.gamma(501)), rel=1e-12)


def test_ball_intrinsic_volume_values():
    assert ball_intrinsic_volume(2, 1) == pytest.approx(pi)          # V_1(D_2)
    assert ball_intrinsic_volume(3, 1) == pytest.approx(4.0)         # 3(4pi/3)/pi
    assert ball_intrinsic_volume(3, 2) == pytest.approx(2.0 * pi)
    for n in (2, 5, 9):
        assert ball_intrinsic_volume(n, 0) == pytest.approx(1.0)
        assert ball_intrinsic_volume(n, n) == pytest.approx(ball_volume(n))


def test_ball_volume_analytic_extension():
    for n in (2, 3, 6):
        for j in range(n + 1):
            assert ball_volume_analytic(n, float(j)) == pytest.approx(
                ball_intrinsic_volume(n, j), rel=1e-12)
    # high-precision independent evaluation at a fractional index
    n, q = 3, 1.5
    with mpmath.workdps(50):
        ref = (mpmath.pi ** (q / 2) * mpmath.gamma(n + 1)
               / (mpmath.gamma(q + 1) * mpmath.gamma(n - q + 1))
               * mpmath.gamma((n - q) / 2 + 1) / mpmath.gamma(n / 2 + 1))
    assert ball_volume_analytic(n, q) == pytest.approx(float(ref), rel=1e-13)
    with pytest.raises(ValueError):
        ball_volume_analytic(3, 3.5)


# -- exact polytope vectors -------------------------------------------------------


def test_exact_vectors():
    cube = box_polytope(np.zeros(3), np.ones(3))
    assert intrinsic_volumes_exact(cube).values == pytest.approx([1, 3, 3, 1])
    hexa = make_regular_polygon(6)
    assert intrinsic_volumes_exact(hexa).values == pytest.approx(
        [1.0, 3.0, 1.5 * sqrt(3.0)])
    tetra = convex_hull(np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
                                 float) / sqrt(3.0))
    assert intrinsic_volumes_exact(tetra)[3] == pytest.approx(8.0 * sqrt(3.0) / 27.0)
    with pytest.raises(UnsupportedDimension):
        intrinsic_volumes_exact(convex_hull(np.vstack([np.zeros(4), np.eye(4)])))


# -- Kubota projections ------------------------------------------------------------


def test_kubota_cube():
    cube = box_polytope(np.zeros(3), np.ones(3))
    res = kubota_estimate(cube, 1, samples=100_000, seed=41)
    assert agrees(res.value, 3.0, res.std_error)
    res2 = kubota_estimate(cube, 2, samples=8_000, seed=42)
    assert agrees(res2.value, 3.0, res2.std_error)   # j = n-1: half surface area


def test_kubota_matches_half_surface_on_random_polytope():
    p = convex_hull(np.random.default_rng(1).standard_normal((20, 3)))
    res = kubota_estimate(p, 2, samples=8_000, seed=5)
    assert agrees(res.value, 0.5 * p.surface_area(), res.std_error)


def test_kubota_inscribed_polygon_half_perimeter():
    poly = make_regular_polygon(100)
    res = kubota_estimate(poly, 1, samples=60_000, seed=6)
    target = 100.0 * np.sin(pi / 100.0)              # half perimeter
    assert agrees(res.value, target, res.std_error)
    assert target == pytest.approx(pi, rel=2e-4)


def test_kubota_reproducible():
    cube = box_polytope(np.zeros(3), np.ones(3))
    a = kubota_estimate(cube, 1, samples=5_000, seed=9)
    b = kubota_estimate(cube, 1, samples=5_000, seed=9)
    assert a.value == b.value and a.std_error == b.std_error


# -- Steiner fits -------------------------------------------------------------------


def test_steiner_fit_disk():
    vec = steiner_fit(Ball(2), samples=100_000, seed=11)
    for j, target in enumerate([1.0, pi, pi]):
        assert agrees(vec[j], target, vec.error(j))


def test_steiner_fit_cube():
    cube = box_polytope(np.zeros(3), np.ones(3))
    vec = steiner_fit(cube, samples=100_000, seed=12)
    for j, target in enumerate([1, 3, 3, 1]):
        assert agrees(vec[j], target, vec.error(j))


def test_steiner_fit_cap_half_perimeter():
    cap = make_cap(2, 0.1)
    vec = steiner_fit(cap, samples=120_000, seed=13)
    assert agrees(vec[1], acos(0.1) + sqrt(0.99), vec.error(1))


def test_steiner_fit_ill_conditioned():
    with pytest.raises(IllConditioned):
        steiner_fit(Ball(2), radii=[1.0, 1.0 + 1e-9, 1.0 + 2e-9], samples=100, seed=0)


# -- dual volumes ----------------------------------------------------------------------


def test_dual_volume_ball_any_q():
    for q in (-3.0, -1.0, 1.0, 1.5, 2.0, 3.0, 5.5):
        res = dual_volume(Ball(3), q, samples=200, seed=2)
        target = ball_volume_analytic(3, abs(q)) if abs(q) <= 3 else ball_volume(3)
        assert res.value == pytest.approx(target, rel=1e-12)
        assert res.std_error == pytest.approx(0.0, abs=1e-12)
    assert dual_volume(Ball(3), 0.0, samples=200, seed=2).value == 0.0


def test_dual_volume_equals_volume_at_q_n():
    p = convex_hull(np.random.default_rng(8).standard_normal((18, 3)))
    assert p.contains_origin_interior()
    res = dual_volume(p, 3.0, samples=200_000, seed=3)
    assert agrees(res.value, p.volume(), res.std_error)


def test_dual_volume_scaling():
    sq = box_polytope([-1, -1], [1, 1])
    lam, q = 2.0, 1.5
    a = dual_volume(sq, q, samples=50_000, seed=4)
    b = dual_volume(sq.scale(lam), q, samples=50_000, seed=4)
    assert b.value == pytest.approx(lam ** q * a.value, rel=1e-12)


def test_radial_steiner_fit_examples():
    vec = radial_steiner_fit(Ball(2), samples=80_000, seed=15)
    for j, target in enumerate([1.0, pi, pi]):
        assert agrees(vec[j], target, vec.error(j))
    sq = box_polytope([-1, -1], [1, 1])
    vec2 = radial_steiner_fit(sq, samples=120_000, seed=16)
    assert agrees(vec2[2], 4.0, vec2.error(2))
    # dual width of the square against direct quadrature of sec(theta)
    target_v1 = pi * (8.0 / (2.0 * pi)) * quad(lambda t: 1.0 / np.cos(t), 0, pi / 4)[0]
    assert agrees(vec2[1], target_v1, vec2.error(1))
    dv = dual_volume(sq, 1.0, samples=120_000, seed=17)
    assert agrees(dv.value, target_v1, sqrt(dv.std_error ** 2 + vec2.error(1) ** 2))


# -- weighted curvature integrals ---------------------------------------------------------


def test_omega_ball_is_surface_area():
    for q in (-1.0, 0.0, 2.0, 3.0, 7.0):
        res = omega_q(Ball(3), q, samples=500, seed=5)
        assert res.value == pytest.approx(ball_surface(3), rel=1e-12)


def test_omega_ellipse_against_quadrature():
    ell = Ellipsoid([2.0, 1.0])
    res = omega_q(ell, 2.0, samples=50_000, seed=6)
    kappa = lambda t: 2.0 / (4.0 * np.sin(t) ** 2 + np.cos(t) ** 2) ** 1.5
    speed = lambda t: np.sqrt(4.0 * np.sin(t) ** 2 + np.cos(t) ** 2)
    target = quad(lambda t: kappa(t) ** (1.0 / 3.0) * speed(t), 0.0, 2.0 * pi)[0]
    assert res.value == pytest.approx(target, rel=1e-9)


def test_omega_scaling_affine_invariance_rate():
    # Omega_n(lam K) = lam^{n(n-1)/(n+1)} Omega_n(K) for the ball
    n = 3
    lam = 1.7
    a = omega_q(Ball(n), float(n), samples=400, seed=7)
    b = omega_q(Ball(n, lam), float(n), samples=400, seed=7)
    assert b.value == pytest.approx(lam ** (n * (n - 1) / (n + 1)) * a.value, rel=1e-12)


# -- the L^1 metric ---------------------------------------------------------------------


def test_l1_metric_examples():
    sq = box_polytope([-1, -1], [1, 1])
    assert l1_metric(sq, sq, samples=2_000, seed=8).value == 0.0
    res = l1_metric(Ball(2), Ball(2, 1.3), samples=2_000, seed=8)
    assert res.value == pytest.approx(0.3, rel=1e-12)
