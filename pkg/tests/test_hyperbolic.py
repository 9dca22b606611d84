import math
import random

import pytest

from heisquat.hyperbolic import (DEFAULT_TOL, IDENTITY3, INFINITY, IOTA,
                                 HoroPoint, Q_ZERO, SiegelPoint, apply_matrix,
                                 busemann, coords, cygan, dist, geodesic_to_zero,
                                 geom_selftest, heis_translation_matrix, horo,
                                 horoball_distance, is_unitary, metric_and_volume,
                                 metric_matrix, project_to_quaternionic_line,
                                 project_to_vertical_geodesic, q_scalar, qmat_mul,
                                 qmat_inverse_unitary, six_equations, siegel,
                                 to_horo, to_siegel, upper_triangular_matrix,
                                 vertical_geodesic, _det)
from heisquat.quaternion import HAMILTON, Quaternion


def imq(a, b, c):
    return Quaternion(HAMILTON, 0.0, a, b, c)


def rand_point(rng, spread=1.0):
    return horo(q_scalar(*(rng.uniform(-spread, spread) for _ in range(4))),
                imq(*(rng.uniform(-spread, spread) for _ in range(3))),
                math.exp(rng.uniform(-1.5, 1.5)))


def test_coords_examples():
    p = horo(Q_ZERO, 0 * Q_ZERO, 1.0)
    s = to_siegel(p)
    assert s.w0.coeffs == (0.5, 0.0, 0.0, 0.0)
    assert to_horo(s).t == 1.0
    assert isinstance(coords(s), HoroPoint) and isinstance(coords(p), SiegelPoint)
    # boundary t = 0
    b = horo(q_scalar(1.0), imq(2, 0, 0), 0.0)
    sb = to_siegel(b)
    assert sb.w0.coeffs == (0.5, 1.0, 0.0, 0.0)
    assert to_horo(sb).t == 0.0


def test_coords_roundtrip_random():
    rng = random.Random(0)
    for _ in range(50):
        p = rand_point(rng)
        q = to_horo(to_siegel(p))
        assert abs(q.t - p.t) <= 1e-12 * (1 + abs(p.t))
        assert max(abs(a - b) for a, b in zip(q.u.coeffs, p.u.coeffs)) < 1e-12


def test_dist_examples():
    p = horo(Q_ZERO, 0 * Q_ZERO, 1.0)
    q = horo(Q_ZERO, 0 * Q_ZERO, math.e ** 2)
    assert abs(dist(p, q) - 1.0) < 1e-12
    assert dist(p, p) == 0.0
    rng = random.Random(1)
    for _ in range(100):
        a, b = rand_point(rng), rand_point(rng)
        assert abs(dist(a, b) - dist(b, a)) <= 1e-10


def test_triangle_inequality():
    rng = random.Random(2)
    for _ in range(1000):
        a, b, c = (rand_point(rng) for _ in range(3))
        assert dist(a, c) <= dist(a, b) + dist(b, c) + 1e-10


def test_dist_rejects_boundary():
    with pytest.raises(ValueError):
        dist(horo(Q_ZERO, 0 * Q_ZERO, 0.0), horo(Q_ZERO, 0 * Q_ZERO, 1.0))


def test_busemann_examples():
    x = horo(Q_ZERO, 0 * Q_ZERO, 1.0)
    y = horo(Q_ZERO, 0 * Q_ZERO, math.e ** 2)
    assert abs(busemann(INFINITY, x, y) - 1.0) < 1e-12
    xi = horo(q_scalar(0.7, -0.2, 0, 0.1), imq(0.4, 0, -1), 0.0)
    assert busemann(xi, x, x) == 0.0


def test_busemann_cocycle_and_limit():
    rng = random.Random(3)
    for _ in range(25):
        xi = horo(q_scalar(*(rng.uniform(-1, 1) for _ in range(4))),
                  imq(*(rng.uniform(-1, 1) for _ in range(3))), 0.0)
        x, y, z = (rand_point(rng) for _ in range(3))
        lhs = busemann(xi, x, z)
        rhs = busemann(xi, x, y) + busemann(xi, y, z)
        assert abs(lhs - rhs) <= 1e-9
        gam = geodesic_to_zero(to_siegel(xi))
        far = gam(-0.5 * math.log(1e8))
        assert abs(busemann(xi, x, y) - (dist(far, x) - dist(far, y))) <= 1e-6


def test_geodesic_limits_and_unit_speed():
    rng = random.Random(4)
    for _ in range(10):
        xi = horo(q_scalar(*(rng.uniform(-1, 1) for _ in range(4))),
                  imq(*(rng.uniform(-1, 1) for _ in range(3))), 0.0)
        if to_siegel(xi).w0.norm() < 1e-6:
            continue
        gam = geodesic_to_zero(to_siegel(xi))
        assert cygan(to_horo(gam(-30.0)), xi) <= 1e-9
        assert cygan(to_horo(gam(30.0)), horo(Q_ZERO, 0 * Q_ZERO, 0.0)) <= 1e-9
        h = 1e-4
        for s in (-2.0, 0.0, 1.5):
            assert abs(dist(gam(s), gam(s + h)) / h - 1.0) <= 1e-6


def test_vertical_geodesic_unit_speed():
    gam = vertical_geodesic(q_scalar(0.3, 0, 0.2, 0), imq(1, 0, 0))
    h = 1e-4
    for s in (-1.0, 0.0, 2.0):
        assert abs(dist(gam(s), gam(s + h)) / h - 1.0) <= 1e-6


def test_geodesic_rejects_origin_and_interior():
    with pytest.raises(ValueError):
        geodesic_to_zero(to_siegel(horo(Q_ZERO, 0 * Q_ZERO, 0.0)))
    with pytest.raises(ValueError):
        geodesic_to_zero(to_siegel(horo(Q_ZERO, 0 * Q_ZERO, 1.0)))


def test_project_vertical_examples():
    p = project_to_vertical_geodesic(horo(q_scalar(1.0), 0 * Q_ZERO, 0.0))
    assert abs(p.t - 1.0) < 1e-12
    p = project_to_vertical_geodesic(horo(Q_ZERO, imq(2, 0, 0), 0.0))
    assert abs(p.t - 2.0) < 1e-12
    # preimage spheres: same Cygan gauge implies the same projection
    a = horo(q_scalar(1.0), 0 * Q_ZERO, 0.0)
    b = horo(Q_ZERO, imq(1, 0, 0), 0.0)
    pa = project_to_vertical_geodesic(a)
    pb = project_to_vertical_geodesic(b)
    assert abs(pa.t - pb.t) < 1e-12


def test_project_vertical_variational():
    # interior points approaching the boundary point project nearby, and the
    # stated image beats other points of the line
    p0 = horo(q_scalar(0.8, 0.1, 0, 0), imq(0.5, -0.3, 0.2), 0.0)
    proj = project_to_vertical_geodesic(p0)
    near = horo(p0.zeta, p0.u, 1e-6)
    base = dist(near, proj)
    for t in (proj.t * 0.8, proj.t * 1.25, proj.t * 2.0):
        assert base <= dist(near, horo(Q_ZERO, 0 * Q_ZERO, t)) + 1e-9


def test_project_qline_examples():
    s = siegel(q_scalar(1.0, 0.5, 0, 0), q_scalar(0.3, 0, 0, 0))
    pr = project_to_quaternionic_line(s)
    assert pr.w0 == s.w0 and all(x.norm() == 0 for x in pr.w)
    b = project_to_quaternionic_line(horo(q_scalar(1.0), imq(1, 0, 0), 0.0))
    assert b.u.coeffs == (0.0, 1.0, 0.0, 0.0) and abs(b.t - 1.0) < 1e-12
    with pytest.raises(ValueError):
        project_to_quaternionic_line(horo(Q_ZERO, imq(1, 0, 0), 0.0))


def test_project_qline_minimizer():
    rng = random.Random(5)
    p = horo(q_scalar(0.4, -0.2, 0.3, 0.1), imq(0.2, 0.5, -0.1), 0.7)
    pr = project_to_quaternionic_line(p)
    base = dist(p, pr)
    for _ in range(100):
        c = horo(Q_ZERO, imq(*(rng.uniform(-2, 2) for _ in range(3))),
                 math.exp(rng.uniform(-2, 2)))
        assert base <= dist(p, c) + 1e-9


def test_unitary_examples():
    assert is_unitary(IDENTITY3)
    assert is_unitary(IOTA)
    tau = heis_translation_matrix(q_scalar(1, 2, 0.5, 0), imq(0.3, 0.7, -2))
    assert is_unitary(tau)
    assert max(six_equations(tau)) <= DEFAULT_TOL
    # non-unitary perturbation fails both tests
    bad = qmat_mul(tau, heis_translation_matrix(q_scalar(1e-3), 0 * Q_ZERO))
    bad = tuple(tuple(x + q_scalar(1e-3) for x in row) for row in bad)
    assert not is_unitary(bad)
    assert max(six_equations(bad)) > DEFAULT_TOL


def test_unitarity_equivalence_random():
    rng = random.Random(6)
    for _ in range(200):
        U = q_scalar(*(rng.uniform(-1, 1) for _ in range(4)))
        U = U * (1.0 / math.sqrt(U.norm()))
        mu = q_scalar(*(rng.uniform(-1, 1) for _ in range(4)))
        mu = mu * (1.0 / math.sqrt(mu.norm()))
        g = upper_triangular_matrix(q_scalar(*(rng.uniform(-2, 2) for _ in range(4))),
                                    imq(*(rng.uniform(-2, 2) for _ in range(3))),
                                    U, mu, math.exp(rng.uniform(-1, 1)))
        if rng.random() < 0.5:
            g = qmat_mul(g, IOTA)
        assert is_unitary(g) == (max(six_equations(g)) <= DEFAULT_TOL)
        assert is_unitary(g)
        # the U_q inverse really inverts
        prod = qmat_mul(g, qmat_inverse_unitary(g))
        assert max(abs(c) for r in range(3) for x in [prod[r][r] - q_scalar(1)]
                   for c in x.coeffs) <= 1e-9


def test_horoball_distance_examples():
    assert abs(horoball_distance(IOTA, 2.0)) < 1e-12
    assert abs(horoball_distance(IOTA, 2 * math.e ** 2) - 2.0) < 1e-12
    with pytest.raises(ValueError, match="fixes infinity"):
        horoball_distance(IDENTITY3, 2.0)
    # d(dH_1, dH_s) = ln(s)/2 along the vertical geodesic
    one = horo(Q_ZERO, 0 * Q_ZERO, 1.0)
    s4 = horo(Q_ZERO, 0 * Q_ZERO, math.e ** 4)
    assert abs(dist(one, s4) - 2.0) < 1e-12


def test_metric_examples():
    p = horo(Q_ZERO, 0 * Q_ZERO, 1.0)
    sq, dens = metric_and_volume(p, ((Q_ZERO,), 0 * Q_ZERO, 1.0))
    assert abs(sq - 0.25) < 1e-15
    assert abs(dens - 1 / 16) < 1e-18
    with pytest.raises(ValueError):
        metric_and_volume(horo(Q_ZERO, 0 * Q_ZERO, 0.0), ((Q_ZERO,), 0 * Q_ZERO, 1.0))


def test_volume_density_det_consistency():
    rng = random.Random(7)
    for _ in range(10):
        p = rand_point(rng)
        det = _det(metric_matrix(p))
        dens = metric_and_volume(p, ((Q_ZERO,), 0 * Q_ZERO, 1.0))[1]
        assert abs(math.sqrt(det) / dens - 1.0) <= 1e-8


def test_isometry_invariance():
    rng = random.Random(8)
    for _ in range(50):
        a, b = rand_point(rng), rand_point(rng)
        tau = heis_translation_matrix(
            q_scalar(*(rng.uniform(-1, 1) for _ in range(4))),
            imq(*(rng.uniform(-1, 1) for _ in range(3))))
        assert abs(dist(apply_matrix(tau, a), apply_matrix(tau, b)) - dist(a, b)) <= 1e-9
        assert abs(dist(apply_matrix(IOTA, a), apply_matrix(IOTA, b)) - dist(a, b)) <= 1e-9


def test_translation_matrix_matches_group_action():
    rng = random.Random(9)
    for _ in range(30):
        z = q_scalar(*(rng.uniform(-1, 1) for _ in range(4)))
        u = imq(*(rng.uniform(-1, 1) for _ in range(3)))
        p = rand_point(rng)
        moved = to_horo(apply_matrix(heis_translation_matrix(z, u), p))
        # expected: (z + zeta, u + u' + 2 Im(conj(z) zeta'), t)
        exp_zeta = z + p.zeta[0]
        exp_u = u + p.u + 2 * (z.conj() * p.zeta[0]).imag()
        assert max(abs(a - b) for a, b in zip(moved.zeta[0].coeffs, exp_zeta.coeffs)) < 1e-9
        assert max(abs(a - b) for a, b in zip(moved.u.coeffs, exp_u.coeffs)) < 1e-9
        assert abs(moved.t - p.t) < 1e-9


def test_selftest_passes():
    rep = geom_selftest()
    assert rep["pass"], rep
