import numpy as np
import pytest

import wcsf
from conftest import (left_exp_manifold, perturbed_base, product_manifold,
                      right_exp_manifold)
from oracles import fd_christoffel, metric_compat_defect


def random_points(rng, n, base_dim=1):
    pts = []
    for _ in range(n):
        r = rng.uniform(0.0, 2.0 * np.pi)
        x = tuple(rng.uniform(0.0, 2.0 * np.pi, base_dim))
        pts.append(wcsf.WarpPoint(r, x))
    return pts


def test_left_metric_example():
    m = left_exp_manifold()
    g = wcsf.metric_at(m, wcsf.WarpPoint(0.0, (0.0,))).matrix
    assert abs(g[0, 0] - np.exp(0.6)) < 1e-12
    assert g[0, 1] == 0.0 and g[1, 0] == 0.0
    assert g[1, 1] == 1.0


def test_left_christoffel_example():
    m = left_exp_manifold()
    gamma = wcsf.christoffel_at(m, wcsf.WarpPoint(0.0, (np.pi / 2,))).gamma
    assert abs(gamma[0, 0, 1] - (-0.3)) < 1e-12
    assert abs(gamma[0, 1, 0] - (-0.3)) < 1e-12
    assert abs(gamma[1, 0, 0] - 0.3) < 1e-12
    assert abs(gamma[0, 0, 0]) < 1e-15
    assert abs(gamma[1, 1, 1]) < 1e-15


def test_left_warp_gradient_example():
    m = left_exp_manifold()
    grad = wcsf.warp_gradient(m, wcsf.WarpPoint(1.0, (np.pi / 2,)))
    assert isinstance(grad, wcsf.TangentVec)
    comps = np.asarray(grad.components)
    assert abs(comps[0]) < 1e-15
    assert abs(comps[1] - (-0.3)) < 1e-12


def test_right_warp_gradient_example():
    m = right_exp_manifold()
    d1, d2 = wcsf.warp_gradient(m, wcsf.WarpPoint(0.0, (0.3,)))
    assert abs(d1) < 1e-12
    assert abs(d2 - (-0.2)) < 1e-12
    d1b, _ = wcsf.warp_gradient(m, wcsf.WarpPoint(np.pi / 2, (0.0,)))
    assert abs(d1b - (-0.2)) < 1e-12


def test_right_metric_scales_base():
    m = right_exp_manifold()
    g = wcsf.metric_at(m, wcsf.WarpPoint(0.0, (1.0,))).matrix
    assert g[0, 0] == 1.0
    assert abs(g[1, 1] - np.exp(0.4)) < 1e-12


@pytest.mark.parametrize("build", [left_exp_manifold, right_exp_manifold,
                                   product_manifold])
def test_christoffel_matches_fd_oracle(build):
    m = build()
    rng = np.random.default_rng(31)
    for p in random_points(rng, 60):
        got = wcsf.christoffel_at(m, p).gamma
        ref = fd_christoffel(m, p)
        assert np.abs(got - ref).max() < 1e-6


def test_christoffel_matches_fd_on_perturbed_base():
    for kind in (wcsf.LEFT, wcsf.RIGHT):
        warp = wcsf.FourierField.exp_cos(0.3 if kind == wcsf.LEFT else 0.2)
        m = wcsf.WarpedProduct(kind, warp=warp, base_metric=perturbed_base())
        rng = np.random.default_rng(32)
        for p in random_points(rng, 40):
            assert np.abs(wcsf.christoffel_at(m, p).gamma
                          - fd_christoffel(m, p)).max() < 1e-6


def test_christoffel_matches_fd_surface_base():
    entry = wcsf.FourierField2D([[1.0, 0.1], [0.0, 0.05]])
    base = wcsf.BaseMetric(2, {(0, 0): 1.0 + 0.0 * 0, (1, 1): entry,
                               (0, 1): 0.0})
    m = wcsf.WarpedProduct(wcsf.RIGHT, warp=wcsf.FourierField.exp_cos(0.2),
                           base_dim=2, base_metric=base)
    rng = np.random.default_rng(33)
    for p in random_points(rng, 15, base_dim=2):
        assert np.abs(wcsf.christoffel_at(m, p).gamma
                      - fd_christoffel(m, p)).max() < 1e-6


def test_metric_compatibility(left_exp, right_exp):
    rng = np.random.default_rng(34)
    for m in (left_exp, right_exp):
        for p in random_points(rng, 30):
            assert metric_compat_defect(m, p) < 1e-6


def test_metric_positive_definite_many_points(left_exp, right_exp):
    rng = np.random.default_rng(35)
    for m in (left_exp, right_exp):
        pts = np.column_stack([rng.uniform(0, 2 * np.pi, 10_000),
                               rng.uniform(0, 2 * np.pi, 10_000)])
        g = m.frame(pts).metric
        assert np.linalg.eigvalsh(g).min() > 1e-10
        # warp block never mixes circle and base directions
        assert np.abs(g[:, 0, 1:]).max() == 0.0


def test_dr_identity_random_vectors(left_exp, right_exp):
    rng = np.random.default_rng(36)
    for m in (left_exp, right_exp):
        for p in random_points(rng, 100):
            x = wcsf.TangentVec(rng.normal(size=2))
            y = wcsf.TangentVec(rng.normal(size=2))
            assert wcsf.dr_identity_residual(m, p, x, y) < 1e-10


def test_dr_identity_perturbed_and_surface_bases():
    rng = np.random.default_rng(37)
    for kind in (wcsf.LEFT, wcsf.RIGHT):
        warp = wcsf.FourierField.exp_cos(0.3 if kind == wcsf.LEFT else 0.2)
        m = wcsf.WarpedProduct(kind, warp=warp, base_metric=perturbed_base())
        for p in random_points(rng, 50):
            x = wcsf.TangentVec(rng.normal(size=2))
            y = wcsf.TangentVec(rng.normal(size=2))
            assert wcsf.dr_identity_residual(m, p, x, y) < 1e-10
    m2 = wcsf.WarpedProduct(wcsf.RIGHT, warp=wcsf.FourierField.exp_cos(0.2),
                            base_dim=2)
    for p in random_points(rng, 50, base_dim=2):
        x = wcsf.TangentVec(rng.normal(size=3))
        y = wcsf.TangentVec(rng.normal(size=3))
        assert wcsf.dr_identity_residual(m2, p, x, y) < 1e-10


def test_conformal_identity_right_only(left_exp, right_exp):
    rng = np.random.default_rng(38)
    for p in random_points(rng, 100):
        x = wcsf.TangentVec(rng.normal(size=2))
        assert wcsf.conformal_residual(right_exp, p, x) < 1e-10
    with pytest.raises(ValueError):
        wcsf.conformal_residual(left_exp, random_points(rng, 1)[0],
                                wcsf.TangentVec((1.0, 0.0)))


def test_warp_positivity_enforced():
    with pytest.raises(ValueError, match="warp not positive"):
        wcsf.WarpedProduct(wcsf.LEFT, warp=wcsf.FourierField([0.0, 2.0]))
    with pytest.raises(ValueError, match="warp not positive"):
        wcsf.WarpedProduct(wcsf.RIGHT, warp=-1.0)


def test_base_metric_must_be_spd():
    bad = wcsf.FourierField(np.array([1.0, 1.5]))
    with pytest.raises(ValueError, match="positive definite"):
        wcsf.BaseMetric(1, {(0, 0): bad})


def test_warp_point_and_tangent_vec():
    p = wcsf.WarpPoint(7.0, (2.0,))
    assert 0.0 <= p.r < 2.0 * np.pi
    assert np.allclose(p.coords, [7.0 - 2.0 * np.pi, 2.0])
    with pytest.raises(ValueError):
        wcsf.TangentVec((np.nan, 0.0))


def test_inner_product_uses_metric(left_exp):
    p = wcsf.WarpPoint(0.0, (0.0,))
    v = wcsf.TangentVec((1.0, 0.0))
    assert abs(wcsf.inner(left_exp, p, v, v) - np.exp(0.6)) < 1e-12
