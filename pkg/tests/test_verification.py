import numpy as np
import pytest

import wcsf
from conftest import left_exp_manifold, product_manifold, right_exp_manifold


def sin_field(a):
    return wcsf.FourierField([0.0], [0.0, a])


def short_run(manifold, field, m=64, t_max=0.05, stride=5, tol_geo=1e-6):
    curve = wcsf.make_graph_curve(field, m)
    params = wcsf.FlowParams(t_max=t_max, record_stride=stride,
                             tol_geo=tol_geo)
    traj, rep = wcsf.run(manifold, curve, params)
    return traj


def test_stationary_residuals_vanish(left_exp, right_exp):
    # geodesic r-circles: every monitored quantity is identically zero
    for manifold, x0 in ((left_exp, 0.0), (right_exp, 1.1)):
        traj = short_run(manifold, wcsf.FourierField.constant(x0),
                         tol_geo=0.0, stride=1)
        k = len(traj) // 2
        if manifold.kind == wcsf.LEFT:
            res = wcsf.left_evolution_residual(traj, manifold, k)
        else:
            res = wcsf.right_evolution_residual(traj, manifold, k)
        assert np.abs(res).max() < 1e-12
        assert wcsf.commutator_residual(traj, manifold, k) < 1e-12
        assert wcsf.gradient_identity_residual(traj[k], manifold) < 1e-12
        diss = wcsf.dissipation_monitor(traj, manifold)
        assert diss.passed and abs(diss.worst_slack) < 1e-12


def test_left_right_agree_when_warp_constant():
    # right product with constant warp c equals a left product with unit
    # warp over a base scaled by c^2; the two residual routes must agree.
    # The right run rides the flat-base fast kernel while the scaled base
    # forces the left run through the general path, so the bar sits at the
    # aliasing level where the two formulations of the speed derivative
    # separate, far below the 1e-5 truncation signal being compared.
    c = 1.7
    right = wcsf.WarpedProduct(wcsf.RIGHT, warp=c)
    base = wcsf.BaseMetric(1, {(0, 0): wcsf.FourierField.constant(c * c)})
    left = wcsf.WarpedProduct(wcsf.LEFT, warp=1.0, base_metric=base)
    field = sin_field(0.3)
    traj_r = short_run(right, field, stride=1, tol_geo=0.0)
    traj_l = short_run(left, field, stride=1, tol_geo=0.0)
    k = min(len(traj_r), len(traj_l)) // 2
    res_r = wcsf.right_evolution_residual(traj_r, right, k)
    res_l = wcsf.left_evolution_residual(traj_l, left, k)
    assert np.abs(res_r - res_l).max() < 1e-11
    assert abs(wcsf.commutator_residual(traj_r, right, k)
               - wcsf.commutator_residual(traj_l, left, k)) < 1e-11


def test_left_exp_constant_value(left_exp):
    c = wcsf.left_exp_constant(left_exp)
    assert abs(c - 0.09) < 1e-12
    assert c == wcsf.left_exp_constant(left_exp)


def test_right_constants_values(right_exp):
    c = wcsf.right_exp_constant(right_exp)
    assert abs(c - 0.2) < 1e-12
    d = wcsf.right_drift_constant(right_exp)
    # analytic max of 0.16 sin^2 + 0.2 |cos| at cos r = 0.625
    assert abs(d - 0.2225) < 1e-6
    assert d == wcsf.right_drift_constant(right_exp)


def test_left_drift_constant_formula(left_exp):
    got = wcsf.left_drift_constant(left_exp, t0=2.0, min_theta0=1.2)
    c = 0.09
    expect = 4.0 * c * (1.0 + np.exp(0.6) * np.exp(c * 2.0) / 1.2)
    assert abs(got - expect) < 1e-10


def test_product_constant_is_zero(product):
    assert wcsf.left_exp_constant(product) == 0.0


def test_kind_guards():
    left = left_exp_manifold()
    right = right_exp_manifold()
    traj_l = short_run(left, sin_field(0.2))
    traj_r = short_run(right, sin_field(0.2))
    k = 1
    with pytest.raises(ValueError):
        wcsf.left_evolution_residual(traj_r, right, k)
    with pytest.raises(ValueError):
        wcsf.right_evolution_residual(traj_l, left, k)
    with pytest.raises(ValueError):
        wcsf.angle_power_gap(traj_l[0], left)
    with pytest.raises(ValueError):
        wcsf.right_exp_constant(left)
    with pytest.raises(ValueError):
        wcsf.left_exp_constant(right)


def test_residual_needs_interior_index(left_exp):
    traj = short_run(left_exp, sin_field(0.2))
    with pytest.raises(ValueError):
        wcsf.left_evolution_residual(traj, left_exp, 0)
    with pytest.raises(ValueError):
        wcsf.left_evolution_residual(traj, left_exp, len(traj) - 1)


def test_evolution_residual_small_on_recorded_run(left_exp):
    traj = short_run(left_exp, sin_field(0.3))
    res = wcsf.left_evolution_residual(traj, left_exp, len(traj) // 2)
    assert res.max() < 1e-4


def test_right_power_convention():
    # the flow satisfies the first-power form of the gradient term; the
    # squared variant leaves a visibly larger defect, of the size the gap
    # functional reports
    right = right_exp_manifold()
    traj = short_run(right, sin_field(0.3))
    k = len(traj) // 2
    first = wcsf.right_evolution_residual(traj, right, k).max()
    squared = wcsf.right_evolution_residual(traj, right, k,
                                            squared_gradient=True).max()
    gap = wcsf.angle_power_gap(traj[k], right)
    assert squared > 4.0 * first
    assert gap > 1e-6
    assert abs(squared - gap) < gap  # same order of magnitude


def test_theta_monitor_exact_zero_slack_at_start(left_exp):
    traj = short_run(left_exp, sin_field(0.3))
    exp_rep, drift_rep = wcsf.theta_bound_monitor(traj, left_exp)
    assert exp_rep.passed and exp_rep.worst_slack == 0.0
    assert abs(exp_rep.constant_value - 0.09) < 1e-12
    assert drift_rep.passed and drift_rep.worst_slack > 0.0
    assert exp_rep.constant_inputs["min_theta_0"] == traj[0].fields.theta.min()


def test_theta_monitor_negative_tolerance_forces_failure(left_exp):
    traj = short_run(left_exp, sin_field(0.3))
    exp_rep, _ = wcsf.theta_bound_monitor(traj, left_exp, eps_tol=-1.0)
    assert not exp_rep.passed


def test_theta_monitor_vacuous_drift_on_single_state(left_exp):
    curve = wcsf.make_graph_curve(sin_field(0.3), 64)
    traj, _ = wcsf.run(left_exp, curve, wcsf.FlowParams(t_max=0.0))
    exp_rep, drift_rep = wcsf.theta_bound_monitor(traj, left_exp)
    assert exp_rep.passed and drift_rep.passed
    assert "vacuous" in drift_rep.notes


def test_dissipation_monitor_small_defect(product):
    traj = short_run(product, sin_field(0.5))
    rep = wcsf.dissipation_monitor(traj, product)
    assert rep.passed
    assert rep.worst_slack <= 0.0
    assert -rep.worst_slack < 1e-4


def test_closed_form_theta_conventions(left_exp, right_exp):
    for manifold in (left_exp, right_exp):
        traj = short_run(manifold, sin_field(0.3))
        forms = wcsf.closed_form_theta(traj[0], manifold)
        assert forms["direct"] < 1e-12
        assert forms["alternate"] > 1e-3


def test_studies_pass_on_small_grids(left_exp):
    field = sin_field(0.3)
    rep = wcsf.evolution_residual_study(left_exp, field, grids=(32, 64),
                                        t_end=0.04)
    assert rep.passed and rep.orders[0] > 1.8
    rep = wcsf.commutator_residual_study(left_exp, field, grids=(32, 64),
                                         t_end=0.04)
    assert rep.passed and rep.orders[0] > 1.5
    rep = wcsf.dissipation_residual_study(left_exp, field, grids=(32, 64),
                                          t_end=0.04)
    assert rep.passed and rep.orders[0] > 1.8


def test_gradient_identity_study_floor_escape(left_exp):
    rep = wcsf.gradient_identity_study(left_exp, sin_field(0.3),
                                       grids=(64, 128))
    assert rep.passed
    assert max(rep.max_residuals) < 1e-11


def test_material_derivative_needs_graph_nodes(product):
    u = wcsf.spectral.nodes(64)
    coords = np.column_stack([u, 0.3 * np.sin(u)])
    curve = wcsf.DiscreteCurve("parametric", coords, (1, 0))
    traj, _ = wcsf.run(product, curve,
                       wcsf.FlowParams(t_max=0.02, record_stride=1,
                                       tol_geo=0.0))
    with pytest.raises(ValueError):
        wcsf.left_evolution_residual(traj, product, 1)