import math

import numpy as np
import pytest

from surfgrow import (CFLViolation, FieldState, Grid1D, GrowthNotSupported,
                      MissingInflowBC, OutOfDomain, PeriodicStrip, StepRecord,
                      ValidationError, advance_F_e_grid, advance_F_grid,
                      advance_inverse_motion, deformation_from_inverse_motion,
                      elastic_rate_with_relax_evolution, integrate_characteristics,
                      reconstruct_reference)
from surfgrow.kinematics import PathlineRecord
from surfgrow.tensors import identity


def make_state(n=8, H=1.0, v2=0.0):
    grid = Grid1D(n, H)
    v = np.zeros((n, 2))
    v[:, 1] = v2
    return FieldState(grid=grid, t=0.0, v=v, F_e=identity((n,)),
                      p=np.zeros(n), rho=np.ones(n))


def shear_grad(n, g):
    grad = np.zeros((n, 2, 2))
    grad[:, 0, 1] = g
    return grad


def test_zero_velocity_leaves_field_unchanged():
    state = make_state()
    rng = np.random.default_rng(0)
    state.F_e += 0.1 * rng.standard_normal(state.F_e.shape)
    out = advance_F_e_grid(state, np.zeros((8, 2, 2)), 0.01)
    np.testing.assert_array_equal(out.F_e, state.F_e)
    assert out.t == 0.01


def test_reduced_shear_preserves_ansatz_bitwise():
    # the 21 evolution is homogeneous and the diagonal stays pinned
    state = make_state(n=16)
    state.F_e[:, 0, 1] = np.linspace(-0.5, 0.0, 16)
    out = state
    for _ in range(50):
        out = advance_F_e_grid(out, shear_grad(16, 3.0), 1e-3)
    np.testing.assert_array_equal(out.F_e[:, 1, 0], np.zeros(16))
    np.testing.assert_array_equal(out.F_e[:, 0, 0], np.ones(16))
    np.testing.assert_array_equal(out.F_e[:, 1, 1], np.ones(16))


def test_constant_shear_source_one_step_exact():
    k, dt = 2.5, 1e-3
    state = make_state()
    out = advance_F_e_grid(state, shear_grad(8, k), dt)
    np.testing.assert_array_equal(out.F_e[:, 0, 1], np.full(8, k * dt))


def test_cfl_violation_raises():
    state = make_state(v2=5.0)  # dx = 1/8, so dt = 0.1 gives CFL 4
    with pytest.raises(CFLViolation):
        advance_F_e_grid(state, np.zeros((8, 2, 2)), 0.1)


def test_accretion_requires_inflow_value():
    state = make_state()
    with pytest.raises(MissingInflowBC):
        advance_F_e_grid(state, np.zeros((8, 2, 2)), 0.01, mass_rate=1.0)
    advance_F_e_grid(state, np.zeros((8, 2, 2)), 0.01, mass_rate=1.0,
                     inflow_bc=np.eye(2))


def test_advance_F_grid_same_contract():
    state = make_state()
    F = identity((8,))
    out = advance_F_grid(F, state, shear_grad(8, 1.0), 1e-3)
    np.testing.assert_array_equal(out[:, 0, 1], np.full(8, 1e-3))
    np.testing.assert_array_equal(
        advance_F_grid(F, state, np.zeros((8, 2, 2)), 1e-3), F)


def test_characteristics_static_and_translation():
    static = integrate_characteristics(
        lambda x, t: (np.zeros(2), np.zeros((2, 2))),
        np.array([0.2, 0.3]), 0.0, 1.0, 0.1, np.array([[1.0, 0.5], [0.0, 1.0]]))
    np.testing.assert_array_equal(static.x[-1], [0.2, 0.3])
    np.testing.assert_array_equal(static.F_e[-1], [[1.0, 0.5], [0.0, 1.0]])

    c = np.array([0.4, -0.2])
    moving = integrate_characteristics(
        lambda x, t: (c, np.zeros((2, 2))),
        np.array([0.0, 1.0]), 0.0, 2.0, 0.05, np.eye(2))
    np.testing.assert_allclose(moving.x[-1], np.array([0.0, 1.0]) + 2.0 * c,
                               atol=1e-14)
    np.testing.assert_array_equal(moving.F_e[-1], np.eye(2))


def test_characteristic_matches_attachment_decay_closed_form():
    # sheared-attachment fields: along a pathline seeded at attachment the
    # shear decays exponentially at rate G/mu
    G, mu, alpha, V_G = 1.0, 0.1, 0.5, 1.0
    lam = G / mu

    def sampler(x, t):
        age = t - x[1] / V_G
        g = alpha * lam * math.exp(-lam * age)
        v1 = V_G * alpha * (math.exp(-lam * age) - math.exp(-lam * t))
        return np.array([v1, 0.0]), np.array([[0.0, g], [0.0, 0.0]])

    x2 = 0.4
    pl = integrate_characteristics(sampler, np.array([0.0, x2]), x2 / V_G, 1.0,
                                   1e-3, np.array([[1.0, -alpha], [0.0, 1.0]]))
    ref = -alpha * np.exp(-lam * (pl.t - x2 / V_G))
    assert np.abs(pl.F_e[:, 0, 1] - ref).max() <= 2e-4
    np.testing.assert_array_equal(pl.x[:, 1], np.full(pl.t.size, x2))


def test_characteristics_are_pathlines():
    # position update is independent of the tensor carried along
    def sampler(x, t):
        return (np.array([math.sin(x[1]) + 0.2 * t, math.cos(x[0])]),
                np.array([[0.0, math.cos(x[1])], [-math.sin(x[0]), 0.0]]))

    seed = np.array([0.3, 0.8])
    pl = integrate_characteristics(sampler, seed, 0.0, 1.5, 0.01, np.eye(2))
    # independent midpoint integration of dx/dt = v with the same steps
    x = seed.copy()
    t, h = 0.0, 1.5 / 150
    for _ in range(150):
        xm = x + 0.5 * h * sampler(x, t)[0]
        x = x + h * sampler(xm, t + 0.5 * h)[0]
        t += h
    np.testing.assert_array_equal(pl.x[-1], x)


def test_characteristic_det_drift_is_second_order():
    def sampler(x, t):  # divergence-free, non-commuting gradient
        return (np.array([math.sin(x[1]), math.sin(x[0])]),
                np.array([[0.0, math.cos(x[1])], [math.cos(x[0]), 0.0]]))

    drifts = []
    for dt in (0.02, 0.01):
        pl = integrate_characteristics(sampler, np.array([0.3, 0.7]), 0.0, 2.0,
                                       dt, np.eye(2))
        d = pl.F_e[:, 0, 0] * pl.F_e[:, 1, 1] - pl.F_e[:, 0, 1] * pl.F_e[:, 1, 0]
        drifts.append(np.abs(d - 1.0).max())
    assert 3.2 <= drifts[0] / drifts[1] <= 4.8


def test_out_of_domain_detected():
    with pytest.raises(OutOfDomain):
        integrate_characteristics(
            lambda x, t: (np.array([0.0, 1.0]), np.zeros((2, 2))),
            np.array([0.0, 0.5]), 0.0, 1.0, 0.1, np.eye(2),
            domain=lambda x, t: x[1] <= 0.75)


def test_pathline_record_validates_times():
    with pytest.raises(ValidationError):
        PathlineRecord(t=[0.0, 0.0], x=np.zeros((2, 2)), F_e=identity((2,)))


def test_elastic_rate_examples():
    F_e = np.array([[1.0, 0.3], [0.0, 1.0]])
    grad_v = np.array([[0.0, 2.0], [0.0, 0.0]])
    np.testing.assert_array_equal(
        elastic_rate_with_relax_evolution(F_e, grad_v, np.eye(2), np.zeros((2, 2))),
        grad_v @ F_e)
    beta = 0.7
    np.testing.assert_allclose(
        elastic_rate_with_relax_evolution(F_e, np.zeros((2, 2)), np.eye(2),
                                          -beta * np.eye(2)),
        -beta * F_e, atol=1e-15)
    a, b = 1.3, 0.4
    np.testing.assert_allclose(
        elastic_rate_with_relax_evolution(F_e, grad_v, a * np.eye(2), b * np.eye(2)),
        grad_v @ F_e + a * b * F_e, atol=1e-15)


def _static_history(n=8, steps=5, F_e12=0.25):
    grid = Grid1D(n, 1.0)
    F_e = identity((n,))
    F_e[:, 0, 1] = F_e12
    recs = []
    for k in range(steps):
        recs.append(StepRecord(t=0.1 * k, grid=grid, v_nodes=np.zeros(n + 1),
                               grad_v=np.zeros((n, 2, 2)), F_e=F_e.copy(),
                               p=np.ones(n), rho=np.ones(n)))
    return recs


def test_reconstruct_static_body():
    history = _static_history()
    frames = reconstruct_reference(history)
    for frame, rec in zip(frames, history):
        np.testing.assert_array_equal(frame.F, identity((8,)))
        np.testing.assert_allclose(frame.F_relax,
                                   np.linalg.inv(rec.F_e), atol=1e-14)
        np.testing.assert_allclose(rec.F_e @ frame.F_relax, frame.F, atol=1e-14)


def test_reconstruct_accepts_interior_reference_time():
    history = _static_history()
    frames = reconstruct_reference(history, t0=0.2)
    assert len(frames) == 3 and frames[0].t == 0.2
    with pytest.raises(ValidationError):
        reconstruct_reference(history, t0=0.123)


def test_inverse_motion_static_and_translation():
    strip = PeriodicStrip(n1=8, n2=8)
    q = np.zeros((8, 8, 2))
    v = np.zeros((8, 8, 2))
    np.testing.assert_array_equal(advance_inverse_motion(q, v, strip, 0.05), q)

    v[...] = [0.3, 0.0]
    out = q
    for _ in range(10):
        out = advance_inverse_motion(out, v, strip, 0.05)
    # chi^{-1} = x - c t, stored as deviation -c t; F stays the identity
    np.testing.assert_allclose(out, np.broadcast_to([-0.15, 0.0], out.shape),
                               atol=1e-14)
    np.testing.assert_allclose(deformation_from_inverse_motion(out, strip),
                               identity((8, 8)), atol=1e-12)


def test_inverse_motion_rejects_growth():
    strip = PeriodicStrip(n1=8, n2=8)
    with pytest.raises(GrowthNotSupported):
        advance_inverse_motion(np.zeros((8, 8, 2)), np.zeros((8, 8, 2)), strip,
                               0.01, mass_rate=0.5)
