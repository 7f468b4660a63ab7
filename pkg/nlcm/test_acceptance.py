# This file is part of nlcm
# See file LICENSE.txt for license information.

# Randomized end-to-end properties of half-plane geodesics and their
# constants of motion.
#
# Initial positions are drawn from q1 in [-10, 10], q2 in [0.1, 10], and
# velocity directions from [-5, 5]**2. The hyperbolic speed |v|/q2 (the rate
# sqrt(2 E) of the exponentials in the closed form) is drawn separately, in
# ranges where RK4 with h = 1e-3 resolves the motion over t in [0, 5]; the
# shape of a geodesic does not depend on its speed.

import numpy as np
import pytest

from nlcm import (State, IntegrationConfig, integrate_el,
                  make_poincare_system, poincare_energy, poincare_momentum,
                  VariationField, drift_report, nonlocal_constant,
                  q1_translation_field, q2_translation_field,
                  q2_nonlocal_closed_form, check_linear_ode, reports_agree,
                  fit_params, classify, eval_position, circle_residual,
                  HalfCircle, VerticalLine)

def random_state(r, speed_range, q2_range=(0.1, 10)):
    q = [r.uniform(-10, 10), r.uniform(*q2_range)]
    direction = r.uniform(-5, 5, size=2)
    speed = r.uniform(*speed_range)
    v = direction / np.hypot(*direction) * speed * q[1]
    return State(0, q, v)

def random_fields(r):
    fields = []
    for k in range(5):
        coefs = r.uniform(-1, 1, size=(2, 3))
        def w(t, s, coefs=coefs):
            return coefs[:, 0] + coefs[:, 1] * t + coefs[:, 2] * t ** 2
        fields.append(VariationField(w, "polynomial %s" % (k,)))
    for k in range(5):
        amplitude = r.uniform(-1, 1, size=2)
        omega = r.uniform(0, 1, size=2)
        phase = r.uniform(0, 2 * np.pi, size=2)
        def w(t, s, amplitude=amplitude, omega=omega, phase=phase):
            return amplitude * np.sin(omega * t + phase)
        fields.append(VariationField(w, "trigonometric %s" % (k,)))
    return fields

def run(s0, h=1e-3, t1=5):
    return integrate_el(make_poincare_system(), s0, IntegrationConfig(h, t1))

def check_conservation(traj):
    assert drift_report([poincare_energy(s) for s in traj]).max_drift <= (
        1e-8 * max(1.0, poincare_energy(traj[0])))
    assert drift_report([poincare_momentum(s) for s in traj]).max_drift <= (
        1e-8 * max(1.0, abs(poincare_momentum(traj[0]))))

def test_random_state():
    r = np.random.RandomState(0)
    for _ in range(100):
        s = random_state(r, (0.5, 1.5))
        assert 0.1 <= s.q[1] <= 10
        assert 0.5 <= np.sqrt(2 * poincare_energy(s)) <= 1.5

@pytest.mark.slow
def test_nonlocal_constant_for_arbitrary_families():
    system = make_poincare_system()
    r = np.random.RandomState(100)
    for _ in range(100):
        traj = run(random_state(r, (0.05, 0.5)))
        check_conservation(traj)
        for field in random_fields(r):
            report = nonlocal_constant(system, traj, field)
            assert len(report) == len(traj)
            assert report.relative_drift <= 1e-5, field.label

@pytest.mark.slow
def test_q1_translation_is_noether_momentum():
    system = make_poincare_system()
    r = np.random.RandomState(101)
    for _ in range(20):
        traj = run(random_state(r, (0.1, 1.0)))
        check_conservation(traj)
        report = nonlocal_constant(system, traj, q1_translation_field())
        assert np.max(np.abs(report.integrand)) <= 1e-10
        momenta = np.array([poincare_momentum(s) for s in traj])
        assert np.max(np.abs(report.boundary - momenta)) <= 1e-12

@pytest.mark.slow
def test_q2_translation_closed_form_agrees():
    system = make_poincare_system()
    r = np.random.RandomState(102)
    for _ in range(20):
        traj = run(random_state(r, (0.1, 1.0)))
        check_conservation(traj)
        generic = nonlocal_constant(system, traj, q2_translation_field())
        closed = q2_nonlocal_closed_form(traj)
        assert reports_agree(closed, generic, 2e-6)
        assert closed.relative_drift <= 1e-5

@pytest.mark.slow
def test_linear_ode_in_inverse_height():
    r = np.random.RandomState(103)
    for _ in range(20):
        s0 = random_state(r, (0.6, 0.9), q2_range=(1, 10))
        coarse = np.max(np.abs(check_linear_ode(run(s0, h=2e-3))))
        traj = run(s0, h=1e-3)
        check_conservation(traj)
        fine = np.max(np.abs(check_linear_ode(traj)))
        assert fine <= 1e-4
        assert 3 <= coarse / fine <= 5

@pytest.mark.slow
def test_half_circles():
    r = np.random.RandomState(104)
    for _ in range(1000):
        s0 = random_state(r, (0.1, 1.5))
        params = fit_params(s0)
        shape = classify(params)
        assert isinstance(shape, HalfCircle)
        traj = run(s0)
        check_conservation(traj)
        assert circle_residual(traj, shape) <= 1e-8

def test_half_circle_radius():
    r = np.random.RandomState(105)
    for _ in range(1000):
        s0 = State(0, [r.uniform(-10, 10), r.uniform(0.1, 10)],
                   r.uniform(-5, 5, size=2))
        params = fit_params(s0)
        shape = classify(params)
        expected = np.sqrt(2 * params.E) / abs(params.p)
        assert abs(shape.radius - expected) <= 1e-12 * expected
        # the circle passes through the initial point
        through = np.hypot(s0.q[0] - shape.center, s0.q[1])
        assert abs(through - shape.radius) <= 1e-8 * shape.radius

@pytest.mark.slow
def test_vertical_half_lines():
    r = np.random.RandomState(106)
    for _ in range(20):
        x, y = r.uniform(-10, 10), r.uniform(0.1, 10)
        rate = r.uniform(0.1, 1.0) * r.choice([-1, 1])
        s0 = State(0, [x, y], [0, rate * y])
        params = fit_params(s0)
        assert classify(params) == VerticalLine(x)
        traj = run(s0)
        check_conservation(traj)
        assert np.max(np.abs(traj.positions[:, 0] - x)) <= 1e-12
        expected = y * np.exp(rate * traj.times)
        assert np.allclose(traj.positions[:, 1], expected,
                           rtol=1e-8, atol=0)

def test_closed_form_round_trip():
    r = np.random.RandomState(107)
    for _ in range(1000):
        s0 = State(0, [r.uniform(-10, 10), r.uniform(0.1, 10)],
                   r.uniform(-5, 5, size=2))
        params = fit_params(s0)
        # resample the motion around t = 0 and difference it numerically
        delta = 1e-2 / params.rate
        here, a1, b1, a2, b2 = eval_position(
            params, [0.0, delta, -delta, 2 * delta, -2 * delta])
        v = (8 * (a1 - b1) - (a2 - b2)) / (12 * delta)
        again = fit_params(State(0, here, v))
        assert abs(again.E - params.E) <= 1e-6 * params.E
        assert abs(again.p - params.p) <= 1e-6 * max(1.0, abs(params.p))
        scale = params.c1 + params.c2
        assert abs(again.c1 - params.c1) <= 1e-6 * scale
        assert abs(again.c2 - params.c2) <= 1e-6 * scale
        assert abs(again.c3 - params.c3) <= 1e-6 * max(1.0, abs(params.c3))

def test_benchmark_geodesic():
    s0 = State(0, [0, 1], [1, 0])
    params = fit_params(s0)
    assert (params.E, params.p, params.c1, params.c2, params.c3) == (
        0.5, 1, 0.5, 0.5, 1)
    assert classify(params) == HalfCircle(0, 1)
    traj = run(s0)
    assert np.allclose(traj[-1].q, [np.tanh(5), 1 / np.cosh(5)],
                       rtol=0, atol=1e-8)
    check_conservation(traj)
