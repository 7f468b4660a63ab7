# This file is part of nlcm
# See file LICENSE.txt for license information.

# Fixed-step numerical machinery shared by everything that works on a grid:
# classical RK4 for the Euler-Lagrange equations in first order form, and a
# cumulative quadrature for the integral term of nonlocal constants.
#
# Everything lives on one uniform grid t0 + k*h, so the integrand of a
# nonlocal constant can be evaluated on exactly the samples the integrator
# produced.

# These are made available in the nlcm.* namespace
__all__ = ["IntegrationConfig", "integrate_el", "cumulative_integral"]

import logging
import warnings

import numpy as np

from nlcm import NLCMError, NumericError, SingularityError, SizeError
from nlcm.compat import call_and_wrap_exc, cumulative_trapezoid
from nlcm.lagrangian import Trajectory
from nlcm.util import repr_pretty_delegate, repr_pretty_impl

logger = logging.getLogger(__name__)

class IntegrationConfig(object):
    """Settings for :func:`integrate_el`.

    :arg h: The step size; must be positive.
    :arg t1: The end time; must be later than the start time.
    :arg min_q_margin: For systems that know their distance to the boundary
      of their domain, how close an RK4 stage may come to it before the run
      is aborted.

    The number of steps is ``(t1 - t0) / h`` rounded to the nearest integer,
    and must be at least 2. If the quotient is not an integer a warning is
    issued and the final grid time differs from `t1`.
    """
    def __init__(self, h, t1, min_q_margin=1e-9):
        self.h = float(h)
        self.t1 = float(t1)
        self.min_q_margin = float(min_q_margin)
        if not np.isfinite(self.h) or self.h <= 0:
            raise ValueError("step size h must be positive and finite, "
                             "not %r" % (h,))
        if not np.isfinite(self.t1):
            raise ValueError("end time t1 must be finite, not %r" % (t1,))
        if not self.min_q_margin > 0:
            raise ValueError("min_q_margin must be positive, not %r"
                             % (min_q_margin,))

    def steps(self, t0):
        """The number of steps N for a run starting at `t0`."""
        span = self.t1 - float(t0)
        if span <= 0:
            raise ValueError("end time t1=%r must be later than the start "
                             "time t0=%r" % (self.t1, t0))
        exact = span / self.h
        n_steps = int(round(exact))
        if n_steps < 2:
            raise ValueError("a run needs at least 2 steps; (t1 - t0) / h "
                             "is %r" % (exact,))
        if abs(exact - n_steps) > 1e-9 * max(1.0, exact):
            warnings.warn("(t1 - t0) / h = %r is not an integer; using %s "
                          "steps, ending at t=%r"
                          % (exact, n_steps, float(t0) + n_steps * self.h))
        return n_steps

    def grid(self, t0):
        """The grid times ``t0 + k*h`` for a run starting at `t0`."""
        return float(t0) + np.arange(self.steps(t0) + 1) * self.h

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("h", self.h), ("t1", self.t1),
                                 ("min_q_margin", self.min_q_margin)])

def test_IntegrationConfig():
    import pytest
    cfg = IntegrationConfig(1e-3, 5)
    assert cfg.steps(0) == 5000
    assert cfg.min_q_margin == 1e-9
    grid = cfg.grid(0)
    assert grid.shape == (5001,)
    assert grid[0] == 0 and grid[-1] == 5000 * 1e-3
    assert IntegrationConfig(0.5, 3).steps(1) == 4
    assert repr(IntegrationConfig(0.5, 3)) == (
        "IntegrationConfig(h=0.5, t1=3.0, min_q_margin=1e-09)")

    pytest.raises(ValueError, IntegrationConfig, 0, 5)
    pytest.raises(ValueError, IntegrationConfig, -1e-3, 5)
    pytest.raises(ValueError, IntegrationConfig, np.nan, 5)
    pytest.raises(ValueError, IntegrationConfig, 1e-3, 5, min_q_margin=0)
    pytest.raises(ValueError, cfg.steps, 5)
    pytest.raises(ValueError, cfg.steps, 6)
    pytest.raises(ValueError, IntegrationConfig(1, 1).steps, 0)

    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert IntegrationConfig(0.3, 1).steps(0) == 3
        assert len(w) == 1
        assert "not an integer" in str(w[0].message)

def _check_stage(system, cfg, t, q):
    if not system.domain_ok(q):
        raise SingularityError("motion left the domain of %s"
                               % (system.name or "the system",), t)
    if system.boundary_distance is not None:
        distance = system.boundary_distance(q)
        if not distance > cfg.min_q_margin:
            raise SingularityError("motion came within %r of the boundary "
                                   "of %s (distance %r)"
                                   % (cfg.min_q_margin,
                                      system.name or "the system",
                                      float(distance)), t)

def _acceleration(system, t, q, v):
    a = np.asarray(call_and_wrap_exc("evaluating the acceleration", t,
                                     system.acceleration, t, q, v),
                   dtype=float)
    if not np.all(np.isfinite(a)):
        raise NumericError("acceleration is not finite", t)
    return a

def integrate_el(system, s0, cfg):
    """integrate_el(system, s0, cfg)

    Integrates the Euler-Lagrange equations of `system` from the state `s0`
    with classical fixed-step RK4, applied to the first order system
    ``(q', v') = (v, acceleration(t, q, v))``.

    :arg system: A :class:`LagrangianSystem`.
    :arg s0: The initial :class:`State`; ``s0.q`` must be admissible.
    :arg cfg: An :class:`IntegrationConfig`; the run goes from ``s0.t`` to
      ``cfg.t1``.
    :returns: A :class:`Trajectory` on the grid ``s0.t + k*cfg.h`` whose
      first state is `s0`.

    Every RK4 stage position is checked against the domain of the system; if
    one is inadmissible (or closer than ``cfg.min_q_margin`` to the boundary)
    the whole run is abandoned with a :class:`SingularityError` carrying the
    time of the offending stage. Non-finite values raise
    :class:`NumericError`. Partial trajectories are never returned.
    """
    if s0.n != system.n:
        raise ValueError("state has %s degrees of freedom but the system "
                         "has %s" % (s0.n, system.n))
    _check_stage(system, cfg, s0.t, s0.q)
    t0 = s0.t
    h = cfg.h
    n_steps = cfg.steps(t0)
    logger.debug("RK4: %s steps of h=%r from t0=%r for %s",
                 n_steps, h, t0, system.name)
    positions = np.empty((n_steps + 1, system.n))
    velocities = np.empty((n_steps + 1, system.n))
    q = np.array(s0.q)
    v = np.array(s0.v)
    positions[0] = q
    velocities[0] = v
    half = 0.5 * h
    for k in range(n_steps):
        t = t0 + k * h
        t_mid = t + half
        t_next = t0 + (k + 1) * h
        a1 = _acceleration(system, t, q, v)
        q2 = q + half * v
        v2 = v + half * a1
        _check_stage(system, cfg, t_mid, q2)
        a2 = _acceleration(system, t_mid, q2, v2)
        q3 = q + half * v2
        v3 = v + half * a2
        _check_stage(system, cfg, t_mid, q3)
        a3 = _acceleration(system, t_mid, q3, v3)
        q4 = q + h * v3
        v4 = v + h * a3
        _check_stage(system, cfg, t_next, q4)
        a4 = _acceleration(system, t_next, q4, v4)
        q = q + (h / 6.0) * (v + 2 * v2 + 2 * v3 + v4)
        v = v + (h / 6.0) * (a1 + 2 * a2 + 2 * a3 + a4)
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(v))):
            raise NumericError("RK4 produced a non-finite state", t_next)
        _check_stage(system, cfg, t_next, q)
        positions[k + 1] = q
        velocities[k + 1] = v
    return Trajectory(t0, h, positions, velocities)

def test_integrate_el_benchmark():
    from nlcm.lagrangian import State
    from nlcm.poincare import make_poincare_system
    system = make_poincare_system()
    s0 = State(0, [0, 1], [1, 0])
    traj = integrate_el(system, s0, IntegrationConfig(1e-3, 5))
    assert len(traj) == 5001
    assert traj[0] == s0
    assert abs(traj[-1].q[0] - np.tanh(5)) <= 1e-8
    assert abs(traj[-1].q[1] - 1 / np.cosh(5)) <= 1e-8
    for k in (0, 1, 1234, 5000):
        assert traj[k].t == 0 + k * 1e-3

def test_integrate_el_vertical():
    from nlcm.lagrangian import State
    from nlcm.poincare import make_poincare_system
    traj = integrate_el(make_poincare_system(), State(0, [0, 1], [0, 1]),
                        IntegrationConfig(1e-3, 2))
    assert np.all(traj.positions[:, 0] == 0)
    assert abs(traj[-1].q[1] - np.exp(2)) <= 1e-8

def test_integrate_el_fixed_point():
    from nlcm.lagrangian import State, make_free_particle
    from nlcm.poincare import make_poincare_system
    s0 = State(0, [7, 3], [0, 0])
    traj = integrate_el(make_poincare_system(), s0, IntegrationConfig(0.1, 1))
    assert np.all(traj.positions == [7, 3])
    assert np.all(traj.velocities == 0)
    free = integrate_el(make_free_particle(3), State(0, [1, 2, 3], [0, 0, 0]),
                        IntegrationConfig(0.25, 1))
    assert np.all(free.positions == [1, 2, 3])

def test_integrate_el_order():
    from nlcm.lagrangian import State
    from nlcm.poincare import make_poincare_system
    system = make_poincare_system()
    s0 = State(0, [0, 1], [1, 0])
    exact = np.array([np.tanh(2), 1 / np.cosh(2)])
    errors = []
    for h in (0.04, 0.02):
        traj = integrate_el(system, s0, IntegrationConfig(h, 2))
        errors.append(np.max(np.abs(traj[-1].q - exact)))
    assert 12 <= errors[0] / errors[1] <= 20

def test_integrate_el_errors():
    import pytest
    from nlcm.lagrangian import LagrangianSystem, State
    from nlcm.poincare import make_poincare_system
    system = make_poincare_system()
    cfg = IntegrationConfig(1e-2, 1)
    pytest.raises(SingularityError, integrate_el, system,
                  State(0, [0, -1], [1, 0]), cfg)
    pytest.raises(ValueError, integrate_el, system,
                  State(0, [0, 1, 2], [1, 0, 0]), cfg)
    # a coarse step straight down overshoots the boundary
    try:
        integrate_el(system, State(0, [0, 1], [0, -400]),
                     IntegrationConfig(0.01, 1))
    except SingularityError as e:
        assert e.t is not None
        assert 0 < e.t <= 0.01
    else:
        assert False

    # an acceleration map that blows up
    def lagrangian(t, q, v):
        return 0.0
    def zeros(t, q, v):
        return np.zeros(1)
    def bad_acceleration(t, q, v):
        if t > 0.5:
            return np.array([np.inf])
        return np.zeros(1)
    blowup = LagrangianSystem(1, lagrangian, zeros, zeros, bad_acceleration)
    try:
        integrate_el(blowup, State(0, [0], [0]), IntegrationConfig(0.25, 1))
    except NumericError as e:
        assert e.t > 0.5
    else:
        assert False

    def raising_acceleration(t, q, v):
        raise ArithmeticError("no")
    broken = LagrangianSystem(1, lagrangian, zeros, zeros,
                              raising_acceleration)
    pytest.raises(NLCMError, integrate_el, broken, State(0, [0], [0]),
                  IntegrationConfig(0.25, 1))

def cumulative_integral(values, h):
    """cumulative_integral(values, h)

    Cumulative integral of samples on a uniform grid of step `h`.

    Returns an array ``I`` of the same length as `values` with ``I[0] = 0``
    and ``I[k]`` approximating the integral over the first ``k`` panels.
    The composite trapezoid rule is refined by one Richardson step at even
    indices (which makes it cumulative Simpson there, accurate to O(h**4));
    each odd index adds a single trapezoid panel to the preceding even one,
    so every index is at least O(h**2) accurate. With fewer than 4 panels
    plain trapezoids are used.

    The result is linear in `values`. Raises :class:`SizeError` for fewer
    than 2 values.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("values must be 1-dimensional")
    if values.shape[0] < 2:
        raise SizeError("cumulative integral needs at least 2 values, not %s"
                        % (values.shape[0],))
    h = float(h)
    fine = cumulative_trapezoid(values, h)
    if values.shape[0] - 1 < 4:
        return fine
    coarse = cumulative_trapezoid(values[::2], 2 * h)
    result = np.empty_like(fine)
    result[::2] = (4 * fine[::2] - coarse) / 3
    result[1::2] = (result[0:-1:2]
                    + 0.5 * h * (values[0:-1:2] + values[1::2]))
    return result

def test_cumulative_integral():
    import pytest
    assert np.allclose(cumulative_integral(np.ones(5), 0.5),
                       [0, 0.5, 1.0, 1.5, 2.0], rtol=0, atol=1e-15)
    h = 1e-3
    s = np.arange(1001) * h
    assert abs(cumulative_integral(np.cosh(s), h)[1000] - np.sinh(1)) <= 1e-9
    assert abs(cumulative_integral(s ** 2, h)[1000] - 1.0 / 3) <= 1e-9
    # odd indices too
    got = cumulative_integral(np.cosh(s), h)
    assert np.max(np.abs(got - np.sinh(s))) <= 1e-9
    # fewer than 4 panels: trapezoids
    assert np.allclose(cumulative_integral([0, 1, 2], 1), [0, 0.5, 2])
    assert np.array_equal(cumulative_integral([3, 3], 2), [0, 6])

    pytest.raises(SizeError, cumulative_integral, [1.0], 0.1)
    pytest.raises(SizeError, cumulative_integral, [], 0.1)
    pytest.raises(ValueError, cumulative_integral, [[1.0, 2.0]], 0.1)

def test_cumulative_integral_odd_length():
    # 6 values: 5 panels, the last index is odd
    h = 0.1
    s = np.arange(6) * h
    got = cumulative_integral(s ** 2, h)
    assert got.shape == (6,)
    assert abs(got[4] - 0.4 ** 3 / 3) <= 1e-15
    assert abs(got[5] - 0.5 ** 3 / 3) < h ** 3

def test_cumulative_integral_linear():
    r = np.random.RandomState(0)
    f = r.normal(size=101)
    g = r.normal(size=101)
    lhs = cumulative_integral(2.5 * f - 0.75 * g, 0.01)
    rhs = (2.5 * cumulative_integral(f, 0.01)
           - 0.75 * cumulative_integral(g, 0.01))
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-13)

def test_cumulative_integral_order():
    def worst_error(h):
        s = np.arange(int(round(2 / h)) + 1) * h
        return np.max(np.abs(cumulative_integral(np.exp(s), h)
                             - (np.exp(s) - 1)))
    # odd indices limit the pointwise order to the single trapezoid panel
    ratio = worst_error(0.02) / worst_error(0.01)
    assert ratio > 3
