# This file is part of nlcm
# See file LICENSE.txt for license information.

# Time-dependent Lagrangian systems in n degrees of freedom: phase-space
# states, uniformly sampled trajectories, and the quantities that can be
# evaluated from a Lagrangian and its partial derivatives alone.

# These are made available in the nlcm.* namespace
__all__ = ["State", "Trajectory", "LagrangianSystem",
           "energy", "energy_series", "el_residual",
           "make_free_particle", "numeric_system", "partials_error"]

import numpy as np

from nlcm import DomainError, NumericError, SizeError
from nlcm.util import (as_vector, frozen, relative_scale,
                       repr_pretty_delegate, repr_pretty_impl)

class State(object):
    """One point of the phase flow: a time, a position and a velocity.

    .. attribute:: t

       The time, as a float.

    .. attribute:: q

       The position, a read-only 1-d float64 array of length ``n``.

    .. attribute:: v

       The velocity, a read-only 1-d float64 array with the same length as
       ``q``.

    All components must be finite; a NaN or infinity raises
    :class:`NumericError`.
    """
    def __init__(self, t, q, v):
        t = float(t)
        if not np.isfinite(t):
            raise NumericError("state time must be finite, not %r" % (t,))
        self.t = t
        self.q = as_vector(q, "q")
        self.v = as_vector(v, "v", length=self.q.shape[0])

    @property
    def n(self):
        return self.q.shape[0]

    def at_time(self, t):
        """Returns the same position and velocity, relabelled to time `t`."""
        return State(t, self.q, self.v)

    def __eq__(self, other):
        return (isinstance(other, State)
                and self.t == other.t
                and np.array_equal(self.q, other.q)
                and np.array_equal(self.v, other.v))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((State, self.t, tuple(self.q), tuple(self.v)))

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("t", self.t),
                                 ("q", self.q.tolist()),
                                 ("v", self.v.tolist())])

def test_State():
    import pytest
    s = State(0, [0, 1], [1, 0])
    assert s.t == 0.0
    assert s.n == 2
    assert s.q.tolist() == [0.0, 1.0]
    assert s.v.tolist() == [1.0, 0.0]
    assert not s.q.flags.writeable
    assert s == State(0.0, (0.0, 1.0), (1.0, 0.0))
    assert s != State(1.0, (0.0, 1.0), (1.0, 0.0))
    assert hash(s) == hash(State(0.0, (0.0, 1.0), (1.0, 0.0)))
    assert s.at_time(3).t == 3.0
    assert s.at_time(3).q.tolist() == [0.0, 1.0]
    assert repr(s) == "State(t=0.0, q=[0.0, 1.0], v=[1.0, 0.0])"

    pytest.raises(ValueError, State, 0, [0, 1], [1, 0, 0])
    pytest.raises(ValueError, State, 0, [[0, 1]], [[1, 0]])
    pytest.raises(NumericError, State, np.nan, [0, 1], [1, 0])
    pytest.raises(NumericError, State, 0, [0, np.inf], [1, 0])
    pytest.raises(NumericError, State, 0, [0, 1], [np.nan, 0])

class Trajectory(object):
    """A motion sampled on the uniform grid ``t0, t0 + h, ..., t0 + N*h``.

    Grid times are computed as ``t0 + k*h`` (never by repeated addition),
    so ``traj[k].t == traj.t0 + k * traj.h`` holds exactly.

    .. attribute:: times

       Read-only array of the ``N + 1`` grid times.

    .. attribute:: positions

       Read-only array of shape ``(N + 1, n)``.

    .. attribute:: velocities

       Read-only array of shape ``(N + 1, n)``.

    Indexing a trajectory, or iterating over it, produces :class:`State`
    objects.
    """
    def __init__(self, t0, h, positions, velocities):
        t0 = float(t0)
        h = float(h)
        if not (np.isfinite(t0) and np.isfinite(h)):
            raise NumericError("t0 and h must be finite")
        if h <= 0:
            raise ValueError("step size must be positive, not %r" % (h,))
        positions = frozen(positions)
        velocities = frozen(velocities)
        if positions.ndim != 2 or positions.shape[1] < 1:
            raise ValueError("positions must have shape (samples, n), not %s"
                             % (positions.shape,))
        if velocities.shape != positions.shape:
            raise ValueError("velocities have shape %s, but positions have "
                             "shape %s"
                             % (velocities.shape, positions.shape))
        if positions.shape[0] < 2:
            raise SizeError("a trajectory needs at least 2 samples, not %s"
                            % (positions.shape[0],))
        if not (np.all(np.isfinite(positions))
                and np.all(np.isfinite(velocities))):
            raise NumericError("trajectory has non-finite samples")
        self.t0 = t0
        self.h = h
        self.positions = positions
        self.velocities = velocities
        self.times = frozen(t0 + np.arange(positions.shape[0]) * h)

    @classmethod
    def from_states(cls, t0, h, states):
        """Builds a trajectory from a sequence of :class:`State` objects,
        checking that they sit exactly on the grid ``t0 + k*h``."""
        states = list(states)
        if len(states) < 2:
            raise SizeError("a trajectory needs at least 2 samples, not %s"
                            % (len(states),))
        for k, s in enumerate(states):
            if s.t != float(t0) + k * float(h):
                raise ValueError("state %s has t=%r, off the grid point %r"
                                 % (k, s.t, float(t0) + k * float(h)))
        return cls(t0, h,
                   [s.q for s in states],
                   [s.v for s in states])

    @property
    def n(self):
        return self.positions.shape[1]

    @property
    def n_steps(self):
        return self.positions.shape[0] - 1

    @property
    def t1(self):
        return float(self.times[-1])

    @property
    def states(self):
        return [self[k] for k in range(len(self))]

    def __len__(self):
        return self.positions.shape[0]

    def __getitem__(self, k):
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError("trajectory index out of range")
        return State(self.times[k], self.positions[k], self.velocities[k])

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("t0", self.t0), ("h", self.h),
                                 ("n_steps", self.n_steps)])

def test_Trajectory():
    import pytest
    positions = [[0, 1], [1, 1], [2, 1]]
    velocities = [[1, 0]] * 3
    traj = Trajectory(0.5, 0.1, positions, velocities)
    assert len(traj) == 3
    assert traj.n == 2
    assert traj.n_steps == 2
    for k, s in enumerate(traj):
        assert s.t == 0.5 + k * 0.1
    assert traj.t1 == 0.5 + 2 * 0.1
    assert traj[-1].q.tolist() == [2.0, 1.0]
    assert len(traj.states) == 3
    assert not traj.positions.flags.writeable
    pytest.raises(IndexError, traj.__getitem__, 3)
    assert repr(traj) == "Trajectory(t0=0.5, h=0.1, n_steps=2)"

    again = Trajectory.from_states(0.5, 0.1, traj.states)
    assert np.array_equal(again.positions, traj.positions)
    bad = [State(0, [0], [0]), State(0.3, [0], [0])]
    pytest.raises(ValueError, Trajectory.from_states, 0, 0.1, bad)
    pytest.raises(SizeError, Trajectory.from_states, 0, 0.1, bad[:1])

    pytest.raises(ValueError, Trajectory, 0, 0, positions, velocities)
    pytest.raises(ValueError, Trajectory, 0, -1, positions, velocities)
    pytest.raises(ValueError, Trajectory, 0, 0.1, positions, velocities[:2])
    pytest.raises(SizeError, Trajectory, 0, 0.1, [[0, 1]], [[1, 0]])
    pytest.raises(NumericError, Trajectory, 0, 0.1,
                  [[0, 1], [np.nan, 1]], [[1, 0], [1, 0]])

def test_Trajectory_grid_is_exact():
    # Repeated addition of 0.1 drifts off t0 + k*h; the grid must not.
    traj = Trajectory(0, 0.1, np.zeros((31, 1)), np.zeros((31, 1)))
    for k in range(31):
        assert traj[k].t == k * 0.1

class LagrangianSystem(object):
    """A second order Lagrangian system in ``n`` degrees of freedom.

    :arg n: The number of degrees of freedom.
    :arg lagrangian: ``lagrangian(t, q, v) -> float``.
    :arg dL_dq: ``dL_dq(t, q, v) -> array`` of length ``n``.
    :arg dL_dv: ``dL_dv(t, q, v) -> array`` of length ``n``.
    :arg acceleration: ``acceleration(t, q, v) -> array``; the
      Euler-Lagrange equations solved explicitly for the second derivative.
    :arg domain_ok: Optional predicate on positions marking the admissible
      configuration domain. Defaults to accepting every position.
    :arg boundary_distance: Optional map from positions to their distance
      from the boundary of the domain; the integrator refuses to step closer
      than its ``min_q_margin``.
    :arg name: A human-readable label.

    The partial derivatives are trusted to be consistent with `lagrangian`;
    use :func:`partials_error` to check them.
    """
    def __init__(self, n, lagrangian, dL_dq, dL_dv, acceleration,
                 domain_ok=None, boundary_distance=None, name=None):
        n = int(n)
        if n < 1:
            raise ValueError("a system needs at least one degree of freedom")
        self.n = n
        self.lagrangian = lagrangian
        self.dL_dq = dL_dq
        self.dL_dv = dL_dv
        self.acceleration = acceleration
        if domain_ok is None:
            domain_ok = _everywhere
        self.domain_ok = domain_ok
        self.boundary_distance = boundary_distance
        self.name = name

    def check_domain(self, q, t=None):
        """Raises :class:`DomainError` unless `q` is admissible."""
        if not self.domain_ok(q):
            raise DomainError("position %r is outside the domain of %s"
                              % (list(np.asarray(q, dtype=float)),
                                 self.name or "the system"), t)

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("n", self.n), ("name", self.name)])

def _everywhere(q):
    return True

def energy(system, s):
    """energy(system, s)

    The energy ``dL/dv . v - L`` of `system` at the state `s`.

    This is a first integral whenever the Lagrangian does not depend on
    time; the formula is evaluated regardless. Raises :class:`DomainError` if
    ``s.q`` is not admissible.
    """
    system.check_domain(s.q, s.t)
    p = np.asarray(system.dL_dv(s.t, s.q, s.v), dtype=float)
    return float(np.dot(p, s.v) - system.lagrangian(s.t, s.q, s.v))

def energy_series(system, traj):
    """The energy at every grid point of `traj`, as an array."""
    return np.array([energy(system, s) for s in traj])

def test_energy():
    from nlcm.poincare import make_poincare_system
    poincare = make_poincare_system()
    assert energy(poincare, State(0, [0, 1], [1, 0])) == 0.5
    assert energy(poincare, State(0, [3, 2], [0, 0])) == 0
    free = make_free_particle(1)
    assert energy(free, State(0, [0], [2])) == 2.0
    # time relabelling does not change the energy of an autonomous system
    s = State(0.0, [0.3, 1.7], [-0.4, 2.2])
    assert energy(poincare, s) == energy(poincare, s.at_time(123.25))
    import pytest
    pytest.raises(DomainError, energy, poincare, State(0, [0, -1], [1, 0]))
    pytest.raises(DomainError, energy, poincare, State(0, [0, 0], [1, 0]))

def test_energy_series():
    free = make_free_particle(2)
    traj = Trajectory(0, 0.5, [[0, 0], [1, 2], [2, 4]], [[2, 4]] * 3)
    assert np.array_equal(energy_series(free, traj), [10.0, 10.0, 10.0])

def el_residual(system, traj):
    """el_residual(system, traj)

    Discrete Euler-Lagrange residual of `traj` under `system`.

    For each interior grid point, returns the central difference
    approximation of ``d/dt[dL/dv] - dL/dq``, as an array of shape
    ``(N - 1, n)``. For true solutions this is O(h**2). Endpoints are not
    included. Raises :class:`SizeError` for trajectories with fewer than 3
    samples.
    """
    if len(traj) < 3:
        raise SizeError("Euler-Lagrange residual needs at least 3 samples, "
                        "not %s" % (len(traj),))
    momenta = np.empty((len(traj), traj.n))
    forces = np.empty((len(traj), traj.n))
    for k, s in enumerate(traj):
        system.check_domain(s.q, s.t)
        momenta[k] = system.dL_dv(s.t, s.q, s.v)
        forces[k] = system.dL_dq(s.t, s.q, s.v)
    return (momenta[2:] - momenta[:-2]) / (2 * traj.h) - forces[1:-1]

def test_el_residual():
    import pytest
    from nlcm.poincare import make_poincare_system
    poincare = make_poincare_system()
    # constants solve the equations exactly
    rest = Trajectory(0, 0.1, [[0, 1]] * 5, [[0, 0]] * 5)
    assert np.array_equal(el_residual(poincare, rest), np.zeros((3, 2)))
    # the horizontal straight line is not a geodesic:
    # q2'' + (q1'**2 - q2'**2) / q2 = 1
    h = 0.01
    ts = np.arange(11) * h
    line = Trajectory(0, h, np.column_stack((ts, np.ones(11))),
                      [[1, 0]] * 11)
    r = el_residual(poincare, line)
    assert r.shape == (9, 2)
    assert np.allclose(r[:, 0], 0, atol=1e-12)
    assert np.allclose(r[:, 1], 1, atol=1e-12)
    pytest.raises(SizeError, el_residual, poincare,
                  Trajectory(0, 0.1, [[0, 1]] * 2, [[0, 0]] * 2))
    below = Trajectory(0, 0.1, [[0, 1], [0, -1], [0, 1]], [[0, 0]] * 3)
    pytest.raises(DomainError, el_residual, poincare, below)

def test_el_residual_free_particle():
    free = make_free_particle(1)
    h = 0.25
    ts = np.arange(9) * h
    uniform = Trajectory(0, h, (3 * ts)[:, None], np.full((9, 1), 3.0))
    assert np.allclose(el_residual(free, uniform), 0)

def test_el_residual_converges():
    # on RK4 runs the residual is dominated by the O(h**2) central
    # differences, so halving h divides it by about 4
    from nlcm.integrate import IntegrationConfig, integrate_el
    from nlcm.poincare import make_poincare_system
    poincare = make_poincare_system()
    s0 = State(0, [1, 2], [0.3, 0.4])
    worst = []
    for h in (2e-3, 1e-3):
        traj = integrate_el(poincare, s0, IntegrationConfig(h, 5))
        worst.append(np.max(np.abs(el_residual(poincare, traj))))
    assert worst[1] <= 1e-4
    assert 3 <= worst[0] / worst[1] <= 5

def make_free_particle(n=1):
    """The free particle ``L = |v|**2 / 2`` in `n` degrees of freedom."""
    def lagrangian(t, q, v):
        return 0.5 * float(np.dot(v, v))
    def dL_dq(t, q, v):
        return np.zeros(n)
    def dL_dv(t, q, v):
        return np.array(v, dtype=float)
    def acceleration(t, q, v):
        return np.zeros(n)
    return LagrangianSystem(n, lagrangian, dL_dq, dL_dv, acceleration,
                            name="free particle")

# Central differences with a step scaled to the component.
def _fd_step(x):
    return 1e-6 * max(1.0, abs(x))

def _fd_gradient(f, x):
    x = np.array(x, dtype=float)
    grad = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        step = _fd_step(x[i])
        up = x.copy()
        up[i] += step
        down = x.copy()
        down[i] -= step
        grad[i] = (f(up) - f(down)) / (up[i] - down[i])
    return grad

def numeric_system(n, lagrangian, acceleration, domain_ok=None,
                   boundary_distance=None, name=None):
    """Builds a :class:`LagrangianSystem` whose partial derivatives are
    computed by central finite differences of `lagrangian`, with step
    ``1e-6 * max(1, |component|)``.

    Use this for custom systems where analytic partials are not at hand.
    The acceleration map must still be supplied explicitly.
    """
    def dL_dq(t, q, v):
        return _fd_gradient(lambda qq: lagrangian(t, qq, v), q)
    def dL_dv(t, q, v):
        return _fd_gradient(lambda vv: lagrangian(t, q, vv), v)
    return LagrangianSystem(n, lagrangian, dL_dq, dL_dv, acceleration,
                            domain_ok=domain_ok,
                            boundary_distance=boundary_distance,
                            name=name)

def partials_error(system, s):
    """Largest disagreement between the analytic partial derivatives of
    `system` and central finite differences of its Lagrangian at `s`.

    Each partial is compared as a vector, relative to ``max(1, |partial|)``
    (its largest component). A consistent system gives values well below
    ``1e-6``.
    """
    system.check_domain(s.q, s.t)
    L = system.lagrangian
    worst = 0.0
    for analytic, numeric in [
            (system.dL_dq(s.t, s.q, s.v),
             _fd_gradient(lambda qq: L(s.t, qq, s.v), s.q)),
            (system.dL_dv(s.t, s.q, s.v),
             _fd_gradient(lambda vv: L(s.t, s.q, vv), s.v))]:
        analytic = np.asarray(analytic, dtype=float)
        err = np.max(np.abs(analytic - numeric)) / relative_scale(analytic)
        worst = max(worst, float(err))
    return worst

def test_partials_error():
    from nlcm.poincare import make_poincare_system
    poincare = make_poincare_system()
    r = np.random.RandomState(0)
    for _ in range(200):
        s = State(0,
                  [r.uniform(-10, 10), r.uniform(0.1, 10)],
                  r.uniform(-5, 5, size=2))
        assert partials_error(poincare, s) <= 1e-6
    assert partials_error(make_free_particle(3),
                          State(0, [1, 2, 3], [4, 5, 6])) <= 1e-6

    # a system with a wrong partial is caught
    def wrong_dL_dv(t, q, v):
        return 2 * np.asarray(v)
    broken = LagrangianSystem(1, make_free_particle(1).lagrangian,
                              lambda t, q, v: [0.0], wrong_dL_dv,
                              lambda t, q, v: [0.0])
    assert partials_error(broken, State(0, [0], [1])) > 0.1

def test_numeric_system():
    from nlcm.poincare import make_poincare_system
    exact = make_poincare_system()
    approx = numeric_system(2, exact.lagrangian, exact.acceleration,
                            domain_ok=exact.domain_ok,
                            boundary_distance=exact.boundary_distance,
                            name="numeric half-plane")
    s = State(0, [0.5, 1.5], [0.7, -0.2])
    assert np.allclose(approx.dL_dq(s.t, s.q, s.v),
                       exact.dL_dq(s.t, s.q, s.v), rtol=1e-6, atol=1e-9)
    assert np.allclose(approx.dL_dv(s.t, s.q, s.v),
                       exact.dL_dv(s.t, s.q, s.v), rtol=1e-6, atol=1e-9)
    assert abs(energy(approx, s) - energy(exact, s)) < 1e-8
    assert approx.domain_ok([0, 1]) and not approx.domain_ok([0, -1])
