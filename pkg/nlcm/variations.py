# This file is part of nlcm
# See file LICENSE.txt for license information.

# Nonlocal constants of motion.
#
# Let q(t) solve the Euler-Lagrange equations of L(t, q, v), and let q_lam(t)
# be any smooth family of perturbed motions with q_0 = q. Then
#
#   dL/dv(t, q, q') . w(t)  -  int_{t0}^{t} d/dlam L(s, q_lam, q_lam')|_0 ds
#
# is constant in t, where w = d q_lam / d lam |_0. Taking the derivative and
# using the Euler-Lagrange equations shows it. The family enters only through
# w, since d/dlam L|_0 = dL/dq . w + dL/dv . w'; a family is therefore
# represented here by its variation field w alone.
#
# When the family is a symmetry of L the integrand vanishes and the constant
# is an ordinary (local) first integral; for other families it depends on the
# history of the motion since t0, which is always the first grid time.

# These are made available in the nlcm.* namespace
__all__ = ["VariationField", "DriftReport", "drift_report",
           "q1_translation_field", "q2_translation_field",
           "trigonometric_field", "zero_field",
           "nonlocal_constant", "q2_nonlocal_closed_form",
           "check_linear_ode", "reports_agree"]

import logging

import numpy as np

from nlcm import DomainError, SizeError
from nlcm.compat import call_and_wrap_exc
from nlcm.integrate import cumulative_integral
from nlcm.poincare import poincare_energy
from nlcm.util import (frozen, relative_scale,
                       repr_pretty_delegate, repr_pretty_impl)

logger = logging.getLogger(__name__)

class VariationField(object):
    """The first order variation ``w = d q_lam / d lam`` at ``lam = 0`` of a
    family of perturbed motions.

    :arg w: A callable ``w(t, state) -> vector`` of the same length as the
      state's position. It is only ever evaluated along the unperturbed
      motion, and may depend on the state as well as on time.
    :arg label: A human-readable name, used in reports.

    The time derivative of ``w`` along the motion is never supplied: the
    engine computes it from the samples.
    """
    def __init__(self, w, label):
        self.w = w
        self.label = label

    def __call__(self, t, state):
        return self.w(t, state)

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [self.label])

def q1_translation_field():
    """The family ``(q1 + lam, q2)``: ``w = (1, 0)``.

    For Poincare's half-plane this is a symmetry; its nonlocal constant has
    a vanishing integrand and reduces to the momentum ``p``.
    """
    return VariationField(_constant((1.0, 0.0)), "q1-translation")

def q2_translation_field():
    """The family ``(q1, q2 + lam)``: ``w = (0, 1)``.

    Not a symmetry of the half-plane Lagrangian, yet its nonlocal constant
    separates a linear equation for ``1/q2``.
    """
    return VariationField(_constant((0.0, 1.0)), "q2-translation")

def trigonometric_field():
    """The arbitrary family ``w = (sin t, cos t)``, unrelated to any
    symmetry; its nonlocal constant is still constant."""
    def w(t, state):
        return np.array([np.sin(t), np.cos(t)])
    return VariationField(w, "trigonometric (sin t, cos t)")

def zero_field(n=2):
    """The trivial family ``q_lam = q``; its nonlocal constant is 0."""
    return VariationField(_constant(np.zeros(n)), "zero")

def _constant(vector):
    vector = frozen(vector)
    def w(t, state):
        return vector
    return w

def test_fields():
    from nlcm.lagrangian import State
    s = State(0.3, [2, 5], [1, -1])
    assert np.array_equal(q1_translation_field()(0.3, s), [1, 0])
    assert np.array_equal(q1_translation_field()(-7.0, s), [1, 0])
    assert np.array_equal(q2_translation_field()(0.3, s), [0, 1])
    assert np.allclose(trigonometric_field()(0.3, s),
                       [np.sin(0.3), np.cos(0.3)])
    assert np.array_equal(zero_field(3)(0, s), [0, 0, 0])
    assert q2_translation_field().label == "q2-translation"
    assert repr(q1_translation_field()) == "VariationField('q1-translation')"

class DriftReport(object):
    """How far a quantity that should be constant moves along a trajectory.

    .. attribute:: values

       The quantity at each grid time.

    .. attribute:: max_drift

       ``max |values[k] - values[0]|``.

    .. attribute:: scale

       ``max(1, max |values[k]|)``, so quantities whose constant value is
       near 0 are compared absolutely.

    .. attribute:: relative_drift

       ``max_drift / scale``.

    .. attribute:: boundary, integrand

       For reports produced by :func:`nonlocal_constant`, the boundary term
       ``dL/dv . w`` and the integrand ``d/dlam L`` at each grid time;
       otherwise None.
    """
    def __init__(self, values, label=None, boundary=None, integrand=None):
        values = frozen(values)
        if values.ndim != 1 or values.shape[0] < 1:
            raise ValueError("a drift report needs a 1-d series of values")
        self.values = values
        self.label = label
        self.boundary = None if boundary is None else frozen(boundary)
        self.integrand = None if integrand is None else frozen(integrand)
        self.max_drift = float(np.max(np.abs(values - values[0])))
        self.scale = relative_scale(values)
        self.relative_drift = self.max_drift / self.scale

    def __len__(self):
        return self.values.shape[0]

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("label", self.label),
                                 ("max_drift", self.max_drift),
                                 ("scale", self.scale),
                                 ("relative_drift", self.relative_drift)])

def drift_report(values, label=None):
    """Builds a :class:`DriftReport` for any series of values (for example
    the energy at each grid time)."""
    return DriftReport(values, label=label)

def test_DriftReport():
    import pytest
    report = drift_report([2.0, 2.5, 1.0, 2.0], "x")
    assert report.max_drift == 1.0
    assert report.scale == 2.5
    assert report.relative_drift == 0.4
    assert len(report) == 4
    assert report.boundary is None and report.integrand is None
    small = drift_report([0.0, 1e-3, -1e-3])
    assert small.scale == 1.0
    assert small.relative_drift == 1e-3
    assert drift_report([5.0]).relative_drift == 0
    assert "relative_drift=0.4" in repr(report)
    pytest.raises(ValueError, drift_report, [])
    pytest.raises(ValueError, drift_report, [[1.0, 2.0]])

# Derivative of sampled field values along the grid: five point central
# differences in the interior, three point central differences next to the
# ends and second order one-sided differences at the ends.
def _grid_derivative(values, h):
    if values.shape[0] >= 3:
        derivative = np.gradient(values, h, axis=0, edge_order=2)
    else:
        derivative = np.gradient(values, h, axis=0, edge_order=1)
    if values.shape[0] >= 5:
        derivative[2:-2] = (values[:-4] - 8 * values[1:-3]
                            + 8 * values[3:-1] - values[4:]) / (12 * h)
    return derivative

def test__grid_derivative():
    h = 0.01
    t = np.arange(101) * h
    w = np.column_stack((t ** 2, np.sin(t)))
    dw = _grid_derivative(w, h)
    assert np.allclose(dw[:, 0], 2 * t, rtol=0, atol=1e-10)
    assert np.allclose(dw[:, 1], np.cos(t), rtol=0, atol=5e-5)
    assert np.max(np.abs(dw[2:-2, 1] - np.cos(t[2:-2]))) <= 1e-9
    constant = np.tile([1.0, 0.0], (7, 1))
    assert np.array_equal(_grid_derivative(constant, h), np.zeros((7, 2)))
    two = np.array([[0.0], [1.0]])
    assert np.allclose(_grid_derivative(two, 0.5), [[2.0], [2.0]])

def nonlocal_constant(system, traj, field):
    """nonlocal_constant(system, traj, field)

    Evaluates the nonlocal constant of motion associated to the family with
    variation field `field` along `traj`, which must solve the
    Euler-Lagrange equations of `system`.

    At each grid time ``t`` the value is ``B(t) - I(t)``, where
    ``B = dL/dv . w`` and ``I`` is the cumulative integral from the first
    grid time of ``g = dL/dq . w + dL/dv . w'``. The derivative ``w'`` is
    taken from the samples of ``w`` along the grid.

    :returns: A :class:`DriftReport` whose ``boundary`` and ``integrand``
      hold ``B`` and ``g``.
    """
    n_samples = len(traj)
    field_values = np.empty((n_samples, traj.n))
    momenta = np.empty((n_samples, traj.n))
    forces = np.empty((n_samples, traj.n))
    for k, s in enumerate(traj):
        system.check_domain(s.q, s.t)
        w = np.asarray(call_and_wrap_exc("evaluating variation field %r"
                                         % (field.label,),
                                         s.t, field, s.t, s),
                       dtype=float)
        if w.shape != (traj.n,):
            raise ValueError("variation field %r returned shape %s for a "
                             "system with %s degrees of freedom"
                             % (field.label, w.shape, traj.n))
        field_values[k] = w
        momenta[k] = system.dL_dv(s.t, s.q, s.v)
        forces[k] = system.dL_dq(s.t, s.q, s.v)
    field_rates = _grid_derivative(field_values, traj.h)
    boundary = np.sum(momenta * field_values, axis=1)
    integrand = (np.sum(forces * field_values, axis=1)
                 + np.sum(momenta * field_rates, axis=1))
    values = boundary - cumulative_integral(integrand, traj.h)
    report = DriftReport(values, label=field.label,
                         boundary=boundary, integrand=integrand)
    logger.debug("nonlocal constant for %r over %s samples: "
                 "relative drift %r",
                 field.label, n_samples, report.relative_drift)
    return report

def _benchmark_trajectory(h=1e-3, t1=5):
    from nlcm.integrate import IntegrationConfig, integrate_el
    from nlcm.lagrangian import State
    from nlcm.poincare import make_poincare_system
    return integrate_el(make_poincare_system(), State(0, [0, 1], [1, 0]),
                        IntegrationConfig(h, t1))

def test_nonlocal_constant_benchmark():
    from nlcm.poincare import make_poincare_system, poincare_momentum
    system = make_poincare_system()
    traj = _benchmark_trajectory()

    # q2-translation: -d/dt(1/q2) + 2E int 1/q2 = -sinh t0 = 0
    q2 = nonlocal_constant(system, traj, q2_translation_field())
    assert len(q2) == len(traj)
    assert np.max(np.abs(q2.values)) <= 1e-6
    assert q2.relative_drift <= 1e-6
    # boundary term is -d/dt(1/q2) = -sinh t, integrand -2E/q2 = -cosh t
    assert np.allclose(q2.boundary, -np.sinh(traj.times), rtol=1e-8)
    assert np.allclose(q2.integrand, -np.cosh(traj.times), rtol=1e-8)

    # q1-translation reproduces p = 1, with a vanishing integrand
    q1 = nonlocal_constant(system, traj, q1_translation_field())
    assert np.allclose(q1.values, 1, rtol=0, atol=1e-10)
    assert q1.relative_drift <= 1e-10
    assert np.max(np.abs(q1.integrand)) <= 1e-10
    for k in range(0, len(traj), 250):
        assert abs(q1.boundary[k] - poincare_momentum(traj[k])) <= 1e-12

    # no symmetry at all, still constant
    trig = nonlocal_constant(system, traj, trigonometric_field())
    assert trig.relative_drift <= 1e-6

def test_nonlocal_constant_zero_field():
    from nlcm.poincare import make_poincare_system
    traj = _benchmark_trajectory(h=1e-2, t1=2)
    report = nonlocal_constant(make_poincare_system(), traj, zero_field())
    assert np.array_equal(report.values, np.zeros(len(traj)))
    assert report.max_drift == 0

def test_nonlocal_constant_state_dependent_field():
    from nlcm.poincare import make_poincare_system
    traj = _benchmark_trajectory(h=1e-3, t1=3)
    def w(t, s):
        return np.array([s.q[1] * t, s.q[0] - 0.5 * s.q[1] ** 2])
    report = nonlocal_constant(make_poincare_system(), traj,
                               VariationField(w, "state dependent"))
    assert report.relative_drift <= 1e-6

def test_nonlocal_constant_converges():
    from nlcm.poincare import make_poincare_system
    system = make_poincare_system()
    drifts = []
    for h in (4e-3, 2e-3):
        traj = _benchmark_trajectory(h=h, t1=5)
        drifts.append(nonlocal_constant(system, traj,
                                        trigonometric_field()).max_drift)
    assert drifts[0] / drifts[1] >= 3

def test_nonlocal_constant_errors():
    import pytest
    from nlcm import NLCMError
    from nlcm.lagrangian import Trajectory
    from nlcm.poincare import make_poincare_system
    system = make_poincare_system()
    traj = _benchmark_trajectory(h=0.1, t1=1)
    wrong_length = VariationField(lambda t, s: np.zeros(3), "too long")
    pytest.raises(ValueError, nonlocal_constant, system, traj, wrong_length)
    def explode(t, s):
        raise KeyError(t)
    try:
        nonlocal_constant(system, traj, VariationField(explode, "boom"))
    except NLCMError as e:
        assert e.t == 0.0
        assert "boom" in e.message
    else:
        assert False
    below = Trajectory(0, 0.1, [[0, 1], [0, -1], [0, 1]], [[0, 0]] * 3)
    pytest.raises(DomainError, nonlocal_constant, system, below,
                  q2_translation_field())

def _half_plane_columns(traj):
    if traj.n != 2:
        raise ValueError("expected a half-plane trajectory with 2 degrees "
                         "of freedom, not %s" % (traj.n,))
    heights = traj.positions[:, 1]
    bad = np.flatnonzero(~(heights > 0))
    if bad.shape[0]:
        k = bad[0]
        raise DomainError("q2 must be > 0 in the half-plane, not %r"
                          % (float(heights[k]),), traj.times[k])
    return heights, traj.velocities[:, 1]

def q2_nonlocal_closed_form(traj):
    """q2_nonlocal_closed_form(traj)

    The nonlocal constant of the ``q2``-translation family along a
    half-plane geodesic, in the form obtained by using energy conservation:

      ``v2 / q2**2 + 2 E int_{t0}^{t} 1/q2 ds``  (that is,
      ``-d/dt (1/q2) + 2 E int 1/q2``)

    with ``E`` the energy of the first state. It agrees with
    ``nonlocal_constant(poincare, traj, q2_translation_field())`` along
    geodesics. Raises :class:`DomainError` if any ``q2 <= 0``.
    """
    heights, rates = _half_plane_columns(traj)
    E = poincare_energy(traj[0])
    values = (rates / heights ** 2
              + 2 * E * cumulative_integral(1.0 / heights, traj.h))
    return DriftReport(values, label="q2-translation (closed form)")

def test_q2_nonlocal_closed_form():
    import pytest
    from nlcm.lagrangian import Trajectory
    h = 1e-3
    t = np.arange(5001) * h
    # q2 = sech t, sampled exactly (q1 = tanh t)
    sech = Trajectory(0, h,
                      np.column_stack((np.tanh(t), 1 / np.cosh(t))),
                      np.column_stack((1 / np.cosh(t) ** 2,
                                       -np.tanh(t) / np.cosh(t))))
    report = q2_nonlocal_closed_form(sech)
    assert np.max(np.abs(report.values)) <= 1e-6

    # vertical geodesic q2 = e**t, E = 1/2: e**-t + (1 - e**-t) = 1
    t = np.arange(2001) * h
    vertical = Trajectory(0, h,
                          np.column_stack((np.zeros_like(t), np.exp(t))),
                          np.column_stack((np.zeros_like(t), np.exp(t))))
    report = q2_nonlocal_closed_form(vertical)
    assert np.allclose(report.values, 1, rtol=0, atol=1e-9)

    rest = Trajectory(0, 0.1, [[2, 3]] * 4, [[0, 0]] * 4)
    assert np.array_equal(q2_nonlocal_closed_form(rest).values, np.zeros(4))

    below = Trajectory(0, 0.1, [[0, 1], [0, 0], [0, 1]], [[0, 0]] * 3)
    try:
        q2_nonlocal_closed_form(below)
    except DomainError as e:
        assert e.t == 0.1
    else:
        assert False
    pytest.raises(ValueError, q2_nonlocal_closed_form,
                  Trajectory(0, 0.1, [[1]] * 3, [[0]] * 3))

def test_q2_closed_form_matches_generic():
    from nlcm.poincare import make_poincare_system
    traj = _benchmark_trajectory()
    generic = nonlocal_constant(make_poincare_system(), traj,
                                q2_translation_field())
    assert reports_agree(q2_nonlocal_closed_form(traj), generic, 2e-6)

def check_linear_ode(traj):
    """check_linear_ode(traj)

    Residual of the linear equation ``-(1/q2)'' + 2 E (1/q2) = 0`` that the
    vanishing time derivative of the ``q2``-translation constant imposes on
    half-plane geodesics.

    With ``u = 1/q2`` sampled on the grid and ``E`` the energy of the first
    state, returns for each interior grid point::

      r[k] = -(u[k+1] - 2 u[k] + u[k-1]) / h**2 + 2 E u[k]

    which is O(h**2) for geodesics. Raises :class:`SizeError` for fewer than
    3 samples and :class:`DomainError` if any ``q2 <= 0``.
    """
    if len(traj) < 3:
        raise SizeError("the linear equation check needs at least 3 "
                        "samples, not %s" % (len(traj),))
    heights, _ = _half_plane_columns(traj)
    E = poincare_energy(traj[0])
    u = 1.0 / heights
    return (-(u[2:] - 2 * u[1:-1] + u[:-2]) / traj.h ** 2
            + 2 * E * u[1:-1])

def test_check_linear_ode():
    import pytest
    from nlcm.lagrangian import Trajectory
    traj = _benchmark_trajectory()
    r = check_linear_ode(traj)
    assert r.shape == (len(traj) - 2,)
    assert np.max(np.abs(r)) <= 1e-4

    # q2 = 1 + t is not a geodesic: r = -u'' + 2E u with u = 1/(1 + t)
    h = 1e-3
    t = np.arange(1001) * h
    line = Trajectory(0, h, np.column_stack((np.zeros_like(t), 1 + t)),
                      np.column_stack((np.full_like(t, 0.5),
                                       np.ones_like(t))))
    E = (0.5 ** 2 + 1) / 2
    inner = t[1:-1]
    expected = -2 / (1 + inner) ** 3 + 2 * E / (1 + inner)
    got = check_linear_ode(line)
    assert np.allclose(got, expected, rtol=0, atol=1e-5)
    assert np.max(np.abs(got)) > 0.5

    rest = Trajectory(0, 0.1, [[2, 3]] * 4, [[0, 0]] * 4)
    assert np.array_equal(check_linear_ode(rest), np.zeros(2))
    pytest.raises(SizeError, check_linear_ode,
                  Trajectory(0, 0.1, [[0, 1]] * 2, [[0, 0]] * 2))

def test_check_linear_ode_converges():
    worst = [np.max(np.abs(check_linear_ode(_benchmark_trajectory(h=h))))
             for h in (2e-3, 1e-3)]
    assert 3 <= worst[0] / worst[1] <= 5

def reports_agree(a, b, rtol):
    """Whether two reports over the same grid agree pointwise within `rtol`,
    relative to the larger of their scales."""
    if len(a) != len(b):
        raise ValueError("reports have different lengths (%s and %s)"
                         % (len(a), len(b)))
    tolerance = rtol * max(a.scale, b.scale)
    return bool(np.max(np.abs(a.values - b.values)) <= tolerance)

def test_reports_agree():
    import pytest
    a = drift_report([1.0, 1.0, 1.0])
    b = drift_report([1.0, 1.0 + 1e-7, 1.0])
    c = drift_report([1.0, 1.1, 1.0])
    assert reports_agree(a, b, 2e-6)
    assert not reports_agree(a, c, 2e-6)
    pytest.raises(ValueError, reports_agree, a, drift_report([1.0]), 1e-6)
