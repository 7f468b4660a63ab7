# This file is part of nlcm
# See file LICENSE.txt for license information.

# Poincare's half-plane as a Lagrangian system:
#
#   L(t, q, v) = (v1**2 + v2**2) / (2 q2**2),     q2 > 0
#
# whose natural motions are the geodesics of the metric diag(1, 1) / q2**2.

# These are made available in the nlcm.* namespace
__all__ = ["make_poincare_system", "poincare_energy", "poincare_momentum"]

import numpy as np

from nlcm import DomainError
from nlcm.lagrangian import LagrangianSystem, State

def _lagrangian(t, q, v):
    return (v[0] ** 2 + v[1] ** 2) / (2 * q[1] ** 2)

def _dL_dq(t, q, v):
    return np.array([0.0, -(v[0] ** 2 + v[1] ** 2) / q[1] ** 3])

def _dL_dv(t, q, v):
    return np.array([v[0] / q[1] ** 2, v[1] / q[1] ** 2])

# The Euler-Lagrange equations solved for the accelerations:
#   q1'' = 2 q1' q2' / q2
#   q2'' = (q2'**2 - q1'**2) / q2
def _acceleration(t, q, v):
    return np.array([2 * v[0] * v[1] / q[1],
                     (v[1] ** 2 - v[0] ** 2) / q[1]])

def _in_half_plane(q):
    return q[1] > 0

def _height(q):
    return q[1]

def make_poincare_system():
    """Returns the :class:`LagrangianSystem` of Poincare's half-plane.

    It has two degrees of freedom, analytic partial derivatives, and the
    admissible domain ``q2 > 0``; the distance to the boundary of the domain
    is ``q2`` itself.
    """
    return LagrangianSystem(2, _lagrangian, _dL_dq, _dL_dv, _acceleration,
                            domain_ok=_in_half_plane,
                            boundary_distance=_height,
                            name="Poincare half-plane (q2 > 0)")

def _check_half_plane(s):
    if not s.q[1] > 0:
        raise DomainError("q2 must be > 0 in the half-plane, not %r"
                          % (float(s.q[1]),), s.t)

def poincare_energy(s):
    """The energy ``E = (v1**2 + v2**2) / (2 q2**2)`` at the state `s`.

    ``E >= 0``, with equality exactly when the velocity vanishes. Raises
    :class:`DomainError` if ``q2 <= 0``.
    """
    _check_half_plane(s)
    return float((s.v[0] ** 2 + s.v[1] ** 2) / (2 * s.q[1] ** 2))

def poincare_momentum(s):
    """The momentum ``p = v1 / q2**2`` conjugate to ``q1`` at the state `s`.

    Raises :class:`DomainError` if ``q2 <= 0``.
    """
    _check_half_plane(s)
    return float(s.v[0] / s.q[1] ** 2)

def test_make_poincare_system():
    system = make_poincare_system()
    assert system.n == 2
    q = np.array([0.0, 1.0])
    v = np.array([1.0, 0.0])
    assert system.lagrangian(0, q, v) == 0.5
    assert np.array_equal(system.acceleration(0, q, v), [0, -1])
    assert np.array_equal(system.acceleration(0, [4.0, 0.3], [0.0, 0.0]),
                          [0, 0])
    assert np.array_equal(system.dL_dq(0, [0.0, 2.0], [2.0, 2.0]),
                          [0, -1])
    assert np.array_equal(system.dL_dv(0, [0.0, 2.0], [2.0, 2.0]),
                          [0.5, 0.5])
    assert system.domain_ok([0, 1e-300])
    assert not system.domain_ok([0, 0])
    assert not system.domain_ok([0, -1])
    assert system.boundary_distance([5, 0.25]) == 0.25

def test_poincare_energy():
    import pytest
    assert poincare_energy(State(0, [0, 1], [1, 0])) == 0.5
    assert poincare_energy(State(0, [5, 2], [0, 0])) == 0
    assert poincare_energy(State(0, [0, 2], [2, 2])) == 1.0
    pytest.raises(DomainError, poincare_energy, State(0, [0, 0], [1, 0]))
    pytest.raises(DomainError, poincare_energy, State(0, [0, -3], [1, 0]))

def test_poincare_momentum():
    import pytest
    assert poincare_momentum(State(0, [0, 1], [1, 0])) == 1
    assert poincare_momentum(State(0, [0, 3], [0, -1])) == 0
    assert poincare_momentum(State(0, [1, 2], [2, 0])) == 0.5
    pytest.raises(DomainError, poincare_momentum, State(0, [0, -1], [1, 0]))

def test_energy_agrees_with_generic_formula():
    from nlcm.lagrangian import energy
    system = make_poincare_system()
    r = np.random.RandomState(1)
    for _ in range(10000):
        s = State(r.uniform(-10, 10),
                  [r.uniform(-10, 10), r.uniform(0.1, 10)],
                  r.uniform(-5, 5, size=2))
        E = poincare_energy(s)
        assert E > 0
        assert abs(energy(system, s) - E) <= 1e-14 * max(1.0, E)

def test_energy_is_nonnegative():
    r = np.random.RandomState(2)
    for _ in range(1000):
        q = [r.uniform(-10, 10), r.uniform(0.1, 10)]
        assert poincare_energy(State(0, q, r.uniform(-5, 5, size=2))) >= 0
        assert poincare_energy(State(0, q, [0, 0])) == 0

def test_benchmark_conserves_over_long_run():
    # |t - t0| up to 10, with q2 = sech(t) falling to about 9e-5
    from nlcm.integrate import IntegrationConfig, integrate_el
    traj = integrate_el(make_poincare_system(), State(0, [0, 1], [1, 0]),
                        IntegrationConfig(1e-3, 10))
    assert len(traj) == 10001
    assert np.allclose(traj[-1].q, [np.tanh(10), 1 / np.cosh(10)],
                       rtol=0, atol=1e-8)
    energies = np.array([poincare_energy(s) for s in traj])
    momenta = np.array([poincare_momentum(s) for s in traj])
    assert np.max(np.abs(energies - 0.5)) <= 1e-8
    assert np.max(np.abs(momenta - 1)) <= 1e-8
