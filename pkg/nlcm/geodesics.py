# This file is part of nlcm
# See file LICENSE.txt for license information.

# Closed-form geodesics of Poincare's half-plane.
#
# Along a geodesic with energy E > 0 and momentum p the function u = 1/q2
# satisfies the linear equation -u'' + 2 E u = 0 (see
# nlcm.variations.check_linear_ode), so with lam = sqrt(2 E)
#
#   1/q2(t) = c1 exp(lam t) + c2 exp(-lam t),       c1, c2 >= 0,
#
# and integrating q1' = p q2**2 gives
#
#   q1(t) = c3 - p / (2 c1 lam (c2 + c1 exp(2 lam t)))      (p != 0).
#
# Energy conservation forces 8 c1 c2 E = p**2. When p = 0 one of c1, c2
# vanishes and the geodesic is a vertical half-line; otherwise it is the
# half-circle of radius lam/|p| centred on the axis at
# c3 - p / (2 c1 c2 sqrt(8 E)) = c3 - lam/p. E = 0 is a motionless point.

# These are made available in the nlcm.* namespace
__all__ = ["GeodesicParams", "Point", "VerticalLine", "HalfCircle",
           "fit_params", "eval_q1", "eval_q2", "eval_position", "eval_state",
           "closed_form_trajectory", "classify", "circle_residual",
           "tangent_state", "shapes_intersect"]

import numpy as np

from nlcm import DomainError, InvalidParamsError, InvalidShapeError
from nlcm.lagrangian import State, Trajectory
from nlcm.poincare import poincare_energy, poincare_momentum
from nlcm.util import (format_float,
                       repr_pretty_delegate, repr_pretty_impl)

# Tolerance for 8 c1 c2 E = p**2, relative to max(1, p**2).
_IDENTITY_RTOL = 1e-10

class GeodesicParams(object):
    """The integration constants of a half-plane geodesic.

    .. attribute:: E

       The energy, ``>= 0``.

    .. attribute:: p

       The momentum conjugate to ``q1``.

    .. attribute:: c1, c2

       The coefficients of ``1/q2 = c1 exp(lam t) + c2 exp(-lam t)``; both
       ``>= 0``, with ``c1 + c2 > 0`` when ``E > 0``. Both are 0 when
       ``E = 0``.

    .. attribute:: c3

       The limit of ``q1`` as ``t -> +inf`` when ``p != 0``; the constant
       abscissa of the motion when ``p = 0``.

    .. attribute:: x0, y0

       The position at ``t = 0``.

    The constructor checks the invariants tying these together, and raises
    :class:`InvalidParamsError` if they fail.
    """
    def __init__(self, E, p, c1, c2, c3, x0, y0):
        self.E = float(E)
        self.p = float(p)
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.c3 = float(c3)
        self.x0 = float(x0)
        self.y0 = float(y0)
        _check_params(self)

    @property
    def rate(self):
        """``sqrt(2 E)``, the exponential rate of ``1/q2``."""
        return float(np.sqrt(2 * self.E))

    def __eq__(self, other):
        return (isinstance(other, GeodesicParams)
                and self._fields() == other._fields())

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((GeodesicParams,) + self._fields())

    def _fields(self):
        return (self.E, self.p, self.c1, self.c2, self.c3, self.x0, self.y0)

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("E", self.E), ("p", self.p),
                                 ("c1", self.c1), ("c2", self.c2),
                                 ("c3", self.c3)])

def _check_params(params):
    values = params._fields()
    if not np.all(np.isfinite(values)):
        raise InvalidParamsError("geodesic parameters must be finite, not %r"
                                 % (values,))
    if not params.y0 > 0:
        raise InvalidParamsError("initial height y0 must be > 0, not %r"
                                 % (params.y0,))
    if params.E < 0 or params.c1 < 0 or params.c2 < 0:
        raise InvalidParamsError("E, c1 and c2 must be >= 0 (got E=%r, "
                                 "c1=%r, c2=%r)"
                                 % (params.E, params.c1, params.c2))
    if params.E == 0:
        if params.p != 0 or params.c1 != 0 or params.c2 != 0:
            raise InvalidParamsError("a motionless point needs p = c1 = c2 "
                                     "= 0")
        return
    if not params.c1 + params.c2 > 0:
        raise InvalidParamsError("c1 + c2 must be > 0 for a moving "
                                 "geodesic")
    p2 = params.p ** 2
    mismatch = abs(8 * params.c1 * params.c2 * params.E - p2)
    if mismatch > _IDENTITY_RTOL * max(1.0, p2):
        raise InvalidParamsError("8 c1 c2 E = %r does not match p**2 = %r"
                                 % (8 * params.c1 * params.c2 * params.E,
                                    p2))
    if params.p == 0 and params.c1 * params.c2 != 0:
        raise InvalidParamsError("with p = 0 exactly one of c1, c2 may be "
                                 "nonzero")

def test_GeodesicParams():
    import pytest
    params = GeodesicParams(0.5, 1, 0.5, 0.5, 1, 0, 1)
    assert params.rate == 1
    assert params == GeodesicParams(0.5, 1.0, 0.5, 0.5, 1.0, 0.0, 1.0)
    assert params != GeodesicParams(0.5, 1, 0.5, 0.5, 2, 0, 1)
    assert hash(params) == hash(GeodesicParams(0.5, 1, 0.5, 0.5, 1, 0, 1))
    assert (repr(params)
            == "GeodesicParams(E=0.5, p=1.0, c1=0.5, c2=0.5, c3=1.0)")
    # E = 2, p = 1 needs c1 c2 = 1/16
    GeodesicParams(2, 1, 0.25, 0.25, 0, 0, 2)
    GeodesicParams(0, 0, 0, 0, 7, 7, 3)
    GeodesicParams(0.5, 0, 0, 1, 0, 0, 1)
    for bad in [(0.5, 1, 0.5, 0.5, 1, 0, 0),
                (-1, 0, 0, 1, 0, 0, 1),
                (0.5, 1, -0.5, 0.5, 1, 0, 1),
                (0.5, 1, 0.5, 0.6, 1, 0, 1),
                (0.5, 0, 0, 0, 0, 0, 1),
                (0.5, 0, 0.5, 0.5, 0, 0, 1),
                (0, 1, 0, 0, 0, 0, 1),
                (0.5, np.nan, 0.5, 0.5, 1, 0, 1)]:
        pytest.raises(InvalidParamsError, GeodesicParams, *bad)

def fit_params(s0):
    """fit_params(s0)

    Recovers the closed-form parameters of the geodesic through the state
    `s0`, taking ``t = 0`` to be the moment the motion passes through
    ``s0`` (``s0.t`` is not used).

    ``c1 + c2 = 1/q2`` and ``c1 - c2 = -v2 / (q2**2 sqrt(2 E))`` come from
    ``1/q2`` and its derivative at ``t = 0``. The larger of the two is
    computed from their sum and the smaller from ``c1 c2 = p**2 / (8 E)``,
    so that identity holds to rounding error even for nearly vertical
    geodesics. For ``p = 0`` the rising branch (``v2 > 0``) has ``c1 = 0``.

    Raises :class:`DomainError` if ``q2 <= 0``.
    """
    E = poincare_energy(s0)
    p = poincare_momentum(s0)
    x0, y0 = float(s0.q[0]), float(s0.q[1])
    v2 = float(s0.v[1])
    if E == 0:
        return GeodesicParams(0, 0, 0, 0, x0, x0, y0)
    u0 = 1.0 / y0
    if p == 0:
        if v2 > 0:
            c1, c2 = 0.0, u0
        else:
            c1, c2 = u0, 0.0
        return GeodesicParams(E, 0, c1, c2, x0, x0, y0)
    rate = np.sqrt(2 * E)
    difference = -v2 / (y0 ** 2 * rate)
    larger = (u0 + abs(difference)) / 2
    # underflows to 0 for nearly vertical motion, while p does not
    smaller = p ** 2 / (8 * E * larger)
    if difference >= 0:
        c1, c2 = larger, smaller
    else:
        c1, c2 = smaller, larger
    # c3 = x0 + p / (2 c1 lam (c1 + c2)), rewritten without dividing by c1
    v1 = float(s0.v[0])
    speed = np.hypot(v1, v2)
    if v2 > 0:
        c3 = x0 + y0 * (v2 + speed) / v1
    else:
        c3 = x0 + y0 * v1 / (speed - v2)
    return GeodesicParams(E, p, c1, c2, c3, x0, y0)

def test_fit_params():
    import pytest
    params = fit_params(State(0, [0, 1], [1, 0]))
    assert (params.E, params.p) == (0.5, 1)
    assert (params.c1, params.c2, params.c3) == (0.5, 0.5, 1)

    rising = fit_params(State(0, [0, 1], [0, 1]))
    assert (rising.E, rising.p, rising.c1, rising.c2) == (0.5, 0, 0, 1)
    falling = fit_params(State(0, [2, 4], [0, -8]))
    assert (falling.E, falling.c1, falling.c2, falling.c3) == (2, 0.25, 0, 2)

    rest = fit_params(State(0, [7, 3], [0, 0]))
    assert (rest.E, rest.p, rest.c1, rest.c2) == (0, 0, 0, 0)
    assert (rest.x0, rest.y0) == (7, 3)

    # s0.t plays no role
    assert fit_params(State(4.5, [0, 1], [1, 0])) == params

    pytest.raises(DomainError, fit_params, State(0, [0, 0], [1, 0]))
    pytest.raises(DomainError, fit_params, State(0, [0, -1], [1, 0]))

def test_fit_params_identity():
    r = np.random.RandomState(11)
    for _ in range(1000):
        s0 = State(0, [r.uniform(-10, 10), r.uniform(0.1, 10)],
                   r.uniform(-5, 5, size=2))
        params = fit_params(s0)
        p2 = params.p ** 2
        assert (abs(8 * params.c1 * params.c2 * params.E - p2)
                <= 1e-10 * max(1.0, p2))
        assert params.c1 + params.c2 > 0
    # nearly vertical
    params = fit_params(State(0, [0, 1], [1e-9, 1]))
    assert params.c1 > 0 and params.c2 > 0
    assert abs(8 * params.c1 * params.c2 * params.E - 1e-18) <= 1e-28

def _require_motion(params, what):
    if params.E == 0:
        raise InvalidParamsError("%s is undefined for a motionless point "
                                 "(E = 0)" % (what,))

def _scalar_or_array(value):
    if np.ndim(value) == 0:
        return float(value)
    return value

def _inverse_height(params, t):
    rate = params.rate
    return params.c1 * np.exp(rate * t) + params.c2 * np.exp(-rate * t)

def eval_q2(params, t):
    """eval_q2(params, t)

    The height ``(c1 exp(lam t) + c2 exp(-lam t))**-1`` at time `t` (a
    scalar or an array). Raises :class:`InvalidParamsError` when ``E = 0``;
    use :func:`eval_position` to cover every case.
    """
    _require_motion(params, "eval_q2")
    t = np.asarray(t, dtype=float)
    return _scalar_or_array(1.0 / _inverse_height(params, t))

def eval_q1(params, t):
    """eval_q1(params, t)

    The abscissa ``c3 - p / (2 c1 lam (c2 + c1 exp(2 lam t)))`` at time `t`
    (a scalar or an array). Raises :class:`InvalidParamsError` when
    ``p = 0``, where the abscissa is the constant ``c3``.

    Using ``8 c1 c2 E = p**2`` this is evaluated as
    ``c3 - (2 lam / p) / (1 + (c1 / c2) exp(2 lam t))``, which stays finite
    when ``c1`` has underflowed to 0.
    """
    _require_motion(params, "eval_q1")
    if params.p == 0:
        raise InvalidParamsError("eval_q1 needs p != 0; with p = 0 the "
                                 "abscissa is the constant c3")
    t = np.asarray(t, dtype=float)
    rate = params.rate
    # c1 or c2 is exactly 0 only when p**2 / (8 E) underflowed
    with np.errstate(over="ignore", divide="ignore"):
        growth = np.exp(2 * rate * t)
        if params.c1 == 0:
            q1 = params.c3 - 2 * rate / params.p + 0 * t
        elif params.c2 > 0:
            q1 = params.c3 - (2 * rate / params.p) / (
                1 + np.divide(params.c1, params.c2) * growth)
        else:
            q1 = params.c3 - params.p / (2 * rate * params.c1 ** 2 * growth)
    return _scalar_or_array(q1)

def test_eval_q2():
    import pytest
    params = GeodesicParams(0.5, 1, 0.5, 0.5, 1, 0, 1)
    assert eval_q2(params, 0) == 1
    t = np.linspace(-4, 4, 81)
    assert np.allclose(eval_q2(params, t), 1 / np.cosh(t),
                       rtol=1e-14, atol=0)
    rising = GeodesicParams(0.5, 0, 0, 1, 0, 0, 1)
    assert np.allclose(eval_q2(rising, 2), np.exp(2), rtol=1e-15, atol=0)
    odd = GeodesicParams(2, 1, 0.125, 0.5, 0, 0, 1.6)
    assert np.allclose(eval_q2(odd, 0), 1 / (0.125 + 0.5))
    pytest.raises(InvalidParamsError, eval_q2,
                  GeodesicParams(0, 0, 0, 0, 7, 7, 3), 0)

def test_eval_q1():
    import pytest
    params = GeodesicParams(0.5, 1, 0.5, 0.5, 1, 0, 1)
    assert eval_q1(params, 0) == 0
    t = np.linspace(-4, 4, 81)
    assert np.allclose(eval_q1(params, t), np.tanh(t), rtol=0, atol=1e-14)
    assert abs(eval_q1(params, 40) - 1) <= 1e-15
    assert abs(eval_q1(params, -40) - (-1)) <= 1e-15
    pytest.raises(InvalidParamsError, eval_q1,
                  GeodesicParams(0.5, 0, 0, 1, 0, 0, 1), 0)
    pytest.raises(InvalidParamsError, eval_q1,
                  GeodesicParams(0, 0, 0, 0, 7, 7, 3), 0)

# Positions and velocities at an array of times, for every case.
def _sample(params, times):
    times = np.asarray(times, dtype=float)
    if params.E == 0:
        positions = np.empty(times.shape + (2,))
        positions[..., 0] = params.x0
        positions[..., 1] = params.y0
        return positions, np.zeros(times.shape + (2,))
    rate = params.rate
    heights = 1.0 / _inverse_height(params, times)
    if params.p == 0:
        abscissae = np.full(times.shape, params.c3)
    else:
        abscissae = np.asarray(eval_q1(params, times))
    # q2' = -q2**2 d/dt(1/q2)
    rises = -heights ** 2 * rate * (params.c1 * np.exp(rate * times)
                                    - params.c2 * np.exp(-rate * times))
    positions = np.stack((abscissae, heights), axis=-1)
    velocities = np.stack((params.p * heights ** 2, rises), axis=-1)
    return positions, velocities

def eval_position(params, t):
    """The position ``(q1, q2)`` at time `t`, for points, vertical
    half-lines and half-circles alike. For an array of times the result has
    a trailing axis of length 2."""
    positions, _ = _sample(params, t)
    return positions

def eval_state(params, t):
    """The :class:`State` of the closed-form motion at time `t`, with the
    velocity ``(p q2**2, -q2**2 d/dt(1/q2))``."""
    positions, velocities = _sample(params, float(t))
    return State(t, positions, velocities)

def test_eval_state():
    params = fit_params(State(0, [0, 1], [1, 0]))
    assert eval_state(params, 0) == State(0, [0, 1], [1, 0])
    s = eval_state(params, 1.5)
    sech = 1 / np.cosh(1.5)
    assert np.allclose(s.q, [np.tanh(1.5), sech], rtol=1e-14)
    assert np.allclose(s.v, [sech ** 2, -np.tanh(1.5) * sech], rtol=1e-13)

    rising = fit_params(State(0, [0, 1], [0, 1]))
    assert np.allclose(eval_state(rising, 1).v, [0, np.exp(1)], rtol=1e-14)
    assert eval_position(rising, 1)[0] == 0
    track = eval_position(rising, [0.0, 1.0, 2.0])
    assert track.shape == (3, 2)
    assert np.allclose(track[:, 1], np.exp([0.0, 1.0, 2.0]), rtol=1e-14)

    rest = fit_params(State(0, [7, 3], [0, 0]))
    assert eval_state(rest, 100) == State(100, [7, 3], [0, 0])

def test_eval_state_conserves():
    r = np.random.RandomState(12)
    for _ in range(200):
        s0 = State(0, [r.uniform(-10, 10), r.uniform(0.1, 10)],
                   r.uniform(-5, 5, size=2))
        params = fit_params(s0)
        start = eval_state(params, 0)
        assert np.allclose(start.q, s0.q, rtol=1e-9, atol=1e-9)
        assert np.allclose(start.v, s0.v, rtol=1e-9, atol=1e-9)
        for t in (-0.3, 0.2, 0.7):
            s = eval_state(params, t / params.rate)
            assert (abs(poincare_energy(s) - params.E)
                    <= 1e-10 * max(1.0, params.E))
            assert (abs(poincare_momentum(s) - params.p)
                    <= 1e-10 * max(1.0, abs(params.p)))

def closed_form_trajectory(params, t0, h, n_steps):
    """closed_form_trajectory(params, t0, h, n_steps)

    Samples the closed-form motion exactly on the grid
    ``t0, t0 + h, ..., t0 + n_steps*h`` and returns it as a
    :class:`Trajectory`.
    """
    times = float(t0) + np.arange(int(n_steps) + 1) * float(h)
    positions, velocities = _sample(params, times)
    return Trajectory(t0, h, positions, velocities)

def test_closed_form_trajectory():
    from nlcm.integrate import IntegrationConfig, integrate_el
    from nlcm.lagrangian import el_residual
    from nlcm.poincare import make_poincare_system
    s0 = State(0, [0, 1], [1, 0])
    exact = closed_form_trajectory(fit_params(s0), 0, 1e-3, 5000)
    assert len(exact) == 5001
    assert np.allclose(exact[-1].q, [np.tanh(5), 1 / np.cosh(5)],
                       rtol=0, atol=1e-14)
    numeric = integrate_el(make_poincare_system(), s0,
                           IntegrationConfig(1e-3, 5))
    assert np.allclose(exact.positions, numeric.positions,
                       rtol=0, atol=1e-8)

    system = make_poincare_system()
    worst = []
    for h in (2e-3, 1e-3):
        traj = closed_form_trajectory(fit_params(State(0, [1, 2], [0.3, 0.4])),
                                      0, h, int(round(5 / h)))
        worst.append(np.max(np.abs(el_residual(system, traj))))
    assert worst[1] <= 1e-4
    assert 3 <= worst[0] / worst[1] <= 5

def classify(params):
    """classify(params)

    The shape traced by the geodesic: a :class:`Point` when ``E = 0``, a
    :class:`VerticalLine` when ``p = 0``, and otherwise the
    :class:`HalfCircle` of radius ``sqrt(2 E)/|p|`` centred at
    ``c3 - p / (2 c1 c2 sqrt(8 E))``, that is ``c3 - sqrt(2 E)/p``.
    """
    _check_params(params)
    if params.E == 0:
        return Point(params.x0, params.y0)
    if params.p == 0:
        return VerticalLine(params.c3)
    center = params.c3 - params.rate / params.p
    return HalfCircle(center, params.rate / abs(params.p))

class _Shape(object):
    def __eq__(self, other):
        return type(self) is type(other) and self._fields() == other._fields()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((type(self),) + self._fields())

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, list(self._fields()))

class Point(_Shape):
    """The trace of a motionless geodesic (``E = 0``)."""
    kind = "point"

    def __init__(self, x, y):
        self.x = float(x)
        self.y = float(y)

    def _fields(self):
        return (self.x, self.y)

    def describe(self):
        return "point (%s,%s)" % (format_float(self.x), format_float(self.y))

class VerticalLine(_Shape):
    """The vertical half-line ``q1 = x`` traced when ``p = 0``."""
    kind = "vertical-line"

    def __init__(self, x):
        self.x = float(x)

    def _fields(self):
        return (self.x,)

    def describe(self):
        return "vertical-line x=%s" % (format_float(self.x),)

class HalfCircle(_Shape):
    """The half-circle ``(q1 - center)**2 + q2**2 = radius**2``, ``q2 > 0``."""
    kind = "half-circle"

    def __init__(self, center, radius):
        self.center = float(center)
        self.radius = float(radius)
        if not self.radius > 0:
            raise InvalidShapeError("half-circle radius must be > 0, not %r"
                                    % (radius,))

    def _fields(self):
        return (self.center, self.radius)

    def describe(self):
        return ("half-circle center=%s radius=%s"
                % (format_float(self.center), format_float(self.radius)))

def test_classify():
    benchmark = classify(GeodesicParams(0.5, 1, 0.5, 0.5, 1, 0, 1))
    assert benchmark == HalfCircle(0, 1)
    assert benchmark.kind == "half-circle"
    assert benchmark.describe() == "half-circle center=0 radius=1"
    vertical = classify(GeodesicParams(0.5, 0, 0, 1, 0, 0, 1))
    assert vertical == VerticalLine(0)
    assert vertical.describe() == "vertical-line x=0"
    point = classify(fit_params(State(0, [7, 3], [0, 0])))
    assert point == Point(7, 3)
    assert point.describe() == "point (7,3)"
    assert classify(GeodesicParams(2, 1, 0.25, 0.25, 0, 0, 2)).radius == 2
    assert classify(GeodesicParams(2, -1, 0.25, 0.25, 0, 0, 2)).radius == 2
    assert repr(benchmark) == "HalfCircle(0.0, 1.0)"
    assert HalfCircle(0, 1) != VerticalLine(0)
    assert len(set([HalfCircle(0, 1), HalfCircle(0.0, 1.0)])) == 1

def test_classify_nearly_vertical():
    # p**2 / (8 E) underflows for the first four; the shape must still be
    # the finite half-circle through the initial point
    for v in [(1e-170, 1), (1e-170, -1), (-1e-170, 1), (1e-160, 1),
              (1e-160, -1), (1e-9, 1), (1e-9, -1)]:
        s0 = State(0, [2, 3], v)
        params = fit_params(s0)
        assert np.isfinite(params.c3)
        shape = classify(params)
        assert isinstance(shape, HalfCircle)
        expected = 3 * np.hypot(*v) / abs(v[0])
        assert abs(shape.radius - expected) <= 1e-12 * expected
        through = np.hypot(2 - shape.center, 3)
        assert abs(through - shape.radius) <= 1e-12 * shape.radius
        assert np.sign(shape.center - 2) == np.sign(v[0] * v[1])
        here = eval_position(params, 0.0)
        assert np.all(np.isfinite(here))
        assert abs(here[0] - 2) <= 1e-12 * shape.radius
        assert abs(here[1] - 3) <= 1e-12

def test_classify_rejects_tampered_params():
    import pytest
    params = GeodesicParams(0.5, 1, 0.5, 0.5, 1, 0, 1)
    params.c2 = 3.0
    pytest.raises(InvalidParamsError, classify, params)
    pytest.raises(InvalidShapeError, HalfCircle, 0, 0)

def test_classify_matches_fitted_circle():
    # Least-squares circle through the sampled points:
    #   2 a x + 2 b y + c = x**2 + y**2,   r**2 = c + a**2 + b**2
    r = np.random.RandomState(13)
    for _ in range(50):
        s0 = State(0, [r.uniform(-10, 10), r.uniform(0.1, 10)],
                   r.uniform(-5, 5, size=2))
        params = fit_params(s0)
        shape = classify(params)
        times = np.linspace(-1, 1, 41) / params.rate
        xy, _ = _sample(params, times)
        matrix = np.column_stack((2 * xy[:, 0], 2 * xy[:, 1],
                                  np.ones(len(xy))))
        target = xy[:, 0] ** 2 + xy[:, 1] ** 2
        (a, b, c), _, _, _ = np.linalg.lstsq(matrix, target, rcond=None)
        radius = np.sqrt(c + a ** 2 + b ** 2)
        assert abs(a - shape.center) <= 1e-6 * max(1.0, shape.radius)
        assert abs(b) <= 1e-6 * max(1.0, shape.radius)
        assert abs(radius - shape.radius) <= 1e-6 * shape.radius

def circle_residual(traj, shape):
    """circle_residual(traj, shape)

    How far the positions of `traj` stray from `shape`: for a
    :class:`HalfCircle` the largest ``|(q1 - c)**2 + q2**2 - r**2| / r**2``
    over the grid, for a :class:`VerticalLine` the largest ``|q1 - x|``.
    Raises :class:`InvalidShapeError` for a :class:`Point`.
    """
    if traj.n != 2:
        raise ValueError("expected a half-plane trajectory with 2 degrees "
                         "of freedom, not %s" % (traj.n,))
    q1 = traj.positions[:, 0]
    q2 = traj.positions[:, 1]
    if isinstance(shape, HalfCircle):
        r2 = shape.radius ** 2
        return float(np.max(np.abs((q1 - shape.center) ** 2 + q2 ** 2 - r2))
                     / r2)
    elif isinstance(shape, VerticalLine):
        return float(np.max(np.abs(q1 - shape.x)))
    else:
        raise InvalidShapeError("circle_residual needs a half-circle or a "
                                "vertical line, not %r" % (shape,))

def test_circle_residual():
    import pytest
    h = 1e-3
    t = np.arange(-5000, 5001) * h
    exact = Trajectory(-5, h, np.column_stack((np.tanh(t), 1 / np.cosh(t))),
                       np.zeros((len(t), 2)))
    assert circle_residual(exact, HalfCircle(0, 1)) <= 1e-12
    assert circle_residual(exact, HalfCircle(0.5, 1)) > 0.1

    from nlcm.integrate import IntegrationConfig, integrate_el
    from nlcm.poincare import make_poincare_system
    system = make_poincare_system()
    s0 = State(0, [0, 1], [0, 1])
    vertical = integrate_el(system, s0, IntegrationConfig(1e-3, 2))
    assert circle_residual(vertical, VerticalLine(0)) == 0
    assert circle_residual(vertical, VerticalLine(1)) == 1

    s0 = State(0, [1, 2], [0.3, -0.4])
    traj = integrate_el(system, s0, IntegrationConfig(1e-3, 5))
    assert circle_residual(traj, classify(fit_params(s0))) <= 1e-8

    pytest.raises(InvalidShapeError, circle_residual, exact, Point(0, 1))
    pytest.raises(ValueError, circle_residual,
                  Trajectory(0, 0.1, [[1]] * 3, [[0]] * 3), HalfCircle(0, 1))

def tangent_state(x, y, center=None, speed=1.0, t=0.0):
    """tangent_state(x, y, center=None, speed=1.0, t=0.0)

    A state at ``(x, y)`` moving along a chosen geodesic: the half-circle
    centred at ``(center, 0)`` through the point, or the rising vertical
    half-line if `center` is None. The hyperbolic speed is `speed`, so the
    energy is ``speed**2 / 2``.

    On a half-circle the motion runs clockwise (towards larger ``q1`` at the
    top).
    """
    x = float(x)
    y = float(y)
    speed = float(speed)
    if not y > 0:
        raise DomainError("q2 must be > 0 in the half-plane, not %r" % (y,),
                          t)
    if not speed > 0:
        raise ValueError("speed must be positive, not %r" % (speed,))
    if center is None:
        direction = np.array([0.0, 1.0])
    else:
        offset = x - float(center)
        direction = np.array([y, -offset]) / np.hypot(offset, y)
    return State(t, [x, y], speed * y * direction)

def test_tangent_state():
    import pytest
    assert tangent_state(0, 1, center=0) == State(0, [0, 1], [1, 0])
    assert tangent_state(0, 1) == State(0, [0, 1], [0, 1])
    s = tangent_state(3, 1, center=4, speed=2)
    assert abs(poincare_energy(s) - 2) <= 1e-14
    shape = classify(fit_params(s))
    assert abs(shape.center - 4) <= 1e-12
    assert abs(shape.radius - np.sqrt(2)) <= 1e-12
    assert classify(fit_params(tangent_state(2.5, 0.5))) == VerticalLine(2.5)
    pytest.raises(DomainError, tangent_state, 0, 0)
    pytest.raises(ValueError, tangent_state, 0, 1, speed=0)

def shapes_intersect(a, b):
    """Whether two geodesic shapes meet in the open half-plane.

    Two half-circles meet exactly when their diameters on the axis
    interlace (or coincide); a vertical half-line meets a half-circle when
    its abscissa lies strictly inside the diameter. Raises
    :class:`InvalidShapeError` for a :class:`Point`.
    """
    for shape in (a, b):
        if isinstance(shape, Point) or not isinstance(shape, _Shape):
            raise InvalidShapeError("shapes_intersect needs half-circles or "
                                    "vertical lines, not %r" % (shape,))
    if isinstance(a, VerticalLine) and isinstance(b, VerticalLine):
        return a.x == b.x
    if isinstance(a, VerticalLine):
        a, b = b, a
    if isinstance(b, VerticalLine):
        return abs(b.x - a.center) < a.radius
    if a == b:
        return True
    distance = abs(a.center - b.center)
    return abs(a.radius - b.radius) < distance < a.radius + b.radius

def test_shapes_intersect():
    import pytest
    unit = HalfCircle(0, 1)
    assert shapes_intersect(unit, HalfCircle(1, 1))
    assert shapes_intersect(unit, unit)
    assert not shapes_intersect(unit, HalfCircle(3, 1))
    assert not shapes_intersect(unit, HalfCircle(2, 1))
    # nested diameters never meet
    assert not shapes_intersect(unit, HalfCircle(0, 2))
    assert not shapes_intersect(unit, HalfCircle(0.2, 0.5))
    assert shapes_intersect(unit, VerticalLine(0.5))
    assert shapes_intersect(VerticalLine(-0.5), unit)
    assert not shapes_intersect(unit, VerticalLine(1))
    assert not shapes_intersect(VerticalLine(0), VerticalLine(1))
    assert shapes_intersect(VerticalLine(1), VerticalLine(1))
    pytest.raises(InvalidShapeError, shapes_intersect, unit, Point(0, 1))
    pytest.raises(InvalidShapeError, shapes_intersect, unit, "circle")
