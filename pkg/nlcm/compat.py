# This file is part of nlcm
# See file LICENSE.txt for license information.

# This file contains compatibility code for supporting old versions of Python,
# numpy and scipy. (If we can concentrate it here, hopefully it'll make it
# easier to get rid of weird hacks once we drop support for old versions).

import os
# To force use of the compat code, set this env var to a non-empty value:
optional_dep_ok = not os.environ.get("NLCM_AVOID_OPTIONAL_DEPENDENCIES")

##### scipy

# scipy 1.6 renamed cumtrapz to cumulative_trapezoid; the old name was
# removed in scipy 1.14.
def _import_cumulative_trapezoid():
    try:
        from scipy import integrate
    except ImportError: # pragma: no cover
        raise ImportError("cumulative quadrature requires scipy")
    if hasattr(integrate, "cumulative_trapezoid"):
        return integrate.cumulative_trapezoid
    else: # pragma: no cover
        return integrate.cumtrapz

def cumulative_trapezoid(values, dx):
    """Cumulative trapezoid rule with a leading 0 (so the output has the same
    length as `values`)."""
    return _import_cumulative_trapezoid()(values, dx=dx, initial=0)

def test_cumulative_trapezoid():
    import numpy as np
    got = cumulative_trapezoid([1.0, 1.0, 1.0], 0.5)
    assert np.allclose(got, [0.0, 0.5, 1.0])
    got = cumulative_trapezoid([0.0, 1.0, 2.0], 1.0)
    assert np.allclose(got, [0.0, 0.5, 2.0])

##### Python standard library

from nlcm import NLCMError

# Errors raised inside user-supplied callables (Lagrangians, variation
# fields) are re-raised as NLCMError, with the time attached, chained to the
# original. NLCMErrors just pick up the time.
def call_and_wrap_exc(msg, t, f, *args, **kwargs):
    try:
        return f(*args, **kwargs)
    except NLCMError as e:
        e.set_time(t)
        raise
    except Exception as e:
        raise NLCMError("%s: %s: %s" % (msg, e.__class__.__name__, e),
                        t) from e

def test_call_and_wrap_exc():
    def boom(x):
        raise ZeroDivisionError("x=%s" % (x,))
    try:
        call_and_wrap_exc("evaluating field", 1.5, boom, 3)
    except NLCMError as e:
        assert e.t == 1.5
        assert "evaluating field" in e.message
        assert "ZeroDivisionError" in e.message
        assert isinstance(e.__cause__, ZeroDivisionError)
    else:
        assert False

    from nlcm import DomainError
    def domain(x):
        raise DomainError("outside")
    try:
        call_and_wrap_exc("evaluating field", 2.0, domain, 3)
    except DomainError as e:
        assert e.t == 2.0
        assert str(e) == "outside (at t=2.0)"
    else:
        assert False

    assert call_and_wrap_exc("adding", None, lambda a, b: a + b, 1, 2) == 3
