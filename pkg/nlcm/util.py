# This file is part of nlcm
# See file LICENSE.txt for license information.

# Some generic utilities.

__all__ = ["as_vector", "frozen", "format_float", "relative_scale",
           "repr_pretty_delegate", "repr_pretty_impl"]

import sys
import numpy as np
from six.moves import cStringIO as StringIO
from nlcm import NumericError
from nlcm.compat import optional_dep_ok

def frozen(arr):
    """Returns a read-only float64 copy of `arr`."""
    arr = np.array(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr

def as_vector(obj, name="vector", length=None):
    """Converts `obj` into a read-only 1-d float64 array.

    Raises :class:`ValueError` if `obj` is not 1-d (or does not have the
    requested `length`), and :class:`NumericError` if any component is NaN
    or infinite.
    """
    arr = np.atleast_1d(np.array(obj, dtype=np.float64))
    if arr.ndim != 1:
        raise ValueError("%s must be 1-dimensional, not shape %s"
                         % (name, arr.shape))
    if length is not None and arr.shape[0] != length:
        raise ValueError("%s must have length %s, not %s"
                         % (name, length, arr.shape[0]))
    if not np.all(np.isfinite(arr)):
        raise NumericError("%s has non-finite components: %r"
                           % (name, arr.tolist()))
    arr.flags.writeable = False
    return arr

def test_as_vector():
    import pytest
    v = as_vector([1, 2])
    assert v.dtype == np.dtype(np.float64)
    assert v.tolist() == [1.0, 2.0]
    assert not v.flags.writeable
    assert as_vector(3.5).tolist() == [3.5]
    assert as_vector((0, 1), length=2).shape == (2,)
    pytest.raises(ValueError, as_vector, [[1, 2]])
    pytest.raises(ValueError, as_vector, [1, 2, 3], length=2)
    pytest.raises(NumericError, as_vector, [1, np.nan])
    pytest.raises(NumericError, as_vector, [np.inf])

def test_frozen():
    a = [1.0, 2.0]
    f = frozen(a)
    assert not f.flags.writeable
    import pytest
    with pytest.raises(ValueError):
        f[0] = 3

# 17 significant digits round-trip every float64 exactly.
def format_float(x):
    return "%.17g" % (float(x),)

def test_format_float():
    assert format_float(0.5) == "0.5"
    assert format_float(1.0) == "1"
    assert format_float(0) == "0"
    assert float(format_float(0.1)) == 0.1
    x = 1.0 / 3
    assert float(format_float(x)) == x

# Scale used by every "relative" tolerance in the package: a quantity whose
# magnitude stays below 1 is compared absolutely.
def relative_scale(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(values))))

def test_relative_scale():
    assert relative_scale([]) == 1.0
    assert relative_scale([0.0, -0.5]) == 1.0
    assert relative_scale([3.0, -7.0]) == 7.0

# Every class here writes a single _repr_pretty_ method. Inside IPython it
# drives the real pretty-printer, which wraps long reprs like
#
#    GeodesicParams(E=0.5, p=1.0, c1=0.5, c2=0.5,
#                   c3=1.0)
#
# and everywhere else __repr__ runs it through the one-line fallback below.
#
# Pretty printer docs:
#   http://ipython.org/ipython-doc/dev/api/generated/IPython.lib.pretty.html

class _OneLinePrinter(object):
    # The subset of IPython.lib.pretty.PrettyPrinter used by repr_pretty_impl;
    # group and break hints collapse to a single line.
    def __init__(self):
        self._buf = StringIO()

    def text(self, text):
        self._buf.write(text)

    def breakable(self, sep=" "):
        self.text(sep)

    def begin_group(self, indent, opening):
        self.text(opening)

    def end_group(self, dedent, closing):
        self.text(closing)

    def pretty(self, obj):
        method = getattr(obj, "_repr_pretty_", None)
        if method is None:
            self.text(repr(obj))
        else:
            method(self, False)

    def getvalue(self):
        return self._buf.getvalue()

def repr_pretty_delegate(obj):
    """A ``__repr__`` for classes that define ``_repr_pretty_``."""
    # IPython is used when somebody else already imported it; importing it
    # here would make every repr slow.
    if optional_dep_ok and "IPython" in sys.modules:
        from IPython.lib.pretty import pretty
        return pretty(obj)
    printer = _OneLinePrinter()
    printer.pretty(obj)
    return printer.getvalue()

def repr_pretty_impl(p, obj, args, kwargs=[]):
    """Writes ``ClassName(arg, ..., label=value, ...)`` to the pretty-printer
    `p`."""
    name = obj.__class__.__name__
    items = [(None, arg) for arg in args] + list(kwargs)
    p.begin_group(len(name) + 1, name + "(")
    for i, (label, value) in enumerate(items):
        if i:
            p.text(",")
            p.breakable()
        if label is None:
            p.pretty(value)
        else:
            p.begin_group(len(label) + 1, label + "=")
            p.pretty(value)
            p.end_group(len(label) + 1, "")
    p.end_group(len(name) + 1, ")")

def test_repr_pretty_impl():
    assert repr_pretty_delegate(0.25) == "0.25"
    printer = _OneLinePrinter()
    class Shape(object):
        pass
    repr_pretty_impl(printer, Shape(), [1.5, "x"],
                     [("center", 0.0), ("radius", (1, 2))])
    assert printer.getvalue() == "Shape(1.5, 'x', center=0.0, radius=(1, 2))"
    printer = _OneLinePrinter()
    repr_pretty_impl(printer, Shape(), [])
    assert printer.getvalue() == "Shape()"
