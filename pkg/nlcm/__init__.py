# This file is part of nlcm
# See file LICENSE.txt for license information.

"""nlcm is a Python package for computing nonlocal constants of motion of
Lagrangian systems along numerically integrated motions, and for using them
(together with the classical first integrals) to integrate and verify the
geodesics of Poincare's half-plane."""

from nlcm.version import __version__

# Do this first, to make it easy to check for warnings while testing:
import os
if os.environ.get("NLCM_FORCE_NO_WARNINGS"):
    import warnings
    warnings.filterwarnings("error", module="^nlcm")
    del warnings
del os

class NLCMError(Exception):
    """This is the main error type raised by nlcm functions.

    In addition to the usual Python exception features, you can pass a second
    argument specifying the time ``t`` at which the problem occurred (for
    example, the RK4 stage at which a motion left the admissible domain). It
    is included in any error message.

    For ordinary display to the user with default formatting, use
    ``str(exc)``. If you want to do something cleverer, you can use the
    ``.message`` and ``.t`` attributes directly. (The latter may be None.)
    """
    def __init__(self, message, t=None):
        Exception.__init__(self, message)
        self.message = message
        self.t = None
        self.set_time(t)

    def __str__(self):
        if self.t is None:
            return self.message
        else:
            return "%s (at t=%r)" % (self.message, self.t)

    def set_time(self, t):
        # Lets an exception pick up a time as it "passes by" without
        # overwriting the innermost one.
        if self.t is None and t is not None:
            self.t = float(t)

class DomainError(NLCMError):
    """A configuration lies outside the admissible domain of the system
    (for Poincare's half-plane: ``q2 <= 0``)."""

class SingularityError(DomainError):
    """An integration stage left the admissible domain, or came within
    ``min_q_margin`` of its boundary. Always carries the time of failure."""

class NumericError(NLCMError):
    """A non-finite value (NaN or infinity) was supplied or produced."""

class SizeError(NLCMError):
    """A grid operation was given too few samples."""

class InvalidParamsError(NLCMError):
    """Closed-form geodesic parameters violate their invariants, or were
    passed to a formula whose preconditions they fail."""

class InvalidShapeError(NLCMError):
    """A geodesic shape was passed to an operation that does not accept it."""

__all__ = ["NLCMError", "DomainError", "SingularityError", "NumericError",
           "SizeError", "InvalidParamsError", "InvalidShapeError"]

# We make a rich API available for explicit use. To see what exactly is
# exported, check each module's __all__, or import this module and look at its
# __all__.

def _reexport(mod):
    __all__.extend(mod.__all__)
    for var in mod.__all__:
        globals()[var] = getattr(mod, var)

import nlcm.lagrangian
_reexport(nlcm.lagrangian)

import nlcm.poincare
_reexport(nlcm.poincare)

import nlcm.integrate
_reexport(nlcm.integrate)

import nlcm.variations
_reexport(nlcm.variations)

import nlcm.geodesics
_reexport(nlcm.geodesics)

# The command line front end (nlcm.cli, nlcm.svg) is not
# re-exported; use it through ``python -m nlcm`` or the ``nlcm`` script.
