# This file is part of nlcm
# See file LICENSE.txt for license information.

# The command line front end:
#
#   nlcm integrate   RK4 run of the half-plane geodesic equations, as CSV
#   nlcm verify      drift of every constant of motion along a run
#   nlcm geodesic    closed-form parameters and the shape of a geodesic
#   nlcm plot        SVG picture of geodesics
#
# Exit status: 0 on success, 1 when verify finds a quantity out of
# tolerance, 2 on runtime errors (domain violations, unwritable output), 64
# on usage errors.

import argparse
import csv
import logging
import sys

import numpy as np

from nlcm import NLCMError, DomainError
from nlcm.version import __version__
from nlcm.lagrangian import State
from nlcm.poincare import (make_poincare_system,
                           poincare_energy, poincare_momentum)
from nlcm.integrate import IntegrationConfig, integrate_el
from nlcm.variations import (drift_report, nonlocal_constant,
                             q1_translation_field, q2_translation_field,
                             trigonometric_field, q2_nonlocal_closed_form,
                             check_linear_ode)
from nlcm.geodesics import (fit_params, classify, eval_position,
                            tangent_state, HalfCircle)
from nlcm.svg import Curve, write_svg
from nlcm.util import format_float, repr_pretty_delegate, repr_pretty_impl

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2
EXIT_USAGE = 64

DRIFT_TOLERANCE = 1e-5
ODE_TOLERANCE = 1e-3

CSV_HEADER = ["t", "q1", "q2", "v1", "v2", "E", "p"]

class UsageError(Exception):
    pass

class RunSpec(object):
    """One run requested on the command line: an initial state at `t0` and
    the grid ``t0, t0 + h, ..., t1``.

    Raises :class:`DomainError` if ``q2 <= 0``, and :class:`UsageError` for
    a step or window that is not finite or positive, or that holds fewer
    than 2 steps.
    """
    def __init__(self, q, v, h=1e-3, t0=0.0, t1=5.0):
        self.q = tuple(float(x) for x in q)
        self.v = tuple(float(x) for x in v)
        self.h = float(h)
        self.t0 = float(t0)
        self.t1 = float(t1)
        if not self.q[1] > 0:
            raise DomainError("the initial position must satisfy q2 > 0 "
                              "(Poincare half-plane), got q2=%s"
                              % (format_float(self.q[1]),))
        if not (np.isfinite(self.h) and self.h > 0):
            raise UsageError("--h must be positive and finite, not %s"
                             % (format_float(self.h),))
        if not (np.isfinite(self.t0) and np.isfinite(self.t1)):
            raise UsageError("--t0 and --t1 must be finite")
        if not self.t1 > self.t0:
            raise UsageError("--t1 (%s) must be later than --t0 (%s)"
                             % (format_float(self.t1),
                                format_float(self.t0)))
        n_steps = (self.t1 - self.t0) / self.h
        if not (np.isfinite(n_steps) and round(n_steps) >= 2):
            raise UsageError("a run needs at least 2 steps of --h between "
                             "--t0 and --t1; (t1 - t0) / h is %s"
                             % (format_float(n_steps),))

    @property
    def state(self):
        return State(self.t0, self.q, self.v)

    @property
    def config(self):
        return IntegrationConfig(self.h, self.t1)

    __repr__ = repr_pretty_delegate
    def _repr_pretty_(self, p, cycle):
        assert not cycle
        return repr_pretty_impl(p, self, [],
                                [("q", self.q), ("v", self.v), ("h", self.h),
                                 ("t0", self.t0), ("t1", self.t1)])

def test_RunSpec():
    import pytest
    spec = RunSpec((0, 1), (1, 0))
    assert spec.state == State(0, [0, 1], [1, 0])
    assert spec.config.h == 1e-3 and spec.config.t1 == 5
    assert repr(spec) == ("RunSpec(q=(0.0, 1.0), v=(1.0, 0.0), h=0.001, "
                          "t0=0.0, t1=5.0)")
    pytest.raises(DomainError, RunSpec, (0, -1), (1, 0))
    pytest.raises(DomainError, RunSpec, (0, 0), (1, 0))
    pytest.raises(UsageError, RunSpec, (0, 1), (1, 0), h=0)
    pytest.raises(UsageError, RunSpec, (0, 1), (1, 0), t0=2, t1=2)
    pytest.raises(UsageError, RunSpec, (0, 1), (1, 0), h=np.inf)
    pytest.raises(UsageError, RunSpec, (0, 1), (1, 0), h=1, t1=1)
    pytest.raises(UsageError, RunSpec, (0, 1), (1, 0), h=0.7, t1=1)
    pytest.raises(UsageError, RunSpec, (0, 1), (1, 0), t1=np.inf)
    # two steps is the shortest run
    assert RunSpec((0, 1), (1, 0), h=0.5, t1=1).config.steps(0) == 2

def _run(spec):
    logger.debug("integrating %r", spec)
    return integrate_el(make_poincare_system(), spec.state, spec.config)

def cmd_integrate(spec, out):
    """Writes the RK4 run of `spec` to `out` as CSV."""
    traj = _run(spec)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in traj:
        writer.writerow([format_float(x)
                         for x in (s.t, s.q[0], s.q[1], s.v[0], s.v[1],
                                   poincare_energy(s),
                                   poincare_momentum(s))])
    return EXIT_OK

def _verification_checks(spec):
    system = make_poincare_system()
    traj = _run(spec)
    drifts = [
        ("energy E", drift_report([poincare_energy(s) for s in traj])),
        ("momentum p", drift_report([poincare_momentum(s) for s in traj])),
        ]
    for field in (q1_translation_field(), q2_translation_field(),
                  trigonometric_field()):
        drifts.append(("nonlocal constant, %s" % (field.label,),
                       nonlocal_constant(system, traj, field)))
    drifts.append(("q2-translation closed form",
                   q2_nonlocal_closed_form(traj)))
    checks = [(name + " relative drift", report.relative_drift,
               DRIFT_TOLERANCE)
              for name, report in drifts]
    residual = float(np.max(np.abs(check_linear_ode(traj))))
    checks.append(("linear ODE in 1/q2 max residual", residual,
                   ODE_TOLERANCE))
    return traj, checks

def cmd_verify(spec, out):
    """Prints the drift of every constant of motion along the RK4 run of
    `spec`, and returns :data:`EXIT_FAILED` if any is out of tolerance."""
    traj, checks = _verification_checks(spec)
    start = traj[0]
    out.write("E=%s p=%s h=%s steps=%s\n"
              % (format_float(poincare_energy(start)),
                 format_float(poincare_momentum(start)),
                 format_float(spec.h), traj.n_steps))
    failures = 0
    for name, value, tolerance in checks:
        ok = value <= tolerance
        if not ok:
            failures += 1
        out.write("%-50s %.3e <= %.0e %s\n"
                  % (name + ":", value, tolerance, "ok" if ok else "FAILED"))
    if failures:
        out.write("%s of %s checks FAILED\n" % (failures, len(checks)))
        return EXIT_FAILED
    out.write("all %s checks passed\n" % (len(checks),))
    return EXIT_OK

def cmd_geodesic(spec, out):
    """Prints the closed-form parameters of the geodesic through the
    initial state of `spec`, and its shape."""
    params = fit_params(spec.state)
    out.write("E=%s p=%s c1=%s c2=%s c3=%s\n"
              % tuple(format_float(x) for x in (params.E, params.p, params.c1,
                                                params.c2, params.c3)))
    out.write(classify(params).describe() + "\n")
    return EXIT_OK

# The parallel geodesics picture: through a point P off the reference
# half-circle pass infinitely many geodesics that never meet it.
FIGURE_REFERENCE = (0.0, 1.0)      # center, radius
FIGURE_POINT = (3.0, 1.0)
FIGURE_CENTERS = (0.0, 2.5, 3.0, 4.0, 6.0)
FIGURE_WINDOW = (-3.0, 3.0)

def figure_states():
    """The initial states of the parallel geodesics picture, as
    ``(label, state, emphasis)`` triples: the reference half-circle first,
    then the geodesics through the point."""
    center, radius = FIGURE_REFERENCE
    x, y = FIGURE_POINT
    states = [("reference half-circle",
               tangent_state(center, radius, center=center), True)]
    for c in FIGURE_CENTERS:
        states.append(("through P, center %s" % (format_float(c),),
                       tangent_state(x, y, center=c), False))
    states.append(("through P, vertical", tangent_state(x, y), False))
    return states

def test_figure_states():
    from nlcm.geodesics import shapes_intersect
    states = figure_states()
    reference = classify(fit_params(states[0][1]))
    assert reference == HalfCircle(*FIGURE_REFERENCE)
    assert len(states) == len(FIGURE_CENTERS) + 2
    for label, s, emphasis in states[1:]:
        assert not emphasis
        assert tuple(s.q) == FIGURE_POINT
        assert not shapes_intersect(reference, classify(fit_params(s)))

def _curve(label, s0, window, samples, emphasis=False):
    params = fit_params(s0)
    times = np.linspace(window[0], window[1], samples)
    return Curve(eval_position(params, times), label=label,
                 emphasis=emphasis)

def cmd_plot(specs, out_path, out, figure=False, samples=400,
             window=(0.0, 5.0)):
    """Writes an SVG picture of the geodesics through the initial states of
    `specs` (sampled over `window`) to `out_path`, preceded by the parallel
    geodesics picture if `figure` is set."""
    if not specs and not figure:
        raise UsageError("plot needs at least one --spec or --figure")
    curves = []
    if figure:
        for label, s0, emphasis in figure_states():
            curves.append(_curve(label, s0, FIGURE_WINDOW, samples,
                                 emphasis))
    for spec in specs:
        curves.append(_curve("q=(%s) v=(%s)"
                             % (",".join(map(format_float, spec.q)),
                                ",".join(map(format_float, spec.v))),
                             spec.state, window, samples))
    write_svg(out_path, curves, title="Geodesics in Poincare's half-plane")
    logger.info("wrote %s geodesics to %s", len(curves), out_path)
    out.write("wrote %s geodesics to %s\n" % (len(curves), out_path))
    return EXIT_OK

def _floats(text, count, what):
    parts = text.split(",")
    if len(parts) != count:
        raise argparse.ArgumentTypeError("%s needs %s comma-separated "
                                         "numbers, not %r"
                                         % (what, count, text))
    try:
        values = [float(part) for part in parts]
    except ValueError:
        raise argparse.ArgumentTypeError("%s needs numbers, not %r"
                                         % (what, text))
    if not all(np.isfinite(values)):
        raise argparse.ArgumentTypeError("%s must be finite, not %r"
                                         % (what, text))
    return tuple(values)

def _pair(text):
    return _floats(text, 2, "a vector")

def _spec_vector(text):
    return _floats(text, 4, "--spec")

def test__floats():
    import pytest
    assert _pair("0,1") == (0.0, 1.0)
    assert _pair("-1.5,2e-3") == (-1.5, 0.002)
    assert _spec_vector("1,2,3,4") == (1, 2, 3, 4)
    for bad in ["1", "1,2,3", "a,b", "1,nan", "inf,1", ""]:
        pytest.raises(argparse.ArgumentTypeError, _pair, bad)

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)

def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h", type=float, default=1e-3,
                        help="step size (default: 1e-3)")
    common.add_argument("--t0", type=float, default=0.0,
                        help="start time (default: 0)")
    common.add_argument("--t1", type=float, default=5.0,
                        help="end time (default: 5)")
    common.add_argument("-v", "--verbose", action="store_true",
                        help="log debugging information to stderr")
    initial = argparse.ArgumentParser(add_help=False)
    initial.add_argument("--q", type=_pair, default=(0.0, 1.0),
                         metavar="Q1,Q2",
                         help="initial position (default: 0,1); write "
                         "--q=-1,2 for a negative first component")
    initial.add_argument("--v", type=_pair, default=(1.0, 0.0),
                         metavar="V1,V2",
                         help="initial velocity (default: 1,0)")

    parser = _ArgumentParser(
        prog="nlcm",
        description="Nonlocal constants of motion and the geodesics of "
        "Poincare's half-plane.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s " + __version__)
    commands = parser.add_subparsers(dest="command", metavar="COMMAND",
                                     parser_class=_ArgumentParser)
    commands.required = True
    commands.add_parser("integrate", parents=[common, initial],
                        help="integrate a geodesic and print it as CSV")
    commands.add_parser("verify", parents=[common, initial],
                        help="check the drift of every constant of motion")
    commands.add_parser("geodesic", parents=[common, initial],
                        help="print closed-form parameters and the shape")
    plot = commands.add_parser("plot", parents=[common],
                               help="draw geodesics as SVG")
    plot.add_argument("--spec", type=_spec_vector, action="append",
                      default=[], metavar="Q1,Q2,V1,V2",
                      help="initial state of a geodesic to draw; "
                      "repeatable")
    plot.add_argument("--out", required=True, metavar="PATH",
                      help="where to write the SVG file")
    plot.add_argument("--figure", action="store_true",
                      help="draw a reference half-circle and geodesics "
                      "through a point that never meet it")
    plot.add_argument("--samples", type=int, default=400,
                      help="points per geodesic (default: 400, "
                      "minimum: 200)")
    return parser

def _dispatch(args):
    out = sys.stdout
    if args.command == "plot":
        if args.samples < 200:
            raise UsageError("--samples must be at least 200, not %s"
                             % (args.samples,))
        specs = [RunSpec(vector[:2], vector[2:], args.h, args.t0, args.t1)
                 for vector in args.spec]
        return cmd_plot(specs, args.out, out, figure=args.figure,
                        samples=args.samples, window=(args.t0, args.t1))
    spec = RunSpec(args.q, args.v, args.h, args.t0, args.t1)
    command = {"integrate": cmd_integrate,
               "verify": cmd_verify,
               "geodesic": cmd_geodesic}[args.command]
    return command(spec, out)

def main(argv=None):
    """Runs the command line front end on `argv` (default: ``sys.argv``)
    and returns the exit status."""
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = make_parser().parse_args(argv)
        if args.verbose:
            logging.basicConfig(level=logging.DEBUG, stream=sys.stderr,
                                format="%(name)s: %(message)s")
        return _dispatch(args)
    except (UsageError, ValueError) as e:
        # ValueError: a flag value that one of the value classes rejects
        sys.stderr.write("nlcm: error: %s\n" % (e,))
        return EXIT_USAGE
    except NLCMError as e:
        sys.stderr.write("nlcm: error: %s\n" % (e,))
        return EXIT_ERROR
    except (IOError, OSError) as e:
        sys.stderr.write("nlcm: error: %s\n" % (e,))
        return EXIT_ERROR
