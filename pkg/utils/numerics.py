"""
Scalar numerical building blocks: bracketing, root finding, quadrature,
one-dimensional minimization and finite differences.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from config import (
    BRACKET_DOUBLINGS,
    FIRST_DIFF_STEP,
    GOLDEN_TOL,
    QUAD_MAX_DEPTH,
    QUAD_MAX_INTERVALS,
    QUAD_TOL,
    ROOT_MAXITER,
    ROOT_RTOL,
    ROOT_XTOL,
    SAMPLE_SPAN,
    SECOND_DIFF_STEP,
)
from errors import BracketExhausted, QuadratureFailure, ToleranceNotMet, Unrepresentable
from models import Interval

logger = logging.getLogger(__name__)

ScalarMap = Callable[[float], float]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# Failures that mean "this point cannot be evaluated", not "the caller is wrong"
EVALUATION_ERRORS = (ArithmeticError, ValueError)


def default_center(domain: Interval) -> float:
    """A representative interior point of the domain."""
    if domain.bounded:
        return 0.5 * (domain.low + domain.high)
    if math.isfinite(domain.low):
        return domain.low + max(1.0, abs(domain.low))
    if math.isfinite(domain.high):
        return domain.high - max(1.0, abs(domain.high))
    return 0.0


def sample_points(domain: Interval, n: int) -> np.ndarray:
    """
    Strictly increasing interior sample of the domain.

    Bounded domains are sampled uniformly; an unbounded side is sampled
    geometrically out to SAMPLE_SPAN from the finite end (or symmetrically
    around zero for the whole line).
    """
    if n < 2:
        raise ValueError("need at least two sample points")
    if domain.bounded:
        return np.linspace(domain.low, domain.high, n + 2)[1:-1]
    if math.isfinite(domain.low):
        return domain.low + np.geomspace(1e-6, SAMPLE_SPAN, n)
    if math.isfinite(domain.high):
        return domain.high - np.geomspace(SAMPLE_SPAN, 1e-6, n)
    half = n // 2
    negative = -np.geomspace(SAMPLE_SPAN, 1e-6, half)
    return np.concatenate([negative, np.geomspace(1e-6, SAMPLE_SPAN, n - half)])


def _step_out(center: float, previous: float, width: float, edge: float) -> float:
    """Next probe moving away from center: double the width, or halve the gap to a finite edge."""
    if math.isinf(edge):
        return center + math.copysign(width, edge)
    candidate = center + math.copysign(width, edge - center)
    if (edge - candidate) * (edge - center) > 0:
        return candidate
    return edge + (previous - edge) / 2.0


def expand_bracket(
    fn: ScalarMap,
    target: float,
    domain: Interval,
    start: Optional[float] = None,
    max_steps: int = BRACKET_DOUBLINGS,
) -> Tuple[float, float]:
    """
    Grow an interval around `start` until fn - target changes sign on it.

    The function is assumed monotone. Probes that cannot be evaluated stop
    growth on their side. Raises BracketExhausted when no sign change is
    found within `max_steps` expansions.
    """
    center = default_center(domain) if start is None else start
    try:
        g_center = fn(center) - target
    except EVALUATION_ERRORS as e:
        raise BracketExhausted(f"cannot evaluate at bracket center {center!r}: {e}") from e
    if g_center == 0.0:
        return center, center

    lo, hi = center, center
    g_lo, g_hi = g_center, g_center
    lo_open, hi_open = True, True
    width = max(1.0, abs(center))
    for step in range(max_steps):
        if lo_open:
            probe = _step_out(center, lo, width, domain.low)
            try:
                value = fn(probe) - target
                if math.isnan(value):
                    raise ArithmeticError("nan")
                lo, g_lo = probe, value
            except EVALUATION_ERRORS:
                lo_open = False
        if hi_open:
            probe = _step_out(center, hi, width, domain.high)
            try:
                value = fn(probe) - target
                if math.isnan(value):
                    raise ArithmeticError("nan")
                hi, g_hi = probe, value
            except EVALUATION_ERRORS:
                hi_open = False
        if g_lo * g_center <= 0.0:
            logger.debug("bracket [%r, %r] after %d expansions", lo, center, step + 1)
            return lo, center
        if g_hi * g_center <= 0.0:
            logger.debug("bracket [%r, %r] after %d expansions", center, hi, step + 1)
            return center, hi
        if not (lo_open or hi_open):
            break
        width *= 2.0
    raise BracketExhausted(
        f"no sign change for target {target!r} within [{lo!r}, {hi!r}] of {domain}"
    )


def find_root(
    fn: ScalarMap,
    target: float,
    lo: float,
    hi: float,
    rtol: float = ROOT_RTOL,
    xtol: float = ROOT_XTOL,
) -> Tuple[float, int]:
    """
    Brent refinement of fn(x) = target on a sign-change bracket.

    Returns the root and the number of iterations spent.
    """
    if lo == hi:
        return lo, 0
    root, result = brentq(
        lambda x: fn(x) - target,
        lo,
        hi,
        xtol=xtol,
        rtol=rtol,
        maxiter=ROOT_MAXITER,
        full_output=True,
        disp=False,
    )
    if not result.converged:
        raise ToleranceNotMet(f"Brent refinement did not converge on [{lo!r}, {hi!r}]: {result.flag}")
    return root, result.iterations


def solve_monotone(
    fn: ScalarMap,
    target: float,
    domain: Interval,
    start: Optional[float] = None,
    rtol: float = ROOT_RTOL,
) -> float:
    """Invert a monotone map on its domain: bracket from `start`, then refine."""
    lo, hi = expand_bracket(fn, target, domain, start)
    root, _ = find_root(fn, target, lo, hi, rtol=rtol)
    return root


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(
    f: ScalarMap,
    a: float,
    b: float,
    tol: float = QUAD_TOL,
    max_intervals: int = QUAD_MAX_INTERVALS,
    max_depth: int = QUAD_MAX_DEPTH,
) -> float:
    """
    Integrate f over [a, b] by adaptive Simpson subdivision to absolute tolerance `tol`.

    Each split hands half of the parent's tolerance to each child; accepted
    panels get the Richardson correction. Raises QuadratureFailure when the
    number of panels would exceed `max_intervals`, when a panel cannot be
    split further, or when the integrand is not finite.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, max_intervals, max_depth)

    def value(x: float) -> float:
        try:
            y = f(x)
        except EVALUATION_ERRORS as e:
            raise QuadratureFailure(f"integrand failed at {x!r}: {e}") from e
        if not math.isfinite(y):
            raise QuadratureFailure(f"integrand is not finite at {x!r}")
        return y

    fa, fb = value(a), value(b)
    m = 0.5 * (a + b)
    fm = value(m)
    stack = [(a, b, fa, fm, fb, _simpson(fa, fm, fb, b - a), tol, 0)]
    accepted = []
    panels = 1
    while stack:
        lo, hi, flo, fmid, fhi, whole, panel_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left_mid, right_mid = 0.5 * (lo + mid), 0.5 * (mid + hi)
        fl, fr = value(left_mid), value(right_mid)
        left = _simpson(flo, fl, fmid, mid - lo)
        right = _simpson(fmid, fr, fhi, hi - mid)
        error = (left + right - whole) / 15.0
        if abs(error) <= panel_tol:
            accepted.append(left + right + error)
            continue
        if depth + 1 >= max_depth or not (lo < left_mid < mid < right_mid < hi):
            raise QuadratureFailure(
                f"panel [{lo!r}, {hi!r}] cannot be refined further (error estimate {abs(error):.3g})"
            )
        panels += 1
        if panels > max_intervals:
            raise QuadratureFailure(f"more than {max_intervals} panels needed on [{a!r}, {b!r}]")
        stack.append((mid, hi, fmid, fr, fhi, right, panel_tol / 2.0, depth + 1))
        stack.append((lo, mid, flo, fl, fmid, left, panel_tol / 2.0, depth + 1))
    logger.debug("adaptive Simpson on [%r, %r]: %d panels", a, b, panels)
    return math.fsum(accepted)


def golden_section_minimize(f: ScalarMap, a: float, b: float, tol: float = GOLDEN_TOL) -> Tuple[float, float]:
    """
    Derivative-free minimization of a unimodal f on [a, b].

    Never evaluates outside [a, b]. Returns (x, f(x)).
    """
    c = b - (b - a) * INV_PHI
    d = a + (b - a) * INV_PHI
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * INV_PHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * INV_PHI
            fd = f(d)
        if not a < c < d < b:
            break
    x = 0.5 * (a + b)
    return x, f(x)


def grid_minimize(f: ScalarMap, a: float, b: float, points: int, tol: float = GOLDEN_TOL) -> Tuple[float, float]:
    """Scan a uniform grid on [a, b], then refine around the best node by golden section."""
    grid = np.linspace(a, b, points)
    values = np.array([f(float(x)) for x in grid])
    if not np.isfinite(values).any():
        raise Unrepresentable(f"no finite value of the objective on [{a!r}, {b!r}]")
    best = int(np.argmin(values))
    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, points - 1)])
    x, fx = golden_section_minimize(f, lo, hi, tol)
    if fx <= values[best]:
        return x, fx
    return float(grid[best]), float(values[best])


def difference_step(base: float, x: float, domain: Optional[Interval] = None, reach: float = 1.0) -> float:
    """
    Step base * max(1, |x|), shrunk so that x +/- reach * step stays inside the domain.
    """
    h = base * max(1.0, abs(x))
    if domain is not None:
        room = min(x - domain.low, domain.high - x)
        if not room > 0:
            raise ValueError(f"cannot difference at {x!r} on {domain}")
        h = min(h, 0.1 * room / reach)
    return h


def first_derivative(f: ScalarMap, x: float, domain: Optional[Interval] = None) -> float:
    """Central difference with the cube-root-of-epsilon step."""
    h = difference_step(FIRST_DIFF_STEP, x, domain)
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_derivative(f: ScalarMap, x: float, domain: Optional[Interval] = None) -> float:
    """Five-point central second difference with the sixth-root-of-epsilon step."""
    h = difference_step(SECOND_DIFF_STEP, x, domain, reach=2.0)
    near = f(x + h) + f(x - h)
    far = f(x + 2.0 * h) + f(x - 2.0 * h)
    return (16.0 * near - far - 30.0 * f(x)) / (12.0 * h * h)


def symmetric_log_grid(samples: int, smallest: float, largest: float, special: float = 0.0) -> np.ndarray:
    """
    Parameter grid: `samples // 2` log-spaced magnitudes on each side of
    `special`, plus the special value itself, strictly increasing.
    """
    half = max(samples // 2, 1)
    magnitudes = np.geomspace(smallest, largest, half)
    return np.concatenate([special - magnitudes[::-1], [special], special + magnitudes])
