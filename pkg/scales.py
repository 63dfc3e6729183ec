"""
One-parameter scales of quasi-arithmetic means.

Every family is parameterized on the whole real line in its solver
coordinate: p for power means, alpha for exponential means and t = ln(alpha)
for radical means. The special value 0 is the continuity branch of each
family (geometric, arithmetic and harmonic mean respectively).
"""
import logging
import math
from typing import Callable, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import (
    ALPHA_MAX,
    CONTINUITY_EPS,
    DEFAULT_SOLVE_TOL,
    FAMILY_SETTINGS,
    SCALE_GRID_MAX,
    SCALE_GRID_MIN,
    SCALE_MIN_SAMPLES,
)
from errors import BracketExhausted, DegenerateInterval, NotMonotone, TargetOutOfInterval, ToleranceNotMet
from expr import Node, compile_expression, parse, to_text
from generators import (
    Generator,
    certify_monotone,
    identity_generator,
    make_exponential_generator,
    make_power_generator,
    numeric_generator,
    qam_eval,
    radical_generator_from_log,
)
from models import Direction, Interval, LimitProbe, ScaleDirection, ScaleReport, ScaleViolation, ScanRow, SolveReport
from utils.numerics import find_root, sample_points, symmetric_log_grid

logger = logging.getLogger(__name__)

# Brent refinement of the parameter runs to machine resolution; the mean tolerance decides success
_PARAM_RTOL = 4.0 * np.finfo(float).eps
_PARAM_XTOL = 1e-15

# Second differences of a sampled generator carry rounding noise, so convexity is a vote
CONVEXITY_SAMPLES = 64
CONVEXITY_QUORUM = 0.9


class ScaleFamily(BaseModel):
    """A parameterized family alpha -> generator whose means form a scale."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="power, exponential, radical or custom(...)")
    make: Callable[[float], Generator] = Field(..., description="Solver-coordinate parameter -> generator")
    direction: ScaleDirection = Field(..., description="Declared monotonicity of alpha -> m_alpha(a, b)")
    param_domain: Interval = Field(default_factory=Interval.real_line, description="Admissible parameters")
    means_domain: Interval = Field(..., description="Interval the means act on")
    special: float = Field(0.0, description="Continuity branch of the parameter")


def _defaults(name: str) -> dict:
    settings = FAMILY_SETTINGS[name]
    low, high = settings["domain"]
    return {"means_domain": Interval(low=low, high=high), "special": settings["special"]}


def power_family() -> ScaleFamily:
    return ScaleFamily(
        name="power",
        make=make_power_generator,
        direction=ScaleDirection.INCREASING,
        **_defaults("power"),
    )


def exponential_family() -> ScaleFamily:
    return ScaleFamily(
        name="exponential",
        make=make_exponential_generator,
        direction=ScaleDirection.INCREASING,
        **_defaults("exponential"),
    )


def radical_family() -> ScaleFamily:
    """Radical means parameterized by t = ln(alpha), so alpha = 1 sits at t = 0."""
    return ScaleFamily(
        name="radical",
        make=radical_generator_from_log,
        direction=ScaleDirection.DECREASING,
        **_defaults("radical"),
    )


def _scaled_domain(domain: Interval, alpha: float) -> Interval:
    """Preimage {u : alpha * u in domain}."""
    ends = sorted((domain.low / alpha, domain.high / alpha))
    return Interval(low=ends[0], high=ends[1])


def scaled_custom_generator(
    expression: Union[str, Node],
    domain: Interval,
    alpha: float,
    base_direction: Optional[Direction] = None,
) -> Generator:
    """
    s(alpha * u) on the preimage of the domain; the identity when alpha is within CONTINUITY_EPS of 0.

    Monotonicity is certified on s itself, over the unscaled domain, and
    flipped for negative alpha.
    """
    node = parse(expression) if isinstance(expression, str) else expression
    label = to_text(node)
    if abs(alpha) < CONTINUITY_EPS:
        return identity_generator(domain).model_copy(update={"name": f"custom({label}, alpha=0)"})
    fn = compile_expression(node)
    direction = base_direction or certify_monotone(fn, domain)
    if alpha < 0:
        direction = Direction.DECREASING if direction == Direction.INCREASING else Direction.INCREASING
    return numeric_generator(
        f"custom({label}, alpha={alpha:g})",
        lambda u: fn(alpha * u),
        _scaled_domain(domain, alpha),
        direction=direction,
    )


def custom_family(expression: Union[str, Node], domain: Interval) -> ScaleFamily:
    """
    Family s_alpha(u) = s(alpha * u) built from one generator s.

    The identity generator is used near alpha = 0. The declared direction
    follows from the shape of s: convex increasing or concave decreasing
    generators give an increasing scale, the other two combinations a
    decreasing one.
    """
    node = parse(expression) if isinstance(expression, str) else expression
    label = to_text(node)
    fn = compile_expression(node)
    base_direction = certify_monotone(fn, domain)

    points = sample_points(domain, CONVEXITY_SAMPLES)
    values = np.array([fn(float(u)) for u in points])
    curvature = np.diff(np.diff(values) / np.diff(points))
    convex_share = float(np.mean(curvature > 0))
    if convex_share >= CONVEXITY_QUORUM:
        convex = True
    elif convex_share <= 1.0 - CONVEXITY_QUORUM:
        convex = False
    else:
        raise NotMonotone(f"s(alpha*u) for s = {label} does not form a scale: its convexity changes on {domain}")
    increasing = convex == (base_direction == Direction.INCREASING)

    return ScaleFamily(
        name=f"custom({label})",
        make=lambda alpha: scaled_custom_generator(node, domain, alpha, base_direction),
        direction=ScaleDirection.INCREASING if increasing else ScaleDirection.DECREASING,
        means_domain=domain,
        special=FAMILY_SETTINGS["custom"]["special"],
    )


FAMILIES = {
    "power": power_family,
    "exponential": exponential_family,
    "radical": radical_family,
}


def get_family(name: str) -> ScaleFamily:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose one of {', '.join(FAMILIES)}") from None


def mean_at(fam: ScaleFamily, alpha: float, a: float, b: float) -> float:
    """m_alpha(a, b) for the family member at parameter alpha."""
    return qam_eval(fam.make(alpha), a, b)


def _check_pair(fam: ScaleFamily, a: float, b: float) -> None:
    if not a < b:
        raise DegenerateInterval(f"need a < b, got a={a!r}, b={b!r}")
    gen = identity_generator(fam.means_domain)
    gen.check_domain(a, b)


def check_scale(fam: ScaleFamily, a: float, b: float, samples: int = 64) -> ScaleReport:
    """
    Sample alpha -> m_alpha(a, b) on a symmetric log grid and report its monotonicity.

    The grid has `samples // 2` log-spaced parameters on each side of the
    special value over [1e-3, 1e3], plus the special value. A violation is
    a consecutive pair whose means do not move strictly in the declared
    direction.
    """
    _check_pair(fam, a, b)
    if samples < SCALE_MIN_SAMPLES:
        raise ValueError(f"check_scale needs at least {SCALE_MIN_SAMPLES} samples, got {samples}")

    grid = [float(x) for x in symmetric_log_grid(samples, SCALE_GRID_MIN, SCALE_GRID_MAX, fam.special)]
    grid = [alpha for alpha in grid if fam.param_domain.contains(alpha)]
    means = [mean_at(fam, alpha, a, b) for alpha in grid]

    sign = 1.0 if fam.direction == ScaleDirection.INCREASING else -1.0
    violations = [
        ScaleViolation(alpha_lo=grid[i], alpha_hi=grid[i + 1], mean_lo=means[i], mean_hi=means[i + 1])
        for i in range(len(grid) - 1)
        if not sign * (means[i + 1] - means[i]) > 0
    ]
    steps = [m2 - m1 for m1, m2 in zip(means, means[1:])]
    observed: Optional[ScaleDirection] = None
    if all(step > 0 for step in steps):
        observed = ScaleDirection.INCREASING
    elif all(step < 0 for step in steps):
        observed = ScaleDirection.DECREASING

    report = ScaleReport(
        family=fam.name,
        declared=fam.direction,
        observed=observed,
        violations=violations,
        mean_range=(min(means), max(means)),
        samples=len(grid),
    )
    if violations:
        logger.warning("%s: %d monotonicity violation(s) on (%r, %r)", fam.name, len(violations), a, b)
    return report


def solve_parameter(
    fam: ScaleFamily,
    a: float,
    b: float,
    c: float,
    tol: float = DEFAULT_SOLVE_TOL,
    alpha_max: float = ALPHA_MAX,
) -> SolveReport:
    """
    Find alpha with |m_alpha(a, b) - c| <= tol.

    Starting from the special value, the bracket doubles away from it until
    m_alpha(a, b) - c changes sign (|alpha| <= alpha_max), then Brent's
    method refines it. The scale's strict monotonicity makes the root unique.
    """
    _check_pair(fam, a, b)
    if not a < c < b:
        raise TargetOutOfInterval(f"target {c!r} is not inside ({a!r}, {b!r})")
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")

    sign = 1.0 if fam.direction == ScaleDirection.INCREASING else -1.0

    def excess(alpha: float) -> float:
        # increasing in alpha whatever the declared direction
        return sign * (mean_at(fam, alpha, a, b) - c)

    origin = fam.special
    at_origin = excess(origin)
    doublings = 0
    if at_origin == 0.0:
        lo = hi = origin
    else:
        step = 1.0 if at_origin < 0 else -1.0
        near, far = origin, origin + step
        while (excess(far) < 0) == (at_origin < 0):
            doublings += 1
            if abs(far - origin) >= alpha_max:
                side = "max" if (sign > 0) == (step > 0) else "min"
                raise BracketExhausted(
                    f"{fam.name}: target {c!r} is closer to the {side} of ({a!r}, {b!r}) "
                    f"than any mean with |alpha| <= {alpha_max:g}"
                )
            near, far = far, origin + math.copysign(min(2.0 * abs(far - origin), alpha_max), step)
        lo, hi = sorted((near, far))
    logger.debug("%s: bracket [%r, %r] after %d doublings", fam.name, lo, hi, doublings)

    alpha, iterations = find_root(excess, 0.0, lo, hi, rtol=_PARAM_RTOL, xtol=_PARAM_XTOL)
    achieved = mean_at(fam, alpha, a, b)
    residual = abs(achieved - c)
    if residual > tol:
        raise ToleranceNotMet(
            f"{fam.name}: best parameter {alpha!r} leaves residual {residual:.3g} above tolerance {tol:.3g}"
        )
    width = _PARAM_XTOL + _PARAM_RTOL * abs(alpha)
    return SolveReport(
        family=fam.name,
        alpha=alpha,
        achieved_mean=achieved,
        target=c,
        residual=residual,
        iterations=doublings + iterations,
        bracket=(max(lo, alpha - width), min(hi, alpha + width)),
    )


def limit_probe(fam: ScaleFamily, a: float, b: float, alpha_big: float) -> LimitProbe:
    """Means at -alpha_big and +alpha_big, evaluated through the stable paths."""
    if a == b:
        raise DegenerateInterval(f"limit probes need a != b, got {a!r} twice")
    if not alpha_big > 0:
        raise ValueError(f"alpha_big must be positive, got {alpha_big!r}")
    lo, hi = min(a, b), max(a, b)
    _check_pair(fam, lo, hi)
    return LimitProbe(
        family=fam.name,
        alpha_big=alpha_big,
        at_negative=mean_at(fam, fam.special - alpha_big, a, b),
        at_positive=mean_at(fam, fam.special + alpha_big, a, b),
        low=lo,
        high=hi,
    )


def scan(
    fam: ScaleFamily,
    a: float,
    b: float,
    alpha_min: float,
    alpha_max: float,
    steps: int,
    log_spaced: bool = False,
) -> List[ScanRow]:
    """Means over `steps` parameters from alpha_min to alpha_max, in increasing alpha order."""
    if not alpha_min < alpha_max:
        raise ValueError(f"need alpha_min < alpha_max, got {alpha_min!r} and {alpha_max!r}")
    if steps < 2:
        raise ValueError(f"need at least 2 steps, got {steps}")
    if a == b:
        identity_generator(fam.means_domain).check_domain(a)
    else:
        _check_pair(fam, min(a, b), max(a, b))
    if log_spaced:
        if not alpha_min > 0:
            raise ValueError("log-spaced scans need alpha_min > 0")
        alphas = np.geomspace(alpha_min, alpha_max, steps)
    else:
        alphas = np.linspace(alpha_min, alpha_max, steps)
    return [ScanRow(alpha=float(alpha), mean=mean_at(fam, float(alpha), a, b)) for alpha in alphas]
