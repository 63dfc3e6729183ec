"""
Distances induced by generators, midpoints and Fréchet means of two points.

Generators of the form h = exp(phi) (the exponential, power and radical
families) overflow long before their means do, so distances are formed in
log space: log |h(x) - h(y)| = max(phi) + log(1 - exp(-|phi(x) - phi(y)|)).
The midpoint test and the Fréchet oracle only compare distances against
d(a, b), which makes them scale-free.
"""
import logging
import math

from pydantic import BaseModel, ConfigDict, Field

from config import FRECHET_GRID, GOLDEN_TOL
from errors import DegenerateInterval, Unrepresentable
from generators import Generator, qam_eval
from utils.numerics import grid_minimize

logger = logging.getLogger(__name__)


class GeneratorDistance(BaseModel):
    """d_h(x, y) = |h(x) - h(y)| for a strictly monotone generator h."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gen: Generator = Field(..., description="Generator inducing the distance")

    def __call__(self, x: float, y: float) -> float:
        return distance(self, x, y)


def log_distance(d: GeneratorDistance, x: float, y: float) -> float:
    """log d_h(x, y); -inf when the two generator values coincide."""
    d.gen.check_domain(x, y)
    if x == y:
        return -math.inf
    phi = d.gen.log_forward
    if phi is None:
        gap = distance(d, x, y)
        return math.log(gap) if gap > 0 else -math.inf
    px, py = phi(x), phi(y)
    gap = abs(px - py)
    if gap == 0:
        return -math.inf
    return max(px, py) + math.log(-math.expm1(-gap))


def distance(d: GeneratorDistance, x: float, y: float) -> float:
    if d.gen.log_forward is None:
        d.gen.check_domain(x, y)
        if x == y:
            return 0.0
        try:
            return abs(d.gen.forward(x) - d.gen.forward(y))
        except OverflowError:
            raise Unrepresentable(f"{d.gen.name}: h overflows at {x!r} or {y!r}") from None
    log_d = log_distance(d, x, y)
    try:
        return math.exp(log_d)
    except OverflowError:
        raise Unrepresentable(f"{d.gen.name}: d({x!r}, {y!r}) = exp({log_d:.6g}) overflows") from None


def _relative(log_d: float, log_ref: float) -> float:
    return math.exp(log_d - log_ref)


def is_midpoint(d: GeneratorDistance, a: float, b: float, c: float, tol: float) -> bool:
    """True when |d(a, c) - d(c, b)| <= tol * d(a, b)."""
    if not a < b:
        raise DegenerateInterval(f"need a < b, got a={a!r}, b={b!r}")
    d.gen.check_domain(a, b, c)
    log_ab = log_distance(d, a, b)
    if log_ab == -math.inf:
        raise DegenerateInterval(f"{d.gen.name} does not separate a={a!r} and b={b!r}")
    try:
        left = _relative(log_distance(d, a, c), log_ab)
        right = _relative(log_distance(d, c, b), log_ab)
    except OverflowError:
        # c is so far outside [a, b] that one side dwarfs d(a, b)
        return False
    return abs(left - right) <= tol


def frechet_mean_closed(gen: Generator, a: float, b: float) -> float:
    """The Fréchet mean of {a, b} under d_h, which is the quasi-arithmetic mean m_h(a, b)."""
    return qam_eval(gen, a, b)


def energy(d: GeneratorDistance, a: float, b: float, x: float) -> float:
    """Fréchet energy d^2(a, x) + d^2(x, b); raises Unrepresentable where it overflows."""
    try:
        return distance(d, a, x) ** 2 + distance(d, x, b) ** 2
    except OverflowError:
        raise Unrepresentable(f"{d.gen.name}: energy at {x!r} overflows") from None


def relative_energy(d: GeneratorDistance, a: float, b: float, x: float) -> float:
    """The energy divided by d^2(a, b); at most 1 for x in [a, b]."""
    log_ab = log_distance(d, a, b)
    if log_ab == -math.inf:
        raise DegenerateInterval(f"{d.gen.name} does not separate a={a!r} and b={b!r}")
    return (
        _relative(log_distance(d, a, x), log_ab) ** 2
        + _relative(log_distance(d, x, b), log_ab) ** 2
    )


def frechet_mean_numeric(d: GeneratorDistance, a: float, b: float) -> float:
    """
    Brute-force Fréchet mean: minimize the energy over [a, b].

    A uniform grid locates the basin, golden-section search refines it. The
    search never leaves [a, b].
    """
    if not a < b:
        raise DegenerateInterval(f"need a < b, got a={a!r}, b={b!r}")
    d.gen.check_domain(a, b)
    x, value = grid_minimize(lambda t: relative_energy(d, a, b, t), a, b, FRECHET_GRID, GOLDEN_TOL)
    logger.debug("Fréchet oracle for %s on [%r, %r]: x=%r, relative energy=%r", d.gen.name, a, b, x, value)
    return x
