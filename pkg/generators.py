"""
Generators of quasi-arithmetic means and their evaluation.

A generator is a strictly monotone map h on an open interval; it induces the
mean m_h(x, y) = h^-1((h(x) + h(y)) / 2) and the distance |h(x) - h(y)|.
"""
import logging
import math
from typing import Callable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from config import CONTINUITY_EPS, INVERSE_RTOL, MONOTONE_SAMPLES
from errors import BracketExhausted, NonPositiveAlpha, NotMonotone, OutOfDomain
from expr import Node, compile_expression, parse, to_text
from models import Direction, Interval
from utils.numerics import sample_points, solve_monotone

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

# Beyond this |p * log u| the direct power-mean formula risks overflow or underflow
_POWER_DIRECT_LIMIT = 500.0


class Generator(BaseModel):
    """A strictly monotone scalar map with its inverse and domain."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Human-readable label, e.g. 'power(p=2)'")
    forward: Callable[[float], float] = Field(..., description="u -> h(u)")
    inverse: Callable[[float], float] = Field(..., description="v -> h^-1(v)")
    domain: Interval = Field(..., description="Open interval on which forward is defined")
    direction: Direction = Field(..., description="Monotonicity of forward")
    stable_mean: Optional[Callable[[float, float], float]] = Field(
        None, description="Specialized two-point mean overriding the generic composition"
    )
    log_forward: Optional[Callable[[float], float]] = Field(
        None, description="u -> log h(u) for generators of the form exp(phi(u)); distances use it to avoid overflow"
    )

    def check_domain(self, *values: float) -> None:
        for value in values:
            if not self.domain.contains(value):
                raise OutOfDomain(value, self.domain)


def log_cosh(z: float) -> float:
    """log(cosh(z)) without overflow for large |z| or cancellation near zero."""
    z = abs(z)
    if z < 1.0:
        s = math.sinh(0.5 * z)
        return math.log1p(2.0 * s * s)
    return z + math.log1p(math.exp(-2.0 * z)) - LN2


def lse_mean(alpha: float, x: float, y: float) -> float:
    """
    Exponential mean (1/alpha) log((e^{alpha x} + e^{alpha y}) / 2), overflow-free.

    Written as (x + y)/2 + log cosh(alpha (x - y) / 2) / alpha, which equals
    max(x, y) + log((1 + e^{-|alpha (x - y)|}) / 2) / alpha.
    """
    middle = 0.5 * (x + y)
    if abs(alpha) < CONTINUITY_EPS:
        return middle
    value = middle + log_cosh(0.5 * alpha * (x - y)) / alpha
    return min(max(value, min(x, y)), max(x, y))


def identity_generator(domain: Optional[Interval] = None) -> Generator:
    """h(u) = u, inducing the arithmetic mean."""
    return Generator(
        name="identity",
        forward=lambda u: u,
        inverse=lambda v: v,
        domain=domain or Interval.real_line(),
        direction=Direction.INCREASING,
        stable_mean=lambda x, y: 0.5 * (x + y),
    )


def make_power_generator(p: float) -> Generator:
    """
    h_p(u) = u^p on (0, inf), log u when p is within CONTINUITY_EPS of 0.

    The mean uses the closed form ((x^p + y^p)/2)^{1/p} while the powers stay
    representable, and the exponential mean in the log chart otherwise.
    """
    domain = Interval.positive()
    if abs(p) < CONTINUITY_EPS:
        return Generator(
            name="power(p=0)",
            forward=math.log,
            inverse=math.exp,
            domain=domain,
            direction=Direction.INCREASING,
            stable_mean=lambda x, y: math.sqrt(x) * math.sqrt(y),
        )

    def mean(x: float, y: float) -> float:
        lx, ly = math.log(x), math.log(y)
        if abs(p) >= 0.5 and max(abs(p * lx), abs(p * ly)) <= _POWER_DIRECT_LIMIT:
            value = ((math.pow(x, p) + math.pow(y, p)) / 2.0) ** (1.0 / p)
        else:
            value = math.exp(lse_mean(p, lx, ly))
        return min(max(value, min(x, y)), max(x, y))

    return Generator(
        name=f"power(p={p:g})",
        forward=lambda u: math.pow(u, p),
        inverse=lambda v: math.pow(v, 1.0 / p),
        domain=domain,
        direction=Direction.INCREASING if p > 0 else Direction.DECREASING,
        stable_mean=mean,
        log_forward=lambda u: p * math.log(u),
    )


def make_exponential_generator(alpha: float) -> Generator:
    """e_alpha(u) = exp(alpha u) on the real line, the identity near alpha = 0."""
    if abs(alpha) < CONTINUITY_EPS:
        return identity_generator().model_copy(update={"name": "exponential(alpha=0)"})
    return Generator(
        name=f"exponential(alpha={alpha:g})",
        forward=lambda u: math.exp(alpha * u),
        inverse=lambda v: math.log(v) / alpha,
        domain=Interval.real_line(),
        direction=Direction.INCREASING if alpha > 0 else Direction.DECREASING,
        stable_mean=lambda x, y: lse_mean(alpha, x, y),
        log_forward=lambda u: alpha * u,
    )


def radical_generator_from_log(log_alpha: float) -> Generator:
    """
    k_alpha(u) = alpha^{1/u} = exp(ln(alpha) / u) on (0, inf), parameterized by t = ln alpha.

    The harmonic generator 1/u is used near t = 0. The mean is the exponential
    mean with parameter t in the reciprocal chart: 1 / E_t(1/x, 1/y).
    """
    t = log_alpha
    domain = Interval.positive()

    def mean(x: float, y: float) -> float:
        value = 1.0 / lse_mean(t, 1.0 / x, 1.0 / y)
        return min(max(value, min(x, y)), max(x, y))

    if abs(t) < CONTINUITY_EPS:
        return Generator(
            name="radical(alpha=1)",
            forward=lambda u: 1.0 / u,
            inverse=lambda v: 1.0 / v,
            domain=domain,
            direction=Direction.DECREASING,
            stable_mean=mean,
        )
    return Generator(
        name=f"radical(ln alpha={t:g})",
        forward=lambda u: math.exp(t / u),
        inverse=lambda v: t / math.log(v),
        domain=domain,
        direction=Direction.DECREASING if t > 0 else Direction.INCREASING,
        stable_mean=mean,
        log_forward=lambda u: t / u,
    )


def make_radical_generator(alpha: float) -> Generator:
    """k_alpha(u) = alpha^{1/u} for alpha > 0."""
    if not alpha > 0:
        raise NonPositiveAlpha(f"radical generators need alpha > 0, got {alpha!r}")
    return radical_generator_from_log(math.log(alpha))


def certify_monotone(fn: Callable[[float], float], domain: Interval, samples: int = MONOTONE_SAMPLES) -> Direction:
    """
    Direction of fn on the domain, judged from `samples` sampled points.

    A heuristic certificate: it cannot see wiggles between samples.
    """
    points = sample_points(domain, samples)
    values = [fn(float(u)) for u in points]
    steps = [b - a for a, b in zip(values, values[1:])]
    if all(step > 0 for step in steps):
        return Direction.INCREASING
    if all(step < 0 for step in steps):
        return Direction.DECREASING
    for i, step in enumerate(steps):
        if step * steps[0] <= 0:
            raise NotMonotone(
                f"direction changes between u={points[i]:.6g} and u={points[i + 1]:.6g}"
            )
    raise NotMonotone("sampled values are not strictly monotone")


def numeric_generator(
    name: str,
    fn: Callable[[float], float],
    domain: Interval,
    direction: Optional[Direction] = None,
    start: Optional[float] = None,
) -> Generator:
    """
    Wrap a monotone map whose inverse is only available numerically.

    The forward map refuses points outside the domain; the inverse brackets
    outward from `start` and refines with Brent's method.
    """
    if direction is None:
        direction = certify_monotone(fn, domain)

    def forward(u: float) -> float:
        if not domain.contains(u):
            raise OutOfDomain(u, domain)
        return fn(u)

    def inverse(v: float) -> float:
        try:
            return solve_monotone(forward, v, domain, start, rtol=INVERSE_RTOL)
        except BracketExhausted as e:
            raise OutOfDomain(v, f"range of {name}") from e

    return Generator(name=name, forward=forward, inverse=inverse, domain=domain, direction=direction)


def make_custom_generator(expression: Union[str, Node], domain: Interval) -> Generator:
    """Generator from expression text (or a parsed AST) in the variable u."""
    node = parse(expression) if isinstance(expression, str) else expression
    gen = numeric_generator(f"custom({to_text(node)})", compile_expression(node), domain)
    logger.debug("certified %s as %s on %s", gen.name, gen.direction.value, domain)
    return gen


def affine_transform(gen: Generator, scale: float, shift: float) -> Generator:
    """The generator scale * h + shift, which induces the same mean as h."""
    if scale == 0:
        raise ValueError("affine scale must be non-zero")
    flip = scale < 0
    direction = gen.direction
    if flip:
        direction = Direction.DECREASING if direction == Direction.INCREASING else Direction.INCREASING
    return Generator(
        name=f"{scale:g}*{gen.name}+{shift:g}",
        forward=lambda u: scale * gen.forward(u) + shift,
        inverse=lambda v: gen.inverse((v - shift) / scale),
        domain=gen.domain,
        direction=direction,
    )


def qam_eval(gen: Generator, x: float, y: float, stable: bool = True) -> float:
    """
    Quasi-arithmetic mean m_h(x, y) = h^-1((h(x) + h(y)) / 2).

    Uses the generator's stable evaluator unless `stable` is False. The
    result is clamped into [min(x, y), max(x, y)] against rounding.
    """
    gen.check_domain(x, y)
    if x == y:
        return x
    if stable and gen.stable_mean is not None:
        return gen.stable_mean(x, y)
    value = gen.inverse(0.5 * (gen.forward(x) + gen.forward(y)))
    return min(max(value, min(x, y)), max(x, y))
