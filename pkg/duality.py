"""
Convex duality on the real line.

A strictly convex potential f defines the Hessian metric g = f'' in the
theta chart and, through the Legendre conjugate f*, the dual chart
eta = f'(theta). The arc-length coordinate h = int sqrt(f'') turns the
metric Euclidean; its dual counterpart is h_dual = int sqrt(f*''). The
quasi-arithmetic means m_h and m_h_dual are the theta- and eta-coordinates
of the same Euclidean centroid.
"""
import logging
import math
from typing import Callable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import (
    DUAL_TOL,
    GOLDEN_TOL,
    INVERSE_RTOL,
    MONOTONE_SAMPLES,
    NUMERIC_DUAL_TOL,
    NUMERIC_QUAD_TOL,
    QUAD_TOL,
)
from errors import BracketExhausted, EtaOutOfRange, NotMonotone, OutOfDomain
from expr import Node, compile_expression, parse, to_text
from generators import Generator, qam_eval
from models import Direction, DualMeanRecord, Interval
from utils.numerics import (
    adaptive_simpson,
    first_derivative,
    golden_section_minimize,
    sample_points,
    second_derivative,
    solve_monotone,
)

logger = logging.getLogger(__name__)

ScalarMap = Callable[[float], float]

# Quadrature tolerance of the distances squared inside the centroid oracle
ORACLE_QUAD_TOL = 1e-13


class ClosedForms(BaseModel):
    """Exact companions of a built-in potential, used as references for the numeric paths."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    conjugate: ScalarMap = Field(..., description="f*(eta)")
    conjugate_d1: ScalarMap = Field(..., description="(f*)'(eta) = theta(eta)")
    arc: ScalarMap = Field(..., description="h(theta), an antiderivative of sqrt(f'')")
    arc_inverse: ScalarMap
    dual_arc: ScalarMap = Field(..., description="h_dual(eta), an antiderivative of sqrt(f*'')")
    dual_arc_inverse: ScalarMap


class ConvexPotential(BaseModel):
    """Smooth strictly convex f with its first two derivatives."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    f: ScalarMap = Field(..., description="theta -> f(theta)")
    f1: ScalarMap = Field(..., description="theta -> f'(theta) = eta")
    f2: ScalarMap = Field(..., description="theta -> f''(theta) = g(theta)")
    domain: Interval = Field(default_factory=Interval.real_line, description="Open interval of theta")
    base_point: float = Field(0.0, description="theta_0, where arc-length coordinates vanish")
    eta_domain: Optional[Interval] = Field(None, description="Range of f' when known exactly")
    closed: Optional[ClosedForms] = None
    quad_tol: float = Field(QUAD_TOL, gt=0, description="Absolute tolerance of the arc-length quadratures")
    check_tol: float = Field(DUAL_TOL, gt=0, description="Residual the dual means must agree to")

    @model_validator(mode="after")
    def _base_inside(self) -> "ConvexPotential":
        if not self.domain.contains(self.base_point):
            raise ValueError(f"base point {self.base_point!r} is outside {self.domain}")
        return self


class RiemannianLine(BaseModel):
    """A one-dimensional Riemannian metric g11(theta) > 0 on an interval."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = "line"
    g11: ScalarMap = Field(..., description="Metric coefficient, positive on the domain")
    base_point: float = Field(0.0, description="theta_0 fixing the integration constant of h")
    domain: Interval = Field(default_factory=Interval.real_line)
    quad_tol: float = Field(QUAD_TOL, gt=0)


class DualMeanPair(BaseModel):
    """Arc-length generators of the two charts of one potential."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    primal_gen: Generator = Field(..., description="h in theta coordinates")
    dual_gen: Generator = Field(..., description="h_dual in eta coordinates")
    potential: ConvexPotential


def exp_potential() -> ConvexPotential:
    """f = e^theta, whose conjugate is the negative Shannon entropy eta log eta - eta."""
    return ConvexPotential(
        name="exp",
        f=math.exp,
        f1=math.exp,
        f2=math.exp,
        eta_domain=Interval.positive(),
        closed=ClosedForms(
            conjugate=lambda eta: eta * math.log(eta) - eta,
            conjugate_d1=math.log,
            arc=lambda theta: 2.0 * math.exp(theta / 2.0),
            arc_inverse=lambda v: 2.0 * math.log(v / 2.0),
            dual_arc=lambda eta: 2.0 * math.sqrt(eta),
            dual_arc_inverse=lambda v: (v / 2.0) ** 2,
        ),
    )


def quadratic_potential() -> ConvexPotential:
    """f = theta^2 / 2, self-conjugate with both charts Euclidean."""
    return ConvexPotential(
        name="quadratic",
        f=lambda theta: 0.5 * theta * theta,
        f1=lambda theta: theta,
        f2=lambda theta: 1.0,
        eta_domain=Interval.real_line(),
        closed=ClosedForms(
            conjugate=lambda eta: 0.5 * eta * eta,
            conjugate_d1=lambda eta: eta,
            arc=lambda theta: theta,
            arc_inverse=lambda v: v,
            dual_arc=lambda eta: eta,
            dual_arc_inverse=lambda v: v,
        ),
    )


def certify_convex(pot: ConvexPotential, samples: int = MONOTONE_SAMPLES) -> None:
    """Check f'' > 0 and f' strictly increasing on sampled points of the domain."""
    points = [float(theta) for theta in sample_points(pot.domain, samples)]
    for theta in points:
        if not pot.f2(theta) > 0:
            raise NotMonotone(f"{pot.name}: f'' is not positive at theta={theta:.6g}")
    slopes = [pot.f1(theta) for theta in points]
    for left, right, theta in zip(slopes, slopes[1:], points[1:]):
        if not right > left:
            raise NotMonotone(f"{pot.name}: f' is not increasing near theta={theta:.6g}")


def potential_from_expression(
    expression: Union[str, Node],
    domain: Optional[Interval] = None,
    base_point: float = 0.0,
) -> ConvexPotential:
    """
    Potential given only as f; f' and f'' come from central differences.

    The differenced f'' is noisy at about 1e-10 relative, so quadratures and
    the duality check run at NUMERIC_QUAD_TOL and NUMERIC_DUAL_TOL.
    """
    node = parse(expression) if isinstance(expression, str) else expression
    f = compile_expression(node)
    domain = domain or Interval.real_line()
    pot = ConvexPotential(
        name=f"custom({to_text(node)})",
        f=f,
        f1=lambda theta: first_derivative(f, theta, domain),
        f2=lambda theta: second_derivative(f, theta, domain),
        domain=domain,
        base_point=base_point,
        quad_tol=NUMERIC_QUAD_TOL,
        check_tol=NUMERIC_DUAL_TOL,
    )
    certify_convex(pot)
    return pot.model_copy(update={"eta_domain": eta_range(pot)})


def eta_range(pot: ConvexPotential) -> Interval:
    """Range of the dual coordinate: exact when declared, else the sampled range of f'."""
    if pot.eta_domain is not None:
        return pot.eta_domain
    values = [pot.f1(float(theta)) for theta in sample_points(pot.domain, MONOTONE_SAMPLES)]
    return Interval(low=min(values), high=max(values))


def theta_of_eta(pot: ConvexPotential, eta: float) -> float:
    """Solve f'(theta) = eta, bracketing outward from the base point."""
    etas = eta_range(pot)
    if not etas.contains(eta):
        raise EtaOutOfRange(f"eta={eta!r} is outside the range {etas} of {pot.name}'")
    try:
        return solve_monotone(pot.f1, eta, pot.domain, start=pot.base_point, rtol=INVERSE_RTOL)
    except BracketExhausted as e:
        raise EtaOutOfRange(f"no theta with f'(theta) = {eta!r} for {pot.name}") from e


def conjugate_value(pot: ConvexPotential, eta: float) -> float:
    """Legendre conjugate f*(eta) = eta theta* - f(theta*) with f'(theta*) = eta."""
    theta = theta_of_eta(pot, eta)
    return eta * theta - pot.f(theta)


def conjugate_second_derivative(pot: ConvexPotential, eta: float) -> float:
    """(f*)''(eta) by differencing the numeric conjugate twice."""
    return second_derivative(lambda e: conjugate_value(pot, e), eta, eta_range(pot))


def metric_reciprocity(pot: ConvexPotential, theta: float) -> float:
    """g(theta) * g*(eta(theta)); equals 1 for a consistent pair of charts."""
    return pot.f2(theta) * conjugate_second_derivative(pot, pot.f1(theta))


def line_from_potential(pot: ConvexPotential) -> RiemannianLine:
    """The Hessian metric g11 = f'' of a potential."""
    return RiemannianLine(
        name=pot.name, g11=pot.f2, base_point=pot.base_point, domain=pot.domain, quad_tol=pot.quad_tol
    )


def _arc_length_generator(
    name: str,
    density: ScalarMap,
    domain: Interval,
    base_point: float,
    tol: float = QUAD_TOL,
) -> Generator:
    """Generator u -> int_{base_point}^u density, inverted by bracketing from the base point."""
    def forward(u: float) -> float:
        if not domain.contains(u):
            raise OutOfDomain(u, domain)
        return adaptive_simpson(density, base_point, u, tol)

    def inverse(v: float) -> float:
        try:
            return solve_monotone(forward, v, domain, start=base_point, rtol=INVERSE_RTOL)
        except BracketExhausted as e:
            raise OutOfDomain(v, f"range of {name}") from e

    return Generator(name=name, forward=forward, inverse=inverse, domain=domain, direction=Direction.INCREASING)


def arc_generator(line: RiemannianLine) -> Generator:
    """h(theta) = int_{theta_0}^theta sqrt(g11), the Cartesian coordinate of the line."""
    return _arc_length_generator(
        f"arc({line.name})", lambda u: math.sqrt(line.g11(u)), line.domain, line.base_point, line.quad_tol
    )


def primal_arc_generator(pot: ConvexPotential) -> Generator:
    """h = int sqrt(f'') from the base point, by adaptive quadrature."""
    return arc_generator(line_from_potential(pot))


def dual_arc_generator(pot: ConvexPotential) -> Generator:
    """
    h_dual = int sqrt(f*'') in the eta chart, from eta_0 = f'(theta_0).

    Uses sqrt(f*''(eta)) = 1 / sqrt(f''(theta(eta))), with theta(eta) found
    by root finding at every quadrature node.
    """
    return _arc_length_generator(
        f"dual_arc({pot.name})",
        lambda eta: 1.0 / math.sqrt(pot.f2(theta_of_eta(pot, eta))),
        eta_range(pot),
        pot.f1(pot.base_point),
        pot.quad_tol,
    )


def _closed_generator(name: str, forward: ScalarMap, inverse: ScalarMap, domain: Interval) -> Generator:
    return Generator(name=name, forward=forward, inverse=inverse, domain=domain, direction=Direction.INCREASING)


def closed_form_arc_generators(pot: ConvexPotential) -> DualMeanPair:
    """Arc-length generators from a built-in potential's closed forms."""
    if pot.closed is None:
        raise ValueError(f"potential {pot.name} has no closed forms")
    return DualMeanPair(
        primal_gen=_closed_generator(f"arc({pot.name})", pot.closed.arc, pot.closed.arc_inverse, pot.domain),
        dual_gen=_closed_generator(
            f"dual_arc({pot.name})", pot.closed.dual_arc, pot.closed.dual_arc_inverse, eta_range(pot)
        ),
        potential=pot,
    )


def quadrature_pair(pot: ConvexPotential) -> DualMeanPair:
    """Arc-length generators built numerically from f'' alone."""
    return DualMeanPair(primal_gen=primal_arc_generator(pot), dual_gen=dual_arc_generator(pot), potential=pot)


def dual_mean_check(
    pot: ConvexPotential,
    a: float,
    b: float,
    pair: Optional[DualMeanPair] = None,
) -> DualMeanRecord:
    """
    Evaluate the centroid of {a, b} in both charts.

    theta_mean = m_h(a, b) and eta_mean = m_h_dual(f'(a), f'(b)) should be
    the same point: f'(theta_mean) = eta_mean, and the base-point aligned
    arc-length coordinates agree.
    """
    pair = pair or quadrature_pair(pot)
    primal, dual = pair.primal_gen, pair.dual_gen
    theta_mean = qam_eval(primal, a, b)
    eta_mean = qam_eval(dual, pot.f1(a), pot.f1(b))
    eta_0 = pot.f1(pot.base_point)
    record = DualMeanRecord(
        theta_mean=theta_mean,
        eta_mean=eta_mean,
        transported_eta=pot.f1(theta_mean),
        arc_primal=primal.forward(theta_mean) - primal.forward(pot.base_point),
        arc_dual=dual.forward(eta_mean) - dual.forward(eta_0),
    )
    if not record.consistent(pot.check_tol):
        logger.warning(
            "%s: dual means disagree on (%r, %r): eta residual %.3g, arc residual %.3g",
            pot.name, a, b, record.eta_residual, record.arc_residual,
        )
    return record


def riemannian_distance(line: RiemannianLine, theta1: float, theta2: float, tol: float = QUAD_TOL) -> float:
    """Geodesic distance |int_{theta1}^{theta2} sqrt(g11)| = |h(theta2) - h(theta1)|."""
    for theta in (theta1, theta2):
        if not line.domain.contains(theta):
            raise OutOfDomain(theta, line.domain)
    if theta1 == theta2:
        return 0.0
    return abs(adaptive_simpson(lambda u: math.sqrt(line.g11(u)), theta1, theta2, tol))


def riemannian_centroid(line: RiemannianLine, theta1: float, theta2: float) -> float:
    """Riemannian center of mass of two points: the quasi-arithmetic mean under h."""
    return qam_eval(arc_generator(line), theta1, theta2)


def centroid_numeric(line: RiemannianLine, theta1: float, theta2: float) -> float:
    """Oracle for the centroid: minimize rho^2(theta1, t) + rho^2(t, theta2) over [theta1, theta2]."""
    lo, hi = min(theta1, theta2), max(theta1, theta2)
    if lo == hi:
        return lo

    # convex in h(theta) and h is monotone, so the energy is unimodal on [lo, hi]
    def energy(theta: float) -> float:
        return (
            riemannian_distance(line, lo, theta, ORACLE_QUAD_TOL) ** 2
            + riemannian_distance(line, theta, hi, ORACLE_QUAD_TOL) ** 2
        )

    theta, value = golden_section_minimize(energy, lo, hi, GOLDEN_TOL)
    logger.debug("centroid oracle for %s on [%r, %r]: theta=%r, energy=%r", line.name, lo, hi, theta, value)
    return theta


def chart_transport(chart: Generator, a_prime: float, b_prime: float) -> float:
    """
    Coordinate, in the chart x', of the Euclidean midpoint of two points.

    With x = h(x'), the midpoint (h(a') + h(b')) / 2 reads m_h(a', b') in x'.
    """
    return qam_eval(chart, a_prime, b_prime)
