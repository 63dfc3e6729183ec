import math

import numpy as np

from pytest import approx, mark, raises

from duality import (
    RiemannianLine,
    centroid_numeric,
    chart_transport,
    closed_form_arc_generators,
    conjugate_value,
    dual_arc_generator,
    dual_mean_check,
    exp_potential,
    line_from_potential,
    metric_reciprocity,
    potential_from_expression,
    primal_arc_generator,
    quadratic_potential,
    quadrature_pair,
    riemannian_centroid,
    riemannian_distance,
    theta_of_eta,
)
from errors import EtaOutOfRange, NotMonotone, OutOfDomain
from generators import identity_generator, make_custom_generator, make_exponential_generator
from models import Interval

HALF_DIFFERENCE_MEAN = 2.0 * math.log((1.0 + math.e) / 2.0)


@mark.parametrize("pot eta expected".split(),
                  ((exp_potential(),       1.0,    -1.0),
                   (exp_potential(),       math.e,  0.0),
                   (quadratic_potential(), 3.0,     4.5)))
def test_conjugate_examples(pot, eta, expected):
    assert conjugate_value(pot, eta) == approx(expected, abs=1e-12)


def test_conjugate_matches_negative_entropy():
    pot = exp_potential()
    for eta in np.linspace(0.1, 7.0, 50):
        eta = float(eta)
        assert conjugate_value(pot, eta) == approx(pot.closed.conjugate(eta), abs=1e-10)
        assert theta_of_eta(pot, eta) == approx(math.log(eta), abs=1e-12)


@mark.parametrize("eta", (-1.0, 0.0))
def test_eta_outside_the_dual_range(eta):
    with raises(EtaOutOfRange):
        conjugate_value(exp_potential(), eta)


def test_primal_arc_by_quadrature():
    h = primal_arc_generator(exp_potential())
    for theta in np.linspace(-3.0, 3.0, 13):
        theta = float(theta)
        assert h.forward(theta) == approx(2.0 * math.exp(theta / 2.0) - 2.0, abs=1e-8)
    assert h.inverse(h.forward(1.3)) == approx(1.3, abs=1e-9)


def test_dual_arc_by_quadrature():
    h_dual = dual_arc_generator(exp_potential())
    for eta in np.linspace(0.5, 5.0, 10):
        eta = float(eta)
        assert h_dual.forward(eta) == approx(2.0 * math.sqrt(eta) - 2.0, abs=1e-8)


def test_quadratic_arcs_are_the_identity():
    pot = quadratic_potential()
    for x in (-2.0, 0.5, 3.0):
        assert primal_arc_generator(pot).forward(x) == approx(x, abs=1e-12)
        assert dual_arc_generator(pot).forward(x) == approx(x, abs=1e-12)


@mark.parametrize("pot", (exp_potential(), quadratic_potential()))
def test_metric_reciprocity(pot):
    for theta in np.linspace(-2.0, 2.0, 64):
        assert metric_reciprocity(pot, float(theta)) == approx(1.0, rel=1e-6)


def test_dual_means_with_closed_forms():
    pot = exp_potential()
    record = dual_mean_check(pot, 0.0, 2.0, closed_form_arc_generators(pot))
    assert record.theta_mean == approx(HALF_DIFFERENCE_MEAN, rel=1e-14)
    assert record.eta_mean == approx(((1.0 + math.e) / 2.0) ** 2, rel=1e-14)
    assert record.arc_primal == approx(math.e - 1.0, rel=1e-14)
    assert record.consistent(1e-10)


def test_dual_means_by_quadrature():
    record = dual_mean_check(exp_potential(), 0.0, 2.0)
    assert record.theta_mean == approx(HALF_DIFFERENCE_MEAN, rel=1e-8)
    assert record.eta_residual <= 1e-8
    assert record.arc_residual <= 1e-8
    assert record.consistent(1e-8)


@mark.parametrize("a b expected".split(), ((1.0, 5.0, 3.0), (1.0, 1.0, 1.0)))
def test_quadratic_dual_means(a, b, expected):
    record = dual_mean_check(quadratic_potential(), a, b)
    assert record.theta_mean == approx(expected, abs=1e-10)
    assert record.eta_mean == approx(expected, abs=1e-10)
    assert record.consistent(1e-10)


def test_closed_forms_are_only_for_built_ins():
    with raises(ValueError):
        closed_form_arc_generators(potential_from_expression("exp(u)"))


def test_riemannian_distance():
    line = line_from_potential(exp_potential())
    assert riemannian_distance(line, 0.0, 2.0) == approx(2.0 * math.e - 2.0, abs=1e-9)
    assert riemannian_distance(line, 2.0, 0.0) == riemannian_distance(line, 0.0, 2.0)
    assert riemannian_distance(line, 1.0, 1.0) == 0.0


def test_riemannian_distance_outside_domain():
    line = RiemannianLine(g11=lambda t: 1.0 / (t * t), base_point=1.0, domain=Interval.positive())
    assert riemannian_distance(line, 1.0, math.e) == approx(1.0, abs=1e-9)
    with raises(OutOfDomain):
        riemannian_distance(line, -1.0, 1.0)


def test_riemannian_centroid_of_the_log_metric_is_geometric():
    line = RiemannianLine(g11=lambda t: 1.0 / (t * t), base_point=1.0, domain=Interval.positive())
    assert riemannian_centroid(line, 1.0, 4.0) == approx(2.0, rel=1e-8)


def test_centroid_oracle():
    line = line_from_potential(exp_potential())
    centroid = riemannian_centroid(line, 0.0, 2.0)
    assert centroid == approx(HALF_DIFFERENCE_MEAN, rel=1e-8)
    assert centroid_numeric(line, 0.0, 2.0) == approx(centroid, abs=1e-6)
    assert centroid_numeric(line, 2.0, 2.0) == 2.0


@mark.parametrize("chart a b expected".split(),
                  ((identity_generator(),                                     1.0, 3.0, 2.0),
                   (make_custom_generator("u^3", Interval(low=-10, high=10)), 1.0, 2.0, 1.650964),
                   (make_exponential_generator(1.0),                          0.0, 2.0, 1.433781)))
def test_chart_transport(chart, a, b, expected):
    assert chart_transport(chart, a, b) == approx(expected, abs=1e-6)


def test_potential_from_expression():
    pot = potential_from_expression("exp(u)")
    assert pot.f1(1.0) == approx(math.e, rel=1e-8)
    assert pot.f2(0.5) == approx(math.exp(0.5), rel=1e-8)
    assert pot.eta_domain.contains(math.e)
    assert conjugate_value(pot, math.e) == approx(0.0, abs=1e-8)
    assert pot.check_tol > exp_potential().check_tol


@mark.parametrize("expression", ("-u^2", "u^3"))
def test_potential_must_be_convex(expression):
    with raises(NotMonotone):
        potential_from_expression(expression)


def test_half_line_potential():
    # f = -log u: h = log u, the dual chart eta = -1/u
    pot = potential_from_expression("-log(u)", Interval.positive(), base_point=1.0)
    assert pot.f2(2.0) == approx(0.25, rel=1e-8)
    record = dual_mean_check(pot, 1.0, 4.0)
    assert record.theta_mean == approx(2.0, rel=1e-6)
    assert record.eta_mean == approx(-0.5, rel=1e-6)
    assert record.consistent(pot.check_tol)


def test_base_point_must_be_inside_the_domain():
    with raises(ValueError):
        potential_from_expression("-log(u)", Interval.positive(), base_point=-1.0)


def test_dual_means_on_sampled_pairs():
    pot = exp_potential()
    closed = closed_form_arc_generators(pot)
    rng = np.random.default_rng(23)
    for _ in range(20):
        a, b = sorted(rng.uniform(-3.0, 3.0, size=2))
        record = dual_mean_check(pot, float(a), float(b), closed)
        assert record.theta_mean == approx(2.0 * math.log((math.exp(a / 2.0) + math.exp(b / 2.0)) / 2.0), abs=1e-12)
        assert record.consistent(1e-10)


def test_dual_means_by_quadrature_on_sampled_pairs():
    pot = exp_potential()
    pair = quadrature_pair(pot)
    rng = np.random.default_rng(29)
    for _ in range(5):
        a, b = sorted(rng.uniform(-2.0, 2.0, size=2))
        assert dual_mean_check(pot, float(a), float(b), pair).consistent(1e-8)


def test_arc_coordinates_agree_across_charts():
    pot = exp_potential()
    h, h_dual = primal_arc_generator(pot), dual_arc_generator(pot)
    theta_0, eta_0 = pot.base_point, pot.f1(pot.base_point)
    rng = np.random.default_rng(31)
    for theta in rng.uniform(-2.0, 2.0, size=20):
        theta = float(theta)
        primal = h.forward(theta) - h.forward(theta_0)
        dual = h_dual.forward(pot.f1(theta)) - h_dual.forward(eta_0)
        assert primal == approx(dual, abs=1e-8)


def test_dual_arc_over_the_whole_eta_range():
    h_dual = dual_arc_generator(exp_potential())
    for eta in np.linspace(math.exp(-2.0), math.exp(2.0), 16):
        eta = float(eta)
        assert h_dual.forward(eta) == approx(2.0 * math.sqrt(eta) - 2.0, abs=1e-8)


@mark.parametrize("pair".split(), ((None,), (closed_form_arc_generators(exp_potential()),)))
def test_dual_means_are_idempotent(pair):
    record = dual_mean_check(exp_potential(), 1.0, 1.0, pair)
    assert record.theta_mean == 1.0
    assert record.eta_mean == approx(math.e, rel=1e-12)
    assert record.consistent(1e-8)


def test_centroid_oracle_on_sampled_pairs():
    line = line_from_potential(exp_potential())
    rng = np.random.default_rng(37)
    for _ in range(10):
        a, b = sorted(rng.uniform(-2.0, 2.0, size=2))
        a, b = float(a), float(b)
        assert centroid_numeric(line, a, b) == approx(riemannian_centroid(line, a, b), abs=1e-6)
