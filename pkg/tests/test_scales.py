import math

import numpy as np

from pytest import approx, mark, raises

from config import FAMILY_SETTINGS
from errors import BracketExhausted, DegenerateInterval, NotMonotone, OutOfDomain, TargetOutOfInterval
from generators import qam_eval
from metric import GeneratorDistance, is_midpoint
from models import Interval, ScaleDirection
from scales import (
    check_scale,
    custom_family,
    exponential_family,
    get_family,
    limit_probe,
    mean_at,
    power_family,
    radical_family,
    scaled_custom_generator,
    scan,
    solve_parameter,
)

APPENDIX_A = 0.9369471273196543
APPENDIX_B = -0.2288229220357811
RADICAL_A = 0.9684735636598272
RADICAL_B = 0.3855885389821094


def random_pair(rng, name):
    """a < b on the family's domain."""
    if name == "exponential":
        a = rng.uniform(-2.0, 2.0)
        return a, a + rng.uniform(1.0, 3.0)
    if name == "radical":
        a = rng.uniform(1.0, 2.0)
        return a, a + rng.uniform(0.5, 1.0)
    a = rng.uniform(0.5, 2.0)
    return a, a + rng.uniform(1.0, 3.0)


@mark.parametrize("name", ("power", "exponential", "radical"))
def test_get_family(name):
    assert get_family(name).name == name


@mark.parametrize("name", ("power", "exponential", "radical"))
def test_families_follow_their_settings(name):
    fam = get_family(name)
    settings = FAMILY_SETTINGS[name]
    assert (fam.means_domain.low, fam.means_domain.high) == settings["domain"]
    assert fam.special == settings["special"]


def test_get_family_unknown():
    with raises(ValueError):
        get_family("lehmer")


@mark.parametrize("fam a b direction".split(),
                  ((power_family(),        1, 9, ScaleDirection.INCREASING),
                   (radical_family(),      1, 9, ScaleDirection.DECREASING),
                   (exponential_family(), -1, 1, ScaleDirection.INCREASING)))
def test_check_scale_examples(fam, a, b, direction):
    report = check_scale(fam, a, b, 64)
    assert report.ok
    assert report.observed == direction
    assert report.violations == []
    assert a < report.mean_range[0] < report.mean_range[1] < b


def test_check_scale_needs_enough_samples():
    with raises(ValueError):
        check_scale(power_family(), 1, 9, 4)


def test_check_scale_outside_domain():
    with raises(OutOfDomain):
        check_scale(power_family(), -1, 9, 64)


def test_check_scale_on_random_pairs():
    rng = np.random.default_rng(23)
    for name in ("power", "exponential", "radical"):
        fam = get_family(name)
        for _ in range(20):
            a, b = random_pair(rng, name)
            assert check_scale(fam, a, b, 64).ok


def test_power_scale_ordering():
    rng = np.random.default_rng(29)
    fam = power_family()
    for _ in range(200):
        a = rng.uniform(0.1, 10.0)
        b = a + rng.uniform(0.01, 10.0)
        qm, am, gm, hm = (mean_at(fam, p, a, b) for p in (2.0, 1.0, 0.0, -1.0))
        assert qm > am > gm > hm


@mark.parametrize("fam a b c alpha".split(),
                  ((power_family(),        1, 4, 2, 0.0),
                   (power_family(),        1, 3, 2, 1.0),
                   (exponential_family(),  0, 2, 1, 0.0)))
def test_solve_examples(fam, a, b, c, alpha):
    report = solve_parameter(fam, a, b, c)
    assert report.alpha == approx(alpha, abs=1e-9)
    assert report.residual <= 1e-12
    assert report.bracket[0] <= report.alpha <= report.bracket[1]


def test_solve_round_trip_example():
    fam = exponential_family()
    c = mean_at(fam, 2.5, -1.0, 3.0)
    assert solve_parameter(fam, -1.0, 3.0, c).alpha == approx(2.5, abs=1e-9)


@mark.parametrize("c", (1.0, 4.0, 0.5, 5.0))
def test_solve_target_outside_interval(c):
    with raises(TargetOutOfInterval):
        solve_parameter(power_family(), 1.0, 4.0, c)


def test_solve_degenerate_interval():
    with raises(DegenerateInterval):
        solve_parameter(power_family(), 4.0, 1.0, 2.0)


@mark.parametrize("c", (3.9999999, 1.0000001))
def test_solve_target_too_close_to_an_endpoint(c):
    with raises(BracketExhausted):
        solve_parameter(power_family(), 1.0, 4.0, c)


def test_solve_rejects_non_positive_tolerance():
    with raises(ValueError):
        solve_parameter(power_family(), 1.0, 4.0, 2.0, tol=0.0)


def test_solver_round_trip():
    rng = np.random.default_rng(31)
    for i in range(50):
        name = ("power", "exponential", "radical")[i % 3]
        fam = get_family(name)
        a, b = random_pair(rng, name)
        alpha = rng.uniform(-20.0, 20.0)
        report = solve_parameter(fam, a, b, mean_at(fam, alpha, a, b))
        assert report.alpha == approx(alpha, abs=1e-7)


@mark.parametrize("name", ("exponential", "radical", "power"))
def test_every_interior_point_is_a_midpoint(name):
    rng = np.random.default_rng(37)
    fam = get_family(name)
    for _ in range(50):
        a, b = random_pair(rng, name)
        c = a + (b - a) * rng.uniform(0.01, 0.99)
        report = solve_parameter(fam, a, b, c)
        assert report.residual <= 1e-12
        d = GeneratorDistance(gen=fam.make(report.alpha))
        assert is_midpoint(d, a, b, c, 1e-8)


def test_radical_solution_is_in_log_coordinate():
    fam = radical_family()
    report = solve_parameter(fam, 2.0, 6.0, 3.0)
    assert report.alpha == approx(0.0, abs=1e-9)


def test_limit_probe_appendix_inputs():
    probe = limit_probe(exponential_family(), APPENDIX_A, APPENDIX_B, 300.0)
    assert probe.at_positive == approx(0.9346366, abs=1e-7)
    assert probe.at_negative == approx(-0.2265124, abs=1e-7)
    assert probe.as_pair() == (probe.at_negative, probe.at_positive)


def test_limit_probe_gap_formula():
    probe = limit_probe(exponential_family(), 0.0, 1.0, 1e6)
    gap = math.log(2.0) / 1e6
    assert probe.at_positive == approx(1.0 - gap, abs=1e-12)
    assert probe.at_negative == approx(gap, abs=1e-12)


def test_limit_probe_radical_appendix_inputs():
    t = 30.0 * math.log(10.0)
    probe = limit_probe(radical_family(), RADICAL_A, RADICAL_B, t)
    # decreasing scale: small alpha approaches the max, large alpha the min
    assert 0.0 < RADICAL_A - probe.at_negative < 0.02
    assert 0.0 < probe.at_positive - RADICAL_B < 0.02
    assert probe.low == RADICAL_B and probe.high == RADICAL_A


def test_limit_probe_rejects_equal_points():
    with raises(DegenerateInterval):
        limit_probe(power_family(), 2.0, 2.0, 10.0)


def test_scan_rows():
    rows = scan(power_family(), 1.0, 9.0, -5.0, 5.0, 11)
    alphas = [row.alpha for row in rows]
    means = [row.mean for row in rows]
    assert len(rows) == 11
    assert alphas == sorted(alphas) and alphas[0] == -5.0 and alphas[-1] == 5.0
    assert all(m1 < m2 for m1, m2 in zip(means, means[1:]))
    assert 1.0 < means[0] < 2.0 and means[-1] < 9.0


def test_scan_radical_is_decreasing():
    means = [row.mean for row in scan(radical_family(), 1.0, 9.0, -5.0, 5.0, 11)]
    assert all(m1 > m2 for m1, m2 in zip(means, means[1:]))


def test_scan_log_spaced():
    rows = scan(exponential_family(), -1.0, 1.0, 0.01, 100.0, 5, log_spaced=True)
    assert [row.alpha for row in rows] == approx([0.01, 0.1, 1.0, 10.0, 100.0])
    with raises(ValueError):
        scan(exponential_family(), -1.0, 1.0, -1.0, 100.0, 5, log_spaced=True)


@mark.parametrize("alpha_min alpha_max steps".split(), ((1.0, 1.0, 5), (2.0, 1.0, 5), (0.0, 1.0, 1)))
def test_scan_rejects_bad_ranges(alpha_min, alpha_max, steps):
    with raises(ValueError):
        scan(power_family(), 1.0, 9.0, alpha_min, alpha_max, steps)


def test_custom_family_reproduces_exponential_scale():
    fam = custom_family("exp(u)", Interval.real_line())
    assert fam.direction == ScaleDirection.INCREASING
    assert mean_at(fam, 2.0, 0.0, 1.0) == approx(mean_at(exponential_family(), 2.0, 0.0, 1.0), rel=1e-10)
    assert mean_at(fam, 0.0, 0.0, 1.0) == 0.5
    report = solve_parameter(fam, 0.0, 1.0, 0.7, tol=1e-10)
    assert mean_at(exponential_family(), report.alpha, 0.0, 1.0) == approx(0.7, abs=1e-9)


def test_custom_family_decreasing_scale():
    # concave increasing generator
    fam = custom_family("-exp(-u)", Interval.real_line())
    assert fam.direction == ScaleDirection.DECREASING


def test_custom_family_needs_consistent_convexity():
    with raises(NotMonotone):
        custom_family("u^3", Interval.real_line())


def test_scaled_custom_generator_domain():
    gen = scaled_custom_generator("log(u)", Interval.positive(), -2.0)
    assert gen.domain == Interval(low=-math.inf, high=0.0)
    assert qam_eval(gen, -1.0, -4.0) == approx(-2.0, rel=1e-12)
