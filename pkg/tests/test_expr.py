from pytest import approx, mark, raises
from hypothesis import given, settings
from hypothesis.strategies import builds, floats, just, one_of, recursive, sampled_from

from errors import DomainError, ExpressionError, ExpressionSyntaxError, UnknownIdentifier
from expr import BinaryOp, Call, Negate, Number, Variable, compile_expression, evaluate, parse, to_text, tokenize


def value(text, u=0.0):
    return evaluate(parse(text), u)


@mark.parametrize("text u expected".split(),
                  (("2+3*4",          0.0, 14.0),
                   ("2^3^2",          0.0, 512.0),
                   ("-u^2",           3.0, -9.0),
                   ("(-u)^2",         3.0, 9.0),
                   ("u^3",            2.0, 8.0),
                   ("exp(u)/2 + 1",   0.0, 1.5),
                   ("8/4/2",          0.0, 1.0),
                   ("10 - 4 - 3",     0.0, 3.0),
                   ("pow(u, 2) + 1",  3.0, 10.0),
                   ("abs(-u)",        2.0, 2.0),
                   ("sqrt(u) * 2",    9.0, 6.0),
                   ("log(exp(2.5))",  0.0, 2.5),
                   ("(-2)^3",         0.0, -8.0),
                   ("1.5e2 + .5",     0.0, 150.5),
                   ("--u",            4.0, 4.0)))
def test_evaluation(text, u, expected):
    assert value(text, u) == approx(expected, rel=1e-15)


def test_tree_shape():
    assert parse("exp(2*u) - 1") == BinaryOp(
        "-", Call("exp", (BinaryOp("*", Number(2.0), Variable()),)), Number(1.0)
    )
    assert parse("u^3") == BinaryOp("^", Variable(), Number(3.0))
    assert parse("-u^2") == Negate(BinaryOp("^", Variable(), Number(2.0)))


def test_whitespace_is_insignificant():
    assert parse(" 2 +3*  u ") == parse("2+3*u")


def test_tokenize_ends_with_end_token():
    tokens = tokenize("u + 1")
    assert [t.kind for t in tokens] == ["ident", "op", "number", "end"]
    assert [t.offset for t in tokens] == [0, 2, 4, 5]


@mark.parametrize("text offset".split(),
                  (("u +",      3),
                   ("(u",       2),
                   ("u $ 2",    2),
                   ("2 3",      2),
                   ("exp u",    4),
                   (")",        0)))
def test_syntax_errors(text, offset):
    with raises(ExpressionSyntaxError) as e:
        parse(text)
    assert e.value.offset == offset


@mark.parametrize("text", ("", "   "))
def test_empty_expression(text):
    with raises(ExpressionSyntaxError):
        parse(text)


@mark.parametrize("text", ("pow(u)", "exp(u, 2)", "pow(1, 2, 3)"))
def test_function_arity(text):
    with raises(ExpressionSyntaxError):
        parse(text)


@mark.parametrize("text name offset".split(),
                  (("x + 1",      "x",   0),
                   ("2 * sin(u)", "sin", 4)))
def test_unknown_identifier(text, name, offset):
    with raises(UnknownIdentifier) as e:
        parse(text)
    assert (e.value.name, e.value.offset) == (name, offset)


def test_non_finite_literal():
    with raises(ExpressionSyntaxError):
        parse("1e999")


@mark.parametrize("text u".split(),
                  (("log(u)",   -1.0),
                   ("log(u)",    0.0),
                   ("1/u",       0.0),
                   ("sqrt(u)",  -1.0),
                   ("u^0.5",    -4.0),
                   ("u^-1",      0.0),
                   ("exp(u)", 1000.0),
                   ("u^u",    1000.0)))
def test_domain_errors(text, u):
    with raises(DomainError):
        value(text, u)


def test_errors_share_a_base():
    for error in (DomainError, ExpressionSyntaxError, UnknownIdentifier):
        assert issubclass(error, ExpressionError)
        assert issubclass(error, ValueError)


def test_compile_expression():
    fn = compile_expression(parse("u*u - u"))
    assert [fn(u) for u in (0.0, 0.5, 2.0, 3.0)] == [0.0, -0.25, 2.0, 6.0]


@mark.parametrize("text", ("-u^2", "(-u)^2", "2^3^2", "(2^3)^2", "u - (1 - u)", "u / (2 * u)",
                           "-(u + 1)", "pow(u - 1, -u)", "exp(-u) * log(u + 1)"))
def test_printing_round_trip_examples(text):
    node = parse(text)
    assert parse(to_text(node)) == node


def extend(children):
    return one_of(
        builds(Negate, children),
        builds(BinaryOp, sampled_from("+-*/^"), children, children),
        builds(lambda name, arg: Call(name, (arg,)), sampled_from(["exp", "log", "sqrt", "abs"]), children),
        builds(lambda x, y: Call("pow", (x, y)), children, children),
    )


# negative literals print as negation, so the generated constants are non-negative
trees = recursive(
    one_of(builds(Number, floats(min_value=0.0, allow_nan=False, allow_infinity=False).map(abs)), just(Variable())),
    extend,
    max_leaves=20,
)


@settings(max_examples=300)
@given(trees)
def test_printing_round_trip(node):
    assert parse(to_text(node)) == node
