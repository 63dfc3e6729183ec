"""
A small single-variable expression language for user-supplied generators and potentials.

Grammar (whitespace-insensitive):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := number | 'u' | ident '(' expr (',' expr)* ')' | '(' expr ')'

`^` is right-associative and binds tighter than unary minus, so `-u^2`
is `-(u^2)` and `2^3^2` is `2^9`. Known functions: exp, log, sqrt, abs
(one argument) and pow (two arguments).
"""
import logging
import math
import operator
import re
from dataclasses import dataclass
from typing import Callable, List, Tuple, Union

from errors import DomainError, ExpressionSyntaxError, UnknownIdentifier

logger = logging.getLogger(__name__)

VARIABLE = "u"


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str = VARIABLE


@dataclass(frozen=True)
class Negate:
    operand: "Node"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]


Node = Union[Number, Variable, Negate, BinaryOp, Call]


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    """Split expression text into tokens, ending with an 'end' token."""
    tokens = []
    index = 0
    while True:
        while index < len(text) and text[index].isspace():
            index += 1
        if index >= len(text):
            break
        match = _TOKEN_RE.match(text, index)
        if not match or match.end() == index:
            raise ExpressionSyntaxError(f"unexpected character {text[index]!r}", _byte_offset(text, index), text)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), _byte_offset(text, start)))
        index = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


_UNARY_FUNCTIONS = {"exp", "log", "sqrt", "abs"}
_BINARY_FUNCTIONS = {"pow"}


class Parser:
    """Recursive-descent parser over the token list; one method per grammar rule."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def match(self, symbol: str) -> bool:
        if self.current.kind == "op" and self.current.text == symbol:
            self.advance()
            return True
        return False

    def expect(self, symbol: str) -> None:
        if not self.match(symbol):
            self.error(f"expected {symbol!r}")

    def error(self, message: str) -> None:
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ExpressionSyntaxError(f"{message}, found {found}", token.offset, self.text)

    def parse(self) -> Node:
        node = self.parse_expr()
        if self.current.kind != "end":
            self.error("unexpected trailing input")
        return node

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = BinaryOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = BinaryOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Node:
        if self.match("-"):
            return Negate(self.parse_factor())
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        if self.match("^"):
            return BinaryOp("^", base, self.parse_factor())
        return base

    def parse_atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(f"numeric literal {token.text!r} is not finite", token.offset, self.text)
            return Number(value)
        if token.kind == "ident":
            self.advance()
            if token.text == VARIABLE:
                return Variable()
            if token.text not in _UNARY_FUNCTIONS | _BINARY_FUNCTIONS:
                raise UnknownIdentifier(token.text, token.offset)
            self.expect("(")
            args = [self.parse_expr()]
            while self.match(","):
                args.append(self.parse_expr())
            arity = 2 if token.text in _BINARY_FUNCTIONS else 1
            if len(args) != arity:
                raise ExpressionSyntaxError(
                    f"{token.text} takes {arity} argument(s), got {len(args)}", token.offset, self.text
                )
            self.expect(")")
            return Call(token.text, tuple(args))
        if self.match("("):
            node = self.parse_expr()
            self.expect(")")
            return node
        self.error("expected a number, 'u', a function call or '('")


def parse(text: str) -> Node:
    """Parse expression text into an AST."""
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0, text)
    return Parser(text).parse()


def _checked(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{what} produced a non-finite value")
    return value


def _divide(x: float, y: float) -> float:
    if y == 0.0:
        raise DomainError("division by zero")
    return x / y


def _power(x: float, y: float) -> float:
    if x < 0.0 and not float(y).is_integer():
        raise DomainError(f"non-integer power {y!r} of negative base {x!r}")
    if x == 0.0 and y < 0.0:
        raise DomainError("zero raised to a negative power")
    try:
        return math.pow(x, y)
    except OverflowError as e:
        raise DomainError(f"{x!r} ^ {y!r} overflows") from e


def _log(x: float) -> float:
    if x <= 0.0:
        raise DomainError(f"log of non-positive value {x!r}")
    return math.log(x)


def _sqrt(x: float) -> float:
    if x < 0.0:
        raise DomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError as e:
        raise DomainError(f"exp({x!r}) overflows") from e


_BINARY_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": _divide,
    "^": _power,
}

_FUNCTIONS = {
    "exp": _exp,
    "log": _log,
    "sqrt": _sqrt,
    "abs": abs,
    "pow": _power,
}


def evaluate(node: Node, u: float) -> float:
    """Evaluate an AST at u; leaving real arithmetic raises DomainError."""
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Variable):
        return u
    if isinstance(node, Negate):
        return -evaluate(node.operand, u)
    if isinstance(node, BinaryOp):
        left = evaluate(node.left, u)
        right = evaluate(node.right, u)
        return _checked(_BINARY_OPS[node.op](left, right), node.op)
    if isinstance(node, Call):
        args = [evaluate(arg, u) for arg in node.args]
        return _checked(_FUNCTIONS[node.name](*args), node.name)
    raise TypeError(f"unknown node {node!r}")


def compile_expression(node: Node) -> Callable[[float], float]:
    """Bind an AST into a scalar map u -> value."""
    def fn(u: float) -> float:
        return evaluate(node, u)
    return fn


# Binding strength of each node kind when printed
_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _precedence(node: Node) -> int:
    if isinstance(node, BinaryOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Negate):
        return _PRECEDENCE["neg"]
    if isinstance(node, Number) and node.value < 0:
        return _PRECEDENCE["neg"]
    return _PRECEDENCE["atom"]


def _wrap(node: Node, minimum: int) -> str:
    text = to_text(node)
    return text if _precedence(node) >= minimum else f"({text})"


def to_text(node: Node) -> str:
    """Render an AST with the fewest parentheses that parse back to the same tree."""
    if isinstance(node, Number):
        return repr(node.value)
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, Negate):
        return "-" + _wrap(node.operand, _PRECEDENCE["neg"])
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(arg) for arg in node.args)})"
    level = _PRECEDENCE[node.op]
    if node.op == "^":
        return f"{_wrap(node.left, _PRECEDENCE['atom'])} ^ {_wrap(node.right, _PRECEDENCE['neg'])}"
    return f"{_wrap(node.left, level)} {node.op} {_wrap(node.right, level + 1)}"
