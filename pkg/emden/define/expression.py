"""Parse and evaluate radial potential expressions.

The language has a single variable ``r``, floating point literals, the
binary operators ``+ - * / ^``, unary minus, parentheses and the
functions ``exp``, ``log`` and ``sqrt``.  The power operator is right
associative and binds tighter than unary minus, so that ``-r^2`` means
``-(r^2)``.  The exponent may itself start with a minus sign, as in
``r^-2``.

"""

import re

from abc import (
    ABCMeta,
    abstractmethod,
)

from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Optional,
)

import numpy as np

from ..errors import (
    ExpressionSyntaxError,
    UnknownIdentifierError,
)

from ..util import class_str

######################################################################

# Values the expressions operate on: floats or numpy arrays of floats.
Value = np.ndarray

# Name of the one and only variable.
VARIABLE = "r"

# Functions available in expressions.
FUNCTIONS: Dict[str, Callable[[Value], Value]] = {
    'exp': np.exp,
    'log': np.log,
    'sqrt': np.sqrt,
}

# Left binding powers of the binary operators.
_BINARY_POWERS = {
    '+': 10,
    '-': 10,
    '*': 20,
    '/': 20,
    '^': 30,
}

# Binding power of unary minus: between '*' and '^'.
_UNARY_POWER = 25

######################################################################

class Node(metaclass=ABCMeta):
    """Node of the syntax tree of an expression."""

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, repr(self.pretty()))

    @abstractmethod
    def evaluate(self, r: Value) -> Value:
        """Implement this to evaluate the node at the given radii."""

    @abstractmethod
    def pretty(self) -> str:
        """Implement this to print the node in fully parenthesized form."""

    @abstractmethod
    def depends_on_variable(self) -> bool:
        """Implement this to tell whether the variable occurs in the node."""

class Literal(Node):
    """Numeric constant."""

    def __init__(self, value: float):
        """Initialize with the value of the constant."""
        self._value = float(value)

    @property
    def value(self) -> float:
        """Value of the constant."""
        return self._value

    def evaluate(self, r: Value) -> Value:
        """Return the constant."""
        return np.float64(self._value)

    def pretty(self) -> str:
        """Print the shortest literal that reads back as the same float."""
        return repr(self._value)

    def depends_on_variable(self) -> bool:
        """Constants do not depend on the variable."""
        return False

class Variable(Node):
    """The radial variable."""

    def evaluate(self, r: Value) -> Value:
        """Return the radii themselves."""
        return r

    def pretty(self) -> str:
        """Print the name of the variable."""
        return VARIABLE

    def depends_on_variable(self) -> bool:
        """The variable depends on itself."""
        return True

class Negate(Node):
    """Unary minus."""

    def __init__(self, operand: Node):
        """Initialize with the negated subexpression."""
        self._operand = operand

    def evaluate(self, r: Value) -> Value:
        """Negate the value of the operand."""
        return np.negative(self._operand.evaluate(r))

    def pretty(self) -> str:
        """Print in parentheses."""
        return f"(-{self._operand.pretty()})"

    def depends_on_variable(self) -> bool:
        """Depends on the variable if the operand does."""
        return self._operand.depends_on_variable()

class BinaryOperation(Node):
    """Binary arithmetic operation."""

    _operations: Dict[str, Callable[[Value, Value], Value]] = {
        '+': np.add,
        '-': np.subtract,
        '*': np.multiply,
        '/': np.divide,
        '^': np.power,
    }

    def __init__(self, operator: str, left: Node, right: Node):
        """Initialize with the operator symbol and the two operands."""
        self._operator = operator
        self._left = left
        self._right = right

    @property
    def operator(self) -> str:
        """Operator symbol."""
        return self._operator

    def evaluate(self, r: Value) -> Value:
        """Apply the operator to the values of the operands."""
        operation = self._operations[self._operator]
        return operation(self._left.evaluate(r), self._right.evaluate(r))

    def pretty(self) -> str:
        """Print in parentheses."""
        left = self._left.pretty()
        right = self._right.pretty()
        return f"({left} {self._operator} {right})"

    def depends_on_variable(self) -> bool:
        """Depends on the variable if any of the operands does."""
        return (
            self._left.depends_on_variable() or
            self._right.depends_on_variable()
        )

class Call(Node):
    """Application of one of the builtin functions."""

    def __init__(self, name: str, argument: Node):
        """Initialize with the function name and its argument."""
        self._name = name
        self._argument = argument

    @property
    def name(self) -> str:
        """Name of the function."""
        return self._name

    def evaluate(self, r: Value) -> Value:
        """Apply the function."""
        return FUNCTIONS[self._name](self._argument.evaluate(r))

    def pretty(self) -> str:
        """Print as a function call."""
        return f"{self._name}({self._argument.pretty()})"

    def depends_on_variable(self) -> bool:
        """Depends on the variable if the argument does."""
        return self._argument.depends_on_variable()

######################################################################

class Token:
    """Lexical token with its position in the source."""

    NUMBER = 'number'
    NAME = 'name'
    SYMBOL = 'symbol'
    END = 'end'

    def __init__(self, kind: str, text: str, position: int):
        """Initialize the token."""
        self.kind = kind
        self.text = text
        self.position = position

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, f"{self.kind}, {self.text!r}, {self.position}")

_TOKEN_PATTERN = re.compile(
    r"""
    (?P<space>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<symbol>[-+*/^()])
    """,
    re.VERBOSE,
)

def tokenize(source: str) -> Iterator[Token]:
    """Split the source into tokens, ending with an END token."""
    position = 0
    length = len(source)
    while position < length:
        match = _TOKEN_PATTERN.match(source, position)
        if not match:
            char = source[position]
            raise ExpressionSyntaxError(
                f"unexpected character {char!r}", source, position)
        kind = match.lastgroup
        text = match.group()
        if kind == 'number':
            yield Token(Token.NUMBER, text, position)
        elif kind == 'name':
            yield Token(Token.NAME, text, position)
        elif kind == 'symbol':
            yield Token(Token.SYMBOL, text, position)
        position = match.end()
    yield Token(Token.END, "", length)

######################################################################

class Parser:
    """Precedence climbing parser for potential expressions."""

    def __init__(self, source: str):
        """Initialize for the given source text."""
        self._source = source
        self._tokens: List[Token] = list(tokenize(source))
        self._index = 0

    def parse(self) -> Node:
        """Parse the whole source into a syntax tree."""
        if not self._source.strip():
            raise ExpressionSyntaxError("empty expression", self._source, 0)
        node = self._expression(0)
        token = self._peek()
        if token.kind != Token.END:
            self._fail(f"unexpected {token.text!r}", token)
        return node

    def _peek(self) -> Token:
        """Return the current token without consuming it."""
        return self._tokens[self._index]

    def _advance(self) -> Token:
        """Consume the current token and return it."""
        token = self._tokens[self._index]
        if token.kind != Token.END:
            self._index += 1
        return token

    def _expect(self, text: str) -> None:
        """Consume a symbol that must be there."""
        token = self._peek()
        if token.kind != Token.SYMBOL or token.text != text:
            self._fail(f"expected {text!r}", token)
        self._advance()

    def _fail(self, message: str, token: Token) -> None:
        """Raise a syntax error at the token."""
        if token.kind == Token.END:
            message = "unexpected end of expression"
        raise ExpressionSyntaxError(message, self._source, token.position)

    def _binding_power(self, token: Token) -> int:
        """Left binding power of a token in infix position."""
        if token.kind == Token.SYMBOL:
            return _BINARY_POWERS.get(token.text, 0)
        return 0

    def _expression(self, right_power: int) -> Node:
        """Parse operators that bind tighter than the given power."""
        left = self._prefix()
        while self._binding_power(self._peek()) > right_power:
            operator = self._advance().text
            power = _BINARY_POWERS[operator]
            if operator == '^':
                # Right associative.
                right = self._expression(power - 1)
            else:
                right = self._expression(power)
            left = BinaryOperation(operator, left, right)
        return left

    def _prefix(self) -> Node:
        """Parse an operand, including a leading unary minus."""
        token = self._advance()
        if token.kind == Token.NUMBER:
            value = float(token.text)
            if not np.isfinite(value):
                self._fail(f"number {token.text!r} is out of range", token)
            return Literal(value)
        if token.kind == Token.NAME:
            return self._name(token)
        if token.kind == Token.SYMBOL:
            if token.text == '(':
                node = self._expression(0)
                self._expect(')')
                return node
            if token.text == '-':
                return Negate(self._expression(_UNARY_POWER))
        self._fail(f"unexpected {token.text!r}", token)
        raise AssertionError("unreachable")

    def _name(self, token: Token) -> Node:
        """Parse the variable or a function call."""
        name = token.text
        if name == VARIABLE:
            return Variable()
        if name in FUNCTIONS:
            self._expect('(')
            argument = self._expression(0)
            self._expect(')')
            return Call(name, argument)
        raise UnknownIdentifierError(
            f"unknown identifier {name!r}", self._source, token.position)

def parse_expression(source: str) -> Node:
    """Parse the source text into a syntax tree."""
    return Parser(source).parse()

def pretty_print(node: Optional[Node]) -> str:
    """Print a syntax tree in a form that parses back to the same tree."""
    if node is None:
        return ""
    return node.pretty()
