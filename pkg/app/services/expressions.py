"""Parser for the small expression language used in claims and evaluations.

    chain   := expr ("=" expr)*
    expr    := ["+" | "-"] term (("+" | "-") term)*
    term    := [number ["*"]] atom | number        (a bare number must be 0)
    atom    := bracket | product | "(" expr ")"
    bracket := "[" expr "," expr "]"
    product := factor+ ;  factor := name ["^" int] | "(" expr ")"

Names are matched greedily against the names the context knows, so ``xyz``
reads as x, y, z when those are generators and ``b1`` reads as one name.
"""
from __future__ import annotations

from typing import Any, Generic, Protocol, Sequence, TypeVar

from sympy.polys.domains import QQ

from app.exceptions import InputError

T = TypeVar("T")


class ExpressionContext(Protocol[T]):
    """What an algebra must provide for expressions to be evaluated in it."""

    names: Sequence[str]

    def lookup(self, name: str) -> T: ...

    def zero(self) -> T: ...

    def add(self, a: T, b: T) -> T: ...

    def scale(self, a: T, factor: Any) -> T: ...

    def multiply(self, a: T, b: T) -> T: ...

    def bracket(self, a: T, b: T) -> T: ...


class _Parser(Generic[T]):
    def __init__(self, text: str, context: ExpressionContext[T]):
        self.text = "".join(text.replace("−", "-").split())
        self.pos = 0
        self.context = context
        self.names = sorted(context.names, key=len, reverse=True)

    # -- scanning ---------------------------------------------------------
    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise InputError(f"Expected {char!r} at position {self.pos} of {self.text!r}, found {found!r}")
        self.pos += 1

    def read_int(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise InputError(f"Expected a number at position {start} of {self.text!r}")
        return int(self.text[start:self.pos])

    def read_name(self) -> str | None:
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return name
        return None

    def name_ahead(self) -> bool:
        return any(self.text.startswith(name, self.pos) for name in self.names)

    def at_factor_start(self) -> bool:
        return self.peek() == "(" or self.name_ahead()

    def at_atom_start(self) -> bool:
        return self.peek() == "[" or self.at_factor_start()

    # -- grammar ----------------------------------------------------------
    def chain(self) -> list[T]:
        values = [self.expr()]
        while self.peek() == "=":
            self.pos += 1
            values.append(self.expr())
        if self.pos != len(self.text):
            raise InputError(f"Unexpected {self.peek()!r} at position {self.pos} of {self.text!r}")
        return values

    def expr(self) -> T:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        value = self.context.scale(self.term(), sign)
        while self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            value = self.context.add(value, self.context.scale(self.term(), sign))
        return value

    def term(self) -> T:
        if self.peek().isdigit():
            numerator = self.read_int()
            denominator = 1
            if self.peek() == "/":
                self.pos += 1
                denominator = self.read_int()
                if denominator == 0:
                    raise InputError(f"Zero denominator in {self.text!r}")
            coefficient = QQ(numerator, denominator)
            if self.peek() == "*":
                self.pos += 1
            elif not self.at_atom_start():
                if coefficient != 0:
                    raise InputError(f"A bare nonzero number is not an element: {self.text!r}")
                return self.context.zero()
            return self.context.scale(self.atom(), coefficient)
        return self.atom()

    def atom(self) -> T:
        # a basis name such as "[x,y]" wins over reading it as a bracket
        if self.peek() == "[" and not self.name_ahead():
            self.pos += 1
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect("]")
            return self.context.bracket(left, right)
        value = self.factor()
        while self.at_factor_start():
            value = self.context.multiply(value, self.factor())
        return value

    def factor(self) -> T:
        if self.peek() == "(":
            self.pos += 1
            value = self.expr()
            self.expect(")")
        else:
            name = self.read_name()
            if name is None:
                found = self.peek() or "end of input"
                raise InputError(f"Unknown name at position {self.pos} of {self.text!r}: {found!r}")
            value = self.context.lookup(name)
        if self.peek() == "^":
            self.pos += 1
            exponent = self.read_int()
            if exponent < 1:
                raise InputError(f"Exponents must be positive in {self.text!r}")
            base = value
            for _ in range(exponent - 1):
                value = self.context.multiply(value, base)
        return value


def evaluate(text: str, context: ExpressionContext[T]) -> T:
    """Evaluate a single expression."""
    values = _Parser(text, context).chain()
    if len(values) != 1:
        raise InputError(f"Expected one expression, got an equation: {text!r}")
    return values[0]


def evaluate_chain(text: str, context: ExpressionContext[T]) -> list[T]:
    """Evaluate every member of ``a = b = c``."""
    return _Parser(text, context).chain()
