"""Expression language for functions and forms, with an exact printer.

Grammar, loosest binding first::

    wedge  := sum (('∧' | '&') sum)*
    sum    := ['+' | '-'] term (('+' | '-') term)*
    term   := power ('*' power)*
    power  := atom ['^' INT]
    atom   := NUMBER | 'i' | 'dtJ' | call | '(' wedge ')'
    call   := ('sin' | 'cos' | 'exp') '(' linear ')'

``NUMBER`` is an integer, a decimal or ``p/q`` written without spaces.
Variables ``tJ`` only appear inside ``sin``/``cos`` (integer linear forms)
and ``exp`` (``i`` times an integer linear form).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .errors import ParseError
from .forms import DifferentialForm, wedge
from .ring import Scalar, TrigPoly, fraction_str

Value = Union[TrigPoly, DifferentialForm]

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+/\d+|\d+\.\d+|\d+)
  | (?P<form>dt\d+)
  | (?P<var>t\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*^()/,&]|∧)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(src: str) -> List[Token]:
    out: List[Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        if m.lastgroup != "ws":
            kind = m.lastgroup
            if kind == "op" and text == "**":
                text = "^"
            out.append(Token(kind, text, line, col))
        for ch in text:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Token("end", "", line, col))
    return out


# -- syntax tree ----------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    line: int
    column: int


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class Imag(Node):
    pass


@dataclass(frozen=True)
class Var(Node):
    index: int


@dataclass(frozen=True)
class FormSymbol(Node):
    index: int


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Power(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node


class _Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Node:
        node = self.wedge()
        if self.tok.kind != "end":
            if self.tok.text == "/":
                self.error("division is not supported; write rationals as p/q")
            self.error(f"unexpected {self.tok.text!r}")
        return node

    def wedge(self) -> Node:
        node = self.sum()
        while self.tok.text in ("∧", "&"):
            t = self.advance()
            node = BinOp(t.line, t.column, "wedge", node, self.sum())
        return node

    def sum(self) -> Node:
        t = self.tok
        if t.text in ("+", "-"):
            self.advance()
            node = self.term()
            if t.text == "-":
                node = Neg(t.line, t.column, node)
        else:
            node = self.term()
        while self.tok.text in ("+", "-"):
            t = self.advance()
            node = BinOp(t.line, t.column, t.text, node, self.term())
        return node

    def term(self) -> Node:
        node = self.power()
        while self.tok.text in ("*", "/"):
            if self.tok.text == "/":
                self.error("division is not supported; write rationals as p/q")
            t = self.advance()
            node = BinOp(t.line, t.column, "*", node, self.power())
        return node

    def power(self) -> Node:
        node = self.atom()
        if self.tok.text == "^":
            t = self.advance()
            exp_tok = self.tok
            if exp_tok.kind != "num" or not exp_tok.text.isdigit():
                self.error("exponents must be non-negative integers", exp_tok)
            self.advance()
            node = Power(t.line, t.column, node, int(exp_tok.text))
            if self.tok.text == "^":
                self.error("chained powers are ambiguous; use parentheses")
        return node

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(t.line, t.column, Fraction(t.text))
        if t.kind == "form":
            self.advance()
            return FormSymbol(t.line, t.column, int(t.text[2:]))
        if t.kind == "var":
            self.advance()
            return Var(t.line, t.column, int(t.text[1:]))
        if t.kind == "name":
            if t.text == "i":
                self.advance()
                return Imag(t.line, t.column)
            if t.text in ("sin", "cos", "exp"):
                self.advance()
                self.expect("(")
                arg = self.sum()
                self.expect(")")
                return Call(t.line, t.column, t.text, arg)
            self.error(f"unknown name {t.text!r}")
        if t.text == "(":
            self.advance()
            node = self.wedge()
            self.expect(")")
            return node
        self.error(f"unexpected {t.text or 'end of input'!r}")


def parse_ast(src: str) -> Node:
    return _Parser(src).parse()


# -- lowering ----------------------------------------------------------------------

def _linear(node: Node, dim: int) -> Tuple[List[Scalar], Scalar]:
    """Coefficients and constant of an affine expression in ``t1..tn``."""
    zero = [Scalar(0)] * dim
    if isinstance(node, Num):
        return zero, Scalar(node.value)
    if isinstance(node, Imag):
        return zero, Scalar(0, 1)
    if isinstance(node, Var):
        if not 1 <= node.index <= dim:
            raise ParseError(f"variable t{node.index} does not exist on T^{dim}",
                             node.line, node.column)
        coeffs = list(zero)
        coeffs[node.index - 1] = Scalar(1)
        return coeffs, Scalar(0)
    if isinstance(node, Neg):
        c, k = _linear(node.operand, dim)
        return [-x for x in c], -k
    if isinstance(node, BinOp) and node.op in "+-":
        (c1, k1), (c2, k2) = _linear(node.left, dim), _linear(node.right, dim)
        if node.op == "-":
            c2, k2 = [-x for x in c2], -k2
        return [a + b for a, b in zip(c1, c2)], k1 + k2
    if isinstance(node, BinOp) and node.op == "*":
        (c1, k1), (c2, k2) = _linear(node.left, dim), _linear(node.right, dim)
        if any(c1) and any(c2):
            raise ParseError("function arguments must be linear in t",
                             node.line, node.column)
        if any(c2):
            c1, k1, c2, k2 = c2, k2, c1, k1
        return [x * k2 for x in c1], k1 * k2
    raise ParseError("function arguments must be integer linear forms in t",
                     node.line, node.column)


def _frequency(node: Call, dim: int) -> Tuple[int, ...]:
    coeffs, const = _linear(node.arg, dim)
    if const:
        raise ParseError("function arguments may not carry a constant phase",
                         node.line, node.column)
    if node.func == "exp":
        if any(c.re for c in coeffs):
            raise ParseError("exp needs an argument of the form i*(integer linear form)",
                             node.line, node.column)
        raw = [c.im for c in coeffs]
    else:
        if any(c.im for c in coeffs):
            raise ParseError(f"{node.func} needs a real integer linear form",
                             node.line, node.column)
        raw = [c.re for c in coeffs]
    if any(x.denominator != 1 for x in raw):
        raise ParseError("frequencies must be integers", node.line, node.column)
    return tuple(int(x) for x in raw)


def lower(node: Node, dim: int) -> Value:
    if isinstance(node, Num):
        return TrigPoly.constant(dim, node.value)
    if isinstance(node, Imag):
        return TrigPoly.constant(dim, Scalar(0, 1))
    if isinstance(node, Var):
        raise ParseError(f"bare variable t{node.index} is not a ring element; use it "
                         f"inside sin, cos or exp", node.line, node.column)
    if isinstance(node, FormSymbol):
        if not 1 <= node.index <= dim:
            raise ParseError(f"unknown form symbol dt{node.index} on T^{dim}",
                             node.line, node.column)
        return DifferentialForm.dt(dim, node.index)
    if isinstance(node, Call):
        freq = _frequency(node, dim)
        if node.func == "sin":
            return TrigPoly.sin(freq)
        if node.func == "cos":
            return TrigPoly.cos(freq)
        return TrigPoly.monomial(freq)
    if isinstance(node, Neg):
        return -lower(node.operand, dim)
    if isinstance(node, Power):
        base = lower(node.base, dim)
        if not isinstance(base, TrigPoly):
            raise ParseError("only functions can be raised to a power",
                             node.line, node.column)
        return base ** node.exponent
    if isinstance(node, BinOp):
        a, b = lower(node.left, dim), lower(node.right, dim)
        if node.op == "wedge":
            a, b = _as_form(a), _as_form(b)
            if a.degree + b.degree > dim:
                raise ParseError(f"wedge of degree {a.degree + b.degree} exceeds the "
                                 f"top degree of T^{dim}", node.line, node.column)
            return wedge(a, b)
        if node.op == "*":
            if isinstance(a, DifferentialForm) and isinstance(b, DifferentialForm):
                if a.degree and b.degree:
                    raise ParseError("use the wedge operator to multiply forms",
                                     node.line, node.column)
            return _multiply(a, b)
        if isinstance(a, DifferentialForm) or isinstance(b, DifferentialForm):
            a, b = _as_form(a), _as_form(b)
            if a.degree != b.degree and a and b:
                raise ParseError(f"cannot add forms of degree {a.degree} and {b.degree}",
                                 node.line, node.column)
        return a + b if node.op == "+" else a - b
    raise ParseError("unsupported expression", node.line, node.column)


def _as_form(x: Value) -> DifferentialForm:
    return x if isinstance(x, DifferentialForm) else DifferentialForm.function(x)


def _multiply(a: Value, b: Value) -> Value:
    if isinstance(a, TrigPoly) and isinstance(b, TrigPoly):
        return a * b
    if isinstance(a, TrigPoly):
        return b.scale(a)
    if isinstance(b, TrigPoly):
        return a.scale(b)
    return wedge(a, b)


def parse_expression(src: str, dim: int) -> Value:
    """Parse and lower ``src`` on ``T^dim``; 0-forms come back as ``TrigPoly``."""
    value = lower(parse_ast(src), dim)
    if isinstance(value, DifferentialForm) and value.degree == 0:
        return value.as_function()
    return value


def parse_function(src: str, dim: int) -> TrigPoly:
    value = parse_expression(src, dim)
    if not isinstance(value, TrigPoly):
        raise ParseError(f"expected a function, got a {value.degree}-form")
    return value


def parse_form(src: str, dim: int, degree: Optional[int] = None) -> DifferentialForm:
    value = _as_form(parse_expression(src, dim))
    if degree is not None and value.degree != degree:
        if not value:
            return DifferentialForm.zero(dim, degree)
        raise ParseError(f"expected a {degree}-form, got a {value.degree}-form")
    return value


# -- printing ---------------------------------------------------------------------

def _scalar_text(c: Scalar) -> str:
    re_, im = c.re, c.im
    if not im:
        return fraction_str(re_)
    if not re_:
        return f"{fraction_str(im)}*i"
    sign = "-" if im < 0 else "+"
    return f"({fraction_str(re_)} {sign} {fraction_str(abs(im))}*i)"


def _linear_text(freq: Tuple[int, ...]) -> str:
    text = ""
    for j, k in enumerate(freq, start=1):
        if not k:
            continue
        if not text:
            text = f"{k}*t{j}"
        else:
            text += f" {'-' if k < 0 else '+'} {abs(k)}*t{j}"
    return text


def format_function(p: TrigPoly) -> str:
    if not p:
        return "0"
    terms = []
    for freq, c in sorted(p.terms.items()):
        coeff = _scalar_text(c)
        if any(freq):
            terms.append(f"{coeff}*exp(i*({_linear_text(freq)}))")
        else:
            terms.append(coeff)
    return " + ".join(f"({t})" for t in terms)


def format_expression(value: Value) -> str:
    """Text that parses back to ``value``."""
    if isinstance(value, TrigPoly):
        return format_function(value)
    if value.degree == 0:
        return format_function(value.as_function())
    if not value:
        return "0*" + " ∧ ".join(f"dt{j}" for j in range(1, value.degree + 1))
    pieces = []
    for index, coeff in sorted(value.components.items()):
        symbols = " ∧ ".join(f"dt{j}" for j in index)
        pieces.append(f"(({format_function(coeff)})*{symbols})")
    return " + ".join(pieces)
