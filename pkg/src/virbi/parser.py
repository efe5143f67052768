"""Text syntax for algebra elements and tensors.

Grammar (whitespace insensitive)::

    expr     := ['-'] product (('+' | '-') product)*
    product  := factor ('(x)' factor)*
    factor   := [rational '*'] atom | '0'
    atom     := 'L[' rational [';' mono] ']' | '(' expr ')'
    mono     := int (',' int)*
    rational := int ['/' int]

``*`` binds tighter than ``(x)``, which binds tighter than ``+``/``-``.  A bare
``L[a]`` is ``L_a`` times the unit of the coefficient algebra.  For table
backends the mono is a single basis id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import BasisIndex, Combination, Element, LaurentMonomials
from .tensors import Tensor2, Tensor3


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")


_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<tensor>\(x\))|(?P<open>L\[)|(?P<sym>[-+*/;,()\]]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, algebra):
        self.text = text
        self.algebra = algebra
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok = None):
        tok = tok or self.tok
        return ParseError(msg, self.text, tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def integer(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.accept("-"):
            sign = -1
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        value = int(self.tok.text)
        self.i += 1
        return sign * value

    def rational(self, signed: bool = False) -> Fraction:
        num = self.integer(signed)
        if self.accept("/"):
            den_tok = self.tok
            den = self.integer()
            if den == 0:
                raise self.error("zero denominator", den_tok)
            return Fraction(num, den)
        return Fraction(num)

    # grammar
    def parse(self) -> tuple:
        arity, terms = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return arity, terms

    def expr(self) -> tuple:
        sign = -1 if self.accept("-") else 1
        arity, terms = self.product()
        terms = _scaled(terms, sign)
        while self.tok.text in ("+", "-") and self.tok.kind == "sym":
            op = self.tok.text
            self.i += 1
            tok = self.tok
            a2, t2 = self.product()
            if arity is None:
                arity = a2
            elif a2 is not None and a2 != arity:
                raise self.error(f"cannot add arity {arity} and arity {a2} terms", tok)
            terms = _merged(terms, _scaled(t2, -1 if op == "-" else 1))
        return arity, terms

    def product(self) -> tuple:
        arity, terms = self.factor()
        while self.tok.kind == "tensor":
            tok = self.tok
            self.i += 1
            a2, t2 = self.factor()
            if arity is None or a2 is None:
                # the literal 0 absorbs the product
                arity = None if arity is None or a2 is None else arity + a2
                terms = {}
                continue
            arity += a2
            if arity > 3:
                raise self.error("tensor products beyond three factors are not supported", tok)
            terms = {k1 + k2: c1 * c2 for k1, c1 in terms.items() for k2, c2 in t2.items()}
            terms = {k: c for k, c in terms.items() if c}
        return arity, terms

    def factor(self) -> tuple:
        if self.tok.kind == "int":
            tok = self.tok
            coeff = self.rational()
            if not self.accept("*"):
                if coeff == 0:
                    return None, {}
                raise self.error("a scalar must be followed by '*'", tok)
            arity, terms = self.atom()
            return arity, _scaled(terms, coeff)
        return self.atom()

    def atom(self) -> tuple:
        if self.tok.kind == "open":
            self.i += 1
            alpha = self.rational(signed=True)
            mono = self.algebra.unit
            if self.accept(";"):
                mono = self.mono()
            self.expect("]")
            return 1, {(BasisIndex(alpha, mono),): Fraction(1)}
        if self.accept("("):
            result = self.expr()
            self.expect(")")
            return result
        found = self.tok.text or "end of input"
        raise self.error(f"expected 'L[' or '(', found {found!r}")

    def mono(self):
        tok = self.tok
        values = [self.integer(signed=True)]
        while self.accept(","):
            values.append(self.integer(signed=True))
        if isinstance(self.algebra, LaurentMonomials):
            if len(values) != self.algebra.k:
                raise self.error(
                    f"exponent arity mismatch: list has {len(values)} entries but the algebra has "
                    f"k = {self.algebra.k} variables",
                    tok,
                )
            return tuple(values)
        if len(values) != 1 or not self.algebra.is_valid(values[0]):
            raise self.error(f"expected a basis id in 0..{self.algebra.n - 1}", tok)
        return values[0]


def _scaled(terms: dict, c) -> dict:
    if c == 1:
        return terms
    return {k: v * c for k, v in terms.items() if v * c}


def _merged(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


_CLASSES = {1: Element, 2: Tensor2, 3: Tensor3}


def parse(text: str, algebra, arity: int = None) -> Combination:
    """Parse ``text``; ``arity`` (1, 2 or 3) is enforced when given."""
    found, terms = _Parser(text, algebra).parse()
    if found is None:
        found = arity or 1
    if arity is not None and found != arity:
        raise ParseError(f"expected an expression of arity {arity}, got arity {found}", text, 0)
    cls = _CLASSES[found]
    if found == 1:
        terms = {k[0]: c for k, c in terms.items()}
    return cls(algebra, terms)


def parse_element(text: str, algebra) -> Element:
    return parse(text, algebra, 1)


def parse_tensor2(text: str, algebra) -> Tensor2:
    return parse(text, algebra, 2)


def parse_tensor3(text: str, algebra) -> Tensor3:
    return parse(text, algebra, 3)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_basis(idx: BasisIndex) -> str:
    mono = idx.mono
    alpha = _fmt_rational(idx.alpha)
    if isinstance(mono, tuple):
        if not mono:
            return f"L[{alpha}]"
        return f"L[{alpha};{','.join(str(e) for e in mono)}]"
    return f"L[{alpha};{mono}]"


def render(x: Combination) -> str:
    """Canonical text form; ``parse(render(x)) == x``."""
    if x.is_zero():
        return "0"
    parts = []
    for key, c in x.items():
        keys = (key,) if isinstance(key, BasisIndex) else key
        body = "(x)".join(render_basis(k) for k in keys)
        mag = abs(c)
        text = body if mag == 1 else f"{_fmt_rational(mag)}*{body}"
        if not parts:
            parts.append(("-" if c < 0 else "") + text)
        else:
            parts.append((" - " if c < 0 else " + ") + text)
    return "".join(parts)
