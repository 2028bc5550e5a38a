"""Expression language for WZ shift ratios and certificate ratios.

Grammar (whitespace-insensitive, ``**`` is a synonym for ``^``)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ['-'] base ['^' signed-int]
    base   := int | 'q' | 'X' | 'Y' | '(' expr ')'

Exponents are integer literals, optionally negative and optionally wrapped
in parentheses.  Certificate files hold blocks of ``key: value`` lines; see
:func:`load_certificates`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Union

from .symrat import LaurentPoly, RationalFn, ZeroDenominatorError


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, src: str = ""):
        self.pos = pos
        self.src = src
        super().__init__(f"{message} at position {pos}")


class EvalError(ValueError):
    pass


class CertificateLoadError(ValueError):
    pass


# -- expression trees -------------------------------------------------


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "CertExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "CertExpr"
    right: "CertExpr"


@dataclass(frozen=True)
class Pow:
    base: "CertExpr"
    exponent: int


CertExpr = Union[Int, Sym, Neg, BinOp, Pow]

SYMBOLS = ("q", "X", "Y")

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([qXY]))")


def tokenize(src: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", m.group(1), start))
        elif m.group(2):
            op = "^" if m.group(2) == "**" else m.group(2)
            toks.append(("op", op, start))
        else:
            toks.append(("sym", m.group(3), start))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.peek()
        where = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"{message}, found {where}", tok[2], self.src)

    def expect(self, op):
        t = self.peek()
        if t[0] != "op" or t[1] != op:
            self.error(f"expected {op!r}")
        return self.take()

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        negate = False
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            negate = True
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.signed_int())
        return Neg(node) if negate else node

    def signed_int(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "(":
            self.take()
            value = self.signed_int()
            self.expect(")")
            return value
        sign = 1
        if t[0] == "op" and t[1] == "-":
            self.take()
            sign = -1
        t = self.peek()
        if t[0] != "int":
            self.error("exponent must be an integer literal")
        self.take()
        return sign * int(t[1])

    def base(self):
        t = self.peek()
        if t[0] == "int":
            self.take()
            return Int(int(t[1]))
        if t[0] == "sym":
            self.take()
            return Sym(t[1])
        if t[0] == "op" and t[1] == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a number, symbol or '('")


def parse(src: str) -> CertExpr:
    p = _Parser(src)
    node = p.expr()
    if p.peek()[0] != "end":
        p.error("unexpected trailing input")
    return node


# -- printing ---------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _is_base(e: CertExpr) -> bool:
    return isinstance(e, (Int, Sym))


def to_text(e: CertExpr) -> str:
    """Canonical text; ``parse(to_text(e)) == e`` for every tree."""
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Pow):
        base = to_text(e.base) if _is_base(e.base) else f"({to_text(e.base)})"
        return f"{base}^{e.exponent}"
    if isinstance(e, Neg):
        inner = e.operand
        if _is_base(inner) or (isinstance(inner, Pow)):
            return f"-{to_text(inner)}"
        return f"-({to_text(inner)})"
    prec = _PREC[e.op]
    left = to_text(e.left)
    if isinstance(e.left, BinOp) and _PREC[e.left.op] < prec:
        left = f"({left})"
    right = to_text(e.right)
    if isinstance(e.right, BinOp) and _PREC[e.right.op] <= prec:
        right = f"({right})"
    if prec == 1:
        return f"{left} {e.op} {right}"
    return f"{left}{e.op}{right}"


# -- evaluation -------------------------------------------------------


def eval_rational(e: CertExpr) -> RationalFn:
    try:
        return _eval(e)
    except ZeroDenominatorError as exc:
        raise EvalError(f"{exc} in {to_text(e)!r}") from exc


def _eval(e: CertExpr) -> RationalFn:
    if isinstance(e, Int):
        return RationalFn(e.value)
    if isinstance(e, Sym):
        return RationalFn(LaurentPoly.var(e.name))
    if isinstance(e, Neg):
        return -_eval(e.operand)
    if isinstance(e, Pow):
        return _eval(e.base) ** e.exponent
    a, b = _eval(e.left), _eval(e.right)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    return a / b


# -- fault-injection hooks -------------------------------------------


def literal_count(e: CertExpr) -> int:
    return sum(1 for _ in _literals(e))


def _literals(e: CertExpr) -> Iterator[Int]:
    if isinstance(e, Int):
        yield e
    elif isinstance(e, (Neg,)):
        yield from _literals(e.operand)
    elif isinstance(e, Pow):
        yield from _literals(e.base)
    elif isinstance(e, BinOp):
        yield from _literals(e.left)
        yield from _literals(e.right)


def perturb_literal(e: CertExpr, index: int, delta: int = 1) -> CertExpr:
    """Return a copy with the ``index``-th integer literal (pre-order) changed by ``delta``."""
    counter = [index]

    def walk(node):
        if isinstance(node, Int):
            hit = counter[0] == 0
            counter[0] -= 1
            return Int(node.value + delta) if hit else node
        if isinstance(node, Sym):
            return node
        if isinstance(node, Neg):
            return Neg(walk(node.operand))
        if isinstance(node, Pow):
            return Pow(walk(node.base), node.exponent)
        left = walk(node.left)
        return BinOp(node.op, left, walk(node.right))

    out = walk(e)
    if counter[0] >= 0:
        raise IndexError(f"expression has only {index - counter[0]} integer literals")
    return out


# -- certificate files ------------------------------------------------


@dataclass(frozen=True)
class LinearForm:
    """``slope*n + offset``, used for the k-summation bounds."""

    slope: int
    offset: int

    def __call__(self, n: int) -> int:
        return self.slope * n + self.offset

    def __str__(self):
        if not self.slope:
            return str(self.offset)
        s = {1: "n", -1: "-n"}.get(self.slope, f"{self.slope}*n")
        if self.offset:
            s += f"{self.offset:+d}"
        return s


_LINEAR_TERM = re.compile(r"([+-]?)(\d*)(\*?n)?")


def parse_linear(src: str) -> LinearForm:
    text = re.sub(r"\s+", "", src)
    if not text:
        raise ValueError("empty linear form")
    slope = offset = 0
    pos = 0
    while pos < len(text):
        m = _LINEAR_TERM.match(text, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"bad linear form {src!r}")
        if m.group(3) and m.group(3).startswith("*") and not m.group(2):
            raise ValueError(f"bad linear form {src!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos and not m.group(1):
            raise ValueError(f"bad linear form {src!r}")
        mag = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            slope += sign * mag
        else:
            offset += sign * mag
        pos = m.end()
    return LinearForm(slope, offset)


RHS_STEPS = {"zero": "zero", "0": "zero", "2*(-q)^((n+1)^2)": "theta", "2*(-q)**((n+1)**2)": "theta"}


@dataclass(frozen=True)
class CertificateSet:
    name: str
    ratio_n: CertExpr
    ratio_k: CertExpr
    cert: CertExpr
    k_min: LinearForm
    k_max: LinearForm
    rhs_step: str
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def rational(self, which: str) -> RationalFn:
        if which not in self._cache:
            self._cache[which] = eval_rational(getattr(self, which))
        return self._cache[which]

    def replace(self, **changes) -> "CertificateSet":
        fields = dict(
            name=self.name, ratio_n=self.ratio_n, ratio_k=self.ratio_k, cert=self.cert,
            k_min=self.k_min, k_max=self.k_max, rhs_step=self.rhs_step,
        )
        fields.update(changes)
        return CertificateSet(**fields)

    def to_text(self) -> str:
        step = "zero" if self.rhs_step == "zero" else "2*(-q)^((n+1)^2)"
        return "\n".join([
            f"name: {self.name}",
            f"ratio_n: {to_text(self.ratio_n)}",
            f"ratio_k: {to_text(self.ratio_k)}",
            f"cert: {to_text(self.cert)}",
            f"k_min: {self.k_min}",
            f"k_max: {self.k_max}",
            f"rhs_step: {step}",
        ]) + "\n"


REQUIRED_FIELDS = ("name", "ratio_n", "ratio_k", "cert", "k_min", "k_max", "rhs_step")


def _blocks(src: str):
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(src.splitlines(), 1):
        if line.lstrip().startswith("#"):
            continue
        # '#' never occurs in an expression, so anything after it is a comment
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            if block:
                yield block
                block = []
            continue
        block.append((lineno, stripped))
    if block:
        yield block


def load_certificates(src: str) -> list[CertificateSet]:
    out: list[CertificateSet] = []
    seen = set()
    for block in _blocks(src):
        first = block[0][0]
        values: dict[str, tuple[int, str]] = {}
        for lineno, line in block:
            key, sep, value = line.partition(":")
            key = key.strip()
            if not sep:
                raise CertificateLoadError(f"line {lineno}: expected 'key: value'")
            if key not in REQUIRED_FIELDS:
                raise CertificateLoadError(f"line {lineno}: unknown field {key!r}")
            if key in values:
                raise CertificateLoadError(f"line {lineno}: field {key!r} given twice")
            values[key] = (lineno, value.strip())
        for key in REQUIRED_FIELDS:
            if key not in values:
                raise CertificateLoadError(
                    f"certificate block at line {first}: missing field {key!r}"
                )
        name = values["name"][1]
        if not name:
            raise CertificateLoadError(f"line {values['name'][0]}: empty name")
        if name in seen:
            raise CertificateLoadError(f"line {values['name'][0]}: duplicate name {name!r}")
        seen.add(name)

        exprs = {}
        for key in ("ratio_n", "ratio_k", "cert"):
            lineno, text = values[key]
            try:
                exprs[key] = parse(text)
                eval_rational(exprs[key])
            except (ParseError, EvalError) as exc:
                raise CertificateLoadError(f"line {lineno}: field {key!r}: {exc}") from exc
        bounds = {}
        for key in ("k_min", "k_max"):
            lineno, text = values[key]
            try:
                bounds[key] = parse_linear(text)
            except ValueError as exc:
                raise CertificateLoadError(f"line {lineno}: field {key!r}: {exc}") from exc
        lineno, text = values["rhs_step"]
        step = RHS_STEPS.get(re.sub(r"\s+", "", text))
        if step is None:
            raise CertificateLoadError(
                f"line {lineno}: field 'rhs_step' must be 'zero' or '2*(-q)^((n+1)^2)', got {text!r}"
            )
        out.append(CertificateSet(name=name, rhs_step=step, **exprs, **bounds))
    return out


def load_certificate_file(path) -> list[CertificateSet]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CertificateLoadError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise CertificateLoadError(f"{path} is not UTF-8: {exc}") from exc
    return load_certificates(text)


def bundled_certificate_path() -> Path:
    return Path(str(resources.files("wzjacobi") / "data" / "jacobi.cert"))


def bundled_certificates() -> list[CertificateSet]:
    return load_certificate_file(bundled_certificate_path())
