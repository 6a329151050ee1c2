"""Text grammar for polynomials, forms and models; JSON for reports.

Polynomials::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := coeff ['*' factor ('*' factor)*] | factor ('*' factor)*
    factor := var ['^' nat]
    coeff  := int ['/' nat]

Forms are ``(<poly>) d<var>`` terms (the parenthesized coefficient may be
omitted), with wedge bases written ``dx1^dz``. A document may begin with a
``vars: x1 x2 z`` header line.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import NilfolError, ValidationError
from .forms import KForm, from_coefficients
from .poly import Polynomial, VarContext


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets ``[start, end)`` into the UTF-8 encoded input."""

    start: int
    end: int


class ParseError(NilfolError, ValueError):
    def __init__(self, message: str, span: SourceSpan, expected: Iterable[str] = ()):
        self.message = message
        self.span = span
        self.expected = frozenset(expected)
        detail = f" (expected {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at bytes {span.start}-{span.end}{detail}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT IDENT OP EOF
    text: str
    start: int
    end: int


_OPS = set("+-*/^()")
MAX_DIGITS = 1000


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8", "surrogatepass"))


class _Lexer:
    def __init__(self, text: str, start: int = 0, stop: int | None = None):
        self.text = text
        self.stop = len(text) if stop is None else stop
        self.tokens = self._scan(start)

    def span(self, a: int, b: int) -> SourceSpan:
        return SourceSpan(_byte_offset(self.text, a), _byte_offset(self.text, b))

    def _scan(self, i: int) -> list[Token]:
        text, stop = self.text, self.stop
        out = []
        while i < stop:
            ch = text[i]
            if ch in " \t\r\n":
                i += 1
            elif ch.isascii() and ch.isdigit():
                j = i
                while j < stop and text[j].isascii() and text[j].isdigit():
                    j += 1
                if j - i > MAX_DIGITS:
                    raise ParseError("integer literal too long", self.span(i, j))
                out.append(Token("INT", text[i:j], i, j))
                i = j
            elif ch.isascii() and (ch.isalpha() or ch == "_"):
                j = i
                while j < stop and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                out.append(Token("IDENT", text[i:j], i, j))
                i = j
            elif ch in _OPS:
                out.append(Token("OP", ch, i, i + 1))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", self.span(i, i + 1),
                                 {"number", "variable", "operator"})
        out.append(Token("EOF", "", stop, stop))
        return out


class _Parser:
    def __init__(self, text: str, context: VarContext, start: int = 0):
        self.lexer = _Lexer(text, start)
        self.tokens = self.lexer.tokens
        self.pos = 0
        self.context = context

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def error(self, message: str, tok: Token, expected=()) -> ParseError:
        end = tok.end if tok.end > tok.start else tok.start
        return ParseError(message, self.lexer.span(tok.start, end), expected)

    def is_op(self, ch: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == ch

    def expect_end(self, expected):
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r}", self.tok, expected)

    # -- polynomials --

    def polynomial(self) -> Polynomial:
        ctx = self.context
        total = Polynomial.zero(ctx)
        sign = 1
        if self.is_op("+") or self.is_op("-"):
            sign = -1 if self.advance().text == "-" else 1
        while True:
            total = total + self.term().scale(sign)
            if self.is_op("+") or self.is_op("-"):
                sign = -1 if self.advance().text == "-" else 1
                continue
            break
        return total

    def term(self) -> Polynomial:
        ctx = self.context
        tok = self.tok
        if tok.kind == "INT":
            coeff = self.coefficient()
            if not self.is_op("*"):
                return Polynomial.constant(ctx, coeff)
            self.advance()
            exps = self.factor([0] * ctx.count)
        elif tok.kind == "IDENT":
            coeff = 1
            exps = self.factor([0] * ctx.count)
        else:
            raise self.error("expected a term", tok, {"number", "variable"})
        while self.is_op("*"):
            self.advance()
            exps = self.factor(exps)
        return Polynomial.monomial(ctx, exps, coeff)

    def coefficient(self):
        num = self.advance()
        value = int(num.text)
        if self.is_op("/"):
            self.advance()
            den = self.tok
            if den.kind != "INT":
                raise self.error("expected a denominator", den, {"natural number"})
            self.advance()
            if int(den.text) == 0:
                raise ParseError("division by zero in coefficient",
                                 self.lexer.span(num.start, den.end))
            return Fraction(value, int(den.text))
        return value

    def factor(self, exps: list[int]) -> list[int]:
        tok = self.tok
        if tok.kind != "IDENT":
            raise self.error("expected a variable", tok, {"variable"})
        if tok.text not in self.context.names:
            raise self.error(f"unknown variable {tok.text!r}", tok, set(self.context.names))
        self.advance()
        k = 1
        if self.is_op("^"):
            self.advance()
            e = self.tok
            if e.kind != "INT":
                raise self.error("malformed exponent", e, {"natural number"})
            self.advance()
            k = int(e.text)
        exps = list(exps)
        exps[self.context.names.index(tok.text)] += k
        return exps

    # -- forms --

    def basis(self) -> list[int]:
        idx = []
        while True:
            tok = self.tok
            name = tok.text[1:] if tok.kind == "IDENT" and tok.text.startswith("d") else None
            if name is None or name not in self.context.names:
                raise self.error("expected a basis covector", tok,
                                 {"d" + v for v in self.context.names})
            i = self.context.names.index(name)
            if i in idx:
                raise self.error(f"repeated covector d{name} in wedge", tok)
            idx.append(i)
            self.advance()
            if not self.is_op("^"):
                return idx
            self.advance()

    def form(self, degree: int | None) -> KForm:
        ctx = self.context
        if self.tok.kind == "INT" and self.tok.text.strip("0") == "" and \
                self.tokens[self.pos + 1].kind == "EOF":
            self.advance()
            return KForm.zero(ctx, 1 if degree is None else degree)
        items = []
        sign = 1
        if self.is_op("+") or self.is_op("-"):
            sign = -1 if self.advance().text == "-" else 1
        while True:
            first = self.tok
            if self.is_op("("):
                self.advance()
                coeff = self.polynomial()
                if not self.is_op(")"):
                    raise self.error("expected ')'", self.tok, {")", "+", "-", "*"})
                self.advance()
            else:
                coeff = Polynomial.constant(ctx, 1)
            # functions print as "(p)"; read them back only when asked for
            idx = [] if degree == 0 and first.text == "(" else self.basis()
            if degree is None:
                degree = len(idx)
            elif len(idx) != degree:
                span = self.lexer.span(first.start, self.tokens[self.pos - 1].end)
                raise ParseError(f"mixed degrees: got a {len(idx)}-form term in a "
                                 f"{degree}-form", span)
            items.append((idx, coeff.scale(sign)))
            if self.is_op("+") or self.is_op("-"):
                sign = -1 if self.advance().text == "-" else 1
                continue
            break
        self.expect_end({"+", "-"})
        return from_coefficients(ctx, items, degree)


def decode_input(data: bytes) -> str:
    """UTF-8 decode with a span on failure."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("input is not valid UTF-8", SourceSpan(exc.start, exc.end)) from None


def parse_polynomial(text: str, context: VarContext, start: int = 0) -> Polynomial:
    parser = _Parser(text, context, start)
    p = parser.polynomial()
    parser.expect_end({"+", "-", "*"})
    return p


def parse_form(text: str, context: VarContext, degree: int | None = None,
               start: int = 0) -> KForm:
    return _Parser(text, context, start).form(degree)


def split_header(text: str) -> tuple[VarContext | None, int]:
    """Read an optional ``vars:`` header; return it and the body offset."""
    i = 0
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    if not text.startswith("vars:", i):
        return None, 0
    end = text.find("\n", i)
    end = len(text) if end < 0 else end
    names = text[i + 5:end].split()
    try:
        ctx = VarContext(names)
    except ValidationError as exc:
        raise ParseError(f"bad vars header: {exc}",
                         SourceSpan(_byte_offset(text, i), _byte_offset(text, end))) from None
    return ctx, end


def parse_form_document(text: str, context: VarContext | None = None,
                        degree: int | None = None) -> KForm:
    header, offset = split_header(text)
    ctx = header or context
    if ctx is None:
        raise ParseError("no variables declared (add a 'vars:' header)", SourceSpan(0, 0),
                         {"vars:"})
    return parse_form(text, ctx, degree, start=offset)


def parse_polynomial_document(text: str, context: VarContext | None = None) -> Polynomial:
    header, offset = split_header(text)
    ctx = header or context
    if ctx is None:
        raise ParseError("no variables declared (add a 'vars:' header)", SourceSpan(0, 0),
                         {"vars:"})
    return parse_polynomial(text, ctx, start=offset)


# -- printing ---------------------------------------------------------------


def _coeff_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial_text(exps, names) -> str:
    parts = []
    for name, k in zip(names, exps):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def print_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    out = []
    for n, (exps, c) in enumerate(p.items()):
        neg = c < 0
        mag = -c if neg else c
        mono = _monomial_text(exps, p.context.names)
        if not mono:
            body = _coeff_text(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_text(mag)}*{mono}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"{'-' if neg else '+'} {body}")
    return " ".join(out)


def print_form(w: KForm) -> str:
    if w.is_zero():
        return "0"
    names = w.context.names
    out = []
    for n, (idx, c) in enumerate(w.coeffs.items()):
        lead = next(iter(c.items()))[1]
        neg = lead < 0
        mag = -c if neg else c
        basis = "^".join("d" + names[i] for i in idx)
        if w.degree == 0:
            body = f"({print_polynomial(mag)})"
        elif mag == 1:
            body = basis
        else:
            body = f"({print_polynomial(mag)}) {basis}"
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"{'-' if neg else '+'} {body}")
    return " ".join(out)


def print_document(w: KForm) -> str:
    return f"vars: {' '.join(w.context.names)}\n{print_form(w)}\n"


# -- models -----------------------------------------------------------------


def _json_error(text: str, exc: json.JSONDecodeError) -> ParseError:
    start = _byte_offset(text, exc.pos)
    return ParseError(f"invalid JSON: {exc.msg}", SourceSpan(start, start))


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _json_error(text, exc) from None


def _int_field(data, key):
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"model field {key!r} must be an integer")
    return value


def _field_polynomial(data, key, context):
    """Parse a polynomial field; spans are offsets into the field string."""
    text = data[key]
    if not isinstance(text, str):
        raise ValidationError(f"model field {key!r} must be a string")
    try:
        return parse_polynomial(text, context)
    except ParseError as exc:
        raise ParseError(f"in model field {key!r}: {exc.message}", exc.span,
                         exc.expected) from None


def model_from_dict(data, signs=None):
    """Build a quasi-ordinary (``P``) or general (``f``) model.

    ``signs`` overrides the model's own ``signs`` field when given.
    """
    from .sigma import G_CONTEXT, GeneralCuspidalModel, QuasiOrdinaryModel, ambient_context

    if not isinstance(data, dict):
        raise ValidationError("a model must be a JSON object")
    allowed = {"n", "s", "P", "f", "g", "signs"}
    extra = sorted(set(data) - allowed)
    if extra:
        raise ValidationError(f"unknown model fields: {', '.join(extra)}")
    n = _int_field(data, "n")
    s = _int_field(data, "s")
    g = _field_polynomial(data, "g", G_CONTEXT) if "g" in data else \
        Polynomial.zero(G_CONTEXT)
    mode = signs if signs is not None else data.get("signs", "invariant")
    if ("P" in data) == ("f" in data):
        raise ValidationError("a model needs exactly one of 'P' or 'f'")
    if "P" in data:
        P = data["P"]
        if not isinstance(P, list) or any(isinstance(p, bool) or not isinstance(p, int) for p in P):
            raise ValidationError("model field 'P' must be a list of integers")
        return QuasiOrdinaryModel(n, s, tuple(P), g, mode)
    if n < 1 or n > 11:
        raise ValidationError(f"n must be between 1 and 11, got {n}")
    f = _field_polynomial(data, "f", ambient_context(n))
    return GeneralCuspidalModel(n, s, f, g, mode)


def parse_model(text: str, signs=None):
    return model_from_dict(load_json(text), signs)


def model_to_dict(m) -> dict:
    from .sigma import QuasiOrdinaryModel

    out = {"n": m.n, "s": m.s}
    if isinstance(m, QuasiOrdinaryModel):
        out["P"] = list(m.P)
    else:
        out["f"] = print_polynomial(m.f)
    out["g"] = print_polynomial(m.g)
    out["signs"] = m.signs.value
    return out


# -- reports ----------------------------------------------------------------

REPORT_KEYS = ("n", "s", "P", "weighted_order", "threshold", "newton_equal", "termwise_ok",
               "verdict", "omega_support", "omega_vertices", "separatrix_vertices")


def order_value(x):
    return "inf" if x == math.inf else x


def report_to_dict(r) -> dict:
    return {
        "n": r.n,
        "s": r.s,
        "P": list(r.P),
        "weighted_order": order_value(r.weighted_order),
        "threshold": r.threshold,
        "newton_equal": r.newton_equal,
        "termwise_ok": r.termwise_ok,
        "verdict": r.verdict.value,
        "omega_support": [list(p) for p in r.omega_support],
        "omega_vertices": [list(p) for p in r.omega_vertices],
        "separatrix_vertices": [list(p) for p in r.separatrix_vertices],
    }


def dumps(data, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(data, indent=2, ensure_ascii=False)
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False)


def report_to_json(r, pretty: bool = False) -> str:
    return dumps(report_to_dict(r), pretty)


def report_from_json(text: str):
    from .sigma import ClassificationReport, Verdict

    data = load_json(text)
    if not isinstance(data, dict) or tuple(data) != REPORT_KEYS:
        raise ValidationError("not a classification report")
    order = data["weighted_order"]
    return ClassificationReport(
        n=data["n"], s=data["s"], P=tuple(data["P"]),
        weighted_order=math.inf if order == "inf" else order,
        threshold=data["threshold"],
        newton_equal=data["newton_equal"],
        termwise_ok=data["termwise_ok"],
        verdict=Verdict(data["verdict"]),
        omega_support=tuple(tuple(p) for p in data["omega_support"]),
        omega_vertices=tuple(tuple(p) for p in data["omega_vertices"]),
        separatrix_vertices=tuple(tuple(p) for p in data["separatrix_vertices"]),
    )
