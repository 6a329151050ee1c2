"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable map from exponent vectors to nonzero
rational coefficients, tied to a :class:`VarContext` that fixes the variable
names and their order. Formal power series are handled as jets: the caller
truncates at a degree bound (``DEFAULT_JET`` unless told otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ContextMismatchError, ValidationError

MAX_VARIABLES = 12
DEFAULT_JET = 16

Exponent = tuple[int, ...]


def _normalize_coeff(c):
    """Return ``c`` as an int when integral, otherwise as a Fraction."""
    if isinstance(c, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"coefficient must be an exact rational, got {type(c).__name__}")


def grlex_key(exps: Exponent) -> tuple:
    """Sort key for the canonical term order: ascending total degree, then
    earlier variables first."""
    return (sum(exps), tuple(-e for e in exps))


@dataclass(frozen=True)
class VarContext:
    """Ordered tuple of distinct variable names."""

    names: tuple[str, ...]

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValidationError("a variable context needs at least one variable")
        if len(names) > MAX_VARIABLES:
            raise ValidationError(f"at most {MAX_VARIABLES} variables are supported")
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate variable names in {names}")
        for name in names:
            if not isinstance(name, str) or not name.isidentifier():
                raise ValidationError(f"invalid variable name {name!r}")
        object.__setattr__(self, "names", names)

    @property
    def count(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def index(self, var: int | str) -> int:
        """Resolve a variable given by name or 0-based position."""
        if isinstance(var, str):
            try:
                return self.names.index(var)
            except ValueError:
                raise ValidationError(f"unknown variable {var!r}") from None
        if isinstance(var, bool) or not isinstance(var, int) or not 0 <= var < len(self.names):
            raise ValidationError(f"variable index {var!r} out of range for {self.names}")
        return var

    def __repr__(self) -> str:
        return f"VarContext({' '.join(self.names)})"


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("context", "_terms", "_hash")

    def __init__(self, context: VarContext, terms: Mapping[Sequence[int], object] | None = None):
        self.context = context
        n = context.count
        clean: dict[Exponent, object] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise ValidationError(f"exponent {exps} has wrong length for {context}")
            if any(not isinstance(e, int) or e < 0 for e in exps):
                raise ValidationError(f"exponent {exps} must be nonnegative integers")
            c = _normalize_coeff(c)
            if exps in clean:
                c = _normalize_coeff(clean[exps] + c)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, context: VarContext, terms: dict) -> "Polynomial":
        # terms already validated, zero-free and normalized
        obj = cls.__new__(cls)
        obj.context = context
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, context: VarContext) -> "Polynomial":
        return cls._raw(context, {})

    @classmethod
    def constant(cls, context: VarContext, c) -> "Polynomial":
        c = _normalize_coeff(c)
        return cls._raw(context, {(0,) * context.count: c} if c else {})

    @classmethod
    def var(cls, context: VarContext, var: int | str) -> "Polynomial":
        i = context.index(var)
        exps = [0] * context.count
        exps[i] = 1
        return cls._raw(context, {tuple(exps): 1})

    @classmethod
    def monomial(cls, context: VarContext, exps: Sequence[int], c=1) -> "Polynomial":
        return cls(context, {tuple(exps): c})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, object]:
        """Terms in canonical order (a fresh dict)."""
        return {e: self._terms[e] for e in sorted(self._terms, key=grlex_key)}

    def items(self) -> Iterator[tuple[Exponent, object]]:
        for e in sorted(self._terms, key=grlex_key):
            yield e, self._terms[e]

    def coefficient(self, exps: Sequence[int]):
        return self._terms.get(tuple(exps), 0)

    def support(self) -> frozenset[Exponent]:
        return frozenset(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def constant_term(self):
        return self._terms.get((0,) * self.context.count, 0)

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: int | str) -> int:
        i = self.context.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def coeff_of_power(self, var: int | str, k: int) -> "Polynomial":
        """Coefficient of ``var**k`` as a polynomial not involving ``var``."""
        i = self.context.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return Polynomial._raw(self.context, out)

    def involves(self, var: int | str) -> bool:
        i = self.context.index(var)
        return any(e[i] for e in self._terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.context != self.context:
                raise ContextMismatchError(
                    f"context mismatch: {self.context} vs {other.context}")
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return Polynomial.constant(self.context, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _normalize_coeff(v)
            else:
                out.pop(e, None)
        return Polynomial._raw(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.context, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(
            self.context, {e: _normalize_coeff(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.context, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = _normalize_coeff(c)
        if not c:
            return Polynomial.zero(self.context)
        return Polynomial._raw(
            self.context, {e: _normalize_coeff(v * c) for e, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.context == other.context and self._terms == other._terms
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self == Polynomial.constant(self.context, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.context, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .textio import print_polynomial
        return f"Polynomial({print_polynomial(self)!r}, vars={' '.join(self.context.names)})"

    # -- calculus and structure -------------------------------------------

    def diff(self, var: int | str) -> "Polynomial":
        i = self.context.index(var)
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Polynomial._raw(self.context, out)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable ``k`` by ``images[k]``."""
        images = list(images)
        if len(images) != self.context.count:
            raise ValidationError(
                f"need {self.context.count} images, got {len(images)}")
        target = images[0].context
        if any(im.context != target for im in images):
            raise ContextMismatchError("substitution images must share one context")
        # cache powers per variable
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(target, 1)} for _ in images]

        def power(k: int, e: int) -> Polynomial:
            cache = powers[k]
            if e not in cache:
                low = max(x for x in cache if x < e)
                cache[e] = power(k, low) * images[k] ** (e - low)
            return cache[e]

        acc: dict[Exponent, object] = {}
        for e, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for k, ek in enumerate(e):
                if ek:
                    term = term * power(k, ek)
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
        return Polynomial._raw(target, {e: _normalize_coeff(c) for e, c in acc.items() if c})

    def evaluate(self, point: Sequence) -> object:
        point = [_normalize_coeff(x) for x in point]
        if len(point) != self.context.count:
            raise ValidationError(
                f"point has {len(point)} coordinates, context has {self.context.count}")
        total = 0
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total += v
        return _normalize_coeff(total)

    def mult0(self):
        """Order at the origin: least total degree of a term, ``inf`` for 0."""
        return min((sum(e) for e in self._terms), default=math.inf)

    def weighted_order(self, weights: Sequence[int]):
        weights = tuple(weights)
        if len(weights) != self.context.count:
            raise ValidationError("weight vector length must match variable count")
        if any(isinstance(w, bool) or not isinstance(w, int) or w < 1 for w in weights):
            raise ValidationError(f"weights must be positive integers, got {weights}")
        return min((sum(w * k for w, k in zip(weights, e)) for e in self._terms),
                   default=math.inf)

    def truncate(self, degree: int) -> "Polynomial":
        if degree < 0:
            raise ValidationError("truncation degree must be nonnegative")
        return Polynomial._raw(
            self.context, {e: c for e, c in self._terms.items() if sum(e) <= degree})

    def leading_term(self) -> tuple[Exponent, object]:
        """Largest term in graded order (highest degree, then x1 > x2 > ...)."""
        e = max(self._terms, key=lambda e: (sum(e), e))
        return e, self._terms[e]

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Division by a single polynomial; zero remainder iff exact."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e, lead_c = divisor.leading_term()
        quotient: dict[Exponent, object] = {}
        remainder: dict[Exponent, object] = {}
        p = self
        while p:
            e, c = p.leading_term()
            if all(a >= b for a, b in zip(e, lead_e)):
                qe = tuple(a - b for a, b in zip(e, lead_e))
                qc = _normalize_coeff(Fraction(c) / lead_c)
                quotient[qe] = _normalize_coeff(quotient.get(qe, 0) + qc)
                p = p - divisor * Polynomial._raw(self.context, {qe: qc})
            else:
                remainder[e] = c
                p = p - Polynomial._raw(self.context, {e: c})
        return (Polynomial(self.context, quotient), Polynomial(self.context, remainder))

    def divides(self, other: "Polynomial") -> bool:
        return other.divmod(self)[1].is_zero()


# Function forms of the core operations.

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    if not isinstance(q, Polynomial) or p.context != q.context:
        raise ContextMismatchError("add: operands must share a context")
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if not isinstance(q, Polynomial) or p.context != q.context:
        raise ContextMismatchError("mul: operands must share a context")
    return p * q


def partial_derivative(p: Polynomial, var: int | str) -> Polynomial:
    return p.diff(var)


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    return p.substitute(images)


def mult0(p: Polynomial):
    return p.mult0()


def weighted_order(p: Polynomial, weights: Sequence[int]):
    return p.weighted_order(weights)


def truncate(p: Polynomial, degree: int) -> Polynomial:
    return p.truncate(degree)


def variables(context: VarContext) -> list[Polynomial]:
    """All coordinate functions of ``context``, in order."""
    return [Polynomial.var(context, i) for i in range(context.count)]
