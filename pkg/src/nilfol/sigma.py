"""The cuspidal family ``w = d(z^2 - f^s) + g(f, z) (s z df -+ 2 f dz)``.

Variables are ``x1 .. xn, z``; ``g`` is a polynomial in ``(t, z)``. Two sign
conventions are supported:

``invariant``
    ``s z df - 2 f dz``: the cusp ``z^2 - f^s`` is an exact separatrix,
    ``w ^ dF = 2 s g(f, z) F df ^ dz``.
``paper``
    the plus-sign variant ``s z df + 2 f dz``, reported with separatrix
    ``z^2 + f^s``. Supports, hence every classification output, agree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .forms import KForm, PolyMap, exterior_derivative, pullback, support_of_1form
from .newton import SupportSet, newton_of_1form, newton_of_polynomial, polyhedra_equal
from .poly import Polynomial, VarContext

G_CONTEXT = VarContext(("t", "z"))
SECTION_CONTEXT = VarContext(("u", "v"))


class Signs(str, Enum):
    INVARIANT = "invariant"
    PAPER = "paper"

    @classmethod
    def parse(cls, value) -> "Signs":
        if isinstance(value, Signs):
            return value
        aliases = {"invariant": cls.INVARIANT, "paper": cls.PAPER, "paper-literal": cls.PAPER}
        try:
            return aliases[value]
        except (KeyError, TypeError):
            raise ValidationError(f"unknown sign convention {value!r}") from None


class Verdict(str, Enum):
    GENERALIZED_SURFACE = "generalized_surface"
    NOT_GENERALIZED_SURFACE = "not_generalized_surface"
    NECESSARY_CONDITION_HOLDS = "necessary_condition_holds"
    NOT_GENERALIZED_HYPERSURFACE = "not_generalized_hypersurface"


def ambient_context(n: int) -> VarContext:
    return VarContext([f"x{i}" for i in range(1, n + 1)] + ["z"])


def _check_common(n, s, g):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if isinstance(s, bool) or not isinstance(s, int) or s < 3:
        raise ValidationError(f"s must be an integer >= 3, got {s!r}")
    if not isinstance(g, Polynomial) or g.context != G_CONTEXT:
        raise ValidationError("g must be a polynomial in (t, z)")
    if g.constant_term:
        raise ValidationError("g must vanish at the origin (no constant term)")


@dataclass(frozen=True)
class QuasiOrdinaryModel:
    """Member of the family with ``f = x1^p1 ... xn^pn``."""

    n: int
    s: int
    P: tuple[int, ...]
    g: Polynomial
    signs: Signs = Signs.INVARIANT

    def __post_init__(self):
        object.__setattr__(self, "P", tuple(self.P))
        object.__setattr__(self, "signs", Signs.parse(self.signs))
        _check_common(self.n, self.s, self.g)
        if self.n < 2:
            raise ValidationError("quasi-ordinary models need n >= 2")
        if len(self.P) != self.n:
            raise ValidationError(f"P must have {self.n} entries, got {len(self.P)}")
        if any(isinstance(p, bool) or not isinstance(p, int) or p < 1 for p in self.P):
            raise ValidationError(f"entries of P must be integers >= 1, got {self.P}")

    @property
    def context(self) -> VarContext:
        return ambient_context(self.n)

    @property
    def f(self) -> Polynomial:
        return Polynomial.monomial(self.context, self.P + (0,))

    @property
    def weight(self) -> int:
        """``|P|``."""
        return sum(self.P)


@dataclass(frozen=True)
class GeneralCuspidalModel:
    """Member of the family with an arbitrary ``f(x)``, ``f(0) = 0``."""

    n: int
    s: int
    f: Polynomial
    g: Polynomial
    signs: Signs = Signs.INVARIANT

    def __post_init__(self):
        object.__setattr__(self, "signs", Signs.parse(self.signs))
        _check_common(self.n, self.s, self.g)
        if not isinstance(self.f, Polynomial) or self.f.context != ambient_context(self.n):
            raise ValidationError("f must be a polynomial in x1..xn, z")
        if self.f.involves(self.n):
            raise ValidationError("f must not involve z")
        if self.f.is_zero() or self.f.constant_term:
            raise ValidationError("f must be nonzero and vanish at the origin")

    @property
    def context(self) -> VarContext:
        return ambient_context(self.n)


Model = QuasiOrdinaryModel | GeneralCuspidalModel


def _g_of(m: Model) -> Polynomial:
    """``g(f(x), z)`` in the ambient context."""
    ctx = m.context
    return m.g.substitute([m.f, Polynomial.var(ctx, ctx.count - 1)])


def log_vector_field_form(m: Model) -> KForm:
    """``s z df - 2 f dz``, or ``s z df + 2 f dz`` in the plus-sign mode."""
    ctx = m.context
    zi = ctx.count - 1
    z = Polynomial.var(ctx, zi)
    df = exterior_derivative(m.f)
    two_f = m.f.scale(2 if m.signs is Signs.PAPER else -2)
    return df.scale(z.scale(m.s)) + KForm.basis(ctx, zi).scale(two_f)


def cusp(m: Model) -> Polynomial:
    """``z^2 - f^s``, the function differentiated in the model."""
    z = Polynomial.var(m.context, m.context.count - 1)
    return z * z - m.f ** m.s


def build_omega(m: Model) -> KForm:
    return exterior_derivative(cusp(m)) + log_vector_field_form(m).scale(_g_of(m))


def separatrix(m: Model) -> Polynomial:
    z = Polynomial.var(m.context, m.context.count - 1)
    if m.signs is Signs.PAPER:
        return z * z + m.f ** m.s
    return cusp(m)


def weighted_order_g(m: Model):
    return m.g.weighted_order((2, m.s))


def threshold(m: Model) -> int:
    return m.s - 2


def transversal_section(m: QuasiOrdinaryModel, c: Sequence | None = None) -> PolyMap:
    """``(u, v) -> (c1 u, ..., cn u, v)``; all ``c_i = 1`` by default."""
    if c is None:
        c = [1] * m.n
    c = [Fraction(ci) for ci in c]
    if len(c) != m.n:
        raise ValidationError(f"section needs {m.n} scalars, got {len(c)}")
    if any(ci == 0 for ci in c):
        raise ValidationError("section scalars must be nonzero")
    u = Polynomial.var(SECTION_CONTEXT, 0)
    v = Polynomial.var(SECTION_CONTEXT, 1)
    return PolyMap(SECTION_CONTEXT, m.context, tuple([u.scale(ci) for ci in c] + [v]))


def pullback_to_section(m: QuasiOrdinaryModel, c: Sequence | None = None) -> KForm:
    return pullback(transversal_section(m, c), build_omega(m))


def delta_of_section(m: QuasiOrdinaryModel) -> Polynomial:
    """``u^(|P|-1) g(u^|P|, v)``, computed termwise."""
    w = m.weight
    out = {}
    for (i, j), c in m.g.terms.items():
        out[(w * (i + 1) - 1, j)] = c
    return Polynomial(SECTION_CONTEXT, out)


def section_form(m: QuasiOrdinaryModel) -> KForm:
    """``d(v^2 - u^q) + Delta (q v du -+ 2 u dv)`` with ``q = s|P|``."""
    q = m.s * m.weight
    u = Polynomial.var(SECTION_CONTEXT, 0)
    v = Polynomial.var(SECTION_CONTEXT, 1)
    two = 2 if m.signs is Signs.PAPER else -2
    field = KForm.one_form(SECTION_CONTEXT, [v.scale(q), u.scale(two)])
    return exterior_derivative(v * v - u ** q) + field.scale(delta_of_section(m))


def ord_identity(m: QuasiOrdinaryModel) -> tuple:
    """Both sides of ``ord_{q,2}(Delta) = |P| ord_{s,2}(g) + 2|P| - 2``."""
    w = m.weight
    lhs = delta_of_section(m).weighted_order((2, m.s * w))
    order = weighted_order_g(m)
    rhs = math.inf if order == math.inf else w * order + 2 * w - 2
    return lhs, rhs


def ord_identity_check(m: QuasiOrdinaryModel) -> bool:
    lhs, rhs = ord_identity(m)
    if m.g.is_zero():
        warnings.warn("g = 0: both sides of the order identity are infinite", stacklevel=2)
        return True
    return lhs == rhs


def support_enumeration(m: QuasiOrdinaryModel) -> SupportSet:
    """Closed-form support of the model form for ``n = 2``."""
    if m.n != 2:
        raise ValidationError("support enumeration is stated for n = 2")
    p, q = m.P
    s = m.s
    pts = {(0, 0, 2), (s * p, s * q, 0)}
    for (i, j) in m.g.support():
        pts.add(((i + 1) * p, (i + 1) * q, j + 1))
    return SupportSet(3, pts)


def termwise_ok(m: Model) -> bool:
    return all(2 * i + m.s * j >= m.s - 2 for (i, j) in m.g.support())


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    s: int
    P: tuple[int, ...]
    weighted_order: object
    threshold: int
    newton_equal: bool
    termwise_ok: bool
    verdict: Verdict
    omega_support: tuple[tuple[int, ...], ...]
    omega_vertices: tuple[tuple[int, ...], ...]
    separatrix_vertices: tuple[tuple[int, ...], ...]

    @property
    def order_ok(self) -> bool:
        return self.weighted_order >= self.threshold

    @property
    def consistent(self) -> bool:
        return self.order_ok == self.termwise_ok == self.newton_equal


def verdict_for(n: int, order, bound: int) -> Verdict:
    if order >= bound:
        return Verdict.GENERALIZED_SURFACE if n == 2 else Verdict.NECESSARY_CONDITION_HOLDS
    return Verdict.NOT_GENERALIZED_SURFACE if n == 2 else Verdict.NOT_GENERALIZED_HYPERSURFACE


def classify(m: QuasiOrdinaryModel) -> ClassificationReport:
    if not isinstance(m, QuasiOrdinaryModel):
        raise ValidationError("classification is defined for quasi-ordinary models")
    omega = build_omega(m)
    support = support_of_1form(omega)
    n_omega = newton_of_1form(omega)
    n_sep = newton_of_polynomial(separatrix(m))
    order = weighted_order_g(m)
    bound = threshold(m)
    return ClassificationReport(
        n=m.n, s=m.s, P=m.P,
        weighted_order=order,
        threshold=bound,
        newton_equal=polyhedra_equal(n_omega, n_sep),
        termwise_ok=termwise_ok(m),
        verdict=verdict_for(m.n, order, bound),
        omega_support=support.points,
        omega_vertices=n_omega.vertices,
        separatrix_vertices=n_sep.vertices,
    )
