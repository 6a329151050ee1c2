"""Jet-level nilpotent reduction in coordinates ``(x1, ..., xn, z)``.

The last variable of the context is always ``z``. The pipeline reads off a
degree-one Loray form ``sum (a_i z + b_i) dx_i + (z + g) dz``, shifts ``z``
to clear ``g``, splits the result as ``w0 + z w1 + z dz`` and integrates
``w0``, ``w1`` to potentials ``f0``, ``f1``. Nothing here searches for a
normal form; :func:`verify_primitive` only checks a supplied factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotClosedError, ShapeError, ValidationError
from .forms import KForm, PolyMap, exterior_derivative, integrate_closed_1form, pullback
from .poly import Polynomial, VarContext


@dataclass(frozen=True)
class LorayNilpotentForm:
    n: int
    a: tuple[Polynomial, ...]
    b: tuple[Polynomial, ...]
    g: Polynomial

    def assemble(self) -> KForm:
        ctx = self.g.context
        z = Polynomial.var(ctx, ctx.count - 1)
        coeffs = [ai * z + bi for ai, bi in zip(self.a, self.b)] + [z + self.g]
        return KForm.one_form(ctx, coeffs)


@dataclass(frozen=True)
class NilpotentDecomposition:
    """Potentials ``f0``, ``f1`` in the x variables of ``context``."""

    f0: Polynomial
    f1: Polynomial
    context: VarContext

    def assemble(self) -> KForm:
        """``df0 - f1 dz + z dz`` in the full context."""
        return assemble_nilpotent(_lift(self.f0, self.context), _lift(self.f1, self.context))


def assemble_nilpotent(f0: Polynomial, f1: Polynomial) -> KForm:
    """``df0 - f1 dz + z dz``; ``f0``, ``f1`` are given in the full context."""
    ctx = f0.context
    zi = ctx.count - 1
    z = Polynomial.var(ctx, zi)
    return exterior_derivative(f0) + KForm.basis(ctx, zi).scale(z - f1)


def validate_loray(w: KForm) -> LorayNilpotentForm:
    if w.degree != 1:
        raise ShapeError("expected a 1-form")
    ctx = w.context
    if ctx.count < 2:
        raise ShapeError("need at least one x variable besides z")
    zi = ctx.count - 1
    coeffs = w.one_form_coefficients()
    a, b = [], []
    for i, c in enumerate(coeffs[:-1]):
        deg = c.degree_in(zi)
        if deg > 1:
            raise ShapeError(f"coefficient of d{ctx.names[i]} has degree {deg} in z",
                             witness=(ctx.names[i], c, deg))
        ai, bi = c.coeff_of_power(zi, 1), c.coeff_of_power(zi, 0)
        for name, part in (("a", ai), ("b", bi)):
            if part.constant_term:
                raise ShapeError(f"{name}_{i + 1} must vanish at the origin",
                                 witness=(ctx.names[i], c, deg))
        a.append(ai)
        b.append(bi)
    q = coeffs[-1]
    deg = q.degree_in(zi)
    g = q.coeff_of_power(zi, 0)
    if deg != 1 or q.coeff_of_power(zi, 1) != 1:
        raise ShapeError("dz coefficient must be z + g(x)", witness=(ctx.names[zi], q, deg))
    if g.constant_term:
        raise ShapeError("g must vanish at the origin", witness=(ctx.names[zi], q, deg))
    return LorayNilpotentForm(ctx.count - 1, tuple(a), tuple(b), g)


def shift_z(w: KForm, h: Polynomial) -> KForm:
    """Pull back along ``(x, z) -> (x, z - h(x))``."""
    ctx = w.context
    zi = ctx.count - 1
    if h.context != ctx:
        raise ValidationError("shift polynomial must live in the form's context")
    if h.involves(zi):
        raise ValidationError("shift polynomial must not involve z")
    if h.constant_term:
        raise ValidationError("shift polynomial must vanish at the origin")
    images = [Polynomial.var(ctx, i) for i in range(zi)] + [Polynomial.var(ctx, zi) - h]
    return pullback(PolyMap(ctx, ctx, tuple(images)), w)


def x_context(ctx: VarContext) -> VarContext:
    return VarContext(ctx.names[:-1])


def _drop_z(p: Polynomial, xctx: VarContext) -> Polynomial:
    return Polynomial(xctx, {e[:-1]: c for e, c in p.terms.items()})


def _lift(p: Polynomial, ctx: VarContext) -> Polynomial:
    return Polynomial(ctx, {e + (0,): c for e, c in p.terms.items()})


def decompose(w: KForm) -> tuple[KForm, KForm]:
    """Split ``w = w0 + z w1 + z dz``; ``w0``, ``w1`` live in the x variables."""
    if w.degree != 1:
        raise ShapeError("expected a 1-form")
    ctx = w.context
    zi = ctx.count - 1
    z = Polynomial.var(ctx, zi)
    coeffs = w.one_form_coefficients()
    if coeffs[-1] != z:
        raise ShapeError("dz coefficient must be exactly z (shift z first)",
                         witness=(ctx.names[zi], coeffs[-1], coeffs[-1].degree_in(zi)))
    xctx = x_context(ctx)
    c0, c1 = [], []
    for i, c in enumerate(coeffs[:-1]):
        deg = c.degree_in(zi)
        if deg > 1:
            raise ShapeError(f"residual z-dependence in d{ctx.names[i]}",
                             witness=(ctx.names[i], c, deg))
        c0.append(_drop_z(c.coeff_of_power(zi, 0), xctx))
        c1.append(_drop_z(c.coeff_of_power(zi, 1), xctx))
    return KForm.one_form(xctx, c0), KForm.one_form(xctx, c1)


def to_potentials(w0: KForm, w1: KForm) -> tuple[Polynomial, Polynomial]:
    out = []
    for name, w in (("w0", w0), ("w1", w1)):
        try:
            out.append(integrate_closed_1form(w))
        except NotClosedError as exc:
            raise NotClosedError(f"{name} is not closed", witness=(name,) + exc.witness) from None
    return out[0], out[1]


def dependence_check(f0: Polynomial, f1: Polynomial) -> bool:
    """``df0 ^ df1 == 0``."""
    if f0.context.count < 2:
        return True
    return exterior_derivative(f0).wedge(exterior_derivative(f1)).is_zero()


def verify_primitive(f: Polynomial, h0: Polynomial, h1: Polynomial,
                     f0: Polynomial, f1: Polynomial, jet: int) -> bool:
    """Check ``f_i = h_i(f)`` up to total degree ``jet``."""
    if f.constant_term:
        raise ValidationError("the primitive must vanish at the origin")
    for h, fi in ((h0, f0), (h1, f1)):
        if h.context.count != 1:
            raise ValidationError("h0 and h1 must be univariate")
        if (fi - h.substitute([f])).truncate(jet):
            return False
    return True


@dataclass(frozen=True)
class TakensResult:
    loray: LorayNilpotentForm
    shifted: KForm
    w0: KForm
    w1: KForm
    decomposition: NilpotentDecomposition
    dependent: bool


def run_pipeline(w: KForm) -> TakensResult:
    """validate -> shift -> decompose -> integrate, then the dependence test.

    The split forms ``w0``, ``w1`` are checked for closedness by the
    integrator rather than assumed closed.
    """
    loray = validate_loray(w)
    shifted = shift_z(w, loray.g)
    w0, w1 = decompose(shifted)
    f0, f1 = to_potentials(w0, w1)
    ctx = w.context
    decomposition = NilpotentDecomposition(f0, f1, ctx)
    return TakensResult(loray, shifted, w0, w1, decomposition, dependence_check(f0, f1))
