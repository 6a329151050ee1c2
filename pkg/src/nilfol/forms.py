"""Differential forms with polynomial coefficients.

A k-form is stored as a map from strictly increasing index tuples
``(i1 < ... < ik)`` to nonzero :class:`~nilfol.poly.Polynomial` coefficients,
so ``{(0, 2): p}`` is ``p dx0^dx2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import ContextMismatchError, DegreeError, NotClosedError, ValidationError
from .poly import Polynomial, VarContext, _normalize_coeff

Basis = tuple[int, ...]


def _parity(idx: Sequence[int]) -> int:
    return sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b]) % 2


def _merge_sign(a: Basis, b: Basis) -> tuple[int, Basis | None]:
    """Sign and sorted index tuple of ``dx_a ^ dx_b``; ``(0, None)`` on overlap."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for i in a for j in b if i > j)
    return (-1) ** inversions, tuple(sorted(a + b))


class KForm:
    """Immutable differential k-form."""

    __slots__ = ("context", "degree", "_coeffs")

    def __init__(self, context: VarContext, degree: int,
                 coeffs: Mapping[Sequence[int], Polynomial] | None = None):
        if isinstance(degree, bool) or not isinstance(degree, int) or degree < 0:
            raise DegreeError(f"invalid form degree {degree!r}")
        self.context = context
        self.degree = degree
        clean: dict[Basis, Polynomial] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise DegreeError(f"basis {idx} does not have degree {degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValidationError(f"basis {idx} is not strictly increasing")
            if any(i < 0 or i >= context.count for i in idx):
                raise ValidationError(f"basis {idx} out of range for {context}")
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(context, c)
            if c.context != context:
                raise ContextMismatchError("coefficient context differs from form context")
            if idx in clean:
                c = clean[idx] + c
            if c:
                clean[idx] = c
            else:
                clean.pop(idx, None)
        self._coeffs = clean

    @classmethod
    def _raw(cls, context, degree, coeffs):
        obj = cls.__new__(cls)
        obj.context = context
        obj.degree = degree
        obj._coeffs = coeffs
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, context: VarContext, degree: int) -> "KForm":
        return cls(context, degree)

    @classmethod
    def function(cls, p: Polynomial) -> "KForm":
        """The 0-form with value ``p``."""
        return cls(p.context, 0, {(): p})

    @classmethod
    def basis(cls, context: VarContext, *variables: int | str) -> "KForm":
        """``dx_a ^ dx_b ^ ...``; repeated covectors give the zero form."""
        idx = [context.index(v) for v in variables]
        form = cls(context, 0, {(): Polynomial.constant(context, 1)})
        for i in idx:
            form = form.wedge(cls._raw(context, 1, {(i,): Polynomial.constant(context, 1)}))
        return form

    @classmethod
    def one_form(cls, context: VarContext, coefficients: Sequence[Polynomial]) -> "KForm":
        """``sum_i coefficients[i] dx_i``."""
        if len(coefficients) != context.count:
            raise ValidationError("one coefficient per variable is required")
        return cls(context, 1, {(i,): c for i, c in enumerate(coefficients)})

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> dict[Basis, Polynomial]:
        return {k: self._coeffs[k] for k in sorted(self._coeffs)}

    def coefficient(self, *variables: int | str) -> Polynomial:
        """Coefficient of ``dx_a ^ dx_b ^ ...`` in any index order."""
        idx = tuple(self.context.index(v) for v in variables)
        if len(set(idx)) != len(idx):
            return Polynomial.zero(self.context)
        c = self._coeffs.get(tuple(sorted(idx)), Polynomial.zero(self.context))
        return -c if _parity(idx) else c

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def as_polynomial(self) -> Polynomial:
        if self.degree != 0:
            raise DegreeError("only 0-forms convert to polynomials")
        return self._coeffs.get((), Polynomial.zero(self.context))

    def one_form_coefficients(self) -> list[Polynomial]:
        """Coefficient of each ``dx_i`` of a 1-form, in variable order."""
        if self.degree != 1:
            raise DegreeError("expected a 1-form")
        zero = Polynomial.zero(self.context)
        return [self._coeffs.get((i,), zero) for i in range(self.context.count)]

    # -- algebra ----------------------------------------------------------

    def _check(self, other: "KForm"):
        if not isinstance(other, KForm):
            return NotImplemented
        if other.context != self.context:
            raise ContextMismatchError("forms live over different contexts")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeError(f"cannot add a {self.degree}-form and a {other.degree}-form")
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return KForm._raw(self.context, self.degree, out)

    def __neg__(self):
        return KForm._raw(self.context, self.degree, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, p) -> "KForm":
        """Multiply every coefficient by a polynomial or rational."""
        if not isinstance(p, Polynomial):
            p = Polynomial.constant(self.context, _normalize_coeff(p))
        if p.context != self.context:
            raise ContextMismatchError("scaling polynomial lives over another context")
        out = {}
        for k, c in self._coeffs.items():
            v = c * p
            if v:
                out[k] = v
        return KForm._raw(self.context, self.degree, out)

    def __mul__(self, other):
        if isinstance(other, KForm):
            return NotImplemented
        return self.scale(other)

    __rmul__ = __mul__

    def wedge(self, other: "KForm") -> "KForm":
        if self._check(other) is NotImplemented:
            raise TypeError("wedge expects a KForm")
        out: dict[Basis, Polynomial] = {}
        for a, ca in self._coeffs.items():
            for b, cb in other._coeffs.items():
                sign, key = _merge_sign(a, b)
                if not sign:
                    continue
                term = ca * cb
                if sign < 0:
                    term = -term
                out[key] = out[key] + term if key in out else term
        return KForm._raw(self.context, self.degree + other.degree,
                          {k: v for k, v in out.items() if v})

    def __xor__(self, other):
        return self.wedge(other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.context == other.context and self.degree == other.degree
                and self._coeffs == other._coeffs)

    def __hash__(self):
        return hash((self.context, self.degree, frozenset(self._coeffs.items())))

    def __repr__(self):
        from .textio import print_form
        return f"KForm({print_form(self)!r}, vars={' '.join(self.context.names)})"

    # -- calculus ---------------------------------------------------------

    def d(self) -> "KForm":
        return exterior_derivative(self)

    def pullback(self, phi: "PolyMap") -> "KForm":
        return pullback(phi, self)

    def evaluate(self, point: Sequence) -> tuple:
        return eval_coefficients(self, point)


def _as_form(w) -> KForm:
    if isinstance(w, Polynomial):
        return KForm.function(w)
    if isinstance(w, KForm):
        return w
    raise TypeError(f"expected a KForm or Polynomial, got {type(w).__name__}")


def exterior_derivative(w: KForm | Polynomial) -> KForm:
    w = _as_form(w)
    n = w.context.count
    if w.degree >= n:
        raise DegreeError(f"d of a top-degree ({w.degree}) form in {n} variables")
    out: dict[Basis, Polynomial] = {}
    for idx, c in w._coeffs.items():
        for i in range(n):
            if i in idx:
                continue
            dc = c.diff(i)
            if not dc:
                continue
            sign, key = _merge_sign((i,), idx)
            term = dc if sign > 0 else -dc
            out[key] = out[key] + term if key in out else term
    return KForm._raw(w.context, w.degree + 1, {k: v for k, v in out.items() if v})


def wedge(a: KForm | Polynomial, b: KForm | Polynomial) -> KForm:
    return _as_form(a).wedge(_as_form(b))


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map ``source -> target`` fixing the origin.

    ``images[k]`` is the k-th target coordinate written in source variables.
    """

    source: VarContext
    target: VarContext
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.target.count:
            raise ValidationError(
                f"map needs {self.target.count} images, got {len(images)}")
        for im in images:
            if im.context != self.source:
                raise ContextMismatchError("map images must be written in source variables")
            if im.constant_term:
                raise ValidationError("map images must vanish at the origin")

    def __call__(self, p: Polynomial) -> Polynomial:
        if p.context != self.target:
            raise ContextMismatchError("polynomial does not live on the map's target")
        return p.substitute(self.images)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """``self`` after ``inner``: ``inner.source -> self.target``."""
        if inner.target != self.source:
            raise ContextMismatchError("maps are not composable")
        return PolyMap(inner.source, self.target, tuple(inner(im) for im in self.images))


def pullback(phi: PolyMap, w: KForm | Polynomial) -> KForm:
    w = _as_form(w)
    if w.context != phi.target:
        raise ContextMismatchError("form does not live on the map's target")
    if w.degree == 0:
        return KForm.function(phi(w.as_polynomial()))
    dphi = [exterior_derivative(im) for im in phi.images]
    result = KForm.zero(phi.source, w.degree)
    one = KForm.function(Polynomial.constant(phi.source, 1))
    for idx, c in w._coeffs.items():
        piece = one
        for i in idx:
            piece = piece.wedge(dphi[i])
            if not piece:
                break
        if piece:
            result = result + piece.scale(phi(c))
    return result


def support_of_1form(w: KForm):
    """Support in the logarithmic basis: each ``dx_i`` coefficient shifted by ``e_i``."""
    from .newton import SupportSet

    if w.degree != 1:
        raise DegreeError("support is defined for 1-forms")
    n = w.context.count
    points = set()
    for (i,), c in w._coeffs.items():
        for e in c.support():
            points.add(e[:i] + (e[i] + 1,) + e[i + 1:])
    return SupportSet(n, points)


def is_integrable(w: KForm) -> bool:
    if w.degree != 1:
        raise DegreeError("integrability is a property of 1-forms")
    if w.context.count < 3:
        return True
    return w.wedge(exterior_derivative(w)).is_zero()


def invariance_defect(w: KForm, F: Polynomial) -> tuple[KForm, list]:
    """``w ^ dF`` and the coefficients of it that ``F`` fails to divide.

    Each failure is ``(basis, coefficient, remainder)``.
    """
    if F.is_zero():
        raise ValidationError("the zero polynomial does not define a hypersurface")
    if w.degree != 1:
        raise DegreeError("invariance is tested for 1-forms")
    product = w.wedge(exterior_derivative(F))
    failures = []
    for idx, c in product.coeffs.items():
        _, r = c.divmod(F)
        if r:
            failures.append((idx, c, r))
    return product, failures


def is_invariant_hypersurface(w: KForm, F: Polynomial) -> bool:
    """True iff ``F`` divides every coefficient of ``w ^ dF``."""
    return not invariance_defect(w, F)[1]


def integrate_closed_1form(alpha: KForm) -> Polynomial:
    """The primitive ``f`` with ``f(0) = 0`` and ``df = alpha``.

    Uses the Euler relation: the degree-k part of ``sum_i x_i alpha_i`` is
    ``k`` times the degree-k part of ``f``.
    """
    if alpha.degree != 1:
        raise DegreeError("only 1-forms are integrated")
    ctx = alpha.context
    if ctx.count > 1:
        dalpha = exterior_derivative(alpha)
        if dalpha:
            idx, c = next(iter(dalpha.coeffs.items()))
            raise NotClosedError(f"form is not closed: d-coefficient on {idx} is nonzero",
                                 witness=(idx, c))
    radial = Polynomial.zero(ctx)
    for i, c in enumerate(alpha.one_form_coefficients()):
        if c:
            radial = radial + c * Polynomial.var(ctx, i)
    terms = {}
    for e, c in radial.items():
        terms[e] = _normalize_coeff(Fraction(c) / sum(e))
    return Polynomial(ctx, terms)


def eval_coefficients(w: KForm | Polynomial, point: Sequence) -> tuple:
    """Values of all basis coefficients at ``point``, lexicographic basis order."""
    w = _as_form(w)
    if len(point) != w.context.count:
        raise ValidationError("point length must match the variable count")
    zero = Polynomial.zero(w.context)
    return tuple(w._coeffs.get(idx, zero).evaluate(point)
                 for idx in combinations(range(w.context.count), w.degree))


def is_singular_point(w: KForm, point: Sequence) -> bool:
    return not any(eval_coefficients(w, point))


def from_coefficients(context: VarContext, items: Iterable[tuple[Sequence[int], Polynomial]],
                      degree: int) -> KForm:
    """Build a form from (unsorted, possibly repeated) index tuples."""
    out = KForm.zero(context, degree)
    for idx, c in items:
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            continue
        out = out + KForm(context, degree, {tuple(sorted(idx)): -c if _parity(idx) else c})
    return out
