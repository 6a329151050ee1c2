import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilfol.errors import NotClosedError, ShapeError, ValidationError
from nilfol.forms import KForm, exterior_derivative, is_integrable
from nilfol.poly import Polynomial, VarContext
from nilfol.takens import (NilpotentDecomposition, assemble_nilpotent, decompose,
                           dependence_check, run_pipeline, shift_z, to_potentials,
                           validate_loray, verify_primitive, x_context)
from nilfol.textio import parse_form, parse_polynomial

from strategies import exponents, rationals

X = VarContext(("x1", "x2", "z"))
XX = x_context(X)
T = VarContext(("t",))


def P(text, ctx=X):
    return parse_polynomial(text, ctx)


def W(text, ctx=X):
    return parse_form(text, ctx)


class TestValidate:
    def test_reads_coefficients(self):
        loray = validate_loray(W("(x2*z + x1^2) dx1 + (x1*z) dx2 + (z + x1*x2) dz"))
        assert loray.a == (P("x2"), P("x1"))
        assert loray.b == (P("x1^2"), Polynomial.zero(X))
        assert loray.g == P("x1*x2")
        assert loray.assemble() == W("(x2*z + x1^2) dx1 + (x1*z) dx2 + (z + x1*x2) dz")

    def test_quadratic_in_z(self):
        with pytest.raises(ShapeError) as info:
            validate_loray(W("(z^2) dx1 + (z) dz"))
        name, coeff, zdeg = info.value.witness
        assert name == "x1" and coeff == P("z^2") and zdeg == 2

    def test_z_dz(self):
        loray = validate_loray(W("(z) dz"))
        assert all(p.is_zero() for p in loray.a + loray.b) and loray.g.is_zero()

    def test_non_monic_dz(self):
        with pytest.raises(ShapeError):
            validate_loray(W("(2*z) dz"))

    def test_constant_terms_rejected(self):
        with pytest.raises(ShapeError):
            validate_loray(W("(1) dx1 + (z) dz"))
        with pytest.raises(ShapeError):
            validate_loray(W("(z + 1) dz"))


class TestShift:
    def test_dz(self):
        h = P("x1*x2 + x2^2")
        assert shift_z(KForm.basis(X, "z"), h) == KForm.basis(X, "z") - exterior_derivative(h)

    def test_z_dz(self):
        expected = KForm.basis(X, "z") - KForm.basis(X, "x1")
        assert shift_z(W("(z) dz"), P("x1")) == expected.scale(P("z - x1"))

    def test_inverse(self):
        w = W("(x2*z + x1^2) dx1 + (x1*z) dx2 + (z + x1*x2) dz")
        h = P("x1^2 - 3*x2")
        assert shift_z(shift_z(w, h), -h) == w

    def test_bad_shift(self):
        with pytest.raises(ValidationError):
            shift_z(W("(z) dz"), P("x1 + 1"))
        with pytest.raises(ValidationError):
            shift_z(W("(z) dz"), P("z*x1"))


class TestDecompose:
    def test_split(self):
        w0, w1 = decompose(W("(x2*z + x1^2) dx1 + (z) dz"))
        assert w0 == W("(x1^2) dx1", XX)
        assert w1 == W("(x2) dx1", XX)

    def test_trivial(self):
        w0, w1 = decompose(W("(z) dz"))
        assert w0.is_zero() and w1.is_zero()

    def test_needs_shift(self):
        with pytest.raises(ShapeError):
            decompose(W("(z + x1) dz"))


class TestPotentials:
    def test_examples(self):
        f0, f1 = to_potentials(W("(3*x1^2) dx1", XX), W("(x2) dx1 + (x1) dx2", XX))
        assert f0 == P("x1^3", XX) and f1 == P("x1*x2", XX)

    def test_not_closed(self):
        with pytest.raises(NotClosedError) as info:
            to_potentials(W("(x2) dx1", XX), KForm.zero(XX, 1))
        assert info.value.witness[0] == "w0"

    def test_dependence(self):
        assert dependence_check(P("x1^3*x2^3", XX), P("x1*x2", XX))
        assert not dependence_check(P("x1", XX), P("x2", XX))
        assert dependence_check(P("x1", XX), Polynomial.zero(XX))


class TestPrimitive:
    f = P("x1*x2", XX)

    def test_examples(self):
        f0, f1 = P("x1^3*x2^3", XX), P("x1*x2", XX)
        assert verify_primitive(self.f, P("t^3", T), P("t", T), f0, f1, 16)
        assert not verify_primitive(self.f, P("t^2", T), P("t", T), f0, f1, 16)
        assert verify_primitive(self.f, P("t^2", T), P("t", T), f0, f1, 0)

    def test_jet_cuts_high_mismatch(self):
        # t^3 vs t^3 + t^5 differ only in degree 10 after composing with x1*x2
        f0 = P("x1^3*x2^3", XX)
        assert verify_primitive(self.f, P("t^3 + t^5", T), P("t", T), f0, self.f, 9)
        assert not verify_primitive(self.f, P("t^3 + t^5", T), P("t", T), f0, self.f, 10)


class TestPipeline:
    def test_cusp_like(self):
        f0, f1 = P("x1^3*x2^3"), P("x1*x2")
        w = assemble_nilpotent(f0, f1)
        assert is_integrable(w)
        result = run_pipeline(w)
        assert result.loray.g == -f1
        assert result.decomposition == NilpotentDecomposition(
            P("x1^3*x2^3", XX), P("x1*x2", XX), X)
        assert result.dependent
        assert result.decomposition.assemble() == w

    def test_non_integrable_is_caught(self):
        # x2 dx1 is not closed, and the integrator rejects it
        with pytest.raises(NotClosedError):
            run_pipeline(W("(x2) dx1 + (z) dz"))


def univariate(lowest):
    return st.dictionaries(st.integers(lowest, 3), rationals, max_size=3).map(
        lambda d: Polynomial(T, {(k,): c for k, c in d.items()}))



inner = st.dictionaries(exponents(2, 2).filter(any), rationals, min_size=1, max_size=3).map(
    lambda d: Polynomial(X, {e + (0,): c for e, c in d.items()}))


# h0 starts in degree 2: a linear part in f0 breaks b_i(0) = 0
@given(inner, univariate(2), univariate(1))
@settings(max_examples=40, deadline=None)
def test_round_trip(f, h0, h1):
    f0, f1 = h0.substitute([f]), h1.substitute([f])
    w = assemble_nilpotent(f0, f1)
    assert is_integrable(w)
    result = run_pipeline(w)
    d = result.decomposition
    restrict = [Polynomial.var(XX, 0), Polynomial.var(XX, 1), Polynomial.zero(XX)]
    assert (d.f0, d.f1) == (f0.substitute(restrict), f1.substitute(restrict))
    assert result.dependent


@given(inner, inner)
@settings(max_examples=30, deadline=None)
def test_shift_is_a_group_action(h, k):
    w = W("(x2*z + x1^2) dx1 + (x1*z^2) dx2 + (z + x1*x2) dz")
    assert shift_z(shift_z(w, h), k) == shift_z(w, h + k)
