import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilfol.errors import ContextMismatchError, ValidationError
from nilfol.poly import (Polynomial, VarContext, add, mul, mult0, partial_derivative,
                         substitute, truncate, weighted_order)
from nilfol.textio import parse_polynomial

from oracles import from_sympy, to_sympy
from strategies import CTX2, CTX3, polynomials, weights

X = VarContext(("x1", "x2", "z"))
TZ = VarContext(("t", "z"))
UV = VarContext(("u", "v"))


def P(text, ctx=X):
    return parse_polynomial(text, ctx)


class TestArithmetic:
    def test_cancellation(self):
        assert add(P("x1 + z"), P("-x1")) == P("z")

    def test_additive_identity(self):
        p = P("z^2 - x1^3")
        assert p + Polynomial.zero(X) == p

    def test_disjoint_union(self):
        assert P("z^2") + P("x1^3") == P("z^2 + x1^3")
        assert (P("z^2") + P("x1^3")).support() == {(0, 0, 2), (3, 0, 0)}

    def test_difference_of_squares(self):
        assert mul(P("z - x1"), P("z + x1")) == P("z^2 - x1^2")

    def test_multiplicative_identity(self):
        p = P("1/2*x1*z + x2^3")
        assert p * Polynomial.constant(X, 1) == p

    def test_monomial_product(self):
        assert P("x1*x2") * P("x1*x2") ** 2 == P("x1^3*x2^3")

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatchError):
            add(P("x1"), Polynomial.var(TZ, "t"))
        with pytest.raises(ContextMismatchError):
            P("x1") * Polynomial.var(TZ, "t")

    def test_zero_coefficients_are_dropped(self):
        p = Polynomial(X, {(1, 0, 0): 0, (0, 0, 1): Fraction(2, 2)})
        assert p.terms == {(0, 0, 1): 1}

    def test_exact_rationals(self):
        p = P("1/3*x1") * 3
        assert p == P("x1")
        assert isinstance(p.coefficient((1, 0, 0)), int)


class TestCalculus:
    def test_derivatives(self):
        F = P("z^2 - x1^3")
        assert partial_derivative(F, "z") == P("2*z")
        assert partial_derivative(F, 0) == P("-3*x1^2")
        assert partial_derivative(Polynomial.constant(X, 7), "x2").is_zero()

    def test_index_out_of_range(self):
        with pytest.raises(ValidationError):
            partial_derivative(P("x1"), 3)

    def test_substitute(self):
        assert substitute(P("t*z", TZ), [P("u^3", UV), P("v", UV)]) == P("u^3*v", UV)
        assert substitute(P("t", TZ), [P("x1*x2"), P("z")]) == P("x1*x2")
        # t + z^2 at (u^2, v)
        assert substitute(P("t + z^2", TZ), [P("u^2", UV), P("v", UV)]) == P("u^2 + v^2", UV)

    def test_substitute_arity(self):
        with pytest.raises(ValidationError):
            substitute(P("t", TZ), [P("u", UV)])

    def test_mult0(self):
        assert mult0(P("z^2 - x1^3")) == 2
        assert mult0(Polynomial.zero(X)) == math.inf
        assert mult0(P("x1^2*x2^3")) == 5

    def test_weighted_order(self):
        assert weighted_order(P("t*z + t^3", TZ), (2, 3)) == 5
        assert weighted_order(Polynomial.zero(TZ), (2, 3)) == math.inf
        assert weighted_order(P("z", TZ), (2, 7)) == 7

    def test_weighted_order_rejects_bad_weights(self):
        with pytest.raises(ValidationError):
            weighted_order(P("t", TZ), (0, 1))
        with pytest.raises(ValidationError):
            weighted_order(P("t", TZ), (1,))

    def test_truncate(self):
        assert truncate(P("z^2 + x1^5"), 3) == P("z^2")
        p = P("z^2 + x1^5 - x2")
        assert truncate(p, 10 ** 6) == p
        assert truncate(Polynomial.zero(X), 4).is_zero()

    def test_evaluate(self):
        assert P("z^2 - x1^3").evaluate((1, 0, 1)) == 0
        assert P("1/2*x1*x2").evaluate((Fraction(1, 3), 3, 0)) == Fraction(1, 2)

    def test_division(self):
        F = P("z^2 - x1^3")
        q, r = (F * P("x1 + 2*z^3")).divmod(F)
        assert r.is_zero() and q == P("x1 + 2*z^3")
        q, r = P("z^2 + x1^3").divmod(F)
        assert q * F + r == P("z^2 + x1^3") and r
        assert F.divides(F * F)


class TestContext:
    def test_unique_names(self):
        with pytest.raises(ValidationError):
            VarContext(("x", "x"))

    def test_variable_cap(self):
        VarContext([f"x{i}" for i in range(12)])
        with pytest.raises(ValidationError):
            VarContext([f"x{i}" for i in range(13)])


# property tests against sympy expansion

@given(polynomials(CTX3), polynomials(CTX3), polynomials(CTX3))
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@given(polynomials(CTX3), polynomials(CTX3))
@settings(max_examples=40, deadline=None)
def test_product_matches_sympy(p, q):
    (ep, _), (eq, _) = to_sympy(p), to_sympy(q)
    assert p * q == from_sympy(ep * eq, CTX3)
    assert p - q == from_sympy(ep - eq, CTX3)


@given(polynomials(CTX3), polynomials(CTX3))
@settings(max_examples=60, deadline=None)
def test_support_bounds(p, q):
    assert (p + q).support() <= p.support() | q.support()
    minkowski = {tuple(a + b for a, b in zip(e, f)) for e in p.support() for f in q.support()}
    assert (p * q).support() <= minkowski


@given(polynomials(CTX3), polynomials(CTX3), weights(3))
@settings(max_examples=60, deadline=None)
def test_weighted_order_is_additive(p, q, w):
    if p and q:
        assert (p * q).weighted_order(w) == p.weighted_order(w) + q.weighted_order(w)


@given(polynomials(CTX3))
@settings(max_examples=40, deadline=None)
def test_mult0_is_unit_weighted_order(p):
    assert p.mult0() == p.weighted_order((1, 1, 1))


@given(polynomials(CTX2, 3, 3), st.lists(polynomials(CTX3, 2, 2), min_size=2, max_size=2),
       st.lists(polynomials(CTX2, 2, 2), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_substitute_is_functorial(p, A, B):
    direct = p.substitute(A).substitute(B)
    composed = p.substitute([a.substitute(B) for a in A])
    assert direct == composed


@given(polynomials(CTX3))
@settings(max_examples=40, deadline=None)
def test_derivative_matches_sympy(p):
    expr, syms = to_sympy(p)
    for i, s in enumerate(syms):
        assert p.diff(i) == from_sympy(expr.diff(s), CTX3)
