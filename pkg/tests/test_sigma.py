import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilfol.errors import ValidationError
from nilfol.forms import (exterior_derivative, is_integrable, is_invariant_hypersurface,
                          pullback, support_of_1form)
from nilfol.newton import hull_contains
from nilfol.sigma import (G_CONTEXT, SECTION_CONTEXT, GeneralCuspidalModel, QuasiOrdinaryModel,
                          Signs, Verdict, ambient_context, build_omega, classify, cusp,
                          delta_of_section, ord_identity, ord_identity_check, section_form,
                          separatrix, support_enumeration, termwise_ok, transversal_section,
                          verdict_for, weighted_order_g)
from nilfol.textio import parse_form, parse_polynomial

from generators import rand_general, rand_quasi_ordinary, seeded
from oracles import from_sympy

X2 = ambient_context(2)
X1 = ambient_context(1)


def G(text):
    return parse_polynomial(text, G_CONTEXT)


def UV(text):
    return parse_polynomial(text, SECTION_CONTEXT)


def qo(s, P, g, signs="invariant"):
    return QuasiOrdinaryModel(len(P), s, P, G(g), signs)


class TestModels:
    def test_constant_g_rejected(self):
        with pytest.raises(ValidationError):
            qo(3, (1, 1), "1 + t")

    def test_small_s_rejected(self):
        with pytest.raises(ValidationError):
            qo(2, (1, 1), "t")

    def test_exponents(self):
        with pytest.raises(ValidationError):
            qo(3, (1, 0), "t")
        with pytest.raises(ValidationError):
            QuasiOrdinaryModel(1, 3, (1,), G("t"))

    def test_general_f(self):
        with pytest.raises(ValidationError):
            GeneralCuspidalModel(1, 3, parse_polynomial("1 + x1", X1), G("t"))
        with pytest.raises(ValidationError):
            GeneralCuspidalModel(1, 3, parse_polynomial("x1*z", X1), G("t"))

    def test_sign_aliases(self):
        assert Signs.parse("paper-literal") is Signs.PAPER
        with pytest.raises(ValidationError):
            Signs.parse("minus")


class TestBuild:
    def test_exact_when_g_zero(self):
        w = build_omega(qo(3, (1, 1), "0"))
        assert w == parse_form("(2*z) dz - (3*x1^2*x2^3) dx1 - (3*x1^3*x2^2) dx2", X2)

    def test_one_variable_analogue(self):
        m = GeneralCuspidalModel(1, 3, parse_polynomial("x1", X1), G("t"))
        assert build_omega(m) == parse_form("(-3*x1^2 + 3*x1*z) dx1 + (2*z - 2*x1^2) dz", X1)

    def test_plus_sign_variant(self):
        m = GeneralCuspidalModel(1, 3, parse_polynomial("x1", X1), G("t"), "paper")
        assert build_omega(m) == parse_form("(-3*x1^2 + 3*x1*z) dx1 + (2*z + 2*x1^2) dz", X1)

    def test_random_models_integrable(self):
        rng = seeded(11)
        for _ in range(50):
            m = rand_quasi_ordinary(rng, smax=5, gterms=3) if rng.random() < 0.5 \
                else rand_general(rng)
            assert is_integrable(build_omega(m))


class TestSeparatrix:
    def test_cusp(self):
        assert separatrix(qo(3, (1, 1), "t")) == parse_polynomial("z^2 - x1^3*x2^3", X2)
        assert separatrix(qo(3, (1, 1), "t", "paper")) == parse_polynomial("z^2 + x1^3*x2^3", X2)

    def test_invariance_sign(self):
        m = qo(3, (1, 1), "t + z")
        assert is_invariant_hypersurface(build_omega(m), separatrix(m))
        p = qo(3, (1, 1), "t + z", "paper")
        assert not is_invariant_hypersurface(build_omega(p), separatrix(p))
        assert not is_invariant_hypersurface(build_omega(p), cusp(p))


class TestOrder:
    def test_examples(self):
        assert weighted_order_g(qo(3, (1, 1), "t")) == 2
        assert weighted_order_g(qo(5, (1, 1), "z")) == 5
        assert weighted_order_g(qo(5, (1, 1), "0")) == math.inf

    def test_termwise(self):
        assert termwise_ok(qo(3, (1, 1), "t"))
        assert not termwise_ok(qo(5, (1, 1), "t + z"))


class TestSection:
    def test_diagonal(self):
        phi = transversal_section(qo(3, (1, 1), "t"))
        assert phi.images == (UV("u"), UV("u"), UV("v"))

    def test_scaled_monomial(self):
        m = qo(3, (2, 1), "t")
        phi = transversal_section(m, [2, -3])
        assert phi(m.f) == UV("-12*u^3")

    def test_zero_scalar(self):
        with pytest.raises(ValidationError):
            transversal_section(qo(3, (1, 1), "t"), [1, 0])

    def test_delta_examples(self):
        assert delta_of_section(qo(3, (1, 1), "t")) == UV("u^3")
        assert delta_of_section(qo(3, (1, 1), "0")).is_zero()
        assert delta_of_section(qo(5, (2, 3), "z")) == UV("u^4*v")

    def test_delta_is_composition(self):
        # u^(|P|-1) g(u^|P|, v) by explicit substitution
        m = qo(4, (2, 1), "t*z - 3*t^2 + z^3")
        direct = UV("u^2") * m.g.substitute([UV("u^3"), UV("v")])
        assert delta_of_section(m) == direct

    def test_section_pullback_matches_reduced_form(self):
        for signs in ("invariant", "paper"):
            m = qo(3, (1, 2), "t + z^2", signs)
            assert pullback(transversal_section(m), build_omega(m)) == section_form(m)


class TestIdentity:
    def test_examples(self):
        assert ord_identity(qo(3, (1, 1), "t")) == (6, 6)
        assert ord_identity(qo(5, (2, 3), "z")) == (33, 33)
        assert ord_identity_check(qo(5, (2, 3), "z"))

    def test_zero_g_flagged(self):
        with pytest.warns(UserWarning):
            assert ord_identity_check(qo(3, (1, 1), "0"))


class TestSupportEnumeration:
    def test_examples(self):
        assert set(support_enumeration(qo(3, (1, 1), "t"))) == {(0, 0, 2), (3, 3, 0), (2, 2, 1)}
        assert set(support_enumeration(qo(4, (1, 2), "0"))) == {(0, 0, 2), (4, 8, 0)}

    def test_matches_forms(self):
        m = qo(4, (2, 1), "t + t*z^2 - z")
        assert support_enumeration(m) == support_of_1form(build_omega(m))

    def test_needs_two_variables(self):
        with pytest.raises(ValidationError):
            support_enumeration(qo(3, (1, 1, 1), "t"))


class TestClassify:
    def test_generalized_surface(self):
        r = classify(qo(3, (1, 1), "t"))
        assert (r.weighted_order, r.threshold, r.newton_equal) == (2, 1, True)
        assert r.verdict is Verdict.GENERALIZED_SURFACE and r.consistent

    def test_not_generalized_surface(self):
        r = classify(qo(5, (1, 1), "t"))
        assert (r.weighted_order, r.newton_equal) == (2, False)
        assert r.verdict is Verdict.NOT_GENERALIZED_SURFACE and r.consistent
        assert (2, 2, 1) in r.omega_vertices

    def test_higher_dimension(self):
        r = classify(qo(4, (1, 1, 1), "z"))
        assert r.weighted_order == 4 and r.newton_equal
        assert r.verdict is Verdict.NECESSARY_CONDITION_HOLDS

    def test_general_models_rejected(self):
        with pytest.raises(ValidationError):
            classify(GeneralCuspidalModel(1, 3, parse_polynomial("x1", X1), G("t")))

    def test_verdict_table(self):
        assert verdict_for(2, 1, 1) is Verdict.GENERALIZED_SURFACE
        assert verdict_for(3, math.inf, 1) is Verdict.NECESSARY_CONDITION_HOLDS
        assert verdict_for(3, 0, 1) is Verdict.NOT_GENERALIZED_HYPERSURFACE

    def test_signs_agree(self):
        a = classify(qo(6, (1, 2), "t^2 + z"))
        b = classify(qo(6, (1, 2), "t^2 + z", "paper"))
        assert a == b


# hull reduction: ((i+1)P, j+1) sits over the separatrix hull iff 2i + sj >= s - 2
@given(st.integers(3, 8), st.lists(st.integers(1, 3), min_size=2, max_size=3),
       st.integers(0, 5), st.integers(0, 3))
@settings(max_examples=80, deadline=None)
def test_hull_reduction(s, P, i, j):
    n = len(P)
    gens = [(0,) * n + (2,), tuple(s * p for p in P) + (0,)]
    point = tuple((i + 1) * p for p in P) + (j + 1,)
    assert hull_contains(gens, point) == (2 * i + s * j >= s - 2)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_criteria_agree(seed):
    m = rand_quasi_ordinary(seeded(seed), smax=7, gterms=3)
    r = classify(m)
    assert r.consistent
    assert r.verdict is verdict_for(m.n, r.weighted_order, r.threshold)
    assert len(delta_of_section(m).support()) == len(m.g.support())
    if not m.g.is_zero():
        assert ord_identity_check(m)
    assert is_invariant_hypersurface(build_omega(m), separatrix(m))


def _sympy_wedge_with_cusp(s, f_expr, g_expr, sign):
    """Plane-case oracle: build w = A dx + B dz from the family formula in sympy and
    return the coefficient of dx^dz in w ^ d(z^2 - f^s)."""
    x, z, t = sympy.symbols("x1 z t")
    f = f_expr(x)
    G = g_expr(t, z).subs(t, f)
    A = sympy.diff(z ** 2 - f ** s, x) + G * s * z * sympy.diff(f, x)
    B = sympy.diff(z ** 2 - f ** s, z) + G * sign * 2 * f
    F = z ** 2 - f ** s
    return sympy.expand(A * sympy.diff(F, z) - B * sympy.diff(F, x)), (x, z, f, G)


@pytest.mark.parametrize("s", [3, 4, 5])
def test_cusp_product_against_sympy(s):
    X = ambient_context(1)
    f_expr, g_expr = (lambda x: x + x ** 2), (lambda t, z: t * z - 2 * t ** 2 + z)
    model = GeneralCuspidalModel(1, s, parse_polynomial("x1 + x1^2", X),
                                 G("t*z - 2*t^2 + z"))
    for signs, sign in (("invariant", -1), ("paper", 1)):
        m = GeneralCuspidalModel(1, s, model.f, model.g, signs)
        oracle, (x, z, f, Gs) = _sympy_wedge_with_cusp(s, f_expr, g_expr, sign)
        product = (build_omega(m) ^ exterior_derivative(cusp(m))).coefficient("x1", "z")
        assert product == from_sympy(oracle, X)
        # closed forms: 2s G F f' (invariant) and 2s G (z^2 + f^s) f' (plus signs)
        closed = 2 * s * Gs * (z ** 2 + sign * f ** s) * f.diff(x)
        assert sympy.expand(oracle - closed) == 0
