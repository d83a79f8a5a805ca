from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from strategies import forms, polys, units
from twistcoh.errors import DimensionMismatch, NotClosed, NotInvertible
from twistcoh.forms import AffineTorusMap, DifferentialForm, ext_d, wedge
from twistcoh.operators import (
    OPERATORS,
    PairMorphism,
    TwistData,
    chi_map,
    d_f,
    d_f_theta,
    d_theta,
    d_theta_f,
    growth_bound,
    morphism_pullback,
    phi_map,
    unit_gauge,
)
from twistcoh.ring import Scalar, TrigPoly

I = Scalar(0, 1)


def fn(p):
    return DifferentialForm.function(p)


def dt(dim, j):
    return DifferentialForm.dt(dim, j)


def circle(f, theta_coeff=0):
    return TwistData(f, dt(1, 1).scale(Scalar.coerce(theta_coeff)))


class TestExamples:
    def test_d_theta_on_exponential(self):
        e3 = TrigPoly.monomial((3,))
        tw = circle(TrigPoly.constant(1), 1)
        assert d_theta(tw, fn(e3)) == dt(1, 1).scale(e3.scale(I * 3 - 1))

    def test_d_f_on_sine(self):
        cos = TrigPoly.cos((1,))
        tw = circle(cos)
        assert d_f(tw, fn(TrigPoly.sin((1,)))) == dt(1, 1).scale(cos * cos)

    def test_constant_function_gives_minus_f_theta(self):
        f = TrigPoly.cos((1, 0)) + 2
        theta = dt(2, 1) + dt(2, 2).scale(Scalar(3))
        tw = TwistData(f, theta)
        assert d_f_theta(tw, fn(TrigPoly.constant(2))) == -theta.scale(f)

    def test_d_f_on_one_form_subtracts_df(self):
        f = TrigPoly.cos((1, 0))
        tw = TwistData.make(f)
        phi = dt(2, 2)
        assert d_f(tw, phi) == -wedge(ext_d(fn(f)), phi)

    def test_unit_gauge_shifts_theta(self):
        u = TrigPoly.monomial((1,))
        tw = circle(TrigPoly.constant(1) + TrigPoly.cos((1,)), 2)
        phi = fn(TrigPoly.sin((1,)))
        moved, tw2 = unit_gauge(tw, u, phi)
        assert tw2.theta == dt(1, 1).scale(Scalar(2, -1))
        assert d_f_theta(tw, moved) == d_f_theta(tw2, phi).scale(u)

    def test_phi_map_divides_by_powers(self):
        h = TrigPoly.monomial((1, 0))
        phi = wedge(dt(2, 1), dt(2, 2))
        assert phi_map(h, phi) == phi.scale(TrigPoly.monomial((-2, 0)))
        with pytest.raises(NotInvertible):
            phi_map(TrigPoly.cos((1, 0)), phi)

    def test_identity_morphism_with_alpha_two(self):
        pm = PairMorphism(AffineTorusMap.identity(1), TrigPoly.constant(1, 2))
        phi = dt(1, 1).scale(TrigPoly.cos((1,)))
        assert morphism_pullback(pm, phi) == phi.scale(Scalar(1, 0) / 2)
        target = circle(TrigPoly.constant(1, 4), 1)
        assert pm.source_twist(target).f == TrigPoly.constant(1, 2)


class TestValidation:
    def test_theta_must_be_closed(self):
        theta = dt(2, 1).scale(TrigPoly.cos((0, 1)))
        with pytest.raises(NotClosed):
            TwistData(TrigPoly.constant(2), theta)

    def test_theta_degree(self):
        with pytest.raises(ValueError):
            TwistData(TrigPoly.constant(2), wedge(dt(2, 1), dt(2, 2)))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            TwistData(TrigPoly.constant(1), dt(2, 1))
        tw = TwistData.make(TrigPoly.constant(1))
        with pytest.raises(DimensionMismatch):
            d_theta(tw, dt(2, 1))

    def test_alpha_must_be_unit(self):
        with pytest.raises(NotInvertible):
            PairMorphism(AffineTorusMap.identity(1), TrigPoly.cos((1,)))

    def test_unknown_operator(self):
        with pytest.raises(KeyError):
            growth_bound("d_bogus", TwistData.make(TrigPoly.constant(1)))


@st.composite
def twists(draw, dim=2):
    f = draw(polys(dim, 1, 3))
    coeffs = draw(st.lists(st.integers(-2, 2), min_size=dim, max_size=dim))
    theta = DifferentialForm.zero(dim, 1)
    for j, c in enumerate(coeffs, 1):
        theta = theta + dt(dim, j).scale(Scalar(c))
    g = draw(polys(dim, 1, 2))
    theta = theta + ext_d(fn(g))
    return TwistData(f, theta)


@given(twists(), st.integers(0, 2).flatmap(lambda k: forms(2, k)))
@settings(max_examples=60, deadline=None)
def test_growth_bound_holds(tw, phi):
    for op, fun in OPERATORS.items():
        out = fun(tw, phi)
        assert out.max_frequency() <= phi.max_frequency() + growth_bound(op, tw), op


@given(twists(), st.integers(0, 1).flatmap(lambda k: forms(2, k)))
@settings(max_examples=60, deadline=None)
def test_d_f_theta_squares_to_zero(tw, phi):
    assert not d_f_theta(tw, d_f_theta(tw, phi))
    assert not d_theta(tw, d_theta(tw, phi))


@given(twists(), st.integers(0, 1).flatmap(lambda k: forms(2, k)))
@settings(max_examples=60, deadline=None)
def test_chi_intertwines(tw, phi):
    lhs = d_f_theta(tw, chi_map(tw, phi))
    rhs = d_theta(tw, phi).scale(tw.f ** (phi.degree + 1))
    assert lhs == rhs


@given(twists(), units(2), st.integers(0, 2).flatmap(lambda k: forms(2, k)))
@settings(max_examples=60, deadline=None)
def test_gauge_identity(tw, u, phi):
    moved, tw2 = unit_gauge(tw, u, phi)
    assert d_f_theta(tw, moved) == d_f_theta(tw2, phi).scale(u)


@given(twists(), st.integers(0, 1).flatmap(lambda k: forms(2, k)))
@settings(max_examples=40, deadline=None)
def test_reversed_operator_for_constant_f(tw, phi):
    const = TwistData(TrigPoly.constant(2, 3), tw.theta)
    # d_theta(3) = -3 theta, so the correction term is +3 r theta ^ phi
    expected = d_theta(const, phi) + wedge(tw.theta, phi).scale(Scalar(phi.degree))
    assert d_theta_f(const, phi) == expected.scale(Scalar(3))
