from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import any_form, forms, polys
from twistcoh.errors import DimensionMismatch, UnsupportedStructure
from twistcoh.forms import (
    AffineTorusMap,
    BidegreeForm,
    DifferentialForm,
    bidegree_split,
    del_,
    delbar,
    ext_d,
    from_bidegree,
    multi_indices,
    merge_sign,
    product_projections,
    pullback,
    wedge,
)
from twistcoh.ring import Scalar, TrigPoly


def dt(dim, j):
    return DifferentialForm.dt(dim, j)


class TestConstruction:
    def test_multi_indices(self):
        assert multi_indices(3, 2) == [(1, 2), (1, 3), (2, 3)]
        assert multi_indices(2, 3) == []

    def test_merge_sign(self):
        assert merge_sign((2,), (1,)) == (-1, (1, 2))
        assert merge_sign((1,), (1,))[0] == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            DifferentialForm(2, 1, {(3,): TrigPoly.constant(2, 1)})
        with pytest.raises(ValueError):
            DifferentialForm(2, 2, {(2, 1): TrigPoly.constant(2, 1)})
        with pytest.raises(ValueError):
            DifferentialForm(2, -1, {})

    def test_degree_is_part_of_equality(self):
        assert DifferentialForm.zero(2, 1) != DifferentialForm.zero(2, 2)
        assert DifferentialForm.zero(2, 1) == DifferentialForm.zero(2, 1)

    def test_adding_forms_of_different_degree(self):
        with pytest.raises(ValueError):
            dt(2, 1) + wedge(dt(2, 1), dt(2, 2))

    def test_json_round_trip(self):
        phi = DifferentialForm(3, 2, {(1, 3): TrigPoly.cos((1, 0, 2))})
        assert DifferentialForm.from_json(phi.to_json()) == phi


class TestExterior:
    def test_d_sin(self):
        assert ext_d(DifferentialForm.function(TrigPoly.sin((1,)))) == \
            dt(1, 1).scale(TrigPoly.cos((1,)))

    def test_d_of_mixed_one_form(self):
        # d(cos t2 dt1) = -sin t2 dt2^dt1 = sin t2 dt1^dt2
        phi = dt(2, 1).scale(TrigPoly.cos((0, 1)))
        expected = wedge(dt(2, 1), dt(2, 2)).scale(TrigPoly.sin((0, 1)))
        assert ext_d(phi) == expected

    def test_wedge_anticommutes(self):
        assert wedge(dt(2, 2), dt(2, 1)) == -wedge(dt(2, 1), dt(2, 2))
        assert not wedge(dt(2, 1), dt(2, 1))

    def test_top_degree_overflow_is_zero(self):
        w = wedge(wedge(dt(2, 1), dt(2, 2)), dt(2, 1))
        assert not w and w.degree == 3

    @given(any_form(3))
    @settings(max_examples=50)
    def test_d_squared(self, phi):
        assert not ext_d(ext_d(phi))

    @given(st.integers(0, 2).flatmap(lambda p: st.tuples(forms(3, p), forms(3, 2 - p if p < 2 else 1))))
    @settings(max_examples=50)
    def test_graded_leibniz(self, pair):
        phi, psi = pair
        sign = -1 if phi.degree % 2 else 1
        assert ext_d(wedge(phi, psi)) == \
            wedge(ext_d(phi), psi) + wedge(phi, ext_d(psi)).scale(sign)

    @given(forms(3, 1), forms(3, 2))
    @settings(max_examples=40)
    def test_graded_commutativity(self, a, b):
        assert wedge(a, b) == wedge(b, a).scale((-1) ** (a.degree * b.degree))


class TestPullback:
    def test_doubling(self):
        mu = AffineTorusMap([[2]])
        phi = dt(1, 1).scale(TrigPoly.monomial((1,)))
        assert pullback(mu, phi) == dt(1, 1).scale(TrigPoly.monomial((2,), 2))

    def test_translation_phase(self):
        mu = AffineTorusMap([[1]], [Fraction(1, 4)])
        assert mu.pull_function(TrigPoly.monomial((1,))) == TrigPoly.monomial((1,), Scalar(0, 1))
        with pytest.raises(ValueError):
            AffineTorusMap([[1]], [Fraction(1, 3)])

    def test_shapes(self):
        mu = AffineTorusMap([[1, 0, 1], [0, 1, 0]])
        assert (mu.source_dim, mu.target_dim, mu.stretch()) == (3, 2, 1)
        assert AffineTorusMap([[1, 1], [0, 1]]).stretch() == 2
        with pytest.raises(DimensionMismatch):
            pullback(mu, dt(3, 1))

    def test_projections(self):
        pr1, pr2 = product_projections(1, 2)
        assert pullback(pr2, dt(2, 1)) == dt(3, 2)
        assert pullback(pr1, dt(1, 1)) == dt(3, 1)

    @given(any_form(2))
    @settings(max_examples=40)
    def test_commutes_with_d(self, phi):
        mu = AffineTorusMap([[1, 2], [-1, 1]], [Fraction(1, 2), Fraction(3, 4)])
        assert pullback(mu, ext_d(phi)) == ext_d(pullback(mu, phi))

    @given(any_form(2))
    @settings(max_examples=40)
    def test_functorial(self, phi):
        mu = AffineTorusMap([[1, 1], [0, 1]], [Fraction(1, 4), 0])
        nu = AffineTorusMap([[2], [1]], [0, Fraction(1, 2)])
        composite = AffineTorusMap([[3], [1]], [Fraction(3, 4), Fraction(1, 2)])
        # (mu o nu)(s) = A_mu A_nu s + (A_mu b_nu + b_mu)
        assert pullback(nu, pullback(mu, phi)) == pullback(composite, phi)

    @given(forms(2, 1), forms(2, 1))
    @settings(max_examples=30)
    def test_respects_wedge(self, a, b):
        mu = AffineTorusMap([[1, -1], [2, 1]])
        assert pullback(mu, wedge(a, b)) == wedge(pullback(mu, a), pullback(mu, b))


class TestBidegree:
    def test_wirtinger_examples(self):
        f = DifferentialForm.function(TrigPoly.monomial((1, 0)))
        half_i = Scalar(0, Fraction(1, 2))
        dz = BidegreeForm.basis(2, (1,))
        dzbar = BidegreeForm.basis(2, (2,))
        assert del_(f) == dz.scale(TrigPoly.monomial((1, 0), half_i))
        assert delbar(f) == dzbar.scale(TrigPoly.monomial((1, 0), half_i))

    def test_odd_dimension(self):
        with pytest.raises(UnsupportedStructure):
            bidegree_split(dt(3, 1))

    def test_frame(self):
        beta = bidegree_split(dt(2, 1))
        assert beta.bidegrees() == {(1, 0), (0, 1)}
        assert from_bidegree(bidegree_split(wedge(dt(2, 1), dt(2, 2)))) == wedge(dt(2, 1), dt(2, 2))

    @given(any_form(4))
    @settings(max_examples=30)
    def test_round_trip_and_split(self, phi):
        beta = bidegree_split(phi)
        assert from_bidegree(beta) == phi
        assert from_bidegree(del_(beta) + delbar(beta)) == ext_d(phi)
        assert not del_(del_(beta)) and not delbar(delbar(beta))
        assert not (del_(delbar(beta)) + delbar(del_(beta)))

    @given(polys(2))
    def test_real_functions_conjugate_derivatives(self, p):
        q = p + p.conjugate()
        a = del_(DifferentialForm.function(q)).coefficient((1,))
        b = delbar(DifferentialForm.function(q)).coefficient((2,))
        assert a.conjugate() == b
