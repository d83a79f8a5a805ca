"""Hypothesis strategies for exact ring elements and forms."""

from fractions import Fraction

from hypothesis import strategies as st

from twistcoh.forms import DifferentialForm, multi_indices
from twistcoh.ring import Scalar, TrigPoly

small_fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))
scalars = st.builds(Scalar, small_fractions, small_fractions)
nonzero_scalars = scalars.filter(bool)


def freqs(dim, bound=2):
    return st.tuples(*[st.integers(-bound, bound)] * dim)


def polys(dim, bound=2, max_terms=3):
    return st.dictionaries(freqs(dim, bound), scalars, max_size=max_terms).map(
        lambda terms: TrigPoly(dim, terms))


def units(dim, bound=1):
    return st.builds(TrigPoly.monomial, freqs(dim, bound), nonzero_scalars)


def forms(dim, degree, bound=1):
    idx = st.sampled_from(multi_indices(dim, degree))
    return st.dictionaries(idx, polys(dim, bound, 2), max_size=2).map(
        lambda comps: DifferentialForm(dim, degree, comps))


def any_form(dim, bound=1):
    return st.integers(0, dim).flatmap(lambda r: forms(dim, r, bound))
