"""Twisted exterior derivatives attached to a function and a closed 1-form.

Every operator here acts on a homogeneous form of degree ``r`` and uses that
``r`` in its formula:

    d_theta      phi = d phi - theta ^ phi
    d_f          phi = f d phi - r df ^ phi
    d_{f,theta}  phi = d_f phi - f theta ^ phi
    d_{theta,f}  phi = f d_theta phi - r (d_theta f) ^ phi

together with their (1,0)/(0,1) parts on even tori and the chain maps that
relate the complexes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

from .errors import DimensionMismatch, NotClosed, NotInvertible
from .forms import (
    AffineTorusMap,
    BidegreeForm,
    DifferentialForm,
    bidegree_split,
    del_,
    delbar,
    ext_d,
    one_form_parts,
    pullback,
    wedge,
)
from .ring import Scalar, TrigPoly


@dataclass(frozen=True, eq=False)
class TwistData:
    """The pair ``(f, theta)``; ``theta`` is checked to be closed on construction."""

    f: TrigPoly
    theta: DifferentialForm
    _cache: Dict[str, object] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.theta.dim != self.f.dim:
            raise DimensionMismatch(
                f"f lives on T^{self.f.dim} but theta on T^{self.theta.dim}")
        if isinstance(self.theta, BidegreeForm):
            raise TypeError("theta must be given in the real coframe")
        if self.theta.degree != 1:
            raise ValueError(f"theta must be a 1-form, got degree {self.theta.degree}")
        if ext_d(self.theta):
            raise NotClosed("theta is not closed")

    @classmethod
    def make(cls, f: TrigPoly, theta: DifferentialForm | None = None) -> "TwistData":
        if theta is None:
            theta = DifferentialForm.zero(f.dim, 1)
        return cls(f, theta)

    def __eq__(self, other):
        if not isinstance(other, TwistData):
            return NotImplemented
        return self.f == other.f and self.theta == other.theta

    def __hash__(self):
        return hash((self.f, self.theta))

    def __getstate__(self):
        return {"f": self.f, "theta": self.theta}

    def __setstate__(self, state):
        object.__setattr__(self, "f", state["f"])
        object.__setattr__(self, "theta", state["theta"])
        object.__setattr__(self, "_cache", {})

    @property
    def dim(self) -> int:
        return self.f.dim

    def _cached(self, key: str, make: Callable[[], object]):
        val = self._cache.get(key)
        if val is None:
            val = make()
            self._cache[key] = val
        return val

    @property
    def df(self) -> DifferentialForm:
        return self._cached("df", lambda: ext_d(DifferentialForm.function(self.f)))

    @property
    def f_theta(self) -> DifferentialForm:
        return self._cached("f_theta", lambda: self.theta.scale(self.f))

    @property
    def d_theta_of_f(self) -> DifferentialForm:
        """``d_theta f = df - f theta``."""
        return self._cached("d_theta_f", lambda: self.df - self.f_theta)

    def theta_degree(self) -> int:
        return self.theta.max_frequency()

    def with_f(self, f: TrigPoly) -> "TwistData":
        return TwistData(f, self.theta)

    def with_theta(self, theta: DifferentialForm) -> "TwistData":
        return TwistData(self.f, theta)

    def scaled_theta(self, m) -> "TwistData":
        return TwistData(self.f, self.theta.scale(Scalar.coerce(m)))


def _check(tw: TwistData, phi: DifferentialForm) -> None:
    if phi.dim != tw.dim:
        raise DimensionMismatch(f"form on T^{phi.dim}, twist on T^{tw.dim}")


def d_theta(tw: TwistData, phi: DifferentialForm) -> DifferentialForm:
    _check(tw, phi)
    return ext_d(phi) - wedge(tw.theta, phi)


def d_f(tw: TwistData, phi: DifferentialForm) -> DifferentialForm:
    _check(tw, phi)
    out = ext_d(phi).scale(tw.f)
    if phi.degree:
        out = out - wedge(tw.df, phi).scale(phi.degree)
    return out


def d_f_theta(tw: TwistData, phi: DifferentialForm) -> DifferentialForm:
    return d_f(tw, phi) - wedge(tw.f_theta, phi)


def d_theta_f(tw: TwistData, phi: DifferentialForm) -> DifferentialForm:
    _check(tw, phi)
    out = d_theta(tw, phi).scale(tw.f)
    if phi.degree:
        out = out - wedge(tw.d_theta_of_f, phi).scale(phi.degree)
    return out


def exterior_d(tw: TwistData, phi: DifferentialForm) -> DifferentialForm:
    """Plain ``d``; takes a twist only to share the operator signature."""
    _check(tw, phi)
    return ext_d(phi)


OPERATORS: Dict[str, Callable[[TwistData, DifferentialForm], DifferentialForm]] = {
    "d": exterior_d,
    "d_theta": d_theta,
    "d_f": d_f,
    "d_f_theta": d_f_theta,
    "d_theta_f": d_theta_f,
}


def growth_bound(op: str, tw: TwistData) -> int:
    """Frequency expansion ``w`` of an operator (see ``GrowthBound``)."""
    df, dth = tw.f.degree(), tw.theta_degree()
    if op == "d":
        return 0
    if op == "d_theta":
        return dth
    if op == "d_f":
        return df
    if op in ("d_f_theta", "d_theta_f"):
        return max(df, df + dth) if tw.theta else df
    raise KeyError(f"unknown operator {op!r}")


# -- (1,0) and (0,1) parts --------------------------------------------------

def _bidegree_operand(tw: TwistData, phi: DifferentialForm) -> BidegreeForm:
    _check(tw, phi)
    return bidegree_split(phi)


def _f_part(tw: TwistData, phi: DifferentialForm, conjugate: bool) -> BidegreeForm:
    beta = _bidegree_operand(tw, phi)
    D = delbar if conjugate else del_
    out = D(beta).scale(tw.f)
    if beta.degree:
        df_part = D(BidegreeForm.function(tw.f))
        out = out - wedge(df_part, beta).scale(beta.degree)
    return out


def del_f(tw: TwistData, phi: DifferentialForm) -> BidegreeForm:
    """``f del phi - (p+q) del f ^ phi``."""
    return _f_part(tw, phi, conjugate=False)


def delbar_f(tw: TwistData, phi: DifferentialForm) -> BidegreeForm:
    """``f delbar phi - (p+q) delbar f ^ phi``."""
    return _f_part(tw, phi, conjugate=True)


def _theta_parts(tw: TwistData) -> Tuple[BidegreeForm, BidegreeForm]:
    return tw._cached("theta_parts", lambda: one_form_parts(tw.theta))


def del_f_theta(tw: TwistData, phi: DifferentialForm) -> BidegreeForm:
    theta10, _ = _theta_parts(tw)
    beta = _bidegree_operand(tw, phi)
    return del_f(tw, beta) - wedge(theta10.scale(tw.f), beta)


def delbar_f_theta(tw: TwistData, phi: DifferentialForm) -> BidegreeForm:
    _, theta01 = _theta_parts(tw)
    beta = _bidegree_operand(tw, phi)
    return delbar_f(tw, beta) - wedge(theta01.scale(tw.f), beta)


def del_delbar_f_theta(tw: TwistData, phi: DifferentialForm) -> BidegreeForm:
    return del_f_theta(tw, delbar_f_theta(tw, phi))


# -- chain maps ---------------------------------------------------------------

def chi_map(tw: TwistData, phi: DifferentialForm) -> DifferentialForm:
    """``f^r phi``: intertwines ``d_theta`` (up to ``f^{r+1}``) with ``d_{f,theta}``."""
    _check(tw, phi)
    return phi.scale(tw.f ** phi.degree)


def phi_map(h: TrigPoly, phi: DifferentialForm) -> DifferentialForm:
    """``phi / h^r`` for a unit ``h``."""
    if not h.is_unit():
        raise NotInvertible("phi_map needs a unit of the trigonometric ring")
    return phi.scale(h.unit_inverse() ** phi.degree)


def unit_gauge(tw: TwistData, u: TrigPoly,
               phi: DifferentialForm) -> Tuple[DifferentialForm, TwistData]:
    """Return ``(u phi, (f, theta - u^{-1} du))``.

    With ``tw' `` the returned twist, ``d_{f,theta}(u phi) = u d_{f,theta'}(phi)``.
    """
    if not u.is_unit():
        raise NotInvertible("gauge transformations need a unit of the ring")
    _check(tw, phi)
    du = ext_d(DifferentialForm.function(u))
    log_du = du.scale(u.unit_inverse())
    return phi.scale(u), TwistData(tw.f, tw.theta - log_du)


@dataclass(frozen=True)
class PairMorphism:
    """A torus map together with a unit rescaling factor ``alpha``."""

    map: AffineTorusMap
    alpha: TrigPoly

    def __post_init__(self):
        if self.alpha.dim != self.map.source_dim:
            raise DimensionMismatch("alpha must live on the source torus")
        if not self.alpha.is_unit():
            raise NotInvertible("alpha must be a unit of the trigonometric ring")

    def source_twist(self, target: TwistData) -> TwistData:
        """``(alpha^{-1} (f' o map), map^* theta)``."""
        if target.dim != self.map.target_dim:
            raise DimensionMismatch("twist does not live on the map's target")
        f = self.map.pull_function(target.f) * self.alpha.unit_inverse()
        return TwistData(f, pullback(self.map, target.theta))


def morphism_pullback(pm: PairMorphism, phi: DifferentialForm) -> DifferentialForm:
    """``map^* phi / alpha^r``."""
    pulled = pullback(pm.map, phi)
    return pulled.scale(pm.alpha.unit_inverse() ** phi.degree)
