"""Derived complexes and cochain maps built from the twisted operators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .engine import (
    BasisSpec,
    CohomologyEntry,
    CohomologyReport,
    FormComplex,
    Forms,
    TruncatedSpace,
    TwistedComplex,
    _check_schedule,
    assemble_map,
    cohomology_report,
    induced_map_rank,
    single,
)
from .errors import (
    ComplexPropertyViolation,
    DimensionMismatch,
    FixtureError,
    PreconditionViolation,
    UnsupportedStructure,
)
from .forms import (
    AffineTorusMap,
    DifferentialForm,
    ext_d,
    product_projections,
    pullback,
    wedge,
)
from .linalg import rank_of_vectors
from .operators import (
    PairMorphism,
    TwistData,
    d_f,
    d_f_theta,
    d_theta_f,
    del_delbar_f_theta,
    del_f_theta,
    delbar_f_theta,
    growth_bound,
)
from .ring import Scalar, TrigPoly


def _zero_below(dim: int, degree: int) -> DifferentialForm:
    return DifferentialForm.zero(dim, degree)


# -- relative complex ---------------------------------------------------------

@dataclass(frozen=True)
class RelativePair:
    """A map ``mu: M -> M'`` with a twist on ``M'``; ``M`` gets the pulled-back twist."""

    mu: AffineTorusMap
    target_twist: TwistData

    def __post_init__(self):
        if self.target_twist.dim != self.mu.target_dim:
            raise DimensionMismatch("twist must live on the target of the map")

    @property
    def source_twist(self) -> TwistData:
        return PairMorphism(self.mu, TrigPoly.constant(self.mu.source_dim, 1)
                            ).source_twist(self.target_twist)


def rel_d(rp: RelativePair, phi: DifferentialForm,
          psi: DifferentialForm | None = None) -> Tuple[DifferentialForm, DifferentialForm]:
    """``(d'_{f,theta} phi, mu^* phi - d_{mu^*f, mu^*theta} psi)``."""
    r = phi.degree
    if psi is None or (not psi and psi.dim == rp.mu.source_dim):
        psi = _zero_below(rp.mu.source_dim, r - 1)
    elif psi.degree != r - 1:
        raise PreconditionViolation(
            f"relative cochain needs deg psi = deg phi - 1, got {psi.degree} and {r}")
    first = d_f_theta(rp.target_twist, phi)
    second = pullback(rp.mu, phi) - d_f_theta(rp.source_twist, psi)
    return first, second


def rel_alpha(psi: DifferentialForm, target_dim: int) -> Tuple[DifferentialForm, DifferentialForm]:
    return DifferentialForm.zero(target_dim, psi.degree + 1), psi


def rel_beta(pair: Tuple[DifferentialForm, DifferentialForm]) -> DifferentialForm:
    return pair[0]


class RelativeComplex(FormComplex):
    """Mapping-cone complex ``Omega^r(M') + Omega^{r-1}(M)``.

    The second summand uses cutoff ``c*D`` with ``c`` the stretch of the map,
    so pullbacks of cutoff-``D`` forms stay inside the truncation.
    """

    def __init__(self, rp: RelativePair, name: str = "relative"):
        self.rp = rp
        self.name = name
        self.scale = max(1, rp.mu.stretch())
        w_target = growth_bound("d_f_theta", rp.target_twist)
        w_source = growth_bound("d_f_theta", rp.source_twist)
        self.growth = max(w_target, ceil(w_source / self.scale))
        self.min_degree = 0
        self.max_degree = max(rp.mu.target_dim, rp.mu.source_dim + 1)

    def space(self, r: int, D: int) -> TruncatedSpace:
        return TruncatedSpace((BasisSpec(self.rp.mu.target_dim, r, D),
                               BasisSpec(self.rp.mu.source_dim, r - 1, self.scale * D)))

    def apply(self, r: int, forms: Forms) -> Forms:
        phi, psi = forms
        if phi.degree != r:
            phi = DifferentialForm.zero(phi.dim, r)
        return rel_d(self.rp, phi, psi)


def rel_cohomology_dim(rp: RelativePair, degrees: Sequence[int], schedule: Sequence[int],
                       stability: int = 3) -> CohomologyReport:
    return cohomology_report(RelativeComplex(rp), degrees, schedule, stability)


@dataclass
class EulerCheck:
    target_dims: Dict[int, Optional[int]]
    source_dims: Dict[int, Optional[int]]
    relative_dims: Dict[int, Optional[int]]
    alternating_sum: Optional[int]

    @property
    def passed(self) -> bool:
        return self.alternating_sum == 0


def relative_euler_check(rp: RelativePair, schedule: Sequence[int],
                         stability: int = 3) -> EulerCheck:
    """Alternating sum over the long sequence of the pair at stabilized values."""
    top = max(rp.mu.source_dim + 1, rp.mu.target_dim) + 1
    degrees = list(range(0, top + 1))
    tgt = cohomology_report(TwistedComplex("d_f_theta", rp.target_twist),
                            [r for r in degrees if r <= rp.mu.target_dim], schedule, stability)
    src = cohomology_report(TwistedComplex("d_f_theta", rp.source_twist),
                            [r for r in degrees if r <= rp.mu.source_dim], schedule, stability)
    rel = rel_cohomology_dim(rp, degrees, schedule, stability)

    def lookup(rep, r, limit):
        if r < 0 or r > limit:
            return 0
        return rep.stabilized_dim(r)

    t = {r: lookup(tgt, r, rp.mu.target_dim) for r in degrees}
    s = {r: lookup(src, r, rp.mu.source_dim) for r in degrees}
    m = {r: rel.stabilized_dim(r) for r in degrees}
    total: Optional[int] = 0
    for r in degrees:
        vals = (lookup(src, r - 1, rp.mu.source_dim), m[r], t[r])
        if any(v is None for v in vals):
            total = None
            break
        total += (-1) ** r * (vals[0] - vals[1] + vals[2])
    return EulerCheck(t, s, m, total)


# -- Mayer-Vietoris ------------------------------------------------------------

@dataclass(frozen=True)
class PartitionFixture:
    lambda_u: TrigPoly
    lambda_v: TrigPoly

    def __post_init__(self):
        one = TrigPoly.constant(self.lambda_u.dim, 1)
        if self.lambda_u.dim != self.lambda_v.dim or self.lambda_u + self.lambda_v != one:
            raise FixtureError("partition functions must add up to 1")


@dataclass
class MayerVietorisCertificate:
    delta_representative: DifferentialForm
    partition_cancels: bool
    beta_alpha_zero: bool
    sign_rule: bool
    representative_closed: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.partition_cancels and self.beta_alpha_zero and self.sign_rule \
            and self.representative_closed is not False


def mv_alpha(phi: DifferentialForm) -> Tuple[DifferentialForm, DifferentialForm]:
    """Restriction to both members of the cover (global forms restrict to themselves)."""
    return phi, phi


def mv_beta(pair: Tuple[DifferentialForm, DifferentialForm]) -> DifferentialForm:
    return pair[0] - pair[1]


def mv_maps(pf: PartitionFixture, tw: TwistData,
            sigma: DifferentialForm) -> MayerVietorisCertificate:
    """Connecting representative ``d_f(lambda_V) ^ sigma`` and its identities."""
    du = d_f(tw, DifferentialForm.function(pf.lambda_u))
    dv = d_f(tw, DifferentialForm.function(pf.lambda_v))
    rep = wedge(dv, sigma)
    closed = None
    if not d_f_theta(tw, sigma):
        closed = not d_f_theta(tw, rep)
    return MayerVietorisCertificate(
        delta_representative=rep,
        partition_cancels=not (du + dv),
        beta_alpha_zero=not mv_beta(mv_alpha(sigma)),
        sign_rule=rep == -wedge(du, sigma),
        representative_closed=closed,
    )


# -- Kunneth -------------------------------------------------------------------

def kunneth_map(phi: DifferentialForm, psi: DifferentialForm) -> DifferentialForm:
    """``pr_1^* phi ^ pr_2^* psi`` on ``T^{n1+n2}``."""
    pr1, pr2 = product_projections(phi.dim, psi.dim)
    return wedge(pullback(pr1, phi), pullback(pr2, psi))


def kunneth_identity(tw1: TwistData, tw2: TwistData, phi: DifferentialForm,
                     psi: DifferentialForm) -> bool:
    """Check the product rule for ``kunneth_map`` under ``d_{f, theta}``.

    The product twist needs a single function with ``f = pr_1^* f_1 = pr_2^* f_2``;
    on a product torus that forces ``f_1`` and ``f_2`` to be the same constant.
    """
    pr1, pr2 = product_projections(tw1.dim, tw2.dim)
    f1, f2 = pr1.pull_function(tw1.f), pr2.pull_function(tw2.f)
    if f1 != f2:
        raise PreconditionViolation(
            "the product twist needs pr_1^* f_1 == pr_2^* f_2, which only holds "
            "for equal constants")
    theta = pullback(pr1, tw1.theta) + pullback(pr2, tw2.theta)
    tw = TwistData(f1, theta)
    lhs = d_f_theta(tw, kunneth_map(phi, psi))
    rhs = kunneth_map(d_f_theta(tw1, phi), psi)
    second = kunneth_map(phi, d_f_theta(tw2, psi))
    rhs = rhs + (second if phi.degree % 2 == 0 else -second)
    return lhs == rhs or (not lhs and not rhs)


# -- locally conformally Kaehler complexes ----------------------------------------

@dataclass(frozen=True, eq=False)
class LckFixture:
    """``omega`` with ``d omega = theta ^ omega`` plus a function ``f`` and parameter ``m``."""

    omega: DifferentialForm
    tw: TwistData
    m: Fraction = Fraction(0)
    name: str = "lck"

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        if self.omega.degree != 2 or self.omega.dim != self.tw.dim:
            raise FixtureError("omega must be a 2-form on the twist's torus")
        if ext_d(self.omega) != wedge(self.tw.theta, self.omega):
            raise FixtureError("fixture violates d omega = theta ^ omega")

    @property
    def dim(self) -> int:
        return self.tw.dim

    @property
    def twist0(self) -> TwistData:
        return self.tw.scaled_theta(self.m)

    @property
    def twist1(self) -> TwistData:
        return self.tw.scaled_theta(self.m + 1)

    @property
    def f2omega(self) -> DifferentialForm:
        return self.omega.scale(self.tw.f * self.tw.f)


@dataclass
class LckCertificates:
    lee_closed: bool
    lichnerowicz_closed: bool
    bott_chern_closed: Optional[bool]
    lee_coordinates: Dict[int, Scalar] = field(default_factory=dict)
    class_coordinates: Dict[int, Scalar] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.lee_closed and self.lichnerowicz_closed \
            and self.bott_chern_closed is not False


def lck_classes(fx: LckFixture) -> LckCertificates:
    tw = fx.tw
    lee = tw.f_theta
    cls_form = fx.f2omega
    bc = None
    if fx.dim % 2 == 0:
        bc = not del_f_theta(tw, cls_form) and not delbar_f_theta(tw, cls_form)
    lee_basis = BasisSpec(fx.dim, 1, lee.max_frequency())
    cls_basis = BasisSpec(fx.dim, 2, cls_form.max_frequency())
    return LckCertificates(
        lee_closed=not d_f(tw, lee),
        lichnerowicz_closed=not d_f_theta(tw, cls_form),
        bott_chern_closed=bc,
        lee_coordinates=lee_basis.coordinates(lee),
        class_coordinates=cls_basis.coordinates(cls_form),
    )


def hat_d(fx: LckFixture, phi: DifferentialForm,
          psi: DifferentialForm | None = None) -> Tuple[DifferentialForm, DifferentialForm]:
    """``(d_{f,theta_1} phi - f^2 omega ^ psi, -d_{f,theta_0} psi)``."""
    r = phi.degree
    if psi is None or (not psi and psi.degree != r - 1):
        psi = _zero_below(fx.dim, r - 1)
    elif psi.degree != r - 1:
        raise PreconditionViolation(
            f"hat cochain needs deg psi = deg phi - 1, got {psi.degree} and {r}")
    first = d_f_theta(fx.twist1, phi) - wedge(fx.f2omega, psi)
    return first, -d_f_theta(fx.twist0, psi)


class HatComplex(FormComplex):
    """Pair complex ``Omega^r + Omega^{r-1}`` with the hat differential.

    The second block is truncated at ``D - deg(f^2 omega)`` so that the wedge
    term lands inside the first block without raising the growth bound.
    """

    def __init__(self, fx: LckFixture):
        self.fx = fx
        self.name = f"{fx.name} hat complex"
        self.offset = fx.f2omega.max_frequency()
        self.growth = max(growth_bound("d_f_theta", fx.twist1),
                          growth_bound("d_f_theta", fx.twist0))
        self.min_degree = 0
        self.max_degree = fx.dim + 1

    def space(self, r: int, D: int) -> TruncatedSpace:
        n = self.fx.dim
        return TruncatedSpace((BasisSpec(n, r, D), BasisSpec(n, r - 1, D - self.offset)))

    def apply(self, r: int, forms: Forms) -> Forms:
        phi, psi = forms
        if phi.degree != r:
            phi = DifferentialForm.zero(phi.dim, r)
        return hat_d(self.fx, phi, psi)


def delta_map(fx: LckFixture):
    """Cochain-level connecting map ``phi |-> phi ^ f^2 omega`` (degree +2)."""
    f2omega = fx.f2omega
    return lambda forms: (wedge(forms[0], f2omega),)


@dataclass
class HatReport:
    hat: CohomologyReport
    theta0: CohomologyReport
    theta1: CohomologyReport
    delta_ranks: Dict[int, List[int]]
    stability: int
    schedule: List[int]

    def delta_rank(self, r: int) -> Optional[int]:
        if r not in self.delta_ranks:
            return 0
        tail = self.delta_ranks[r][-self.stability:]
        return tail[-1] if len(set(tail)) == 1 else None

    def _dim(self, rep: CohomologyReport, r: int) -> Optional[int]:
        return rep.stabilized_dim(r) if r in rep.degrees else 0

    def kernel_image_prediction(self, r: int) -> Optional[int]:
        """Right-hand side of the dimension formula via ``Im delta`` and ``ker delta``."""
        vals = (self._dim(self.theta1, r), self.delta_rank(r - 2),
                self._dim(self.theta0, r - 1), self.delta_rank(r - 1))
        if any(v is None for v in vals):
            return None
        return (vals[0] - vals[1]) + (vals[2] - vals[3])

    def split_prediction(self, r: int) -> Optional[int]:
        a, b = self._dim(self.theta1, r), self._dim(self.theta0, r - 1)
        return None if a is None or b is None else a + b

    def identity_holds(self, r: int) -> Optional[bool]:
        lhs, rhs = self.hat.stabilized_dim(r), self.kernel_image_prediction(r)
        if lhs is None or rhs is None:
            return None
        return lhs == rhs

    def to_json(self) -> dict:
        out = {"hat": self.hat.to_json(), "theta0": self.theta0.to_json(),
               "theta1": self.theta1.to_json(),
               "delta_ranks": {str(r): v for r, v in sorted(self.delta_ranks.items())}}
        out["dimension_identity"] = {str(r): self.identity_holds(r)
                                     for r in self.hat.degrees}
        return out


def hat_cohomology_and_delta(fx: LckFixture, degrees: Sequence[int],
                             schedule: Sequence[int], stability: int = 3,
                             delta_schedule: Optional[Sequence[int]] = None) -> HatReport:
    """Dimensions of the hat complex, of both twisted complexes and ranks of delta."""
    schedule = _check_schedule(schedule, stability)
    n = fx.dim
    hat = cohomology_report(HatComplex(fx), degrees, schedule, stability)
    c0 = TwistedComplex("d_f_theta", fx.twist0, name="theta0 complex")
    c1 = TwistedComplex("d_f_theta", fx.twist1, name="theta1 complex")
    low = sorted({r for d in degrees for r in (d, d - 1, d - 2) if 0 <= r <= n})
    h0 = cohomology_report(c0, low, schedule, stability)
    h1 = cohomology_report(c1, [r for r in low if r <= n] + [r for r in degrees
                                                             if r <= n and r not in low],
                           schedule, stability)
    shift = fx.f2omega.max_frequency()
    F = delta_map(fx)
    ranks: Dict[int, List[int]] = {}
    for r in low:
        if r + 2 > n:
            continue
        ranks[r] = [induced_map_rank(F, c0, r, D, c1, r + 2, D + shift)
                    for D in (delta_schedule or schedule)]
    return HatReport(hat, h0, h1, ranks, stability, schedule)


# -- Bott-Chern ----------------------------------------------------------------

def bott_chern_dim(tw: TwistData, bidegree: Tuple[int, int], schedule: Sequence[int],
                   stability: int = 3) -> CohomologyReport:
    """``(ker del_{f,theta} cap ker delbar_{f,theta}) / im del_{f,theta} delbar_{f,theta}``."""
    if tw.dim % 2:
        raise UnsupportedStructure(f"Bott-Chern groups need an even torus, got T^{tw.dim}")
    schedule = _check_schedule(schedule, stability)
    p, q = bidegree
    n, m = tw.dim, tw.dim // 2
    w = growth_bound("d_f_theta", tw)
    report = CohomologyReport(f"bott-chern ({p},{q})", [p + q], schedule, stability)
    valid = 0 <= p <= m and 0 <= q <= m

    def basis(a, b, D):
        if not (0 <= a <= m and 0 <= b <= m):
            return BasisSpec(n, 0, -1)
        return BasisSpec(n, a + b, D, (a, b))

    for D in schedule:
        if not valid:
            report.entries[(p + q, D)] = CohomologyEntry(0, 0, 0, 0)
            continue
        src = single(basis(p, q, D))
        tgt = TruncatedSpace((basis(p + 1, q, D + w), basis(p, q + 1, D + w)))

        def both(x, src_blocks=src):
            beta = x[0]
            out = []
            for blk, op in zip(tgt.blocks, (del_f_theta, delbar_f_theta)):
                img = op(tw, beta)
                out.append(img if blk.size or img else blk.form_type.zero(n, p + q + 1))
            return tuple(out)

        joint = assemble_map(both, src, tgt, label="del/delbar")
        kernel = src.size - joint.rank()
        incoming = 0
        if p >= 1 and q >= 1 and D - 2 * w >= 0:
            low = single(basis(p - 1, q - 1, D - 2 * w))
            ddbar = assemble_map(lambda x: (del_delbar_f_theta(tw, x[0]),), low, src,
                                 label="del delbar")
            if not (joint.entries @ ddbar.entries).is_zero():
                raise ComplexPropertyViolation(
                    "image of del delbar is not inside the joint kernel")
            incoming = ddbar.rank()
        report.entries[(p + q, D)] = CohomologyEntry(src.size, kernel, incoming,
                                                     kernel - incoming)
    return report


# -- twisted homomorphisms -------------------------------------------------------

@dataclass
class CMapResult:
    image: DifferentialForm
    certified: bool


def c_map(tw: TwistData, phi: DifferentialForm) -> CMapResult:
    """``[phi] |-> [f theta ^ phi]`` from twisted cohomology to ``H_f`` of one degree higher."""
    if d_theta_f(tw, phi):
        raise PreconditionViolation("c is only defined on d_{theta,f}-closed forms")
    image = wedge(tw.f_theta, phi)
    return CMapResult(image, not d_f(tw, image))


def ideal_element(tw: TwistData, eta: DifferentialForm) -> DifferentialForm:
    return wedge(tw.f_theta, eta)


def ideal_operators_agree(tw: TwistData, eta: DifferentialForm) -> bool:
    """``d_{theta,f}`` and ``d_f`` coincide on ``f theta ^ eta``."""
    x = ideal_element(tw, eta)
    return d_theta_f(tw, x) == d_f(tw, x)


def in_ideal(tw: TwistData, x: DifferentialForm, cutoff: Optional[int] = None) -> bool:
    """Whether ``x = f theta ^ eta`` for some ``eta`` with coefficients up to ``cutoff``."""
    if x.degree == 0:
        return not x
    if not x:
        return True
    if cutoff is None:
        cutoff = x.max_frequency()
    w = tw.f_theta.max_frequency()
    src = single(BasisSpec(tw.dim, x.degree - 1, cutoff))
    tgt = single(BasisSpec(tw.dim, x.degree, cutoff + w))
    M = assemble_map(lambda e: (ideal_element(tw, e[0]),), src, tgt, label="f theta ^")
    target_vec = tgt.coordinates((x,), "ideal membership")
    cols = M.entries.columns
    return rank_of_vectors(cols + [target_vec]) == rank_of_vectors(cols)


@dataclass
class TwistedHoms:
    """Images of one form under the inclusion maps ``a``, ``b`` and under ``c``."""

    a: Optional[DifferentialForm]
    b: Optional[DifferentialForm]
    c: CMapResult
    in_ideal: bool


def twisted_homs(tw: TwistData, phi: DifferentialForm,
                 cutoff: Optional[int] = None) -> TwistedHoms:
    """``a`` and ``b`` are inclusions, defined only on the ideal generated by ``f theta``."""
    member = in_ideal(tw, phi, cutoff)
    return TwistedHoms(a=phi if member else None, b=phi if member else None,
                       c=c_map(tw, phi), in_ideal=member)
