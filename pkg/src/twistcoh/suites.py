"""Seeded random generators and the randomized identity suites.

Every suite draws its inputs from ``random.Random(seed)`` and checks one
family of exact identities per trial; equality is structural, so a single
mismatched coefficient fails the trial.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .constructions import LckFixture, RelativePair, hat_d, rel_d
from .forms import (
    AffineTorusMap,
    DifferentialForm,
    ext_d,
    from_bidegree,
    multi_indices,
    pullback,
    wedge,
)
from .operators import (
    PairMorphism,
    TwistData,
    chi_map,
    d_f,
    d_f_theta,
    d_theta,
    d_theta_f,
    del_f,
    del_f_theta,
    delbar_f,
    delbar_f_theta,
    morphism_pullback,
    phi_map,
    unit_gauge,
)
from .ring import Scalar, TrigPoly

DEFAULT_SEED = 20240531


# -- generators ------------------------------------------------------------------

def random_scalar(rng: random.Random, complex_ok: bool = True) -> Scalar:
    def q():
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    re = q()
    im = q() if complex_ok and rng.random() < 0.4 else Fraction(0)
    if not re and not im:
        re = Fraction(1)
    return Scalar(re, im)


def random_freq(rng: random.Random, dim: int, bound: int) -> Tuple[int, ...]:
    return tuple(rng.randint(-bound, bound) for _ in range(dim))


def random_poly(rng: random.Random, dim: int, degree: int = 2, terms: int = 3) -> TrigPoly:
    """Sparse trig polynomial with at most ``terms`` modes of max-norm ``<= degree``."""
    out = TrigPoly.zero(dim)
    for _ in range(rng.randint(1, terms)):
        out = out + TrigPoly.monomial(random_freq(rng, dim, degree), random_scalar(rng))
    return out


def random_unit(rng: random.Random, dim: int, degree: int = 1) -> TrigPoly:
    return TrigPoly.monomial(random_freq(rng, dim, degree), random_scalar(rng))


def random_form(rng: random.Random, dim: int, degree: int, poly_degree: int = 2,
                components: int = 2) -> DifferentialForm:
    indices = multi_indices(dim, degree)
    comps: Dict[Tuple[int, ...], TrigPoly] = {}
    for _ in range(rng.randint(1, components)):
        idx = rng.choice(indices)
        comps[idx] = random_poly(rng, dim, poly_degree, terms=2)
    return DifferentialForm(dim, degree, comps)


def random_closed_one_form(rng: random.Random, dim: int) -> DifferentialForm:
    """Constant 1-form plus the differential of a degree-1 polynomial."""
    theta = DifferentialForm.zero(dim, 1)
    for j in range(1, dim + 1):
        if rng.random() < 0.6:
            theta = theta + DifferentialForm.dt(dim, j).scale(random_scalar(rng))
    if rng.random() < 0.5:
        theta = theta + ext_d(DifferentialForm.function(random_poly(rng, dim, 1, terms=2)))
    return theta


def random_twist(rng: random.Random, dim: int) -> TwistData:
    return TwistData(random_poly(rng, dim), random_closed_one_form(rng, dim))


def random_degree(rng: random.Random, dim: int) -> int:
    return rng.randint(0, min(2, dim))


AFFINE_MAPS = (
    AffineTorusMap([[2]], [0]),
    AffineTorusMap([[1], [-1]], [Fraction(1, 4), 0]),
    AffineTorusMap([[1, 1], [0, 1]], [Fraction(1, 2), Fraction(3, 4)]),
    AffineTorusMap([[1, -2]], [Fraction(1, 4)]),
    AffineTorusMap([[1, 0, 1], [0, 1, 0]], [0, Fraction(1, 2)]),
)


def random_lck_fixture(rng: random.Random) -> LckFixture:
    """Either ``omega = g(t1, tj) dt1 ^ dtj`` with ``theta = c dt1`` or an exact one."""
    m = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
    dim = rng.choice((2, 3))
    if rng.random() < 0.5:
        j = rng.randint(2, dim)
        g = TrigPoly.zero(dim)
        for _ in range(2):
            k = [0] * dim
            k[0], k[j - 1] = rng.randint(-1, 1), rng.randint(-1, 1)
            g = g + TrigPoly.monomial(k, random_scalar(rng))
        theta = DifferentialForm.dt(dim, 1).scale(random_scalar(rng))
        omega = DifferentialForm(dim, 2, {(1, j): g})
        tw = TwistData(random_poly(rng, dim, 1), theta)
    else:
        f = random_unit(rng, dim)
        tw = TwistData(f, random_closed_one_form(rng, dim))
        omega = d_f_theta(tw, random_form(rng, dim, 1, 1)).scale(f.unit_inverse() ** 2)
    return LckFixture(omega, tw, m)


# -- suites --------------------------------------------------------------------------

def same(a: DifferentialForm, b: DifferentialForm) -> bool:
    return (not a and not b) or a == b


Check = Callable[[random.Random], List[Tuple[str, bool]]]


def _complex_property(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    return [("d_{f,theta}^2 = 0", not d_f_theta(tw, d_f_theta(tw, phi))),
            ("d_f^2 = 0", not d_f(tw, d_f(tw, phi))),
            ("d_theta^2 = 0", not d_theta(tw, d_theta(tw, phi)))]


def _function_linearity(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    g = random_poly(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    sum_tw = tw.with_f(tw.f + g)
    neg_tw = tw.with_f(-tw.f)
    return [("d_{f+g} = d_f + d_g",
             same(d_f_theta(sum_tw, phi), d_f_theta(tw, phi) + d_f_theta(tw.with_f(g), phi))),
            ("d_{-f} = -d_f", same(d_f_theta(neg_tw, phi), -d_f_theta(tw, phi)))]


def _function_product(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    g = random_poly(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    lhs = d_f_theta(tw.with_f(tw.f * g), phi)
    rhs = (d_f_theta(tw.with_f(g), phi).scale(tw.f) + d_f_theta(tw, phi).scale(g)
           - d_theta(tw, phi).scale(tw.f * g))
    one = tw.with_f(TrigPoly.constant(dim, 1))
    return [("d_{fg} = f d_g + g d_f - fg d_theta", same(lhs, rhs)),
            ("d_{1,theta} = d_theta", same(d_f_theta(one, phi), d_theta(tw, phi))),
            ("d_{f,0} = d_f", same(d_f_theta(tw.with_theta(DifferentialForm.zero(dim, 1)),
                                             phi), d_f(tw, phi)))]


def _sign(phi: DifferentialForm) -> int:
    return -1 if phi.degree % 2 else 1


def _pair(rng, dim):
    p = rng.randint(0, min(2, dim))
    q = rng.randint(0, min(2, dim - p))
    return random_form(rng, dim, p), random_form(rng, dim, q)


def _twisted_leibniz(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    phi, psi = _pair(rng, dim)
    lhs = d_f_theta(tw, wedge(phi, psi))
    rhs = wedge(d_f(tw, phi), psi) + wedge(phi, d_f_theta(tw, psi)).scale(_sign(phi))
    return [("d_{f,theta}(phi^psi) = d_f phi^psi +- phi^d_{f,theta} psi", same(lhs, rhs))]


def _split_theta_leibniz(rng):
    dim = rng.randint(1, 3)
    f = random_poly(rng, dim)
    t1 = TwistData(f, random_closed_one_form(rng, dim))
    t2 = TwistData(f, random_closed_one_form(rng, dim))
    t12 = TwistData(f, t1.theta + t2.theta)
    phi, psi = _pair(rng, dim)
    lhs = d_f_theta(t12, wedge(phi, psi))
    rhs = wedge(d_f_theta(t1, phi), psi) + wedge(phi, d_f_theta(t2, psi)).scale(_sign(phi))
    return [("d_{f,theta1+theta2}(phi^psi) splits", same(lhs, rhs))]


def _untwisted_leibniz(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    phi, psi = _pair(rng, dim)
    s = _sign(phi)
    lf = d_f(tw, wedge(phi, psi))
    rf = wedge(d_f(tw, phi), psi) + wedge(phi, d_f(tw, psi)).scale(s)
    # d_theta(phi ^ psi) = d_theta phi ^ psi + (-1)^p phi ^ d psi
    lt = d_theta(tw, wedge(phi, psi))
    rt = wedge(d_theta(tw, phi), psi) + wedge(phi, ext_d(psi)).scale(s)
    return [("d_f Leibniz", same(lf, rf)), ("d_theta Leibniz", same(lt, rt))]


def _two_formulas(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    alt = d_theta(tw, phi).scale(tw.f) - wedge(tw.df, phi).scale(phi.degree)
    return [("d_{f,theta} = f d_theta - r df^", same(d_f_theta(tw, phi), alt))]


def _lee_closed(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    return [("d_f(f theta) = 0", not d_f(tw, tw.f_theta))]


def _conformal_chi(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    lhs = d_f_theta(tw, chi_map(tw, phi))
    rhs = d_theta(tw, phi).scale(tw.f ** (phi.degree + 1))
    return [("d_{f,theta}(f^r phi) = f^{r+1} d_theta phi", same(lhs, rhs))]


def _unit_division(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    h = random_unit(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    lhs = phi_map(h, d_f_theta(tw.with_f(tw.f * h), phi))
    rhs = d_f_theta(tw, phi_map(h, phi))
    return [("Phi(d_{fh,theta} phi) = d_{f,theta} Phi(phi)", same(lhs, rhs))]


def _unit_gauge(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    u = random_unit(rng, dim)
    phi = random_form(rng, dim, random_degree(rng, dim))
    u_phi, tw2 = unit_gauge(tw, u, phi)
    return [("d_{f,theta}(u phi) = u d_{f,theta'} phi",
             same(d_f_theta(tw, u_phi), d_f_theta(tw2, phi).scale(u)))]


def _pullback_naturality(rng):
    mu = rng.choice(AFFINE_MAPS)
    tw = random_twist(rng, mu.target_dim)
    phi = random_form(rng, mu.target_dim, random_degree(rng, mu.target_dim))
    src = TwistData(mu.pull_function(tw.f), pullback(mu, tw.theta))
    plain = same(d_f(src, pullback(mu, phi)), pullback(mu, d_f(tw, phi)))
    twisted = same(d_f_theta(src, pullback(mu, phi)), pullback(mu, d_f_theta(tw, phi)))
    return [(f"d_f commutes with pullback along {mu!r}", plain),
            (f"d_{{f,theta}} commutes with pullback along {mu!r}", twisted)]


def _pair_morphism(rng):
    mu = rng.choice(AFFINE_MAPS)
    alpha = random_unit(rng, mu.source_dim)
    pm = PairMorphism(mu, alpha)
    tw = random_twist(rng, mu.target_dim)
    phi = random_form(rng, mu.target_dim, random_degree(rng, mu.target_dim))
    src = pm.source_twist(tw)
    lhs = morphism_pullback(pm, d_f_theta(tw, phi))
    rhs = d_f_theta(src, morphism_pullback(pm, phi))
    return [("Phi^*(d_{f',theta} phi) = d_{f,mu^*theta}(Phi^* phi)", same(lhs, rhs))]


def _reversed_operator(rng):
    dim = rng.randint(1, 3)
    tw = random_twist(rng, dim)
    g = random_poly(rng, dim)
    phi, psi = _pair(rng, dim)
    r = phi.degree
    tg = tw.with_f(g)
    one = tw.with_f(TrigPoly.constant(dim, 1))
    zero_theta = tw.with_theta(DifferentialForm.zero(dim, 1))
    zero_f = tw.with_f(TrigPoly.zero(dim))
    checks = [
        ("d_{theta,f+g} = d_{theta,f} + d_{theta,g}",
         same(d_theta_f(tw.with_f(tw.f + g), phi), d_theta_f(tw, phi) + d_theta_f(tg, phi))),
        ("d_{0,f} = d_f", same(d_theta_f(zero_theta, phi), d_f(tw, phi))),
        ("d_{theta,0} = 0", not d_theta_f(zero_f, phi)),
        ("d_{theta,1} = d_theta + r theta^",
         same(d_theta_f(one, phi), d_theta(tw, phi) + wedge(tw.theta, phi).scale(r))),
        ("d_{theta,fg} = f d_{theta,g} + g d_{theta,f} - fg d_{theta,1}",
         same(d_theta_f(tw.with_f(tw.f * g), phi),
              d_theta_f(tg, phi).scale(tw.f) + d_theta_f(tw, phi).scale(g)
              - d_theta_f(one, phi).scale(tw.f * g))),
    ]
    lhs = d_theta_f(tw, wedge(phi, psi))
    rhs = (wedge(d_theta_f(tw, phi), psi) + wedge(phi, d_theta_f(tw, psi)).scale(_sign(phi))
           + wedge(tw.f_theta, wedge(phi, psi)))
    checks.append(("d_{theta,f} Leibniz with extra f theta term", same(lhs, rhs)))
    checks.append(("d_{theta,f}^2 = f theta ^ d_f",
                   same(d_theta_f(tw, d_theta_f(tw, phi)), wedge(tw.f_theta, d_f(tw, phi)))))
    checks.append(("d_{theta,f} = d_{f,theta} + r f theta^",
                   same(d_theta_f(tw, phi),
                        d_f_theta(tw, phi) + wedge(tw.f_theta, phi).scale(r))))
    return checks


def _bidegree_split(rng):
    dim = rng.choice((2, 2, 4))
    tw = random_twist(rng, dim)
    deg = rng.randint(0, 2)
    phi = random_form(rng, dim, deg, poly_degree=1)
    dp, dq = del_f_theta(tw, phi), delbar_f_theta(tw, phi)
    fp, fq = del_f(tw, phi), delbar_f(tw, phi)
    return [
        ("del_{f,theta} + delbar_{f,theta} = d_{f,theta}",
         same(from_bidegree(dp + dq), d_f_theta(tw, phi))),
        ("del_f + delbar_f = d_f", same(from_bidegree(fp + fq), d_f(tw, phi))),
        ("del_{f,theta}^2 = 0", not del_f_theta(tw, dp)),
        ("delbar_{f,theta}^2 = 0", not delbar_f_theta(tw, dq)),
        ("del delbar + delbar del = 0",
         not (del_f_theta(tw, dq) + delbar_f_theta(tw, dp))),
    ]


def _relative_square(rng):
    mu = rng.choice(AFFINE_MAPS + (AffineTorusMap.identity(rng.randint(1, 2)),))
    rp = RelativePair(mu, random_twist(rng, mu.target_dim))
    r = rng.randint(0, min(2, mu.target_dim))
    phi = random_form(rng, mu.target_dim, r)
    psi = random_form(rng, mu.source_dim, r - 1) if 1 <= r <= mu.source_dim + 1 \
        else DifferentialForm.zero(mu.source_dim, max(r - 1, 0))
    if r == 0:
        psi = None
    a, b = rel_d(rp, phi, psi)
    a2, b2 = rel_d(rp, a, b)
    return [(f"relative d^2 = 0 along {mu!r}", not a2 and not b2)]


def _hat_square(rng):
    fx = random_lck_fixture(rng)
    n = fx.dim
    r = rng.randint(1, n)
    phi = random_form(rng, n, r, poly_degree=1)
    psi = random_form(rng, n, r - 1, poly_degree=1)
    a, b = hat_d(fx, phi, psi)
    a2, b2 = hat_d(fx, a, b)
    return [("hat d^2 = 0", not a2 and not b2),
            ("d omega = theta ^ omega", ext_d(fx.omega) == wedge(fx.tw.theta, fx.omega))]


SUITES: Dict[str, Check] = {
    "complex-property": _complex_property,
    "function-linearity": _function_linearity,
    "function-product": _function_product,
    "twisted-leibniz": _twisted_leibniz,
    "split-theta-leibniz": _split_theta_leibniz,
    "untwisted-leibniz": _untwisted_leibniz,
    "two-formulas": _two_formulas,
    "lee-form-closed": _lee_closed,
    "conformal-rescaling": _conformal_chi,
    "unit-division": _unit_division,
    "unit-gauge": _unit_gauge,
    "pullback-naturality": _pullback_naturality,
    "pair-morphism": _pair_morphism,
    "reversed-operator": _reversed_operator,
    "bidegree-split": _bidegree_split,
    "relative-square": _relative_square,
    "hat-square": _hat_square,
}


@dataclass
class SuiteResult:
    name: str
    seed: int
    trials: int
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timing: bool = False) -> dict:
        out = {"suite": self.name, "seed": self.seed, "trials": self.trials,
               "checks": self.checks, "failed": len(self.failures),
               "failures": self.failures[:20], "passed": self.passed}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def run_suite(name: str, trials: int = 100, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    # one generator per suite so results do not depend on which suites ran before
    rng = random.Random(f"{name}:{seed}")
    result = SuiteResult(name, seed, trials)
    start = time.perf_counter()
    for trial in range(trials):
        for label, ok in SUITES[name](rng):
            result.checks += 1
            if not ok:
                result.failures.append(f"trial {trial}: {label}")
    result.seconds = time.perf_counter() - start
    return result


def run_all(trials: int = 100, seed: int = DEFAULT_SEED,
            names: Optional[List[str]] = None) -> List[SuiteResult]:
    return [run_suite(n, trials, seed) for n in (names or list(SUITES))]
