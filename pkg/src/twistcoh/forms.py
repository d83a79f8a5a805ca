"""Differential forms on the n-torus with trigonometric-polynomial coefficients.

A degree-r form is a sparse map from strictly increasing index tuples
``(i_1 < ... < i_r)`` (1-based) to :class:`TrigPoly` coefficients, read as
``sum_I a_I dt_I``.  The same container, in the coframe
``dz_1..dz_m, dzbar_1..dzbar_m`` of an even torus, represents forms of
mixed bidegree (:class:`BidegreeForm`).

Complex structure: ``z_j = t_{2j-1} + i t_{2j}``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .errors import DimensionMismatch, UnsupportedStructure
from .ring import I, ONE, Scalar, TrigPoly, _i_power

MultiIndex = Tuple[int, ...]

HALF = Scalar(Fraction(1, 2))


def multi_indices(dim: int, degree: int) -> List[MultiIndex]:
    """Strictly increasing index tuples from ``1..dim`` in lexicographic order."""
    return list(combinations(range(1, dim + 1), degree))


def merge_sign(left: MultiIndex, right: MultiIndex):
    """Sign and sorted union of ``dt_left ^ dt_right``; ``(0, None)`` on overlap."""
    inversions = 0
    for b in right:
        for a in left:
            if a == b:
                return 0, None
            if a > b:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(left + right))


class DifferentialForm:
    """Immutable homogeneous differential form on the ``dim``-torus."""

    __slots__ = ("dim", "degree", "components")

    def __init__(self, dim: int, degree: int,
                 components: Mapping[Sequence[int], TrigPoly] | None = None):
        if not 0 <= degree:
            raise ValueError(f"negative form degree {degree}")
        self.dim = dim
        self.degree = degree
        clean: Dict[MultiIndex, TrigPoly] = {}
        for idx, coeff in (components or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            if idx and not (1 <= idx[0] and idx[-1] <= dim):
                raise ValueError(f"index {idx} outside 1..{dim}")
            if not isinstance(coeff, TrigPoly):
                coeff = TrigPoly.constant(dim, coeff)
            if coeff.dim != dim:
                raise DimensionMismatch(
                    f"coefficient lives on T^{coeff.dim}, form on T^{dim}")
            if coeff:
                clean[idx] = coeff
        self.components = clean

    @classmethod
    def _raw(cls, dim, degree, components):
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.degree = degree
        obj.components = components
        return obj

    def _new(self, degree, components) -> "DifferentialForm":
        return type(self)._raw(self.dim, degree, components)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, dim: int, degree: int) -> "DifferentialForm":
        return cls._raw(dim, degree, {})

    @classmethod
    def function(cls, p: TrigPoly) -> "DifferentialForm":
        return cls._raw(p.dim, 0, {(): p} if p else {})

    @classmethod
    def basis(cls, dim: int, index: Sequence[int], coeff=1) -> "DifferentialForm":
        index = tuple(index)
        return cls(dim, len(index), {index: coeff})

    @classmethod
    def dt(cls, dim: int, j: int) -> "DifferentialForm":
        return cls.basis(dim, (j,))

    # -- protocol -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if type(self) is not type(other) or self.dim != other.dim:
            return False
        return self.degree == other.degree and self.components == other.components

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.dim, self.degree,
                     frozenset(self.components.items())))

    def __repr__(self) -> str:
        if not self.components:
            return f"{type(self).__name__}(T^{self.dim}, deg {self.degree}, 0)"
        body = " + ".join(f"[{c!r}] d{list(i)}"
                          for i, c in sorted(self.components.items()))
        return f"{type(self).__name__}(T^{self.dim}, deg {self.degree}, {body})"

    def coefficient(self, index: Sequence[int]) -> TrigPoly:
        return self.components.get(tuple(index), TrigPoly.zero(self.dim))

    def max_frequency(self) -> int:
        return max((c.degree() for c in self.components.values()), default=0)

    def as_function(self) -> TrigPoly:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.components.get((), TrigPoly.zero(self.dim))

    # -- linear structure ---------------------------------------------
    def _check(self, other: "DifferentialForm") -> None:
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} "
                            f"with {type(other).__name__}")
        if self.dim != other.dim:
            raise DimensionMismatch(f"forms on T^{self.dim} and T^{other.dim}")

    def __add__(self, other) -> "DifferentialForm":
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._check(other)
        if not other.components:
            return self
        if not self.components:
            return other
        if self.degree != other.degree:
            raise ValueError(
                f"cannot add forms of degree {self.degree} and {other.degree}")
        out = dict(self.components)
        for idx, c in other.components.items():
            s = out.get(idx)
            s = c if s is None else s + c
            if s:
                out[idx] = s
            else:
                out.pop(idx, None)
        return self._new(self.degree, out)

    def __neg__(self) -> "DifferentialForm":
        return self._new(self.degree, {i: -c for i, c in self.components.items()})

    def __sub__(self, other) -> "DifferentialForm":
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self + (-other)

    def scale(self, p) -> "DifferentialForm":
        """Multiply every coefficient by a scalar or by a function."""
        if isinstance(p, TrigPoly):
            if p.dim != self.dim:
                raise DimensionMismatch("function and form on different tori")
            if not p:
                return self._new(self.degree, {})
        out = {}
        for idx, c in self.components.items():
            v = c * p
            if v:
                out[idx] = v
        return self._new(self.degree, out)

    def __mul__(self, other) -> "DifferentialForm":
        if isinstance(other, (TrigPoly, Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def map_coefficients(self, fn: Callable[[TrigPoly], TrigPoly]) -> "DifferentialForm":
        out = {}
        for idx, c in self.components.items():
            v = fn(c)
            if v:
                out[idx] = v
        return self._new(self.degree, out)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "components": [
                {"index": list(idx), "coeff": self.components[idx].to_json()}
                for idx in sorted(self.components)
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DifferentialForm":
        dim = data["dim"]
        comps = {}
        for entry in data["components"]:
            idx = tuple(entry["index"])
            if idx in comps:
                raise ValueError(f"duplicate index {idx}")
            comps[idx] = TrigPoly.from_json(dim, entry["coeff"])
        return cls(dim, data["degree"], comps)


def as_form(x, dim: int | None = None) -> DifferentialForm:
    """Promote a function or scalar to a 0-form."""
    if isinstance(x, DifferentialForm):
        return x
    if isinstance(x, TrigPoly):
        return DifferentialForm.function(x)
    if dim is None:
        raise TypeError(f"cannot promote {x!r} to a form without a dimension")
    return DifferentialForm.function(TrigPoly.constant(dim, x))


def wedge(phi: DifferentialForm, psi: DifferentialForm) -> DifferentialForm:
    """Exterior product; the zero form of degree ``deg phi + deg psi`` if too large."""
    phi._check(psi)
    degree = phi.degree + psi.degree
    out: Dict[MultiIndex, TrigPoly] = {}
    if degree > phi.dim:
        return phi._new(degree, out)
    for a, ca in phi.components.items():
        for b, cb in psi.components.items():
            sign, idx = merge_sign(a, b)
            if not sign:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            s = out.get(idx)
            out[idx] = term if s is None else s + term
    return phi._new(degree, {i: c for i, c in out.items() if c})


def ext_d(phi: DifferentialForm) -> DifferentialForm:
    """Exterior derivative in the real coframe ``dt_1..dt_n``."""
    if isinstance(phi, BidegreeForm):
        a, b = del_(phi), delbar(phi)
        return a + b
    out: Dict[MultiIndex, TrigPoly] = {}
    dim = phi.dim
    for idx, c in phi.components.items():
        for j in range(1, dim + 1):
            if j in idx:
                continue
            dc = c.partial(j)
            if not dc:
                continue
            before = sum(1 for i in idx if i < j)
            new = tuple(sorted(idx + (j,)))
            if before & 1:
                dc = -dc
            s = out.get(new)
            out[new] = dc if s is None else s + dc
    return phi._new(phi.degree + 1, {i: c for i, c in out.items() if c})


def _substitute(phi: DifferentialForm, rows: Sequence[Mapping[int, Scalar]],
                new_dim: int, coeff_map: Callable[[TrigPoly], TrigPoly],
                cls) -> DifferentialForm:
    """Replace each generator ``e_a`` (1-based) by ``sum_b rows[a-1][b] e'_b``."""
    out: Dict[MultiIndex, TrigPoly] = {}
    expand_cache: Dict[MultiIndex, Dict[MultiIndex, Scalar]] = {}
    for idx, c in phi.components.items():
        expansion = expand_cache.get(idx)
        if expansion is None:
            expansion = {(): ONE}
            for a in idx:
                nxt: Dict[MultiIndex, Scalar] = {}
                for J, s in expansion.items():
                    for b, coef in rows[a - 1].items():
                        if b in J:
                            continue
                        greater = sum(1 for j in J if j > b)
                        val = s * coef
                        if greater & 1:
                            val = -val
                        key = tuple(sorted(J + (b,)))
                        prev = nxt.get(key)
                        nxt[key] = val if prev is None else prev + val
                expansion = {J: v for J, v in nxt.items() if v}
            expand_cache[idx] = expansion
        if not expansion:
            continue
        mapped = coeff_map(c)
        if not mapped:
            continue
        for J, s in expansion.items():
            term = mapped.scale(s)
            prev = out.get(J)
            out[J] = term if prev is None else prev + term
    return cls._raw(new_dim, phi.degree, {i: v for i, v in out.items() if v})


# -- affine torus maps ------------------------------------------------------

class AffineTorusMap:
    """Map ``T^m -> T^n``, ``s |-> A s + 2*pi*b`` with integer ``A`` (n x m).

    The translation ``b`` is measured in full turns and must be a multiple of
    1/4 so that ``exp(i<k, 2 pi b>)`` is a power of ``i`` and the pullback of a
    trigonometric polynomial stays Gaussian-rational.
    """

    __slots__ = ("matrix", "translation", "source_dim", "target_dim")

    def __init__(self, matrix: Sequence[Sequence[int]],
                 translation: Sequence | None = None,
                 source_dim: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        if any(int(x) != x for row in matrix for x in row):
            raise ValueError("affine torus maps need an integer linear part")
        self.target_dim = len(rows)
        if rows:
            self.source_dim = len(rows[0])
            if any(len(r) != self.source_dim for r in rows):
                raise ValueError("ragged matrix")
        else:
            self.source_dim = source_dim or 0
        if source_dim is not None and source_dim != self.source_dim:
            raise DimensionMismatch("matrix width does not match source dimension")
        if translation is None:
            translation = [0] * self.target_dim
        b = tuple(Fraction(x) % 1 for x in translation)
        if len(b) != self.target_dim:
            raise DimensionMismatch("translation length must equal target dimension")
        if any((4 * x).denominator != 1 for x in b):
            raise ValueError("translation must be a multiple of a quarter turn")
        self.matrix = rows
        self.translation = b

    @classmethod
    def identity(cls, n: int) -> "AffineTorusMap":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        if not isinstance(other, AffineTorusMap):
            return NotImplemented
        return (self.matrix, self.translation, self.source_dim) == (
            other.matrix, other.translation, other.source_dim)

    def __hash__(self):
        return hash((self.matrix, self.translation, self.source_dim))

    def __repr__(self):
        return f"AffineTorusMap({[list(r) for r in self.matrix]}, " \
               f"{[str(x) for x in self.translation]})"

    def stretch(self) -> int:
        """Bound on ``|A^T k|_inf / |k|_inf``."""
        best = 0
        for l in range(self.source_dim):
            best = max(best, sum(abs(self.matrix[j][l]) for j in range(self.target_dim)))
        return best

    def pull_function(self, p: TrigPoly) -> TrigPoly:
        if p.dim != self.target_dim:
            raise DimensionMismatch(
                f"function on T^{p.dim}, map targets T^{self.target_dim}")
        out: Dict[Tuple[int, ...], Scalar] = {}
        A, b = self.matrix, self.translation
        m, n = self.source_dim, self.target_dim
        for k, c in p.terms.items():
            new_k = tuple(sum(A[j][l] * k[j] for j in range(n)) for l in range(m))
            quarter = sum(4 * b[j] * k[j] for j in range(n))
            phase = _i_power(int(quarter))
            v = c * phase
            prev = out.get(new_k)
            out[new_k] = v if prev is None else prev + v
        return TrigPoly._raw(m, {k: v for k, v in out.items() if v})


def pullback(mu: AffineTorusMap, phi: DifferentialForm) -> DifferentialForm:
    if isinstance(phi, BidegreeForm):
        raise TypeError("pull back the real-frame form instead")
    if phi.dim != mu.target_dim:
        raise DimensionMismatch(
            f"form on T^{phi.dim}, map targets T^{mu.target_dim}")
    rows = [{l + 1: Scalar(x) for l, x in enumerate(row) if x} for row in mu.matrix]
    return _substitute(phi, rows, mu.source_dim, mu.pull_function, DifferentialForm)


def product_projections(n1: int, n2: int) -> Tuple[AffineTorusMap, AffineTorusMap]:
    """The two coordinate projections ``T^{n1+n2} -> T^{n1}, T^{n2}``."""
    n = n1 + n2
    pr1 = AffineTorusMap([[int(i == j) for j in range(n)] for i in range(n1)], source_dim=n)
    pr2 = AffineTorusMap([[int(i + n1 == j) for j in range(n)] for i in range(n2)],
                         source_dim=n)
    return pr1, pr2


# -- bidegree structure -----------------------------------------------------

class BidegreeForm(DifferentialForm):
    """Form on ``T^{2m}`` written in the coframe ``dz_1..dz_m, dzbar_1..dzbar_m``.

    Generator ``j <= m`` is ``dz_j`` and generator ``m + j`` is ``dzbar_j``;
    a component index with ``p`` entries ``<= m`` and ``q`` entries ``> m``
    has bidegree ``(p, q)``.
    """

    __slots__ = ()

    @property
    def half_dim(self) -> int:
        return self.dim // 2

    def bidegree_of(self, index: MultiIndex) -> Tuple[int, int]:
        p = sum(1 for i in index if i <= self.half_dim)
        return p, len(index) - p

    def bidegrees(self) -> set:
        return {self.bidegree_of(i) for i in self.components}

    def part(self, p: int, q: int) -> "BidegreeForm":
        return self._new(self.degree, {i: c for i, c in self.components.items()
                                       if self.bidegree_of(i) == (p, q)})


def _require_even(dim: int) -> int:
    if dim % 2:
        raise UnsupportedStructure(
            f"bidegree structure needs an even-dimensional torus, got T^{dim}")
    return dim // 2


def _real_to_complex_rows(m: int):
    # dt_{2j-1} = (dz_j + dzbar_j)/2,  dt_{2j} = (-i/2) dz_j + (i/2) dzbar_j
    rows = []
    for j in range(1, m + 1):
        rows.append({j: HALF, m + j: HALF})
        rows.append({j: Scalar(0, Fraction(-1, 2)), m + j: Scalar(0, Fraction(1, 2))})
    return rows


def _complex_to_real_rows(m: int):
    # dz_j = dt_{2j-1} + i dt_{2j},  dzbar_j = dt_{2j-1} - i dt_{2j}
    rows = [{2 * j - 1: ONE, 2 * j: I} for j in range(1, m + 1)]
    rows += [{2 * j - 1: ONE, 2 * j: -I} for j in range(1, m + 1)]
    return rows


def bidegree_split(phi: DifferentialForm) -> BidegreeForm:
    m = _require_even(phi.dim)
    if isinstance(phi, BidegreeForm):
        return phi
    return _substitute(phi, _real_to_complex_rows(m), phi.dim, lambda c: c, BidegreeForm)


def from_bidegree(beta: BidegreeForm) -> DifferentialForm:
    m = _require_even(beta.dim)
    return _substitute(beta, _complex_to_real_rows(m), beta.dim, lambda c: c,
                       DifferentialForm)


def wirtinger(p: TrigPoly, j: int, conjugate: bool = False) -> TrigPoly:
    """``d/dz_j`` (or ``d/dzbar_j``) of a function on ``T^{2m}``."""
    a = p.partial(2 * j - 1)
    b = p.partial(2 * j).scale(I)
    return (a + b if conjugate else a - b).scale(HALF)


def _holo_derivative(beta: DifferentialForm, conjugate: bool) -> BidegreeForm:
    if not isinstance(beta, BidegreeForm):
        beta = bidegree_split(beta)
    m = _require_even(beta.dim)
    out: Dict[MultiIndex, TrigPoly] = {}
    for idx, c in beta.components.items():
        for j in range(1, m + 1):
            g = m + j if conjugate else j
            if g in idx:
                continue
            dc = wirtinger(c, j, conjugate)
            if not dc:
                continue
            before = sum(1 for i in idx if i < g)
            if before & 1:
                dc = -dc
            new = tuple(sorted(idx + (g,)))
            s = out.get(new)
            out[new] = dc if s is None else s + dc
    return BidegreeForm._raw(beta.dim, beta.degree + 1,
                             {i: c for i, c in out.items() if c})


def del_(beta: DifferentialForm) -> BidegreeForm:
    """Holomorphic part of ``d``: raises ``p`` by one."""
    return _holo_derivative(beta, conjugate=False)


def delbar(beta: DifferentialForm) -> BidegreeForm:
    """Antiholomorphic part of ``d``: raises ``q`` by one."""
    return _holo_derivative(beta, conjugate=True)


def d_split(phi: DifferentialForm) -> Tuple[BidegreeForm, BidegreeForm]:
    beta = bidegree_split(phi)
    return del_(beta), delbar(beta)


def one_form_parts(theta: DifferentialForm) -> Tuple[BidegreeForm, BidegreeForm]:
    """``(theta^{1,0}, theta^{0,1})`` of a 1-form on an even torus."""
    if theta.degree != 1 and theta:
        raise ValueError("expected a 1-form")
    beta = bidegree_split(theta)
    return beta.part(1, 0), beta.part(0, 1)
