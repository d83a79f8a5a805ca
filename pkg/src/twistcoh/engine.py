"""Truncated twisted complexes on the torus and their cohomology dimensions.

The degree-r truncation at cutoff ``D`` is spanned by ``e^{i<k,t>} dt_I`` with
``|k|_inf <= D`` and ``|I| = r``, ordered lexicographically by ``(I, k)``.
An operator whose multipliers have frequency at most ``w`` maps cutoff ``D``
into cutoff ``D + w``, so the reported dimension

    dim H(r, D) = dim ker(B(r, D) -> B(r+1, D+w)) - rank(B(r-1, D-w) -> B(r, D))

is a genuine quotient of a kernel by a subspace of it.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import AssemblyError, ChainMapViolation, ComplexPropertyViolation
from .forms import BidegreeForm, DifferentialForm, MultiIndex, multi_indices
from .linalg import SparseMatrix, kernel_basis, rank_of_vectors
from .operators import OPERATORS, TwistData, growth_bound
from .ring import Scalar, TrigPoly

Forms = Tuple[DifferentialForm, ...]


@dataclass(frozen=True)
class BasisSpec:
    """Monomial basis of truncated r-forms (optionally of one bidegree)."""

    dim: int
    degree: int
    cutoff: int
    bidegree: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.bidegree is not None:
            p, q = self.bidegree
            if self.dim % 2 or p + q != self.degree:
                raise ValueError(f"bad bidegree {self.bidegree} for degree "
                                 f"{self.degree} on T^{self.dim}")

    @property
    def indices(self) -> List[MultiIndex]:
        return _indices(self.dim, self.degree, self.bidegree)

    @property
    def modes(self) -> int:
        return (2 * self.cutoff + 1) ** self.dim if self.cutoff >= 0 else 0

    @property
    def size(self) -> int:
        if not 0 <= self.degree <= self.dim or self.cutoff < 0:
            return 0
        if self.bidegree is None:
            return comb(self.dim, self.degree) * self.modes
        m = self.dim // 2
        p, q = self.bidegree
        return comb(m, p) * comb(m, q) * self.modes

    @property
    def form_type(self):
        return DifferentialForm if self.bidegree is None else BidegreeForm

    def element(self, pos: int) -> Tuple[MultiIndex, Tuple[int, ...]]:
        idx_pos, freq_pos = divmod(pos, self.modes)
        width = 2 * self.cutoff + 1
        freq = []
        for _ in range(self.dim):
            freq_pos, digit = divmod(freq_pos, width)
            freq.append(digit - self.cutoff)
        return self.indices[idx_pos], tuple(reversed(freq))

    def form(self, pos: int) -> DifferentialForm:
        index, freq = self.element(pos)
        return self.form_type._raw(self.dim, self.degree,
                                   {index: TrigPoly.monomial(freq)})

    def describe(self, pos: int) -> str:
        index, freq = self.element(pos)
        gens = "dz" if self.bidegree else "dt"
        return f"e^(i{list(freq)}) {gens}{list(index)}"

    def coordinates(self, form: DifferentialForm, offset: int = 0,
                    origin: str = "") -> Dict[int, Scalar]:
        """Coordinate vector of ``form``; raises if it leaves this truncation."""
        out: Dict[int, Scalar] = {}
        if not form:
            return out
        if type(form) is not self.form_type or form.dim != self.dim \
                or form.degree != self.degree:
            raise AssemblyError(f"{origin}: image has the wrong type or degree "
                                f"for the target basis {self}")
        lookup = self._index_lookup()
        D, width, modes = self.cutoff, 2 * self.cutoff + 1, self.modes
        for index, coeff in form.components.items():
            ipos = lookup.get(index)
            if ipos is None:
                raise AssemblyError(f"{origin}: image has component d{list(index)} "
                                    f"outside the target basis {self}")
            base = offset + ipos * modes
            for k, c in coeff.terms.items():
                fpos = 0
                for x in k:
                    if x > D or x < -D:
                        raise AssemblyError(
                            f"{origin}: image frequency {list(k)} exceeds target "
                            f"cutoff {D}; the growth bound is violated")
                    fpos = fpos * width + x + D
                out[base + fpos] = c
        return out

    def _index_lookup(self) -> Dict[MultiIndex, int]:
        cache = _LOOKUPS.get(self)
        if cache is None:
            cache = {idx: n for n, idx in enumerate(self.indices)}
            _LOOKUPS[self] = cache
        return cache


_LOOKUPS: Dict[BasisSpec, Dict[MultiIndex, int]] = {}


@lru_cache(maxsize=None)
def _indices(dim: int, degree: int, bidegree) -> List[MultiIndex]:
    if not 0 <= degree <= dim:
        return []
    if bidegree is None:
        return multi_indices(dim, degree)
    m = dim // 2
    p, q = bidegree
    if not (0 <= p <= m and 0 <= q <= m):
        return []
    conj = [tuple(x + m for x in c) for c in multi_indices(m, q)]
    return [P + Q for P in multi_indices(m, p) for Q in conj]


@dataclass(frozen=True)
class TruncatedSpace:
    """Direct sum of basis blocks; vectors are tuples of forms, one per block."""

    blocks: Tuple[BasisSpec, ...]

    @property
    def size(self) -> int:
        return sum(b.size for b in self.blocks)

    def _offsets(self) -> List[int]:
        out, acc = [], 0
        for b in self.blocks:
            out.append(acc)
            acc += b.size
        return out

    def locate(self, pos: int) -> Tuple[int, int]:
        for n, b in enumerate(self.blocks):
            if pos < b.size:
                return n, pos
            pos -= b.size
        raise IndexError(pos)

    def zero(self) -> Forms:
        return tuple(b.form_type.zero(b.dim, b.degree) for b in self.blocks)

    def basis_vector(self, pos: int) -> Forms:
        n, local = self.locate(pos)
        out = list(self.zero())
        out[n] = self.blocks[n].form(local)
        return tuple(out)

    def describe(self, pos: int) -> str:
        n, local = self.locate(pos)
        head = f"block {n} " if len(self.blocks) > 1 else ""
        return head + self.blocks[n].describe(local)

    def coordinates(self, forms: Sequence[DifferentialForm],
                    origin: str = "") -> Dict[int, Scalar]:
        if len(forms) != len(self.blocks):
            raise AssemblyError(f"{origin}: expected {len(self.blocks)} components")
        out: Dict[int, Scalar] = {}
        for off, b, f in zip(self._offsets(), self.blocks, forms):
            out.update(b.coordinates(f, off, origin))
        return out

    def to_forms(self, vec: Dict[int, Scalar]) -> Forms:
        """Inverse of :meth:`coordinates`."""
        pieces: List[Dict[MultiIndex, Dict[Tuple[int, ...], Scalar]]] = [
            {} for _ in self.blocks]
        for pos, c in vec.items():
            n, local = self.locate(pos)
            index, freq = self.blocks[n].element(local)
            pieces[n].setdefault(index, {})[freq] = c
        out = []
        for b, comps in zip(self.blocks, pieces):
            out.append(b.form_type(b.dim, b.degree,
                                   {i: TrigPoly(b.dim, t) for i, t in comps.items()}))
        return tuple(out)


def single(basis: BasisSpec) -> TruncatedSpace:
    return TruncatedSpace((basis,))


@dataclass(frozen=True)
class OperatorMatrix:
    source: TruncatedSpace
    target: TruncatedSpace
    entries: SparseMatrix

    def rank(self) -> int:
        return self.entries.rank()

    def kernel_basis(self) -> List[Dict[int, Scalar]]:
        return kernel_basis(self.entries)

    def is_zero(self) -> bool:
        return self.entries.is_zero()


def assemble_map(fn: Callable[[Forms], Forms], source: TruncatedSpace,
                 target: TruncatedSpace, label: str = "operator") -> OperatorMatrix:
    """Matrix whose column j holds the target coordinates of ``fn(basis_j)``."""
    cols = []
    for pos in range(source.size):
        image = fn(source.basis_vector(pos))
        origin = f"{label} applied to {source.describe(pos)}"
        cols.append(target.coordinates(image, origin))
    return OperatorMatrix(source, target, SparseMatrix(target.size, source.size, cols))


def assemble(op: str, tw: TwistData, src: BasisSpec,
             target_cutoff: Optional[int] = None) -> OperatorMatrix:
    """Matrix of a named twisted operator on the truncated basis ``src``."""
    if target_cutoff is None:
        target_cutoff = src.cutoff + growth_bound(op, tw)
    fn = OPERATORS[op]
    tgt = BasisSpec(src.dim, src.degree + 1, target_cutoff)
    return assemble_map(lambda forms: (fn(tw, forms[0]),), single(src), single(tgt),
                        label=op)


# -- complexes -------------------------------------------------------------

class FormComplex:
    """A graded family of operators with a cutoff-indexed truncation.

    Subclasses define ``space(r, D)``, ``apply(r, forms)``, ``growth`` and the
    degree range ``min_degree..max_degree``.
    """

    name = "complex"
    growth = 0
    min_degree = 0
    max_degree = 0

    def space(self, r: int, D: int) -> TruncatedSpace:
        raise NotImplementedError

    def apply(self, r: int, forms: Forms) -> Forms:
        raise NotImplementedError

    def differential(self, r: int, D: int, target_cutoff: Optional[int] = None
                     ) -> OperatorMatrix:
        if target_cutoff is None:
            target_cutoff = D + self.growth
        return assemble_map(lambda x: self.apply(r, x), self.space(r, D),
                            self.space(r + 1, target_cutoff),
                            label=f"{self.name} in degree {r}")


class TwistedComplex(FormComplex):
    """``(Omega^*(T^n), op)`` for one of the named twisted operators."""

    def __init__(self, op: str, tw: TwistData, name: Optional[str] = None):
        if op not in OPERATORS:
            raise KeyError(f"unknown operator {op!r}")
        self.op = op
        self.tw = tw
        self.name = name or op
        self.growth = growth_bound(op, tw)
        self.min_degree = 0
        self.max_degree = tw.dim

    def space(self, r: int, D: int) -> TruncatedSpace:
        return single(BasisSpec(self.tw.dim, r, D))

    def apply(self, r: int, forms: Forms) -> Forms:
        return (OPERATORS[self.op](self.tw, forms[0]),)


@dataclass
class CohomologyEntry:
    space_dim: int
    kernel_dim: int
    incoming_rank: int
    dim: int
    intersection_dim: Optional[int] = None

    def to_json(self) -> dict:
        out = {"space_dim": self.space_dim, "kernel_dim": self.kernel_dim,
               "incoming_rank": self.incoming_rank, "dim": self.dim}
        if self.intersection_dim is not None:
            out["intersection_dim"] = self.intersection_dim
        return out


@dataclass
class CohomologyReport:
    label: str
    degrees: List[int]
    schedule: List[int]
    stability: int
    entries: Dict[Tuple[int, int], CohomologyEntry] = field(default_factory=dict)
    flags: List[str] = field(default_factory=list)

    def dims(self, r: int) -> List[int]:
        return [self.entries[(r, D)].dim for D in self.schedule]

    def stabilized(self, r: int) -> bool:
        tail = self.dims(r)[-self.stability:]
        return len(tail) == self.stability and len(set(tail)) == 1

    def stabilized_dim(self, r: int) -> Optional[int]:
        return self.dims(r)[-1] if self.stabilized(r) else None

    def to_json(self) -> dict:
        per_degree = {}
        for r in self.degrees:
            per_degree[str(r)] = {
                "table": {str(D): self.entries[(r, D)].to_json() for D in self.schedule},
                "stabilized": self.stabilized(r),
                "stabilized_dim": self.stabilized_dim(r),
            }
        return {"label": self.label, "schedule": list(self.schedule),
                "stability": self.stability, "degrees": per_degree,
                "flags": list(self.flags)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _check_schedule(schedule: Sequence[int], stability: int) -> List[int]:
    schedule = list(schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"schedule must be strictly increasing: {schedule}")
    if stability < 1:
        raise ValueError("stability window must be positive")
    return schedule


class _MatrixCache:
    def __init__(self, cx: FormComplex):
        self.cx = cx
        self.store: Dict[Tuple[int, int, int], OperatorMatrix] = {}

    def get(self, r: int, D: int, target: Optional[int] = None) -> OperatorMatrix:
        if target is None:
            target = D + self.cx.growth
        key = (r, D, target)
        m = self.store.get(key)
        if m is None:
            m = self.cx.differential(r, D, target)
            self.store[key] = m
        return m


def _entry(cache: _MatrixCache, r: int, D: int, check: bool) -> CohomologyEntry:
    cx = cache.cx
    w = cx.growth
    out = cache.get(r, D)
    size = out.source.size
    kernel = size - out.rank()
    incoming = 0
    if r - 1 >= cx.min_degree and D - w >= 0:
        inc = cache.get(r - 1, D - w, D)
        incoming = inc.rank()
        if check and not (out.entries @ inc.entries).is_zero():
            raise ComplexPropertyViolation(
                f"{cx.name}: d^2 != 0 from degree {r - 1} at cutoff {D - w}")
    return CohomologyEntry(size, kernel, incoming, kernel - incoming)


def _entries_at(args):
    cx, degrees, D, check = args
    cache = _MatrixCache(cx)
    return [(r, D, _entry(cache, r, D, check)) for r in degrees]


def cohomology_report(cx: FormComplex, degrees: Sequence[int], schedule: Sequence[int],
                      stability: int = 3, check: bool = True, jobs: int = 1,
                      label: Optional[str] = None) -> CohomologyReport:
    """Dimensions of ``H^r`` for each degree and cutoff in the schedule."""
    schedule = _check_schedule(schedule, stability)
    report = CohomologyReport(label or cx.name, list(degrees), schedule, stability)
    tasks = [(cx, list(degrees), D, check) for D in schedule]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_entries_at, tasks))
    else:
        cache = _MatrixCache(cx)
        results = [[(r, D, _entry(cache, r, D, check)) for r in degrees]
                   for D in schedule]
    for chunk in results:
        for r, D, e in chunk:
            report.entries[(r, D)] = e
    return report


def cohomology_dim(cx: FormComplex, r: int, schedule: Sequence[int],
                   stability: int = 3, check: bool = True) -> CohomologyReport:
    return cohomology_report(cx, [r], schedule, stability, check)


def twisted_cohomology_dim(tw: TwistData, r: int, schedule: Sequence[int],
                           stability: int = 3) -> CohomologyReport:
    """``ker / (im cap ker)`` for ``d_{theta,f}``, which does not square to zero."""
    return twisted_cohomology_report(tw, [r], schedule, stability)


def twisted_cohomology_report(tw: TwistData, degrees: Sequence[int],
                              schedule: Sequence[int],
                              stability: int = 3) -> CohomologyReport:
    schedule = _check_schedule(schedule, stability)
    cx = TwistedComplex("d_theta_f", tw, name="twisted d_theta_f")
    cache = _MatrixCache(cx)
    report = CohomologyReport(cx.name, list(degrees), schedule, stability)
    w = cx.growth
    for D in schedule:
        for r in degrees:
            out = cache.get(r, D)
            kernel = out.kernel_basis()
            k = len(kernel)
            inter = 0
            incoming = 0
            if r >= 1 and D - w >= 0:
                image = cache.get(r - 1, D - w, D).entries.columns
                incoming = rank_of_vectors(image)
                inter = incoming + k - rank_of_vectors(list(image) + kernel)
            report.entries[(r, D)] = CohomologyEntry(
                out.source.size, k, incoming, k - inter, intersection_dim=inter)
    if tw.f.is_zero():
        report.flags.append("zero operator: every truncated space is its own "
                            "cohomology, dimensions grow with the cutoff")
    return report


# -- induced maps ----------------------------------------------------------

def induced_map_rank(chain_map: Callable[[Forms], Forms], source: FormComplex,
                     r: int, D: int, target: FormComplex, r_target: int,
                     D_target: int, check: bool = True) -> int:
    """Rank of the map induced on cohomology by a cochain map.

    Computes ``dim((F(ker) + im) / im)`` in the target at cutoff ``D_target``.
    Commutation with the differentials is verified on the truncated bases.
    """
    src_space = source.space(r, D)
    tgt_space = target.space(r_target, D_target)
    if check:
        _verify_chain_map(chain_map, source, r, D, target, r_target)
        if r - 1 >= source.min_degree and D - source.growth >= 0:
            _verify_chain_map(chain_map, source, r - 1, D - source.growth,
                              target, r_target - 1)
    out = source.differential(r, D)
    mapped = []
    for vec in out.kernel_basis():
        image = chain_map(src_space.to_forms(vec))
        mapped.append(tgt_space.coordinates(image, "chain map image"))
    incoming: List[Dict[int, Scalar]] = []
    if r_target - 1 >= target.min_degree and D_target - target.growth >= 0:
        incoming = target.differential(r_target - 1, D_target - target.growth,
                                       D_target).entries.columns
    return rank_of_vectors(mapped + list(incoming)) - rank_of_vectors(incoming)


def _verify_chain_map(F, source: FormComplex, r: int, D: int,
                      target: FormComplex, r_target: int) -> None:
    space = source.space(r, D)
    for pos in range(space.size):
        x = space.basis_vector(pos)
        lhs = target.apply(r_target, F(x))
        rhs = F(source.apply(r, x))
        if not all(_same(a, b) for a, b in zip(lhs, rhs)):
            raise ChainMapViolation(
                f"chain map does not commute with the differentials on "
                f"{space.describe(pos)} in degree {r}")


def _same(a: DifferentialForm, b: DifferentialForm) -> bool:
    return (not a and not b) or a == b


def ring_cohomology_dim(cx: FormComplex, r: int, D: int, slack: int) -> CohomologyEntry:
    """``ker / (im cap B(r, D))`` with the image taken from cutoff ``D + slack``.

    The default truncation only counts images of ``B(r-1, D-w)``, which leaves
    boundary modes when an operator shifts frequencies (a non-constant unit
    ``f``, say).  Enlarging the source and intersecting with ``B(r, D)``
    approximates the image of the whole ring instead.
    """
    out = cx.differential(r, D)
    kernel = out.source.size - out.rank()
    incoming = 0
    if r - 1 >= cx.min_degree:
        big = D + slack
        inc = cx.differential(r - 1, big, big + cx.growth)
        image = inc.entries.columns
        small = cx.space(r, D)
        embedded = [inc.target.coordinates(small.basis_vector(pos), "embedding")
                    for pos in range(small.size)]
        incoming = (rank_of_vectors(image) + small.size
                    - rank_of_vectors(list(image) + embedded))
    return CohomologyEntry(out.source.size, kernel, incoming, kernel - incoming,
                           intersection_dim=incoming)
