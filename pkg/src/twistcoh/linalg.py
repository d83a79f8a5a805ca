"""Exact sparse linear algebra over the Gaussian rationals.

Matrices are stored column-wise as ``{row: Scalar}`` dictionaries.  Rank and
kernel computations first split the matrix into the connected components of
its row/column incidence graph (the operators assembled on Fourier bases are
block diagonal in the frequency cosets they cannot mix), then run
fraction-free elimination on each block with Gaussian-integer entries:
vectors are scaled to clear denominators, updated by cross-multiplication,
and divided by their integer content after every step.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Sequence, Tuple

from .ring import Scalar, fraction_str

GInt = Tuple[int, int]
IntVec = Dict[int, GInt]


class SparseMatrix:
    """Exact sparse matrix with Gaussian-rational entries, stored by column."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, ncols: int,
                 columns: Sequence[Dict[int, Scalar]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if columns is None:
            columns = [{} for _ in range(ncols)]
        if len(columns) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(columns)}")
        self.columns = [{i: v for i, v in col.items() if v} for col in columns]
        for col in self.columns:
            for i in col:
                if not 0 <= i < nrows:
                    raise IndexError(f"row {i} outside 0..{nrows - 1}")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = Scalar.coerce(v)
                if v:
                    cols[j][i] = v
        return cls(nrows, ncols, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, [{j: Scalar(1)} for j in range(n)])

    def to_dense(self) -> List[List[Scalar]]:
        out = [[Scalar(0) for _ in range(self.ncols)] for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.columns) == (
            other.nrows, other.ncols, other.columns)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def entry(self, i: int, j: int) -> Scalar:
        return self.columns[j].get(i, Scalar(0))

    def transpose(self) -> "SparseMatrix":
        cols: List[Dict[int, Scalar]] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ "
                             f"{other.nrows}x{other.ncols}")
        cols = []
        for col in other.columns:
            acc: Dict[int, Scalar] = {}
            for k, b in col.items():
                for i, a in self.columns[k].items():
                    v = a * b
                    prev = acc.get(i)
                    acc[i] = v if prev is None else prev + v
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, cols)

    def apply(self, vec: Dict[int, Scalar]) -> Dict[int, Scalar]:
        acc: Dict[int, Scalar] = {}
        for k, b in vec.items():
            for i, a in self.columns[k].items():
                v = a * b
                prev = acc.get(i)
                acc[i] = v if prev is None else prev + v
        return {i: v for i, v in acc.items() if v}

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        return SparseMatrix(self.nrows, self.ncols + other.ncols,
                            self.columns + other.columns)

    def select_columns(self, indices: Iterable[int]) -> "SparseMatrix":
        cols = [self.columns[j] for j in indices]
        return SparseMatrix(self.nrows, len(cols), cols)

    def rank(self) -> int:
        return rank_of_vectors(self.columns)

    def kernel_basis(self) -> List[Dict[int, Scalar]]:
        return kernel_basis(self)

    # -- triplet text format ------------------------------------------
    def to_triplets(self) -> str:
        lines = [f"% {self.nrows} {self.ncols}"]
        entries = sorted((i, j, v) for j, col in enumerate(self.columns)
                         for i, v in col.items())
        for i, j, v in entries:
            lines.append(f"{i} {j} {format_scalar(v)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text: str) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "%":
            raise ValueError("missing '% rows cols' header")
        nrows, ncols = int(head[1]), int(head[2])
        cols: List[Dict[int, Scalar]] = [{} for _ in range(ncols)]
        for ln in lines[1:]:
            i, j, v = ln.split()
            cols[int(j)][int(i)] = parse_scalar(v)
        return cls(nrows, ncols, cols)


def format_scalar(v: Scalar) -> str:
    re_s = fraction_str(v.re)
    if not v.im:
        return re_s
    sign = "-" if v.im < 0 else "+"
    return f"{re_s}{sign}{fraction_str(abs(v.im))}i"


_SCALAR_RE = re.compile(r"^(-?\d+/\d+)(?:([+-])(\d+/\d+)i)?$")


def parse_scalar(text: str) -> Scalar:
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"malformed scalar {text!r}")
    re_part = Fraction(m.group(1))
    im_part = Fraction(m.group(3)) if m.group(3) else Fraction(0)
    if m.group(2) == "-":
        im_part = -im_part
    return Scalar(re_part, im_part)


# -- Gaussian-integer elimination kernel ------------------------------------

def _to_gaussian_ints(vec: Dict[int, Scalar]) -> IntVec:
    den = 1
    for v in vec.values():
        den = lcm(den, v.re.denominator, v.im.denominator)
    out = {}
    for i, v in vec.items():
        a = v.re * den
        b = v.im * den
        out[i] = (a.numerator, b.numerator)
    return _primitive(out)


def _primitive(vec: IntVec) -> IntVec:
    g = 0
    for a, b in vec.values():
        g = gcd(g, a, b)
        if g == 1:
            return vec
    if g > 1:
        return {i: (a // g, b // g) for i, (a, b) in vec.items()}
    return vec


def _combine(p: GInt, vec: IntVec, c: GInt, piv: IntVec) -> IntVec:
    """``p*vec - c*piv`` with exact Gaussian-integer arithmetic."""
    pa, pb = p
    ca, cb = c
    out: IntVec = {}
    if pb == 0 and pa == 1:
        out = dict(vec)
    else:
        for i, (a, b) in vec.items():
            out[i] = (pa * a - pb * b, pa * b + pb * a)
    for i, (a, b) in piv.items():
        ra = ca * a - cb * b
        rb = ca * b + cb * a
        prev = out.get(i)
        if prev is None:
            out[i] = (-ra, -rb)
        else:
            na, nb = prev[0] - ra, prev[1] - rb
            if na or nb:
                out[i] = (na, nb)
            else:
                del out[i]
    return out


def _ggcd(x: GInt, y: GInt) -> GInt:
    """Gaussian-integer gcd (Euclid with rounded quotients)."""
    while y != (0, 0):
        xa, xb = x
        ya, yb = y
        n = ya * ya + yb * yb
        # x / y = x * conj(y) / n
        ra = xa * ya + xb * yb
        rb = xb * ya - xa * yb
        qa = (2 * ra + n) // (2 * n)
        qb = (2 * rb + n) // (2 * n)
        x, y = y, (xa - (qa * ya - qb * yb), xb - (qa * yb + qb * ya))
    return x


def _gdiv_exact(x: GInt, y: GInt) -> GInt:
    xa, xb = x
    ya, yb = y
    n = ya * ya + yb * yb
    ra = xa * ya + xb * yb
    rb = xb * ya - xa * yb
    return ra // n, rb // n


class _Echelon:
    """Incremental row echelon form keyed by leading (smallest) index."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: Dict[int, IntVec] = {}

    def insert(self, vec: IntVec) -> bool:
        pivots = self.pivots
        while vec:
            lead = min(vec)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = vec
                return True
            p = piv[lead]
            c = vec[lead]
            g = _ggcd(p, c)
            if g not in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                p = _gdiv_exact(p, g)
                c = _gdiv_exact(c, g)
            vec = _primitive(_combine(p, vec, c, piv))
        return False

    def rank(self) -> int:
        return len(self.pivots)

    def reduce_fully(self) -> None:
        """Back-substitute so every pivot column is zero outside its pivot row."""
        leads = sorted(self.pivots, reverse=True)
        for l in leads:
            P = self.pivots[l]
            p = P[l]
            for other in leads:
                if other >= l:
                    continue
                Q = self.pivots[other]
                c = Q.get(l)
                if c is None:
                    continue
                g = _ggcd(p, c)
                pp, cc = _gdiv_exact(p, g), _gdiv_exact(c, g)
                self.pivots[other] = _primitive(_combine(pp, Q, cc, P))


def _components(vectors: Sequence[Dict[int, object]]) -> List[List[int]]:
    """Group vector positions that share support, transitively."""
    parent: Dict[int, int] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    owner: Dict[int, int] = {}
    for pos, vec in enumerate(vectors):
        if not vec:
            continue
        parent.setdefault(pos, pos)
        for key in vec:
            other = owner.get(key)
            if other is None:
                owner[key] = pos
            else:
                ra, rb = find(pos), find(other)
                if ra != rb:
                    parent[ra] = rb
    groups: Dict[int, List[int]] = {}
    for pos in parent:
        groups.setdefault(find(pos), []).append(pos)
    return list(groups.values())


def rank_of_vectors(vectors: Sequence[Dict[int, Scalar]]) -> int:
    """Dimension of the span of sparse exact vectors."""
    total = 0
    for group in _components(vectors):
        ints = [_to_gaussian_ints(vectors[p]) for p in group]
        ints.sort(key=lambda v: (len(v), min(v)))
        ech = _Echelon()
        for v in ints:
            ech.insert(v)
        total += ech.rank()
    return total


def kernel_basis(matrix: SparseMatrix) -> List[Dict[int, Scalar]]:
    """Exact basis of ``{x : M x = 0}`` as sparse column-index vectors."""
    rows = matrix.transpose().columns
    pivot_of_col: Dict[int, Tuple[int, IntVec]] = {}
    for group in _components(rows):
        ints = [_to_gaussian_ints(rows[p]) for p in group]
        ints.sort(key=lambda v: (len(v), min(v)))
        ech = _Echelon()
        for v in ints:
            ech.insert(v)
        ech.reduce_fully()
        for lead, vec in ech.pivots.items():
            pivot_of_col[lead] = (lead, vec)
    # free columns appearing in each pivot row
    users: Dict[int, List[int]] = {}
    for lead, (_, vec) in pivot_of_col.items():
        for j in vec:
            if j != lead:
                users.setdefault(j, []).append(lead)
    basis = []
    for j in range(matrix.ncols):
        if j in pivot_of_col:
            continue
        x: Dict[int, Scalar] = {j: Scalar(1)}
        for lead in users.get(j, ()):
            vec = pivot_of_col[lead][1]
            num = vec[j]
            den = vec[lead]
            x[lead] = -(Scalar(num[0], num[1]) / Scalar(den[0], den[1]))
        basis.append(x)
    return basis
