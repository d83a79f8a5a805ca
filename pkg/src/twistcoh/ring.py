"""Exact trigonometric polynomials on the n-torus.

A trigonometric polynomial is stored in the complex exponential basis,

    p(t) = sum_k c_k exp(i <k, t>),

as a sparse map from integer frequency vectors ``k`` to Gaussian-rational
coefficients ``c_k``.  Zero coefficients are never stored, so two polynomials
are equal exactly when their term maps are equal.

Multiplication is convolution of the term maps and differentiation is
diagonal (``d/dt_j`` multiplies ``c_k`` by ``i k_j``), which keeps every
operator in this package exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import AxisOutOfRange, DimensionMismatch, NotInvertible

Freq = Tuple[int, ...]
Rational = Union[int, Fraction]


class Scalar:
    """Gaussian rational ``re + i*im`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        if isinstance(value, float):
            raise TypeError("floating point values are not exact")
        return cls(value)

    @classmethod
    def parse(cls, re: str, im: str = "0") -> "Scalar":
        return cls(Fraction(re), Fraction(im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"Scalar({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return Scalar(a * c, 0)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "Scalar":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_strings(self) -> Tuple[str, str]:
        return fraction_str(self.re), fraction_str(self.im)


ZERO = Scalar(0, 0)
ONE = Scalar(1, 0)
I = Scalar(0, 1)


def fraction_str(q: Fraction) -> str:
    """Reduced ``"p/q"`` rendering, always with an explicit denominator."""
    return f"{q.numerator}/{q.denominator}"


def _i_power(n: int) -> Scalar:
    return (ONE, I, -ONE, -I)[n % 4]


class TrigPoly:
    """Immutable sparse trigonometric polynomial on the ``dim``-torus."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Freq, Scalar] | None = None):
        if dim < 0:
            raise ValueError("torus dimension must be non-negative")
        self.dim = dim
        clean: Dict[Freq, Scalar] = {}
        if terms:
            for k, c in terms.items():
                k = tuple(int(x) for x in k)
                if len(k) != dim:
                    raise DimensionMismatch(
                        f"frequency {k} has length {len(k)}, expected {dim}"
                    )
                c = Scalar.coerce(c)
                if c:
                    clean[k] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Freq, Scalar]) -> "TrigPoly":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "TrigPoly":
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, dim: int, c=1) -> "TrigPoly":
        c = Scalar.coerce(c)
        return cls._raw(dim, {(0,) * dim: c} if c else {})

    @classmethod
    def monomial(cls, freq: Iterable[int], c=1) -> "TrigPoly":
        freq = tuple(int(x) for x in freq)
        c = Scalar.coerce(c)
        return cls._raw(len(freq), {freq: c} if c else {})

    @classmethod
    def cos(cls, freq: Iterable[int]) -> "TrigPoly":
        """``cos <k, t>`` as ``(e^{i<k,t>} + e^{-i<k,t>}) / 2``."""
        k = tuple(freq)
        half = Scalar(Fraction(1, 2))
        return cls.monomial(k, half) + cls.monomial(tuple(-x for x in k), half)

    @classmethod
    def sin(cls, freq: Iterable[int]) -> "TrigPoly":
        """``sin <k, t>`` as ``(e^{i<k,t>} - e^{-i<k,t>}) / (2i)``."""
        k = tuple(freq)
        return (cls.monomial(k, Scalar(0, Fraction(-1, 2)))
                + cls.monomial(tuple(-x for x in k), Scalar(0, Fraction(1, 2))))

    # -- basic protocol -----------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, TrigPoly):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)):
            return self == TrigPoly.constant(self.dim, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self.terms:
            return f"TrigPoly({self.dim}, 0)"
        parts = [f"{c}*e^{list(k)}" for k, c in sorted(self.terms.items())]
        return f"TrigPoly({self.dim}, " + " + ".join(parts) + ")"

    def degree(self) -> int:
        """Max-norm degree; the zero polynomial has degree 0."""
        return max((max(map(abs, k), default=0) for k in self.terms), default=0)

    def coefficient(self, freq: Iterable[int]) -> Scalar:
        return self.terms.get(tuple(freq), ZERO)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.dim, ZERO)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "TrigPoly") -> None:
        if self.dim != other.dim:
            raise DimensionMismatch(
                f"torus dimensions differ: {self.dim} vs {other.dim}"
            )

    def _lift(self, other) -> "TrigPoly":
        if isinstance(other, TrigPoly):
            self._check(other)
            return other
        return TrigPoly.constant(self.dim, other)

    def __add__(self, other) -> "TrigPoly":
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return TrigPoly._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly._raw(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "TrigPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TrigPoly":
        return self._lift(other) - self

    def scale(self, c) -> "TrigPoly":
        c = Scalar.coerce(c)
        if not c:
            return TrigPoly._raw(self.dim, {})
        return TrigPoly._raw(self.dim, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            if isinstance(other, (int, Fraction, Scalar)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return TrigPoly._raw(self.dim, {})
        out: Dict[Freq, Scalar] = {}
        items_b = list(other.terms.items())
        for ka, ca in self.terms.items():
            for kb, cb in items_b:
                k = tuple(x + y for x, y in zip(ka, kb))
                prod_ = ca * cb
                s = out.get(k)
                out[k] = prod_ if s is None else s + prod_
        return TrigPoly._raw(self.dim, {k: c for k, c in out.items() if c})

    def __rmul__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "TrigPoly":
        if n < 0:
            return self.unit_inverse() ** (-n)
        out = TrigPoly.constant(self.dim, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def partial(self, j: int) -> "TrigPoly":
        """Derivative along axis ``j`` (1-based)."""
        if not 1 <= j <= self.dim:
            raise AxisOutOfRange(f"axis {j} outside 1..{self.dim}")
        idx = j - 1
        out = {}
        for k, c in self.terms.items():
            kj = k[idx]
            if kj:
                out[k] = Scalar(-c.im * kj, c.re * kj)  # i*kj*c
        return TrigPoly._raw(self.dim, out)

    def conjugate(self) -> "TrigPoly":
        """Pointwise complex conjugate of the function."""
        return TrigPoly._raw(
            self.dim,
            {tuple(-x for x in k): c.conjugate() for k, c in self.terms.items()},
        )

    # -- predicates ---------------------------------------------------
    def is_unit(self) -> bool:
        """Units of the exponential-monomial ring are single nonzero terms."""
        return len(self.terms) == 1

    def unit_inverse(self) -> "TrigPoly":
        if len(self.terms) != 1:
            raise NotInvertible(f"{self!r} is not a unit of the trigonometric ring")
        (k, c), = self.terms.items()
        return TrigPoly._raw(self.dim, {tuple(-x for x in k): c.inverse()})

    def is_real(self) -> bool:
        for k, c in self.terms.items():
            mirror = self.terms.get(tuple(-x for x in k))
            if mirror is None or mirror != c.conjugate():
                return False
        return True

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def shift(self, freq: Iterable[int]) -> "TrigPoly":
        """Multiply by ``e^{i<freq, t>}``."""
        freq = tuple(freq)
        return TrigPoly._raw(
            self.dim,
            {tuple(x + y for x, y in zip(k, freq)): c for k, c in self.terms.items()},
        )

    def evaluate_quarter_turns(self, steps: Iterable[int]) -> Scalar:
        """Exact value at ``t_j = steps_j * pi / 2``.

        These are the only points where every exponential monomial takes a
        Gaussian-rational value (a power of ``i``).
        """
        steps = tuple(steps)
        if len(steps) != self.dim:
            raise DimensionMismatch("evaluation point has the wrong length")
        total = ZERO
        for k, c in self.terms.items():
            total = total + c * _i_power(sum(a * b for a, b in zip(k, steps)))
        return total

    # -- serialization ------------------------------------------------
    def to_json(self) -> list:
        out = []
        for k in sorted(self.terms):
            re, im = self.terms[k].to_strings()
            out.append({"freq": list(k), "re": re, "im": im})
        return out

    @classmethod
    def from_json(cls, dim: int, data: list) -> "TrigPoly":
        terms = {}
        for entry in data:
            k = tuple(entry["freq"])
            if k in terms:
                raise ValueError(f"duplicate frequency {k} in serialized polynomial")
            terms[k] = Scalar.parse(entry["re"], entry.get("im", "0"))
        return cls(dim, terms)


def frequencies(dim: int, cutoff: int):
    """All frequency vectors with max-norm at most ``cutoff``, lexicographic."""
    return product(range(-cutoff, cutoff + 1), repeat=dim)
