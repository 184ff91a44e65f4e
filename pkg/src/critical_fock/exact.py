"""Exact scalars, finite Laurent data and exact row reduction.

Every coefficient in the package is a :class:`fractions.Fraction`.  Sparse
vectors are plain ``dict`` objects mapping a hashable, orderable basis key to a
nonzero ``Fraction``; the helpers below keep that invariant.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional

Scalar = Fraction
Vector = Dict[Hashable, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(x) -> Fraction:
    """Parse an exact scalar: int, Fraction, or a string like ``"-3/4"``.

    Floats are rejected; they would silently break exactness.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if text.endswith("x2"):
            return Fraction(int(text[:-2]), 2)
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


# --- half-integers -----------------------------------------------------------

def to_x2(r) -> int:
    """Doubled value of a half-odd integer ``r`` (``-3/2 -> -3``)."""
    r = as_scalar(r)
    d = 2 * r
    if d.denominator != 1 or d.numerator % 2 == 0:
        raise ValueError(f"{r} is not in Z + 1/2")
    return d.numerator


def from_x2(r2: int) -> Fraction:
    return Fraction(r2, 2)


def x2_str(r2: int) -> str:
    return f"{r2}x2"


# --- sparse vectors ----------------------------------------------------------

def vec_add(a: Mapping, b: Mapping, scale: Fraction = ONE) -> Vector:
    """Return ``a + scale * b`` as a new vector."""
    out = dict(a)
    add_into(out, b, scale)
    return out


def add_into(acc: Vector, b: Mapping, scale: Fraction = ONE) -> Vector:
    if not scale:
        return acc
    for k, c in b.items():
        v = acc.get(k, ZERO) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def add_term(acc: Vector, key, coef: Fraction) -> None:
    if not coef:
        return
    v = acc.get(key, ZERO) + coef
    if v:
        acc[key] = v
    else:
        del acc[key]


def vec_scale(a: Mapping, s) -> Vector:
    s = Fraction(s)
    if not s:
        return {}
    return {k: s * c for k, c in a.items()}


def vec_sub(a: Mapping, b: Mapping) -> Vector:
    return vec_add(a, b, -ONE)


def linear_extend(fn: Callable[[Hashable], Mapping], v: Mapping) -> Vector:
    """Apply a monomial-level linear map ``fn`` to a vector."""
    out: Vector = {}
    for k, c in v.items():
        add_into(out, fn(k), c)
    return out


# --- Laurent data -------------------------------------------------------------

class LaurentData:
    """A Laurent polynomial ``sum_k c_k z^(-k-1)`` with finite support.

    The index ``k`` follows the field convention, so ``{0: a}`` is ``a/z`` and
    ``{-1: a}`` is the constant ``a``.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            if isinstance(k, str):
                k = int(k)
            c = as_scalar(c)
            if c:
                clean[int(k)] = c
        self._coeffs = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentData":
        return cls({k: c})

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self._coeffs.get(k, ZERO)

    def items(self):
        return self._coeffs.items()

    def support(self):
        return list(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def p(self) -> int:
        """``max(0, largest index with nonzero coefficient)``."""
        return max([0, *self._coeffs])

    def __add__(self, other):
        if not isinstance(other, LaurentData):
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return LaurentData(out)

    def __neg__(self):
        return LaurentData({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentData):
            out: Dict[int, Fraction] = {}
            for a, ca in self._coeffs.items():
                for b, cb in other._coeffs.items():
                    # z^(-a-1) z^(-b-1) = z^(-(a+b+1)-1)
                    out[a + b + 1] = out.get(a + b + 1, ZERO) + ca * cb
            return LaurentData(out)
        s = as_scalar(other)
        return LaurentData({k: s * c for k, c in self._coeffs.items()})

    __rmul__ = __mul__

    def derivative(self) -> "LaurentData":
        return LaurentData({k + 1: (-k - 1) * c for k, c in self._coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, LaurentData):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __str__(self):
        if not self._coeffs:
            return "0"
        return " + ".join(f"{c}*z^{-k - 1}" for k, c in self._coeffs.items())

    def __repr__(self):
        return f"LaurentData({self})"

    def to_json(self) -> Dict[str, str]:
        return {str(k): str(c) for k, c in self._coeffs.items()}


def laurent_arith(op: str, a: LaurentData, b) -> LaurentData:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a * as_scalar(b)
    raise ValueError(f"unknown Laurent operation {op!r}")


def laurent_derivative(a: LaurentData) -> LaurentData:
    return a.derivative()


# --- exact span ---------------------------------------------------------------

class SpanBasis:
    """Reduced row echelon basis of a subspace of a sparse vector space.

    Each stored row has coefficient 1 at its pivot, and no pivot column appears
    in any other row, so reducing a vector needs a single pass.
    """

    def __init__(self, key: Optional[Callable] = None):
        self._key = key
        self.rows: Dict[Hashable, Vector] = {}

    def _pivot(self, v: Mapping):
        return min(v, key=self._key) if self._key else min(v)

    def reduce(self, v: Mapping) -> Vector:
        r = dict(v)
        for p in [k for k in r if k in self.rows]:
            c = r.get(p)
            if c:
                add_into(r, self.rows[p], -c)
        return r

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping) -> Optional[Vector]:
        """Insert ``v``; return its reduced remainder if it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return None
        p = self._pivot(r)
        row = vec_scale(r, 1 / r[p])
        for q, other in self.rows.items():
            c = other.get(p)
            if c:
                add_into(other, row, -c)
        self.rows[p] = row
        return r

    def dimension(self) -> int:
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows, key=self._key)

    def echelon(self):
        return [self.rows[p] for p in self.pivots()]

    def __eq__(self, other):
        if not isinstance(other, SpanBasis):
            return NotImplemented
        return self.rows == other.rows

    def __len__(self):
        return len(self.rows)


def rref_span(vectors: Iterable[Mapping], key: Optional[Callable] = None) -> SpanBasis:
    basis = SpanBasis(key)
    for v in vectors:
        basis.add(v)
    return basis
