"""Exact arithmetic on the simplex and the Arnoux-Rauzy-Poincare map.

Coordinates are :class:`Scalar` values: rational linear combinations of the
constants ``1``, ``pi`` and ``sqrt(m)`` for squarefree ``m > 1``.  Those
constants are linearly independent over Q, so a nonzero combination is a
nonzero real and its sign can always be certified by refining rigorous
integer bounds.  Rational vectors are handled exactly without any oracle.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from mpmath.libmp import mpf_pi, round_ceiling, round_floor

from .errors import DegenerateVector, ParseError, PrecisionExhausted, UnknownLabel

DEFAULT_BITS = 4096
_START_BITS = 64

ONE = "1"
PI = "pi"


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(c, m)`` with ``n = c*c*m`` and ``m`` squarefree."""
    c, m, f = 1, n, 2
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            c *= f
        f += 1
    return c, m


def _sqrt_key(m: int) -> str:
    return f"sqrt{m}"


def _constant_bounds(key: str, bits: int) -> tuple[int, int]:
    """Integers ``lo <= key * 2**bits <= hi``."""
    if key == ONE:
        v = 1 << bits
        return v, v
    if key == PI:
        _, man, exp, _ = mpf_pi(bits + 8, round_floor)
        sh = exp + bits
        lo = man << sh if sh >= 0 else man >> -sh
        _, man, exp, _ = mpf_pi(bits + 8, round_ceiling)
        sh = exp + bits
        hi = man << sh if sh >= 0 else -((-man) >> -sh)
        return lo, hi
    m = int(key[4:])
    r = math.isqrt(m << (2 * bits))
    return r, r + 1


@dataclass(frozen=True)
class Scalar:
    """An exact real: a rational combination of 1, pi and square roots."""

    terms: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, value=0) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            return parse_scalar(value)
        return cls._build({ONE: Fraction(value)})

    @classmethod
    def pi(cls) -> "Scalar":
        return cls._build({PI: Fraction(1)})

    @classmethod
    def sqrt(cls, n: int) -> "Scalar":
        if n < 0:
            raise ValueError("sqrt of a negative integer")
        r = math.isqrt(n)
        if r * r == n:
            return cls.of(r)
        c, m = _squarefree_split(n)
        return cls._build({_sqrt_key(m): Fraction(c)})

    @classmethod
    def _build(cls, d: dict) -> "Scalar":
        return cls(tuple(sorted((k, Fraction(v)) for k, v in d.items() if v != 0)))

    def _dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other):
        other = Scalar.of(other)
        d = self._dict()
        for k, v in other.terms:
            d[k] = d.get(k, 0) + v
        return Scalar._build(d)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other):
        return self + (-Scalar.of(other))

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __mul__(self, c):
        if isinstance(c, Scalar):
            if c.is_rational:
                c = c.rational()
            elif self.is_rational:
                return c * self.rational()
            else:
                raise TypeError("product of two irrational scalars is not linear")
        c = Fraction(c)
        return Scalar._build({k: v * c for k, v in self.terms})

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Scalar):
            if not c.is_rational:
                raise TypeError("division by an irrational scalar")
            c = c.rational()
        return self * (1 / Fraction(c))

    @property
    def is_rational(self) -> bool:
        return all(k == ONE for k, _ in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self._dict().get(ONE, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rigorous enclosure ``lo <= self <= hi`` with ``bits`` of refinement."""
        den = 1
        for _, v in self.terms:
            den = den * v.denominator // math.gcd(den, v.denominator)
        lo = hi = 0
        for k, v in self.terms:
            a = v.numerator * (den // v.denominator)
            clo, chi = _constant_bounds(k, bits)
            if a >= 0:
                lo += a * clo
                hi += a * chi
            else:
                lo += a * chi
                hi += a * clo
        scale = den << bits
        return Fraction(lo, scale), Fraction(hi, scale)

    def sign(self, bits: int = DEFAULT_BITS) -> int:
        if not self.terms:
            return 0
        if self.is_rational:
            v = self.rational()
            return (v > 0) - (v < 0)
        prec = _START_BITS
        while True:
            lo, hi = self.bounds(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if prec >= bits:
                raise PrecisionExhausted(f"sign of {self} unresolved at {bits} bits")
            prec = min(2 * prec, bits)

    def to_float(self) -> float:
        lo, hi = self.bounds(80)
        return float((lo + hi) / 2)

    def __float__(self):
        return self.to_float()

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in self.terms:
            if k == ONE:
                parts.append(str(v))
            else:
                name = "pi" if k == PI else f"sqrt({k[4:]})"
                parts.append(name if v == 1 else f"{v}*{name}")
        return " + ".join(parts)


_TERM = re.compile(
    r"^(?:(?P<coef>[0-9]+(?:/[0-9]+)?)\s*\*\s*)?"
    r"(?:(?P<pi>pi)|sqrt\(\s*(?P<sq>[0-9]+)\s*\)|(?P<num>[0-9]+(?:/[0-9]+)?|[0-9]*\.[0-9]+))$"
)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"1 + 2*sqrt(2) - 1/3"`` style sums of pi, sqrt(n) and rationals."""
    src = text.strip().lower().replace("π", "pi").replace("√", "sqrt")
    if not src:
        raise ParseError("empty scalar")
    tokens = re.split(r"([+-])", src)
    total = Scalar()
    sign = 1
    expect_term = True
    for tok in tokens:
        tok = tok.strip()
        if tok in ("+", "-"):
            sign = sign * (-1 if tok == "-" else 1)
            continue
        if not tok:
            continue
        m = _TERM.match(tok)
        if m is None:
            raise ParseError(f"cannot parse term {tok!r} in {text!r}")
        coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
        if m["pi"]:
            t = Scalar.pi()
        elif m["sq"]:
            t = Scalar.sqrt(int(m["sq"]))
        else:
            t = Scalar.of(Fraction(m["num"]))
        total = total + t * (coef * sign)
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError(f"no terms in {text!r}")
    return total


@dataclass(frozen=True)
class SimplexVector:
    """A point of the standard 2-simplex.

    Rational vectors are stored normalized (coordinates sum to 1).  Vectors
    with irrational coordinates are stored as a positive multiple of the
    normalized point, since every question asked of them is a sign question
    that does not depend on the scale; :meth:`approx` gives the normalized
    coordinates numerically.
    """

    coords: tuple[Scalar, Scalar, Scalar]

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.coords)

    def l1_norm(self) -> Scalar:
        return self.coords[0] + self.coords[1] + self.coords[2]

    def rationals(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(c.rational() for c in self.coords)

    def approx(self) -> tuple[float, float, float]:
        if self.is_rational:
            return tuple(float(c) for c in self.rationals())
        vals = [c.to_float() for c in self.coords]
        s = sum(vals)
        return tuple(v / s for v in vals)

    def __str__(self):
        if self.is_rational:
            return "(" + ", ".join(str(c) for c in self.rationals()) + ")"
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def normalize(x1, x2, x3, bits: int = DEFAULT_BITS) -> SimplexVector:
    coords = tuple(Scalar.of(c) for c in (x1, x2, x3))
    for c in coords:
        if c.sign(bits) < 0:
            raise ValueError(f"negative coordinate {c}")
    total = coords[0] + coords[1] + coords[2]
    if total.sign(bits) == 0:
        raise ValueError("the zero vector is not in the simplex")
    if total.is_rational:
        t = total.rational()
        coords = tuple(c / t for c in coords)
    return SimplexVector(coords)


def parse_vector(text: str, bits: int = DEFAULT_BITS) -> SimplexVector:
    """Parse ``"1,pi,sqrt(2)"`` or ``"9/20,7/20,1/5"`` and normalize."""
    parts = text.split(",")
    if len(parts) != 3:
        raise ParseError(f"expected three comma-separated coordinates, got {text!r}")
    return normalize(*(parse_scalar(p) for p in parts), bits=bits)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class UnimodularMatrix:
    """A 3x3 integer matrix (arbitrary precision entries)."""

    rows: tuple[tuple[int, int, int], ...]
    label: str | None = field(default=None, compare=False)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        a, b = self.rows, other.rows
        rows = tuple(
            tuple(sum(a[i][t] * b[t][j] for t in range(3)) for j in range(3))
            for i in range(3)
        )
        return UnimodularMatrix(rows)

    def det(self) -> int:
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    def inverse(self) -> "UnimodularMatrix":
        det = self.det()
        if det not in (1, -1):
            raise ValueError("matrix is not unimodular")
        m = self.rows
        cof = [
            [
                (m[(j + 1) % 3][(i + 1) % 3] * m[(j + 2) % 3][(i + 2) % 3]
                 - m[(j + 1) % 3][(i + 2) % 3] * m[(j + 2) % 3][(i + 1) % 3])
                for j in range(3)
            ]
            for i in range(3)
        ]
        return UnimodularMatrix(tuple(tuple(v * det for v in row) for row in cof))

    def apply(self, v: Sequence):
        return tuple(
            self.rows[i][0] * v[0] + self.rows[i][1] * v[1] + self.rows[i][2] * v[2]
            for i in range(3)
        )

    def column(self, j: int) -> tuple[int, int, int]:
        return tuple(self.rows[i][j] for i in range(3))

    def columns(self):
        return [self.column(j) for j in range(3)]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for row in self.rows for v in row)

    def is_positive(self) -> bool:
        return all(v > 0 for row in self.rows for v in row)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(v) for v in r) for r in self.rows) + "]"


IDENTITY = UnimodularMatrix(((1, 0, 0), (0, 1, 0), (0, 0, 1)), "Id")

PAIRS = [(j, k) for j in (1, 2, 3) for k in (1, 2, 3) if j != k]


def third(j: int, k: int) -> int:
    return 6 - j - k


def _ar_matrix(k: int) -> UnimodularMatrix:
    rows = [[int(r == c) for c in range(3)] for r in range(3)]
    rows[k - 1] = [1, 1, 1]
    return UnimodularMatrix(tuple(map(tuple, rows)), f"A{k}")


def _p_matrix(j: int, k: int) -> UnimodularMatrix:
    # incidence of i -> ijk, j -> jk, k -> k
    i = third(j, k)
    cols = {i: (i, j, k), j: (j, k), k: (k,)}
    rows = [[0] * 3 for _ in range(3)]
    for c, image in cols.items():
        for letter in image:
            rows[letter - 1][c - 1] += 1
    return UnimodularMatrix(tuple(map(tuple, rows)), f"P{j}{k}")


def _h_matrix(j: int, k: int) -> UnimodularMatrix:
    # identity plus a single 1 at (i, k)
    i = third(j, k)
    rows = [[int(r == c) for c in range(3)] for r in range(3)]
    rows[i - 1][k - 1] = 1
    return UnimodularMatrix(tuple(map(tuple, rows)), f"H{j}{k}")


_NAMED: dict[str, UnimodularMatrix] = {"Id": IDENTITY}
for _k in (1, 2, 3):
    _NAMED[f"A{_k}"] = _ar_matrix(_k)
for _j, _k in PAIRS:
    _NAMED[f"P{_j}{_k}"] = _p_matrix(_j, _k)
    _NAMED[f"H{_j}{_k}"] = _h_matrix(_j, _k)


def named_matrix(label: str) -> UnimodularMatrix:
    key = label.strip().replace("_", "")
    key = key[:1].upper() + key[1:].lower() if key.lower() == "id" else key.upper()
    try:
        return _NAMED[key]
    except KeyError:
        raise UnknownLabel(f"unknown matrix label {label!r}") from None


def matrix_labels() -> list[str]:
    return list(_NAMED)


# ---------------------------------------------------------------------------
# partition and map T


@dataclass(frozen=True)
class PartitionCell:
    """``AR(k)``, ``P(j,k)`` or ``Degenerate``."""

    kind: str
    j: int | None = None
    k: int | None = None

    @classmethod
    def ar(cls, k: int) -> "PartitionCell":
        return cls("AR", None, k)

    @classmethod
    def poincare(cls, j: int, k: int) -> "PartitionCell":
        return cls("P", j, k)

    @property
    def is_degenerate(self) -> bool:
        return self.kind == "Degenerate"

    @property
    def matrix_label(self) -> str:
        if self.kind == "AR":
            return f"A{self.k}"
        if self.kind == "P":
            return f"P{self.j}{self.k}"
        raise DegenerateVector("degenerate cell has no matrix")

    @property
    def substitution_label(self) -> str:
        return self.matrix_label.lower()

    def cone(self) -> UnimodularMatrix:
        """The matrix whose columns span the cell."""
        if self.kind == "AR":
            return _NAMED[f"A{self.k}"]
        return _NAMED[f"P{self.j}{self.k}"] @ _NAMED[f"H{self.j}{self.k}"]

    def __str__(self):
        if self.kind == "AR":
            return f"AR({self.k})"
        if self.kind == "P":
            return f"P({self.j},{self.k})"
        return "Degenerate"


DEGENERATE = PartitionCell("Degenerate")

# AR cells first, then P cells in lexicographic (j, k) order
CELLS = [PartitionCell.ar(k) for k in (1, 2, 3)] + [PartitionCell.poincare(j, k) for j, k in PAIRS]
_CELL_INVERSES = [(c, c.cone().inverse()) for c in CELLS]


def _cell_signs(cell_inverse: UnimodularMatrix, x: SimplexVector, bits: int) -> list[int]:
    return [Scalar.of(c).sign(bits) for c in cell_inverse.apply(x.coords)]


def membership(x: SimplexVector, bits: int = DEFAULT_BITS) -> dict[PartitionCell, bool]:
    """Strict membership of ``x`` in each of the nine cells (no early exit)."""
    return {
        cell: all(s > 0 for s in _cell_signs(inv, x, bits)) for cell, inv in _CELL_INVERSES
    }


def classify(x: SimplexVector, bits: int = DEFAULT_BITS) -> PartitionCell:
    for cell, inv in _CELL_INVERSES:
        signs = _cell_signs(inv, x, bits)
        if all(s > 0 for s in signs):
            return cell
        if all(s >= 0 for s in signs):
            return DEGENERATE
    return DEGENERATE


def matrix_of(cell: PartitionCell) -> UnimodularMatrix:
    return named_matrix(cell.matrix_label)


def _renormalize(coords: tuple) -> SimplexVector:
    coords = tuple(Scalar.of(c) for c in coords)
    if all(c.is_rational for c in coords):
        total = sum((c.rational() for c in coords), Fraction(0))
        return SimplexVector(tuple(Scalar.of(c.rational() / total) for c in coords))
    return SimplexVector(coords)


def step(x: SimplexVector, bits: int = DEFAULT_BITS) -> tuple[UnimodularMatrix, SimplexVector]:
    """One application of the map T: ``(M(x), M(x)^-1 x / |M(x)^-1 x|_1)``."""
    cell = classify(x, bits)
    if cell.is_degenerate:
        raise DegenerateVector(f"{x} lies on a cell boundary")
    m = matrix_of(cell)
    return m, _renormalize(m.inverse().apply(x.coords))


class OrbitStep(NamedTuple):
    cell: PartitionCell
    matrix: UnimodularMatrix
    point: SimplexVector  # the image T(x) after this step


class Orbit(list):
    """List of :class:`OrbitStep`; ``terminated`` marks a boundary hit."""

    def __init__(self, steps=(), terminated: bool = False, final: SimplexVector | None = None):
        super().__init__(steps)
        self.terminated = terminated
        self.final = final

    @property
    def labels(self) -> list[str]:
        return [s.matrix.label for s in self]


def iter_orbit(x: SimplexVector, bits: int = DEFAULT_BITS) -> Iterator[OrbitStep]:
    """Yield orbit steps until a boundary is hit (then stop silently)."""
    while True:
        cell = classify(x, bits)
        if cell.is_degenerate:
            return
        m = matrix_of(cell)
        x = _renormalize(m.inverse().apply(x.coords))
        yield OrbitStep(cell, m, x)


def orbit(x: SimplexVector, n: int, bits: int = DEFAULT_BITS) -> Orbit:
    if n < 0:
        raise ValueError("orbit length must be nonnegative")
    steps = []
    current = x
    for _ in range(n):
        cell = classify(current, bits)
        if cell.is_degenerate:
            return Orbit(steps, terminated=True, final=current)
        m = matrix_of(cell)
        current = _renormalize(m.inverse().apply(current.coords))
        steps.append(OrbitStep(cell, m, current))
    return Orbit(steps, terminated=False, final=current)
