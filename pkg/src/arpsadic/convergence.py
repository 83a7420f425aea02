"""Cone nesting, letter frequencies and balance measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arithmetic import DEFAULT_BITS, IDENTITY, SimplexVector, UnimodularMatrix, iter_orbit
from .sadic import SadicWord
from .substitutions import incidence, named_substitution

FREQUENCY_BITS = 256


@dataclass(frozen=True)
class ConeProduct:
    matrix: UnimodularMatrix
    steps: int

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "ConeProduct":
        m = IDENTITY
        n = 0
        for l in labels:
            m = m @ incidence(named_substitution(l))
            n += 1
        return cls(m, n)

    @classmethod
    def from_matrices(cls, matrices: Iterable[UnimodularMatrix]) -> "ConeProduct":
        m = IDENTITY
        n = 0
        for a in matrices:
            m = m @ a
            n += 1
        return cls(m, n)

    def then(self, other: UnimodularMatrix) -> "ConeProduct":
        return ConeProduct(self.matrix @ other, self.steps + 1)

    @property
    def columns_positive(self) -> bool:
        return self.matrix.is_positive()

    def contains(self, x: SimplexVector, bits: int = DEFAULT_BITS) -> bool:
        """Whether the ray through ``x`` lies in the closed cone."""
        pre = self.matrix.inverse().apply(x.coords)
        for c in pre:
            if hasattr(c, "sign"):
                if c.sign(bits) < 0:
                    return False
            elif c < 0:
                return False
        return True


def hilbert_distance(u: Sequence[int], v: Sequence[int]) -> float:
    """Hilbert projective distance between two nonnegative vectors (``inf`` on a zero)."""
    if any(a == 0 for a in u) or any(b == 0 for b in v):
        return math.inf
    up = max(Fraction(a, b) for a, b in zip(u, v))
    down = max(Fraction(b, a) for a, b in zip(u, v))
    # the product is >= 1; log1p keeps precision when it is close to 1
    return math.log1p(float(up * down - 1))


def cone_diameter(cp: ConeProduct | UnimodularMatrix) -> float:
    m = cp.matrix if isinstance(cp, ConeProduct) else cp
    cols = m.columns()
    return max(hilbert_distance(cols[a], cols[b]) for a in range(3) for b in range(a + 1, 3))


def column_frequency_deviation(m: UnimodularMatrix, x: SimplexVector, seed: int = 1) -> float:
    col = m.column(seed - 1)
    total = sum(col)
    return max_deviation([Fraction(c, total) for c in col], x)


def target_coordinates(x: SimplexVector, bits: int = FREQUENCY_BITS) -> tuple[Fraction, Fraction, Fraction]:
    """Normalized coordinates of ``x`` to within ``2**-bits`` relative error."""
    if x.is_rational:
        return x.rationals()
    mids = []
    for c in x.coords:
        lo, hi = c.bounds(bits)
        mids.append((lo + hi) / 2)
    total = sum(mids)
    return tuple(m / total for m in mids)


def max_deviation(freqs: Sequence[Fraction], x: SimplexVector, bits: int = FREQUENCY_BITS) -> float:
    target = target_coordinates(x, bits)
    return float(max(abs(f - t) for f, t in zip(freqs, target)))


@dataclass(frozen=True)
class FrequencyReport:
    frequencies: tuple[Fraction, Fraction, Fraction]
    target: tuple[float, float, float]
    deviation: float
    length: int

    def as_dict(self) -> dict:
        return {
            "length": self.length,
            "frequencies": [str(f) for f in self.frequencies],
            "target": [f"{t:.12f}" for t in self.target],
            "max_deviation": f"{self.deviation:.6e}",
        }


def frequency_report(handle: SadicWord | str, L: int, x: SimplexVector) -> FrequencyReport:
    word = handle if isinstance(handle, str) else handle.prefix(L)
    word = word[:L]
    if not word:
        raise ValueError("cannot measure frequencies of an empty prefix")
    n = len(word)
    freqs = tuple(Fraction(word.count(c), n) for c in "123")
    target = tuple(float(t) for t in target_coordinates(x))
    return FrequencyReport(freqs, target, max_deviation(freqs, x), n)


@dataclass(frozen=True)
class BalanceReport:
    """``per_length[n-1][i]`` is the largest difference of letter ``i+1`` counts
    between two factors of length ``n`` of the measured prefix."""

    per_length: tuple[tuple[int, int, int], ...]
    length: int

    @property
    def n_cap(self) -> int:
        return len(self.per_length)

    @property
    def max_imbalance(self) -> tuple[int, int, int]:
        if not self.per_length:
            return (0, 0, 0)
        return tuple(int(max(row[i] for row in self.per_length)) for i in range(3))

    def as_dict(self) -> dict:
        return {
            "length": self.length,
            "n_cap": self.n_cap,
            "max_imbalance": list(self.max_imbalance),
        }


def balance_report(handle: SadicWord | str, L: int, n_cap: int) -> BalanceReport:
    word = handle if isinstance(handle, str) else handle.prefix(L)
    word = word[:L]
    codes = np.frombuffer(word.encode(), dtype=np.uint8) - ord("1")
    n_cap = min(n_cap, len(word))
    prefix = [np.concatenate(([0], np.cumsum(codes == a, dtype=np.int64))) for a in range(3)]
    rows = []
    for n in range(1, n_cap + 1):
        row = []
        for a in range(3):
            window = prefix[a][n:] - prefix[a][:-n]
            row.append(int(window.max() - window.min()))
        rows.append(tuple(row))
    return BalanceReport(tuple(rows), len(word))


@dataclass(frozen=True)
class ConvergenceStep:
    step: int
    label: str
    cone_diameter: float
    freq_deviation: float

    def as_dict(self) -> dict:
        d = self.cone_diameter
        return {
            "step": self.step,
            "matrix": self.label,
            "cone_diameter": "inf" if math.isinf(d) else f"{d:.6e}",
            "freq_deviation": f"{self.freq_deviation:.6e}",
        }


def convergence_trace(x: SimplexVector, steps: int, seed: int = 1, bits: int = DEFAULT_BITS) -> list[ConvergenceStep]:
    """Cone diameter and column-frequency deviation after each orbit step.

    The trace stops early when the orbit reaches a cell boundary.
    """
    out = []
    cp = ConeProduct(IDENTITY, 0)
    if steps <= 0:
        return out
    for st in iter_orbit(x, bits):
        cp = cp.then(st.matrix)
        out.append(
            ConvergenceStep(
                cp.steps,
                st.matrix.label,
                cone_diameter(cp),
                column_frequency_deviation(cp.matrix, x, seed),
            )
        )
        if cp.steps >= steps:
            break
    return out


__all__ = [
    "BalanceReport",
    "ConeProduct",
    "ConvergenceStep",
    "FrequencyReport",
    "balance_report",
    "column_frequency_deviation",
    "cone_diameter",
    "convergence_trace",
    "frequency_report",
    "hilbert_distance",
    "max_deviation",
    "target_coordinates",
]
