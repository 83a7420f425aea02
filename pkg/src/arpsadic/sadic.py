"""Directive sequences and the S-adic words they generate."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arithmetic import DEFAULT_BITS, IDENTITY, SimplexVector, iter_orbit
from .errors import InsufficientDirective
from .substitutions import (
    canonical_label,
    check_word,
    format_labels,
    incidence,
    named_substitution,
    parse_labels,
)


@dataclass(frozen=True)
class DirectiveSequence:
    """A finite window of labels, optionally followed by a periodic tail.

    With ``tail`` set, label ``n`` for ``n >= len(window)`` is
    ``tail[(n - len(window)) % len(tail)]``.
    """

    window: tuple[str, ...] = ()
    tail: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(canonical_label(l) for l in self.window))
        if self.tail is not None:
            tail = tuple(canonical_label(l) for l in self.tail)
            if not tail:
                raise ValueError("periodic tail must be nonempty")
            object.__setattr__(self, "tail", tail)

    @classmethod
    def parse(cls, text: str, tail: str | None = None) -> "DirectiveSequence":
        return cls(tuple(parse_labels(text)), tuple(parse_labels(tail)) if tail else None)

    @property
    def is_infinite(self) -> bool:
        return self.tail is not None

    def __len__(self):
        return len(self.window)

    def label(self, n: int) -> str:
        if n < len(self.window):
            return self.window[n]
        if self.tail is None:
            raise InsufficientDirective(f"directive window has only {len(self.window)} labels")
        return self.tail[(n - len(self.window)) % len(self.tail)]

    def labels(self, n: int) -> list[str]:
        return [self.label(t) for t in range(n)]

    def drop(self, m: int) -> "DirectiveSequence":
        if m <= len(self.window):
            return DirectiveSequence(self.window[m:], self.tail)
        if self.tail is None:
            raise InsufficientDirective("cannot shift beyond the directive window")
        r = (m - len(self.window)) % len(self.tail)
        return DirectiveSequence((), self.tail[r:] + self.tail[:r])

    def __str__(self):
        s = format_labels(self.window)
        if self.tail:
            s += " (" + format_labels(self.tail) + ")^w"
        return s.strip()


def directive_from_vector(x: SimplexVector, n: int, bits: int = DEFAULT_BITS) -> DirectiveSequence:
    """First ``n`` labels of the orbit of ``x`` (fewer if a boundary is reached)."""
    labels = []
    if n > 0:
        for st in iter_orbit(x, bits):
            labels.append(st.cell.substitution_label)
            if len(labels) >= n:
                break
    return DirectiveSequence(tuple(labels))


# --- types -------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceType:
    kind: str  # "Type1", "Type2", "Type3", "Indeterminate"
    letters: tuple[int, ...] = ()

    def __str__(self):
        if self.letters:
            return f"{self.kind}({','.join(map(str, self.letters))})"
        return self.kind

    def allowed_seeds(self) -> tuple[int, ...]:
        if self.kind in ("Type1", "Type2"):
            return self.letters
        return (1, 2, 3)


def classify_type(seq: DirectiveSequence) -> SequenceType:
    if seq.tail is not None:
        tail = set(seq.tail)
        if any(l[0] == "p" for l in tail):
            return SequenceType("Type3")
        ks = tuple(sorted(int(l[1]) for l in tail))
        if len(ks) == 1:
            return SequenceType("Type1", ks)
        if len(ks) == 2:
            return SequenceType("Type2", ks)
        return SequenceType("Type3")
    window = seq.window
    if not window:
        return SequenceType("Indeterminate")
    last_pi = max((t for t, l in enumerate(window) if l[0] == "p"), default=-1)
    after = {l for l in window[last_pi + 1:]}
    if {"a1", "a2", "a3"} <= after:
        return SequenceType("Type3")
    if last_pi >= 0 and last_pi >= len(window) - len(window) // 3 - (len(window) % 3 > 0):
        return SequenceType("Type3")
    return SequenceType("Indeterminate")


def weakly_primitive_window(labels: Sequence[str]) -> bool:
    if not labels:
        raise ValueError("window must be nonempty")
    m = IDENTITY
    for l in labels:
        m = m @ incidence(named_substitution(l))
    return m.is_positive()


def positive_window_end(labels: Sequence[str], start: int = 0) -> int | None:
    """Smallest ``e`` such that the product over ``labels[start:e]`` is positive."""
    m = IDENTITY
    for e in range(start, len(labels)):
        m = m @ incidence(named_substitution(labels[e]))
        if m.is_positive():
            return e + 1
    return None


def is_proper(prefix: str) -> bool:
    """Every letter occurs with some letter on its left."""
    if not prefix:
        raise ValueError("prefix must be nonempty")
    return {prefix[t] for t in range(1, len(prefix))} >= {"1", "2", "3"}


# --- generation --------------------------------------------------------------


@dataclass
class SadicWord:
    """Handle on ``lim s0 s1 ... sn(a^inf)`` with an internal prefix cache.

    ``non_recurrent_risk`` is set when the seed letter violates the letter
    restriction attached to a declared Type 1 or Type 2 tail.
    """

    directive: DirectiveSequence
    seed: int = 1
    non_recurrent_risk: bool = field(init=False, default=False)
    _cache: str = field(init=False, default="", repr=False)
    _depth: int = field(init=False, default=-1, repr=False)
    _lock: threading.Lock = field(init=False, default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.seed not in (1, 2, 3):
            raise ValueError("seed letter must be 1, 2 or 3")
        if self.directive.tail is not None:
            t = classify_type(self.directive)
            self.non_recurrent_risk = self.seed not in t.allowed_seeds()

    @property
    def depth(self) -> int:
        """Depth of the last generated image (``-1`` before any call)."""
        return self._depth

    def _periodic_base(self) -> str | None:
        """If the tail fixes the seed, the word is ``v^inf`` for ``v`` returned here."""
        d = self.directive
        if d.tail is None:
            return None
        a = str(self.seed)
        w = a
        for l in reversed(d.tail):
            w = named_substitution(l)(w)
        if w != a:
            return None
        v = a
        for l in reversed(d.window):
            v = named_substitution(l)(v)
        return v

    def _depth_for(self, length: int) -> int:
        """Smallest m with |s0...sm(a)| >= length."""
        d = self.directive
        m_prod = IDENTITY
        col = self.seed - 1
        n = 0
        limit = len(d.window) if d.tail is None else None
        while True:
            if limit is not None and n >= limit:
                raise InsufficientDirective(
                    f"window of {limit} labels gives only {sum(m_prod.column(col))} letters, "
                    f"{length} requested"
                )
            m_prod = m_prod @ incidence(named_substitution(d.label(n)))
            if sum(m_prod.column(col)) >= length:
                return n
            n += 1

    def image(self, depth: int, cap: int | None = None) -> str:
        """``s0...s_depth(a)``, truncated to ``cap`` letters when given."""
        w = str(self.seed)
        for t in range(depth, -1, -1):
            if cap is not None:
                w = w[:cap]
            w = named_substitution(self.directive.label(t))(w)
        return w if cap is None else w[:cap]

    def prefix(self, length: int) -> str:
        if length < 0:
            raise ValueError("length must be nonnegative")
        if length <= 1:
            return str(self.seed)[:length]
        cached = self._cache
        if len(cached) >= length:
            return cached[:length]
        base = self._periodic_base()
        if base is not None:
            word = (base * (length // len(base) + 1))[:length]
            depth = -1
        else:
            depth = self._depth_for(length)
            word = self.image(depth, cap=length)
        with self._lock:
            if len(word) > len(self._cache):
                self._cache = word
                self._depth = depth
        return word

    def full_image(self) -> str:
        """The whole image of a finite window (the longest prefix it determines)."""
        if self.directive.tail is not None:
            raise ValueError("the word is infinite")
        if not self.directive.window:
            return str(self.seed)
        return self.image(len(self.directive.window) - 1)

    def shifted(self, m: int) -> "SadicWord":
        if m == 0:
            return self
        if self.directive.tail is None and m > len(self.directive.window):
            raise InsufficientDirective("cannot shift beyond the directive window")
        return SadicWord(self.directive.drop(m), self.seed)


def word_from_labels(labels: Iterable[str], seed: int = 1) -> str:
    """The finite image ``s0 s1 ... sn(seed)``."""
    w = str(seed)
    for l in reversed(list(labels)):
        w = named_substitution(l)(w)
    return check_word(w)
