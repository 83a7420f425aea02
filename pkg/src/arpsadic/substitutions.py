"""The nine substitutions of S acting on words over {1, 2, 3}.

Words are plain ``str`` objects over the characters ``'1'``, ``'2'``, ``'3'``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .arithmetic import PAIRS, UnimodularMatrix, third
from .errors import ParseError, UnknownLabel

LETTERS = "123"

AR_LABELS = ["a1", "a2", "a3"]
POINCARE_LABELS = [f"p{j}{k}" for j, k in PAIRS]
LABELS = AR_LABELS + POINCARE_LABELS


def check_word(w: str) -> str:
    if w.strip(LETTERS):
        raise ParseError(f"word {w!r} is not over the alphabet 1,2,3")
    return w


@dataclass(frozen=True)
class AbelianVector:
    c1: int = 0
    c2: int = 0
    c3: int = 0

    def __iter__(self) -> Iterator[int]:
        yield from (self.c1, self.c2, self.c3)

    def __getitem__(self, i: int) -> int:
        return (self.c1, self.c2, self.c3)[i]

    def __add__(self, other) -> "AbelianVector":
        return AbelianVector(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other) -> "AbelianVector":
        return AbelianVector(*(a - b for a, b in zip(self, other)))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.c1, self.c2, self.c3)

    def __len__(self):
        return 3


def unit(letter: int) -> AbelianVector:
    v = [0, 0, 0]
    v[letter - 1] = 1
    return AbelianVector(*v)


def abelianize(w: str) -> AbelianVector:
    return AbelianVector(w.count("1"), w.count("2"), w.count("3"))


@dataclass(frozen=True)
class Substitution:
    """A non-erasing morphism given by the images of 1, 2 and 3."""

    images: tuple[str, str, str]
    name: str | None = None

    def __post_init__(self):
        if len(self.images) != 3:
            raise ValueError("a substitution needs exactly three images")
        for img in self.images:
            check_word(img)
            if not img:
                raise ValueError("erasing substitutions are not supported")

    def image(self, letter) -> str:
        return self.images[int(letter) - 1]

    def __call__(self, w: str) -> str:
        return apply(self, check_word(w))

    def incidence(self) -> UnimodularMatrix:
        return incidence(self)

    def __matmul__(self, other: "Substitution") -> "Substitution":
        return compose(self, other)

    def __str__(self):
        return self.name or serialize_substitution(self)


def _table(sigma: Substitution) -> dict:
    return {ord(a): img for a, img in zip(LETTERS, sigma.images)}


def apply(sigma: Substitution, w: str) -> str:
    return w.translate(_table(sigma))


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """``sigma o tau``: apply ``tau`` first, then ``sigma``."""
    name = None
    if sigma.name is not None and tau.name is not None:
        name = f"{sigma.name} {tau.name}"
    return Substitution(tuple(apply(sigma, img) for img in tau.images), name)


IDENTITY = Substitution(("1", "2", "3"), "id")


def compose_all(sigmas: Iterable[Substitution]) -> Substitution:
    """Left-to-right product ``s0 s1 ... sn``."""
    result = IDENTITY
    for s in sigmas:
        result = compose(result, s) if result is not IDENTITY else s
    return result


def incidence(sigma: Substitution) -> UnimodularMatrix:
    """Entry (i, j) counts occurrences of letter i in sigma(j)."""
    cols = [abelianize(img).as_tuple() for img in sigma.images]
    rows = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    return UnimodularMatrix(rows)


def _ar_images(k: int) -> tuple[str, str, str]:
    return tuple(str(a) if a == k else f"{a}{k}" for a in (1, 2, 3))


def _poincare_images(j: int, k: int) -> tuple[str, str, str]:
    i = third(j, k)
    images = {i: f"{i}{j}{k}", j: f"{j}{k}", k: f"{k}"}
    return tuple(images[a] for a in (1, 2, 3))


_NAMED: dict[str, Substitution] = {}
for _k in (1, 2, 3):
    _NAMED[f"a{_k}"] = Substitution(_ar_images(_k), f"a{_k}")
for _j, _k in PAIRS:
    _NAMED[f"p{_j}{_k}"] = Substitution(_poincare_images(_j, _k), f"p{_j}{_k}")

_LABEL_RE = re.compile(r"^(a|α|alpha|p|π|pi)_?([123]{1,2})$")


def canonical_label(label: str) -> str:
    """Normalize ``'alpha1'``, ``'α1'``, ``'A1'``, ``'pi23'``, ``'π23'`` ... to ``a1``/``p23``."""
    m = _LABEL_RE.match(label.strip().lower())
    if m is None:
        raise UnknownLabel(f"unknown substitution label {label!r}")
    head = "a" if m[1] in ("a", "α", "alpha") else "p"
    key = head + m[2]
    if key not in _NAMED:
        raise UnknownLabel(f"unknown substitution label {label!r}")
    return key


def named_substitution(label: str) -> Substitution:
    return _NAMED[canonical_label(label)]


def is_ar(label: str) -> bool:
    return canonical_label(label)[0] == "a"


def is_poincare(label: str) -> bool:
    return canonical_label(label)[0] == "p"


def label_indices(label: str) -> tuple[int, int, int]:
    """``(i, j, k)`` for ``p_jk``; for ``a_k`` returns ``(0, 0, k)``."""
    key = canonical_label(label)
    if key[0] == "a":
        return 0, 0, int(key[1])
    j, k = int(key[1]), int(key[2])
    return third(j, k), j, k


def parse_labels(text: str | Iterable[str]) -> list[str]:
    """Whitespace/comma separated labels to canonical form."""
    tokens = text.replace(",", " ").split() if isinstance(text, str) else list(text)
    return [canonical_label(t) for t in tokens]


def format_labels(labels: Iterable[str]) -> str:
    return " ".join(labels)


def parse_substitution(text: str) -> Substitution:
    """A label, or the explicit form ``1>123;2>23;3>3``."""
    text = text.strip()
    if ">" not in text:
        return named_substitution(text)
    images = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        letter, _, img = part.partition(">")
        letter = letter.strip()
        if letter not in ("1", "2", "3") or letter in images:
            raise ParseError(f"bad substitution clause {part!r}")
        images[letter] = check_word(img.strip())
    if set(images) != {"1", "2", "3"}:
        raise ParseError(f"substitution {text!r} must give images of 1, 2 and 3")
    return Substitution(tuple(images[a] for a in LETTERS))


def serialize_substitution(sigma: Substitution) -> str:
    return ";".join(f"{a}>{img}" for a, img in zip(LETTERS, sigma.images))


def product(labels: Iterable[str]) -> Substitution:
    return compose_all(named_substitution(l) for l in labels)
