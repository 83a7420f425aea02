"""Antecedents, extended images and the lives of bispecial factors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import (
    ChainStuck,
    FactorNotFound,
    InsufficientDirective,
    InvalidTable,
    NotAFactorImage,
    ParseError,
    PatternMismatch,
)
from .factors import (
    ExtensionTable,
    FactorLanguage,
    build_language,
    classify_bispecial,
    multiplicity,
)
from .sadic import DirectiveSequence, is_proper, word_from_labels
from .substitutions import (
    AbelianVector,
    canonical_label,
    label_indices,
    named_substitution,
)


# --- desubstitution ------------------------------------------------------------


@dataclass(frozen=True)
class Desubstitution:
    prepended: str
    antecedent: str
    appended: str
    case: str

    def reassemble(self, label: str) -> str:
        return self.prepended + named_substitution(label)(self.antecedent) + self.appended


def _decode(body: str, codewords: dict[str, str], partials: set[str]) -> tuple[str, str]:
    """Greedy parse of ``body`` into codewords plus a trailing partial codeword."""
    v = []
    p = 0
    n = len(body)
    while p < n:
        for code, letter in codewords.items():
            if body.startswith(code, p):
                v.append(letter)
                p += len(code)
                break
        else:
            rest = body[p:]
            if rest in partials:
                return "".join(v), rest
            raise NotAFactorImage(f"cannot parse {body!r} at offset {p}")
    return "".join(v), ""


def desubstitute(w: str, label: str) -> Desubstitution:
    """Split ``w`` as ``prepended . sigma(v) . s`` using the prefix code of ``sigma``."""
    label = canonical_label(label)
    i, j, k = label_indices(label)
    sigma = named_substitution(label)
    codewords = {sigma.image(a): str(a) for a in (1, 2, 3)}
    K = str(k)
    if label[0] == "a":
        others = {str(a) for a in (1, 2, 3) if a != k}
        if w[:1] == K:
            pre, body, case = K, w[1:], "ii"
        else:
            pre, body, case = "", w, "i"
        v, s = _decode(body, codewords, others)
        return Desubstitution(pre, v, s, case)

    I, J = str(i), str(j)
    partials = {I, J, I + J}
    first = w[:1]
    if first in ("", I):
        pre, body, case = "", w, "iii"
    elif w == J:
        return Desubstitution(J, "", "", "iv")
    elif first == J:
        if w[1] != K:
            raise NotAFactorImage(f"{w!r} is not a factor of a {label} image")
        pre, body, case = J + K, w[2:], "v"
    else:
        pre, body, case = K, w[1:], "vi"
    v, s = _decode(body, codewords, partials)
    return Desubstitution(pre, v, s, case)


def antecedent_bispecial(w: str, label: str) -> str:
    """``v`` with ``w = k sigma(v)`` or, for Poincare labels, ``w = jk sigma(v)``."""
    label = canonical_label(label)
    _, j, k = label_indices(label)
    prefixes = [str(k)] if label[0] == "a" else [str(k), f"{j}{k}"]
    try:
        d = desubstitute(w, label)
    except NotAFactorImage as exc:
        raise ParseError(str(exc)) from None
    if d.appended or d.prepended not in prefixes:
        raise ParseError(f"{w!r} is not of the form p.{label}(v) with p in {prefixes}")
    return d.antecedent


def extension_prefix(w: str, v: str, label: str) -> str:
    """The letters in front of ``sigma(v)`` in ``w`` (``k`` or ``jk``)."""
    return w[: len(w) - len(named_substitution(label)(v))]


# --- extended images -------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedImage:
    word: str
    table: ExtensionTable
    bispecial: bool


def extended_images(v: str, table: ExtensionTable, label: str) -> list[ExtendedImage]:
    """Candidate bispecial extended images of ``v`` with their predicted tables."""
    if not table.is_bispecial:
        raise InvalidTable(f"table {table} of {v!r} is not bispecial")
    label = canonical_label(label)
    i, j, k = label_indices(label)
    img = named_substitution(label)(v)
    if label[0] == "a":
        return [ExtendedImage(f"{k}{img}", table, True)]
    R = {a: table.row(a) for a in (1, 2, 3)}
    via_k = ExtensionTable.from_pairs(
        [(j, b) for b in R[i] | R[j]] + [(k, b) for b in R[k]]
    )
    via_jk = ExtensionTable.from_pairs([(i, b) for b in R[i]] + [(k, b) for b in R[j]])
    return [
        ExtendedImage(f"{k}{img}", via_k, via_k.is_bispecial),
        ExtendedImage(f"{j}{k}{img}", via_jk, via_jk.is_bispecial),
    ]


def empty_word_table(label: str) -> ExtensionTable:
    """Extensions of the empty word in ``sigma(u)`` for a proper ``u``."""
    label = canonical_label(label)
    i, j, k = label_indices(label)
    if label[0] == "a":
        i, j = (a for a in (1, 2, 3) if a != k)
        return ExtensionTable.from_pairs([(i, k), (j, k), (k, i), (k, j), (k, k)])
    return ExtensionTable.from_pairs([(i, j), (j, k), (k, i), (k, j), (k, k)])


# --- history classes ------------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    d_minus: int
    m: int
    ordinary: bool

    def as_tuple(self) -> tuple[int, int, bool]:
        return (self.d_minus, self.m, self.ordinary)


@dataclass(frozen=True)
class HistoryClass:
    """Predicted left valence, multiplicity and ordinariness from a history.

    ``w`` is the prediction for the extended image through ``k pi_jk`` at the
    last Poincare step before the end of the history, ``w_prime`` through
    ``jk pi_jk`` (``None`` when that image is not bispecial).  Histories
    without such a step have a single prediction in ``w``.
    """

    row: int
    pattern: str
    w: Prediction
    w_prime: Prediction | None = None
    last_poincare: int | None = None

    def for_prefix(self, prefix: str) -> Prediction | None:
        if self.last_poincare is None or len(prefix) == 1:
            return self.w
        return self.w_prime


def classify_history(history: Sequence[str]) -> HistoryClass:
    if not history:
        raise PatternMismatch("empty history")
    hist = [canonical_label(l) for l in history]
    last = hist[-1]
    pis = [t for t, l in enumerate(hist[:-1]) if l[0] == "p"]
    if not pis:
        if last[0] == "a":
            return HistoryClass(1, "Sa* Sa", Prediction(3, 0, True))
        return HistoryClass(2, "Sa* Sp", Prediction(3, 0, False))
    ell = pis[-1]
    i, j, k = label_indices(hist[ell])
    neutral = Prediction(2, 0, True)
    if last == f"a{k}":
        return HistoryClass(3, "S* pjk Sa* ak", neutral, None, ell)
    if last in (f"a{i}", f"a{j}"):
        return HistoryClass(4, "S* pjk Sa* {ai,aj}", neutral, neutral, ell)
    if last in (f"p{j}{i}", f"p{k}{i}", f"p{i}{j}", f"p{k}{j}"):
        return HistoryClass(5, "S* pjk Sa* {pji,pki,pij,pkj}", neutral, neutral, ell)
    if last in (f"p{j}{k}", f"p{i}{k}"):
        return HistoryClass(
            6, "S* pjk Sa* {pjk,pik}", Prediction(2, 1, False), Prediction(2, -1, False), ell
        )
    raise PatternMismatch(f"history {' '.join(hist)} matches no row")


def matches_non_neutral_shape(history: Sequence[str]) -> bool:
    """``S* pi_jk alpha_j* alpha_i Sa* {pi_ik, pi_jk}``."""
    hist = [canonical_label(l) for l in history]
    if len(hist) < 3:
        return False
    for ell, l in enumerate(hist):
        if l[0] != "p":
            continue
        i, j, k = label_indices(l)
        t = ell + 1
        while t < len(hist) and hist[t] == f"a{j}":
            t += 1
        if t >= len(hist) - 1 or hist[t] != f"a{i}":
            continue
        middle = hist[t + 1 : -1]
        if all(x[0] == "a" for x in middle) and hist[-1] in (f"p{i}{k}", f"p{j}{k}"):
            return True
    return False


def matches_positive_abelian_shape(history: Sequence[str]) -> bool:
    """``pi_jk S* alpha_i S* S``: such factors contain every letter."""
    hist = [canonical_label(l) for l in history]
    if len(hist) < 3 or hist[0][0] != "p":
        return False
    i, _, _ = label_indices(hist[0])
    return f"a{i}" in hist[1:-1]


# --- lives ------------------------------------------------------------------------


class ShiftedLanguages:
    """Factor languages of the desubstituted words ``u(t) = s_t s_t+1 ...(a)``."""

    def __init__(self, lang: FactorLanguage, directive: DirectiveSequence | None = None, seed: int = 1):
        self.lang = lang
        self.seed = seed
        if directive is None and lang.source is not None:
            directive = lang.source.directive
            self.seed = lang.source.seed
        self.directive = directive
        self._cache: dict[int, FactorLanguage] = {0: lang}

    def __call__(self, t: int) -> FactorLanguage:
        if t in self._cache:
            return self._cache[t]
        if self.lang.literal:
            if self.directive is None:
                raise InsufficientDirective("a literal word needs its directive to be desubstituted")
            if self.directive.tail is None and t > len(self.directive.window):
                raise InsufficientDirective("cannot shift beyond the directive window")
            word = word_from_labels(self.directive.drop(t).window, self.seed)
            out = build_language(word, self.lang.n_max)
        else:
            out = build_language(self.lang.source.shifted(t), self.lang.n_max)
        self._cache[t] = out
        return out


@dataclass
class BispecialRecord:
    word: str
    table: ExtensionTable
    m: int
    age: int
    history: list[str]
    life: list[tuple[str, ExtensionTable | None]]
    verified: bool = True
    problems: list[str] = field(default_factory=list)
    proper_base: bool | None = None  # is the word below the empty word proper

    @property
    def kind(self) -> str:
        return classify_bispecial(self.table).tag

    @property
    def branch(self) -> str | None:
        """Letters in front at the last Poincare step of the history, if any."""
        cls = self.history_class()
        if cls.last_poincare is None:
            return None
        ell = cls.last_poincare
        return extension_prefix(self.life[ell][0], self.life[ell + 1][0], self.history[ell])

    def history_class(self) -> HistoryClass:
        return classify_history(self.history)

    def prediction(self) -> Prediction | None:
        cls = self.history_class()
        if cls.last_poincare is None:
            return cls.w
        return cls.for_prefix(self.branch)

    def observed(self) -> Prediction:
        return Prediction(self.table.d_minus, self.m, self.table.is_ordinary)

    def as_dict(self) -> dict:
        return {
            "word": self.word,
            "length": len(self.word),
            "m": self.m,
            "class": self.kind,
            "age": self.age,
            "history": list(self.history),
            "life_lengths": [len(w) for w, _ in self.life],
        }


def life(
    w: str,
    directive: DirectiveSequence,
    lang: FactorLanguage,
    languages: Callable[[int], FactorLanguage] | None = None,
) -> BispecialRecord:
    """Desubstitute ``w`` down to the empty word, recomputing each table.

    ``languages(t)`` must return the factor language of the word obtained by
    removing the first ``t`` substitutions; by default it is derived from
    ``lang``.
    """
    if languages is None:
        languages = ShiftedLanguages(lang, directive)
    table = lang.extensions(w)
    if not table.is_bispecial:
        raise InvalidTable(f"{w!r} is not bispecial")
    chain: list[tuple[str, ExtensionTable | None]] = [(w, table)]
    history: list[str] = []
    problems: list[str] = []
    cur = w
    t = 0
    while True:
        try:
            label = directive.label(t)
        except InsufficientDirective as exc:
            raise ChainStuck(f"history of {w!r} runs past the directive: {exc}") from None
        history.append(label)
        if not cur:
            break
        try:
            v = antecedent_bispecial(cur, label)
        except ParseError as exc:
            raise ChainStuck(f"cannot desubstitute {cur!r} under {label}: {exc}") from None
        if len(v) >= len(cur):
            problems.append(f"antecedent {v!r} of {cur!r} is not shorter")
        t += 1
        try:
            vt = languages(t).extensions(v)
        except (FactorNotFound, InsufficientDirective) as exc:
            vt = None
            problems.append(f"no table for {v!r} at depth {t}: {exc}")
        if vt is not None and not vt.is_bispecial:
            problems.append(f"antecedent {v!r} at depth {t} is not bispecial")
        chain.append((v, vt))
        cur = v
    try:
        base = languages(t + 1).word
        proper_base = len(base) > 1 and is_proper(base)
    except (InsufficientDirective, ValueError):
        proper_base = None
    return BispecialRecord(
        w, table, multiplicity(table), t, history, chain, not problems, problems, proper_base
    )


# --- order -------------------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    kind: str  # "StrictLess", "LeqWithStrictSet", "Incomparable"
    strict: frozenset = frozenset()

    def __str__(self):
        if self.kind == "LeqWithStrictSet":
            return f"LeqWithStrictSet({sorted(self.strict)})"
        return self.kind


def compare_abelian(v, w) -> Comparison:
    v, w = tuple(v), tuple(w)
    if all(a < b for a, b in zip(v, w)):
        return Comparison("StrictLess", frozenset((1, 2, 3)))
    if all(a <= b for a, b in zip(v, w)):
        return Comparison("LeqWithStrictSet", frozenset(t + 1 for t in range(3) if v[t] < w[t]))
    return Comparison("Incomparable")


def image_vector(label: str, v) -> AbelianVector:
    """Abelian vector of ``sigma(x)`` from that of ``x``."""
    sigma = named_substitution(label)
    out = AbelianVector()
    for a, n in zip((1, 2, 3), tuple(v)):
        img = sigma.image(a)
        out = out + AbelianVector(n * img.count("1"), n * img.count("2"), n * img.count("3"))
    return out


def extension_prefixes(label: str) -> list[str]:
    _, j, k = label_indices(label)
    return [str(k)] if canonical_label(label)[0] == "a" else [str(k), f"{j}{k}"]


# --- alternance -------------------------------------------------------------------


@dataclass
class AlternanceReport:
    n_max: int
    records: list[BispecialRecord]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def non_neutral(self) -> list[BispecialRecord]:
        return [r for r in self.records if r.m != 0]

    def as_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "ok": self.ok,
            "non_neutral": [
                {"word": r.word, "length": len(r.word), "m": r.m, "age": r.age}
                for r in self.non_neutral()
            ],
            "violations": list(self.violations),
        }


def bispecial_records(
    lang: FactorLanguage,
    n_max: int | None = None,
    directive: DirectiveSequence | None = None,
) -> list[BispecialRecord]:
    if directive is None:
        if lang.source is None:
            raise InsufficientDirective("a directive is needed to compute histories")
        directive = lang.source.directive
    languages = ShiftedLanguages(lang, directive)
    out = [life(w, directive, lang, languages) for w, _ in lang.bispecials(n_max)]
    return out


def alternance_report(
    lang: FactorLanguage,
    n_max: int | None = None,
    directive: DirectiveSequence | None = None,
) -> AlternanceReport:
    n_max = lang.n_max if n_max is None else n_max
    records = bispecial_records(lang, n_max, directive)
    violations: list[str] = []

    signed = [r for r in records if r.m != 0]
    expected = 1
    prev_len = None
    for r in signed:
        if r.m not in (1, -1):
            violations.append(f"{r.word!r} has multiplicity {r.m}")
        elif r.m != expected:
            violations.append(f"{r.word!r} (length {len(r.word)}) has sign {r.m:+d}, expected {expected:+d}")
        if prev_len == len(r.word):
            violations.append(f"two non-neutral bispecials of length {prev_len}")
        prev_len = len(r.word)
        expected = -r.m if r.m in (1, -1) else expected

    by_age: dict[int, list[BispecialRecord]] = {}
    for r in records:
        by_age.setdefault(r.age, []).append(r)
    for age, rs in sorted(by_age.items()):
        if len(rs) > 2:
            violations.append(f"{len(rs)} bispecials of age {age}")

    strong = [r for r in records if r.m > 0]
    weak = [r for r in records if r.m < 0]
    for zp in strong:
        for zm in weak:
            if zp.age == zm.age and not len(zp.word) < len(zm.word):
                violations.append(f"same age {zp.age}: strong {zp.word!r} not shorter than weak {zm.word!r}")
            if zm.age < zp.age and not len(zm.word) < len(zp.word):
                violations.append(f"weak {zm.word!r} (age {zm.age}) not shorter than strong {zp.word!r} (age {zp.age})")
    for wp in strong:
        partners = [r for r in weak if r.age == wp.age]
        if not partners:
            continue
        wm = partners[0]
        gap = len(wm.word) - len(wp.word)
        younger = [z for z in weak if z.age < wp.age]
        if younger:
            for z in younger:
                if not len(wp.word) - len(z.word) > gap:
                    violations.append(
                        f"gap: |{wp.word}| - |{z.word}| <= |{wm.word}| - |{wp.word}|"
                    )
        elif not len(wp.word) >= gap:
            violations.append(f"gap: |{wp.word}| < |{wm.word}| - |{wp.word}|")
    return AlternanceReport(n_max, records, violations)


__all__ = [
    "AlternanceReport",
    "BispecialRecord",
    "Comparison",
    "Desubstitution",
    "ExtendedImage",
    "HistoryClass",
    "Prediction",
    "ShiftedLanguages",
    "alternance_report",
    "antecedent_bispecial",
    "bispecial_records",
    "classify_history",
    "compare_abelian",
    "desubstitute",
    "empty_word_table",
    "extended_images",
    "extension_prefix",
    "extension_prefixes",
    "image_vector",
    "life",
    "matches_non_neutral_shape",
    "matches_positive_abelian_shape",
]
