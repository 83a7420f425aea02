"""Factor languages, extension tables and complexity profiles.

Factors are indexed with a suffix array truncated to the lengths of
interest: suffixes are sorted by their first ``2**K`` letters using prefix
doubling, and longest common prefixes are recovered by binary lifting over
the stored rank levels.  For a fixed length ``n`` the suffixes sharing a
length-``n`` prefix form a contiguous run, so the extension table of every
factor of length ``n`` is one ``bitwise_or.reduceat`` away.

An extension table is a 9-bit mask; bit ``3*(a-1) + (b-1)`` records that
``a w b`` occurs.  Only occurrences with a letter on both sides count.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import FactorNotFound, InsufficientDirective, ProfileMismatch, StabilizationFailed
from .arithmetic import IDENTITY
from .sadic import SadicWord, classify_type
from .substitutions import incidence, named_substitution

DEFAULT_FLOOR = 16
DEFAULT_AGREE = 3
DEFAULT_ROUNDS = 16


# --- extension tables --------------------------------------------------------


def _bit(a: int, b: int) -> int:
    return 1 << (3 * (a - 1) + (b - 1))


def _mask_pairs(mask: int) -> list[tuple[int, int]]:
    return [(a, b) for a in (1, 2, 3) for b in (1, 2, 3) if mask & _bit(a, b)]


def _ordinary(mask: int) -> bool:
    pairs = _mask_pairs(mask)
    return any(all(c == a or d == b for c, d in pairs) for a, b in pairs)


_ROWS = [sum(_bit(a, b) for b in (1, 2, 3)) for a in (1, 2, 3)]
_COLS = [sum(_bit(a, b) for a in (1, 2, 3)) for b in (1, 2, 3)]

CARD = np.array([bin(m).count("1") for m in range(512)], dtype=np.int64)
DMINUS = np.array([sum(bool(m & r) for r in _ROWS) for m in range(512)], dtype=np.int64)
DPLUS = np.array([sum(bool(m & c) for c in _COLS) for m in range(512)], dtype=np.int64)
MULT = CARD - DMINUS - DPLUS + 1
ORDINARY = np.array([_ordinary(m) for m in range(512)], dtype=bool)


STRONG = "Strong"
WEAK = "Weak"
NEUTRAL_ORDINARY = "NeutralOrdinary"
NEUTRAL_NON_ORDINARY = "NeutralNonOrdinary"
NOT_BISPECIAL = "NotBispecial"


@dataclass(frozen=True)
class BispecialClass:
    tag: str
    m: int

    def __str__(self):
        return self.tag


@dataclass(frozen=True)
class ExtensionTable:
    mask: int = 0

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "ExtensionTable":
        mask = 0
        for p in pairs:
            if isinstance(p, str):
                p = (int(p[0]), int(p[1]))
            a, b = p
            mask |= _bit(int(a), int(b))
        return cls(mask)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return _mask_pairs(self.mask)

    def __contains__(self, pair) -> bool:
        return bool(self.mask & _bit(*pair))

    def __len__(self) -> int:
        return int(CARD[self.mask])

    @property
    def left(self) -> set[int]:
        return {a for a, _ in self.pairs}

    @property
    def right(self) -> set[int]:
        return {b for _, b in self.pairs}

    def row(self, a: int) -> set[int]:
        """Right extensions compatible with left letter ``a``."""
        return {b for c, b in self.pairs if c == a}

    @property
    def d_minus(self) -> int:
        return int(DMINUS[self.mask])

    @property
    def d_plus(self) -> int:
        return int(DPLUS[self.mask])

    @property
    def is_bispecial(self) -> bool:
        return self.d_minus >= 2 and self.d_plus >= 2

    @property
    def is_ordinary(self) -> bool:
        return bool(ORDINARY[self.mask])

    def permute_rows(self, tau: dict) -> "ExtensionTable":
        return ExtensionTable.from_pairs((tau[a], b) for a, b in self.pairs)

    def __str__(self):
        return "{" + ",".join(f"{a}{b}" for a, b in self.pairs) + "}"

    def grid(self) -> str:
        lines = ["  1 2 3"]
        for a in (1, 2, 3):
            lines.append(f"{a} " + " ".join("x" if (a, b) in self else "." for b in (1, 2, 3)))
        return "\n".join(lines)


def multiplicity(table: ExtensionTable) -> int:
    if not table.mask:
        raise ValueError("multiplicity of an empty table")
    return int(MULT[table.mask])


def classify_bispecial(table: ExtensionTable) -> BispecialClass:
    m = int(MULT[table.mask]) if table.mask else 0
    if not table.is_bispecial:
        return BispecialClass(NOT_BISPECIAL, m)
    if m > 0:
        return BispecialClass(STRONG, m)
    if m < 0:
        return BispecialClass(WEAK, m)
    if table.is_ordinary:
        return BispecialClass(NEUTRAL_ORDINARY, m)
    return BispecialClass(NEUTRAL_NON_ORDINARY, m)


# --- suffix index --------------------------------------------------------------


def _codes(word: str) -> np.ndarray:
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8).astype(np.int64) - 48


class FactorIndex:
    """Suffix array of ``word`` sorted on the first ``2**levels`` letters."""

    def __init__(self, word: str, n_max: int):
        self.word = word
        self.size = len(word)
        levels = 1
        while (1 << levels) - 1 < n_max:
            levels += 1
        self.cap = (1 << levels) - 1
        L = self.size
        self.codes = _codes(word)
        if L == 0:
            self.sa = np.zeros(0, dtype=np.int64)
            self.lcp = np.zeros(0, dtype=np.int64)
            return
        pad = 1 << levels
        rank = np.zeros(L + pad, dtype=np.int64)
        rank[:L] = self.codes
        ranks = [rank]
        for k in range(levels):
            h = 1 << k
            prev = ranks[-1]
            key = prev[:L] * (L + 2) + prev[h:L + h]
            _, inv = np.unique(key, return_inverse=True)
            nxt = np.zeros(L + pad, dtype=np.int64)
            nxt[:L] = inv.reshape(-1) + 1
            ranks.append(nxt)
        self.sa = np.argsort(ranks[-1][:L], kind="stable")
        x, y = self.sa[:-1], self.sa[1:]
        lcp = np.zeros(L - 1, dtype=np.int64)
        for k in range(levels - 1, -1, -1):
            r = ranks[k]
            eq = r[x + lcp] == r[y + lcp]
            lcp += eq.astype(np.int64) << k
        self.lcp = np.concatenate(([0], lcp))
        self.suffix_len = L - self.sa

    # counts -----------------------------------------------------------------

    def counts(self, n_max: int) -> list[int]:
        """Number of distinct factors of each length ``0..n_max``."""
        if n_max > self.cap:
            raise ValueError(f"index built for lengths up to {self.cap}")
        out = [1] + [0] * n_max
        if self.size == 0:
            return out
        diff = np.zeros(n_max + 2, dtype=np.int64)
        lo = np.minimum(self.lcp, n_max + 1) + 1
        hi = np.minimum(self.suffix_len, n_max) + 1
        keep = lo < hi
        np.add.at(diff, lo[keep], 1)
        np.add.at(diff, hi[keep], -1)
        acc = np.cumsum(diff)
        for n in range(1, n_max + 1):
            out[n] = int(acc[n])
        return out

    # per-length tables --------------------------------------------------------

    def level(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """``(positions, masks)``: one occurrence and the table of each factor of length ``n``."""
        L = self.size
        if n > self.cap:
            raise ValueError(f"index built for lengths up to {self.cap}")
        if L < n:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        sa = self.sa
        valid = (sa >= 1) & (sa + n < L)
        left = self.codes[np.where(valid, sa - 1, 0)]
        right = self.codes[np.where(valid, np.minimum(sa + n, L - 1), 0)]
        bits = np.where(valid, np.left_shift(1, 3 * (left - 1) + (right - 1)), 0)
        if n == 0:
            starts = np.array([0])
        else:
            starts = np.flatnonzero((self.suffix_len >= n) & (self.lcp < n))
        masks = np.bitwise_or.reduceat(bits, starts) if len(starts) else np.zeros(0, np.int64)
        # reduceat over the last segment runs to the end; entries outside the group carry 0
        return sa[starts], masks

    def find(self, w: str) -> tuple[int, int]:
        """Half-open range of the suffix array whose suffixes start with ``w``."""
        data = self.word
        m = len(w)
        key = lambda i: data[self.sa[i]:self.sa[i] + m]
        lo = bisect.bisect_left(range(self.size), w, key=key)
        hi = bisect.bisect_right(range(self.size), w, key=key)
        return lo, hi

    def occurrences(self, w: str) -> np.ndarray:
        lo, hi = self.find(w)
        return np.sort(self.sa[lo:hi])

    def table(self, w: str) -> ExtensionTable:
        lo, hi = self.find(w)
        if lo == hi:
            raise FactorNotFound(f"{w!r} is not a factor")
        mask = 0
        n, L = len(w), self.size
        for p in self.sa[lo:hi]:
            if p >= 1 and p + n < L:
                mask |= _bit(int(self.codes[p - 1]), int(self.codes[p + n]))
        if not mask:
            raise FactorNotFound(f"{w!r} has no occurrence with letters on both sides")
        return ExtensionTable(mask)


# --- languages -----------------------------------------------------------------


@dataclass
class FactorLanguage:
    """Factors up to ``n_max`` of a finite word or of a generated prefix."""

    word: str
    n_max: int
    index: FactorIndex
    stabilized: bool
    literal: bool
    source: SadicWord | None = None
    rounds: int = 0
    method: str = "literal"
    cover_depth: int | None = None
    _levels: dict = field(default_factory=dict, repr=False)

    def count(self, n: int) -> int:
        return self.index.counts(n)[n]

    def counts(self, n: int | None = None) -> list[int]:
        return self.index.counts(self.n_max if n is None else n)

    def level(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        if n not in self._levels:
            self._levels[n] = self.index.level(n)
        return self._levels[n]

    def factors(self, n: int) -> list[str]:
        pos, _ = self.level(n)
        return sorted(self.word[p:p + n] for p in pos.tolist())

    def tables(self, n: int) -> dict[str, ExtensionTable]:
        pos, masks = self.level(n)
        return {self.word[p:p + n]: ExtensionTable(int(m)) for p, m in zip(pos.tolist(), masks.tolist())}

    def __contains__(self, w: str) -> bool:
        lo, hi = self.index.find(w)
        return hi > lo

    def extensions(self, w: str) -> ExtensionTable:
        return self.index.table(w)

    def missing_context(self, n: int) -> list[str]:
        """Factors of length ``n`` with no occurrence that has letters on both sides."""
        pos, masks = self.level(n)
        return sorted(self.word[p:p + n] for p, m in zip(pos.tolist(), masks.tolist()) if m == 0)

    def bispecials(self, n_max: int | None = None) -> list[tuple[str, ExtensionTable]]:
        """Bispecial factors of length ``<= n_max``, sorted by length then lexicographically."""
        top = self.n_max if n_max is None else n_max
        out = []
        for n in range(top + 1):
            pos, masks = self.level(n)
            sel = (DMINUS[masks] >= 2) & (DPLUS[masks] >= 2)
            for p, m in zip(pos[sel].tolist(), masks[sel].tolist()):
                out.append((self.word[p:p + n], ExtensionTable(int(m))))
        out.sort(key=lambda t: (len(t[0]), t[0]))
        return out


def _interior_complete(index: FactorIndex, n_top: int) -> bool:
    for n in range(n_top + 1):
        _, masks = index.level(n)
        if (masks == 0).any():
            return False
    return True


def substitution_digrams(sigma) -> set[str]:
    """Two-letter factors of ``sigma(v)`` for any proper infinite word ``v``.

    These are the digrams inside the images plus the junctions formed by the
    last letter of an image and the first letter of the next one; since
    ``sigma(d)`` starts with ``d``, every letter can follow.
    """
    out = set()
    for img in sigma.images:
        out.update(img[t:t + 2] for t in range(len(img) - 1))
        out.update(img[-1] + d for d in "123")
    return out


def covering_walk(digrams: set[str]) -> str:
    """A word whose two-letter factors are exactly ``digrams`` (each at least once)."""
    adj: dict[str, list[str]] = {}
    for dg in sorted(digrams):
        adj.setdefault(dg[0], []).append(dg[1])
    todo = set(digrams)
    current = min(digrams)[0]
    walk = [current]
    while todo:
        # breadth-first search for the nearest unused digram
        parent = {current: None}
        queue = [current]
        found = None
        while queue and found is None:
            nxt_queue = []
            for a in queue:
                for b in adj.get(a, []):
                    if a + b in todo:
                        found = (a, b)
                        break
                    if b not in parent:
                        parent[b] = a
                        nxt_queue.append(b)
                if found:
                    break
            queue = nxt_queue
        if found is None:
            raise ValueError("digram graph is not strongly connected")
        a, b = found
        path = []
        node = a
        while node != current:
            path.append(node)
            node = parent[node]
        for node in reversed(path):
            walk.append(node)
        walk.append(b)
        for x, y in zip(walk[-len(path) - 2:], walk[-len(path) - 1:]):
            todo.discard(x + y)
        current = b
    return "".join(walk)


def block_cover(source: SadicWord, min_block: int, max_letters: int = 50_000_000):
    """A finite word with the same factors as ``source`` up to length ``min_block + 1``.

    Let ``m`` be the first depth at which every block ``s0...sm(c)`` has at
    least ``min_block`` letters.  Any factor of that length sits inside two
    consecutive blocks ``s0...sm(c) s0...sm(d)`` with ``cd`` a digram of the
    shifted word, and those digrams are read off ``s_{m+1}`` as long as the
    word shifted by ``m + 2`` is proper.  Returns ``(word, m)`` or ``None``
    when the directive is too short or the blocks too long.
    """
    d = source.directive
    prod = IDENTITY
    m = 0
    while True:
        try:
            lab = d.label(m)
        except InsufficientDirective:
            return None
        prod = prod @ incidence(named_substitution(lab))
        if min(sum(col) for col in prod.columns()) >= min_block:
            break
        m += 1
        if m > 10_000:
            return None
    try:
        following = named_substitution(d.label(m + 1))
    except InsufficientDirective:
        return None
    walk = covering_walk(substitution_digrams(following))
    col_len = [sum(col) for col in prod.columns()]
    if sum(col_len[int(c) - 1] for c in walk) > max_letters:
        return None
    blocks = {}
    for c in "123":
        w = c
        for t in range(m, -1, -1):
            w = named_substitution(d.label(t))(w)
        blocks[c] = w
    return "".join(blocks[c] for c in walk), m


def build_language(
    source: str | SadicWord,
    n_max: int,
    floor: int = DEFAULT_FLOOR,
    rounds: int = DEFAULT_ROUNDS,
    agree: int = DEFAULT_AGREE,
    method: str = "auto",
) -> FactorLanguage:
    """Factors of lengths ``<= n_max + 2`` of a finite word or of a generated word.

    A finite word is indexed as is.  For a generated word, ``method="cover"``
    builds the exact language from block pairs (see :func:`block_cover`);
    ``method="deepen"`` indexes prefixes starting at ``floor * (n_max + 2)``
    letters and doubling until the factor counts agree on ``agree`` successive
    rounds and every factor of length ``<= n_max + 1`` has an occurrence with
    letters on both sides.  ``"auto"`` uses the cover unless the directive
    declares a tail over one or two Arnoux-Rauzy labels, and falls back to
    deepening when the window is too short for it.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    top = n_max + 2
    if isinstance(source, str):
        index = FactorIndex(source, top)
        return FactorLanguage(source, n_max, index, True, True, method="literal")

    if method not in ("auto", "cover", "deepen"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        kind = classify_type(source.directive).kind
        method = "deepen" if source.directive.tail is not None and kind in ("Type1", "Type2") else "cover"
        if method == "cover":
            cover = block_cover(source, top)
            if cover is None:
                method = "deepen"
    elif method == "cover":
        cover = block_cover(source, top)
        if cover is None:
            raise StabilizationFailed("directive window too short for a block cover")
    if method == "cover":
        word, depth = cover
        index = FactorIndex(word, top)
        lang = FactorLanguage(word, n_max, index, True, False, source, 1, method="cover")
        lang.cover_depth = depth
        return lang

    length = floor * top
    prev = None
    streak = 0
    exhausted = False
    for r in range(1, rounds + 1):
        try:
            word = source.prefix(length)
        except InsufficientDirective:
            word = source.full_image()
            exhausted = True
        index = FactorIndex(word, top)
        counts = index.counts(top)
        streak = streak + 1 if counts == prev else 1
        if streak >= agree and _interior_complete(index, n_max + 1):
            return FactorLanguage(word, n_max, index, True, False, source, r, method="deepen")
        if exhausted:
            raise StabilizationFailed(
                f"directive window exhausted at {len(word)} letters before factors of "
                f"length <= {top} settled"
            )
        prev = counts
        length *= 2
    raise StabilizationFailed(f"factor counts did not settle after {rounds} rounds")


# --- profiles ------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexityProfile:
    p: tuple[int, ...]
    s: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.p) - 1

    def as_dict(self) -> dict:
        return {"p": list(self.p), "s": list(self.s), "b": list(self.b)}


def _as_language(obj, N: int) -> FactorLanguage:
    if isinstance(obj, FactorLanguage):
        if N > obj.n_max:
            raise ValueError(f"language indexed up to n_max={obj.n_max}, profile asked for {N}")
        return obj
    return build_language(obj, N)


def complexity_profile(lang, N: int) -> ComplexityProfile:
    """Profile from special-factor sums: ``s(n) = sum (d+ - 1)``, ``b(n) = sum m``.

    ``p`` is rebuilt from ``p(0) = 1`` and cross-checked against direct
    counting; any disagreement raises :class:`ProfileMismatch`.
    """
    lang = _as_language(lang, N)
    s_sum, sl_sum, b_sum = [], [], []
    for n in range(N + 1):
        _, masks = lang.level(n)
        if (masks == 0).any():
            raise FactorNotFound(
                f"a factor of length {n} has no occurrence with letters on both sides"
            )
        s_sum.append(int((DPLUS[masks] - 1).sum()))
        sl_sum.append(int((DMINUS[masks] - 1).sum()))
        b_sum.append(int(MULT[masks].sum()))
    p = [1]
    for n in range(N):
        p.append(p[-1] + s_sum[n])
    direct = lang.counts(N + 2)
    problems = []
    if p != direct[:N + 1]:
        problems.append(f"p rebuilt {p} != counted {direct[:N + 1]}")
    s_direct = [direct[n + 1] - direct[n] for n in range(N + 1)]
    if s_sum != s_direct:
        problems.append(f"right-valence sums {s_sum} != differences {s_direct}")
    if sl_sum != s_sum:
        problems.append(f"left-valence sums {sl_sum} != right-valence sums {s_sum}")
    for n in range(N):
        if s_sum[n + 1] - s_sum[n] != b_sum[n]:
            problems.append(f"multiplicity sum at n={n} is {b_sum[n]}, s difference {s_sum[n + 1] - s_sum[n]}")
    s_next = direct[N + 2] - direct[N + 1]
    if s_next - s_sum[N] != b_sum[N]:
        problems.append(f"multiplicity sum at n={N} is {b_sum[N]}, s difference {s_next - s_sum[N]}")
    if problems:
        raise ProfileMismatch("; ".join(problems))
    return ComplexityProfile(tuple(p), tuple(s_sum), tuple(b_sum))


def count_distinct(word: str, N: int) -> list[int]:
    """Distinct factors of each length ``0..N`` by iterated exact renaming."""
    codes = _codes(word)
    L = len(codes)
    out = [1]
    ids = np.zeros(L + 1, dtype=np.int64)
    for n in range(N):
        if n >= L:
            out.append(0)
            continue
        # ids[t] names word[t:t+n]; extend each by the letter that follows
        uniq, inv = np.unique(ids[:L - n] * 4 + codes[n:], return_inverse=True)
        out.append(len(uniq))
        ids = inv.reshape(-1)
    return out


def complexity_bruteforce(source, N: int) -> ComplexityProfile:
    """Profile from direct counts; ``s`` and ``b`` are finite differences."""
    word = source.word if isinstance(source, FactorLanguage) else source
    if isinstance(word, SadicWord):
        word = build_language(word, N).word
    p = count_distinct(word, N + 2)
    s = [p[n + 1] - p[n] for n in range(N + 2)]
    b = [s[n + 1] - s[n] for n in range(N + 1)]
    return ComplexityProfile(tuple(p[:N + 1]), tuple(s[:N + 1]), tuple(b[:N + 1]))


# --- bounds ----------------------------------------------------------------------


def upper_bound(n: int) -> int:
    return -(-5 * n // 2) + 1


@dataclass
class BoundsReport:
    s_in_range: bool
    lower_ok: bool
    upper_ok: bool
    cubic_ok: bool
    running_sum_ok: bool
    s_violations: list = field(default_factory=list)
    lower_violations: list = field(default_factory=list)
    upper_violations: list = field(default_factory=list)
    cubic_violations: list = field(default_factory=list)
    running_sum_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.s_in_range and self.lower_ok and self.upper_ok and self.running_sum_ok

    @property
    def violations(self) -> list[int]:
        return sorted(
            set(self.s_violations) | set(self.lower_violations)
            | set(self.upper_violations) | set(self.running_sum_violations)
        )

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "s_in_2_3": self.s_in_range,
            "lower_2n_plus_1": self.lower_ok,
            "upper_5n_over_2_plus_1": self.upper_ok,
            "upper_3n_plus_1": self.cubic_ok,
            "running_b_sum_in_0_1": self.running_sum_ok,
            "violations": {
                "s": self.s_violations,
                "lower": self.lower_violations,
                "upper": self.upper_violations,
                "upper_3n_plus_1": self.cubic_violations,
                "running_b_sum": self.running_sum_violations,
            },
        }


def check_bounds(profile: ComplexityProfile, N: int | None = None) -> BoundsReport:
    """``s(n) in {2,3}`` for ``1 <= n < N``, ``2n+1 <= p(n) <= ceil(5n/2)+1``,
    ``p(n) <= 3n+1`` and running sums of ``b`` in ``{0, 1}``."""
    N = profile.N if N is None else N
    p, s, b = profile.p, profile.s, profile.b
    s_bad = [n for n in range(1, min(N, len(s))) if s[n] not in (2, 3)]
    low_bad = [n for n in range(min(N + 1, len(p))) if p[n] < 2 * n + 1]
    up_bad = [n for n in range(min(N + 1, len(p))) if p[n] > upper_bound(n)]
    cubic_bad = [n for n in range(min(N + 1, len(p))) if p[n] > 3 * n + 1]
    run_bad = []
    acc = 0
    for n in range(min(N, len(b))):
        acc += b[n]
        if acc not in (0, 1):
            run_bad.append(n)
    return BoundsReport(
        not s_bad, not low_bad, not up_bad, not cubic_bad, not run_bad,
        s_bad, low_bad, up_bad, cubic_bad, run_bad,
    )
