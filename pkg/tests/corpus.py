"""Shared test inputs: the reference directives and a seeded set of rational vectors."""

from __future__ import annotations

import random
from functools import lru_cache

from arpsadic.arithmetic import normalize, orbit, parse_vector
from arpsadic.factors import build_language
from arpsadic.sadic import DirectiveSequence, classify_type, SadicWord, directive_from_vector, word_from_labels

REFERENCE_VECTOR = "1,pi,sqrt(2)"
REFERENCE_LABELS = (
    "a2 p13 a2 a3 a1 p31 p23 p31 p12 "
    + "a3 " * 8
    + "a1 "
    + "a2 " * 6
    + "p21 a3 a3 a1 p32"
).split()
REFERENCE_PREFIX = "12322123232212322123232212321232212323221232322123232212321232212323"
QUADRATIC_LABELS = "p23 p23 p13 p23 p23 a1 a3 a2".split()

VECTOR_SEED = 2024
VECTOR_COUNT = 50
DENOMINATOR = 10**9
# labels dropped from the end of each rational orbit, so the window stays clear of the boundary hit
TRIM = 3
N_BOUNDS = 200


def random_vectors(count: int = VECTOR_COUNT, seed: int = VECTOR_SEED):
    rng = random.Random(seed)
    return [tuple(rng.randint(1, DENOMINATOR) for _ in range(3)) for _ in range(count)]


@lru_cache(maxsize=None)
def type3_vectors(count: int = VECTOR_COUNT, seed: int = VECTOR_SEED):
    """Seeded vectors whose trimmed orbit window classifies as Type 3, plus the number skipped."""
    rng = random.Random(seed)
    out = []
    skipped = 0
    while len(out) < count:
        v = tuple(rng.randint(1, DENOMINATOR) for _ in range(3))
        if classify_type(vector_handle(v).directive).kind == "Type3":
            out.append(v)
        else:
            skipped += 1
    return tuple(out), skipped


@lru_cache(maxsize=None)
def orbit_labels(v: tuple[int, int, int]) -> tuple[str, ...]:
    return tuple(s.cell.substitution_label for s in orbit(normalize(*v), 10**4))


@lru_cache(maxsize=None)
def vector_handle(v: tuple[int, int, int]) -> SadicWord:
    labels = orbit_labels(v)
    return SadicWord(DirectiveSequence(labels[: len(labels) - TRIM]), 1)


@lru_cache(maxsize=None)
def vector_language(v: tuple[int, int, int], n_max: int = N_BOUNDS):
    return build_language(vector_handle(v), n_max)


@lru_cache(maxsize=None)
def reference_handle() -> SadicWord:
    return SadicWord(directive_from_vector(parse_vector(REFERENCE_VECTOR), len(REFERENCE_LABELS)), 1)


@lru_cache(maxsize=None)
def quadratic_word() -> str:
    return word_from_labels(QUADRATIC_LABELS, 1)
