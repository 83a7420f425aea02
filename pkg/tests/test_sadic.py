import pytest

from corpus import REFERENCE_LABELS, reference_handle

from arpsadic.arithmetic import parse_vector
from arpsadic.automaton import accepts, build_G
from arpsadic.errors import InsufficientDirective
from arpsadic.sadic import (
    DirectiveSequence,
    SadicWord,
    classify_type,
    directive_from_vector,
    is_proper,
    positive_window_end,
    weakly_primitive_window,
    word_from_labels,
)
from arpsadic.substitutions import product


def test_directive_of_the_reference_vector():
    d = directive_from_vector(parse_vector("1,pi,sqrt(2)"), 29)
    assert list(d.window) == REFERENCE_LABELS
    assert accepts(build_G(), d.window)
    assert classify_type(d).kind == "Type3"


def test_block_lengths_grow_as_the_incidence_columns():
    h = reference_handle()
    m = product(REFERENCE_LABELS).incidence()
    assert sum(m.column(0)) == 1453060
    assert len(h.image(4)) == 16
    assert h.image(3) == "1232212323221232"


def test_prefixes_are_consistent():
    h = reference_handle()
    long = h.prefix(5000)
    assert long.startswith(h.prefix(68))
    assert h.prefix(0) == "" and h.prefix(1) == "1"


def test_shift_relation():
    h = reference_handle()
    shifted = h.shifted(2).prefix(50)
    head = product(REFERENCE_LABELS[:2])
    assert head(shifted)[:50] == h.prefix(50)


def test_three_block_decomposition():
    h = reference_handle()
    for m in range(4):
        blocks = {product(REFERENCE_LABELS[: m + 1])(a) for a in "123"}
        w = h.prefix(3000)
        # greedy parse: the three blocks form a prefix code
        t = 0
        while t < 2000:
            nxt = [b for b in blocks if w.startswith(b, t)]
            assert len(nxt) == 1
            t += len(nxt[0])


def test_periodic_tail():
    d = DirectiveSequence((), ("p23", "a1"))
    assert d.label(0) == "p23" and d.label(5) == "a1"
    h = SadicWord(d, 1)
    assert h.prefix(100) == SadicWord(d, 1).prefix(300)[:100]
    assert classify_type(d).kind == "Type3"


def test_types_of_tails():
    assert classify_type(DirectiveSequence((), ("a1",))).kind == "Type1"
    t = classify_type(DirectiveSequence(("p23",), ("a1", "a2")))
    assert t.kind == "Type2" and t.letters == (1, 2)


def test_seed_outside_the_tail_letters_is_flagged():
    assert SadicWord(DirectiveSequence((), ("a1",)), 2).non_recurrent_risk
    assert not SadicWord(DirectiveSequence((), ("a1",)), 1).non_recurrent_risk


def test_finite_window_runs_out():
    h = SadicWord(DirectiveSequence(("a1", "a2")), 1)
    assert h.full_image() == word_from_labels(["a1", "a2"])
    with pytest.raises(InsufficientDirective):
        h.prefix(10**6)
    with pytest.raises(InsufficientDirective):
        DirectiveSequence(("a1",)).label(3)


def test_weak_primitivity():
    assert not weakly_primitive_window(["a1"])
    assert weakly_primitive_window(["a1", "a2", "a3"])
    assert positive_window_end(REFERENCE_LABELS) is not None


def test_properness():
    assert is_proper("1232212323")
    assert not is_proper("1323")
    with pytest.raises(ValueError):
        is_proper("")
