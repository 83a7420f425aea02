import pytest

from arpsadic.automaton import (
    Automaton,
    accepts,
    build_G,
    build_markov_nfa,
    determinize,
    equivalent,
    isomorphic,
    minimize,
    minimized_markov,
    rejection_index,
    strongly_connected_from,
)
from arpsadic.errors import NonDeterministicInput


def test_sizes():
    g = build_G()
    assert len(g.states) == 7 and len(g.transitions) == 39 and g.deterministic
    nfa = build_markov_nfa()
    assert len(nfa.states) == 12 and not nfa.deterministic
    assert len(determinize(nfa).states) == 7


def test_minimization_recovers_G():
    g = build_G()
    m = minimized_markov()
    assert len(m.states) == 7
    assert isomorphic(m, g)
    assert equivalent(m, g)
    assert isomorphic(determinize(g), g)


def test_minimize_rejects_nondeterministic_input():
    with pytest.raises(NonDeterministicInput):
        minimize(build_markov_nfa())


def test_G_is_strongly_connected():
    g = build_G()
    assert strongly_connected_from(g, "Delta")


def test_acceptance():
    g = build_G()
    assert accepts(g, [])
    assert accepts(g, "a2 p13 a2 a3 a1 p31 p23 p31 p12".split())
    assert not accepts(g, ["p23", "p13"])
    assert rejection_index(g, ["a1", "p23", "p13"]) == 2
    assert rejection_index(g, ["a1"]) is None


def test_accepts_spelled_labels():
    assert accepts(build_G(), ["alpha2", "π13"])


def test_text_round_trip():
    g = build_G()
    h = Automaton.from_text(g.to_text())
    assert isomorphic(g, h)
