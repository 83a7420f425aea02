"""Finite automata over substitution labels.

Contains the seven-state automaton constraining directive sequences of the
algorithm, the twelve-state Markov automaton it is derived from, and the
generic machinery (subset construction, Moore minimization, isomorphism,
language equivalence) used to relate the two.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable

from .arithmetic import PAIRS, third
from .errors import NonDeterministicInput, ParseError
from .substitutions import LABELS, canonical_label

State = Hashable
Transition = tuple[State, str, State]

DELTA = "Delta"


def h_state(j: int, k: int) -> str:
    return f"H{j}{k}"


@dataclass(frozen=True)
class Automaton:
    states: frozenset
    alphabet: tuple[str, ...]
    transitions: frozenset  # of (state, label, state)
    initial: frozenset
    final: frozenset

    @classmethod
    def make(cls, states, alphabet, transitions, initial, final) -> "Automaton":
        return cls(frozenset(states), tuple(alphabet), frozenset(transitions),
                   frozenset(initial), frozenset(final))

    @property
    def deterministic(self) -> bool:
        if len(self.initial) != 1:
            return False
        seen = set()
        for p, a, _ in self.transitions:
            if (p, a) in seen:
                return False
            seen.add((p, a))
        return True

    def successors(self, state, label) -> frozenset:
        return frozenset(q for p, a, q in self.transitions if p == state and a == label)

    def delta_map(self) -> dict:
        """``(state, label) -> set of targets``."""
        out: dict = {}
        for p, a, q in self.transitions:
            out.setdefault((p, a), set()).add(q)
        return out

    def step_set(self, states: Iterable, label: str, dmap: dict | None = None) -> frozenset:
        dmap = self.delta_map() if dmap is None else dmap
        out = set()
        for p in states:
            out |= dmap.get((p, label), set())
        return frozenset(out)

    def run(self, labels: Iterable[str]) -> frozenset:
        """Set of states reachable by reading ``labels`` from the initial states."""
        dmap = self.delta_map()
        current = self.initial
        for a in labels:
            current = self.step_set(current, a, dmap)
            if not current:
                break
        return current

    def relabel(self, mapping: dict) -> "Automaton":
        return Automaton.make(
            self.states,
            [mapping.get(a, a) for a in self.alphabet],
            [(p, mapping.get(a, a), q) for p, a, q in self.transitions],
            self.initial,
            self.final,
        )

    def rename_states(self, mapping: dict) -> "Automaton":
        return Automaton.make(
            [mapping[s] for s in self.states],
            self.alphabet,
            [(mapping[p], a, mapping[q]) for p, a, q in self.transitions],
            [mapping[s] for s in self.initial],
            [mapping[s] for s in self.final],
        )

    def to_text(self) -> str:
        lines = [
            "# initial " + " ".join(sorted(map(str, self.initial))),
            "# final " + " ".join(sorted(map(str, self.final))),
        ]
        for p, a, q in sorted(self.transitions, key=lambda t: tuple(map(str, t))):
            lines.append(f"{p} {a} {q}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Automaton":
        initial: list = []
        final: list = []
        transitions = []
        states = set()
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                head, *rest = line[1:].split()
                if head == "initial":
                    initial = rest
                elif head == "final":
                    final = rest
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"bad transition line {raw!r}")
            p, a, q = parts
            transitions.append((p, a, q))
            states.update((p, q))
        states.update(initial)
        states.update(final)
        alphabet = sorted({a for _, a, _ in transitions})
        return cls.make(states, alphabet, transitions, initial, final)


def build_G() -> Automaton:
    states = [DELTA] + [h_state(j, k) for j, k in PAIRS]
    trans = set()
    for j, k in PAIRS:
        i = third(j, k)
        h = h_state(j, k)
        trans.add((DELTA, f"a{k}", DELTA))
        trans.add((DELTA, f"p{j}{k}", h))
        trans.add((h, f"a{j}", h))
        trans.add((h, f"a{i}", DELTA))
        trans.add((h, f"p{i}{j}", h_state(i, j)))
        trans.add((h, f"p{k}{i}", h_state(k, i)))
        trans.add((h, f"p{j}{i}", h_state(j, i)))
    return Automaton.make(states, LABELS, trans, [DELTA], states)


def markov_label(label: str) -> str:
    """``a2 -> A2^-1``, ``p13 -> P13^-1``."""
    return label.upper() + "^-1"


MARKOV_TO_SUBSTITUTION = {markov_label(l): l for l in LABELS}


def build_markov_nfa() -> Automaton:
    """Twelve cells ``A_j H_jk`` and ``P_jk H_jk``; labels are inverse matrices."""
    states = [f"A{j}H{j}{k}" for j, k in PAIRS] + [f"P{j}{k}H{j}{k}" for j, k in PAIRS]
    trans = set()
    for j, k in PAIRS:
        i = third(j, k)
        targets = [
            f"A{i}H{i}{k}", f"A{i}H{i}{j}", f"A{j}H{j}{k}",
            f"P{i}{j}H{i}{j}", f"P{j}{i}H{j}{i}", f"P{k}{i}H{k}{i}",
        ]
        for t in targets:
            trans.add((f"A{j}H{j}{k}", markov_label(f"a{j}"), t))
            trans.add((f"P{j}{k}H{j}{k}", markov_label(f"p{j}{k}"), t))
    alphabet = [markov_label(l) for l in LABELS]
    return Automaton.make(states, alphabet, trans, states, states)


def determinize(auto: Automaton) -> Automaton:
    """Subset construction restricted to reachable nonempty subsets."""
    dmap = auto.delta_map()
    start = frozenset(auto.initial)
    seen = {start}
    queue = deque([start])
    trans = set()
    while queue:
        s = queue.popleft()
        for a in auto.alphabet:
            t = auto.step_set(s, a, dmap)
            if not t:
                continue
            trans.add((s, a, t))
            if t not in seen:
                seen.add(t)
                queue.append(t)
    final = [s for s in seen if s & auto.final]
    return Automaton.make(seen, auto.alphabet, trans, [start], final)


def _trim(auto: Automaton) -> Automaton:
    """Keep states reachable from the initial state and co-reachable to a final one."""
    dmap = auto.delta_map()
    reach = set(auto.initial)
    queue = deque(reach)
    while queue:
        p = queue.popleft()
        for a in auto.alphabet:
            for q in dmap.get((p, a), ()):
                if q not in reach:
                    reach.add(q)
                    queue.append(q)
    back: dict = {}
    for p, _, q in auto.transitions:
        back.setdefault(q, set()).add(p)
    co = set(auto.final)
    queue = deque(co)
    while queue:
        q = queue.popleft()
        for p in back.get(q, ()):
            if p not in co:
                co.add(p)
                queue.append(p)
    keep = reach & co
    return Automaton.make(
        keep,
        auto.alphabet,
        [(p, a, q) for p, a, q in auto.transitions if p in keep and q in keep],
        auto.initial & keep,
        auto.final & keep,
    )


def minimize(auto: Automaton) -> Automaton:
    """Moore partition refinement of a (partial) DFA after trimming.

    Missing transitions go to an implicit sink, which is dropped again from
    the result.  States of the result are frozensets of original states.
    """
    if not auto.deterministic:
        raise NonDeterministicInput("minimize requires a deterministic automaton")
    auto = _trim(auto)
    if not auto.states:
        return auto
    dmap = {key: next(iter(v)) for key, v in auto.delta_map().items()}
    block = {s: int(s in auto.final) for s in auto.states}
    while True:
        sig = {
            s: (block[s],) + tuple(block.get(dmap.get((s, a)), -1) for a in auto.alphabet)
            for s in auto.states
        }
        ids: dict = {}
        new_block = {s: ids.setdefault(sig[s], len(ids)) for s in sorted(auto.states, key=str)}
        if len(ids) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    groups: dict = {}
    for s, b in block.items():
        groups.setdefault(b, set()).add(s)
    name = {s: frozenset(groups[b]) for s, b in block.items()}
    trans = {(name[p], a, name[q]) for (p, a), q in dmap.items()}
    return Automaton.make(
        set(name.values()), auto.alphabet, trans,
        [name[s] for s in auto.initial], [name[s] for s in auto.final],
    )


def isomorphic(a: Automaton, b: Automaton) -> bool:
    """Label-preserving bijection of states respecting transitions, initial and final sets."""
    if len(a.states) != len(b.states) or len(a.transitions) != len(b.transitions):
        return False
    if len(a.initial) != len(b.initial) or len(a.final) != len(b.final):
        return False
    if set(a.alphabet) != set(b.alphabet):
        return False
    if a.deterministic and b.deterministic:
        return _dfa_isomorphic(a, b)
    return _backtrack_isomorphic(a, b)


def _dfa_isomorphic(a: Automaton, b: Automaton) -> bool:
    da = {k: next(iter(v)) for k, v in a.delta_map().items()}
    db = {k: next(iter(v)) for k, v in b.delta_map().items()}
    (sa,), (sb,) = a.initial, b.initial
    phi = {sa: sb}
    queue = deque([sa])
    while queue:
        p = queue.popleft()
        if (p in a.final) != (phi[p] in b.final):
            return False
        for lab in a.alphabet:
            qa, qb = da.get((p, lab)), db.get((phi[p], lab))
            if (qa is None) != (qb is None):
                return False
            if qa is None:
                continue
            if qa in phi:
                if phi[qa] != qb:
                    return False
            else:
                phi[qa] = qb
                queue.append(qa)
    if len(phi) != len(a.states) or len(set(phi.values())) != len(phi):
        return False
    mapped = {(phi[p], lab, phi[q]) for p, lab, q in a.transitions}
    return mapped == set(b.transitions)


def _backtrack_isomorphic(a: Automaton, b: Automaton) -> bool:
    def profile(auto, s):
        out = sorted((lab, 1) for p, lab, _ in auto.transitions if p == s)
        inc = sorted((lab, 0) for _, lab, q in auto.transitions if q == s)
        return (s in auto.initial, s in auto.final, tuple(out), tuple(inc))

    sa = sorted(a.states, key=str)
    candidates = {s: [t for t in b.states if profile(b, t) == profile(a, s)] for s in sa}
    tb = set(b.transitions)

    def consistent(phi):
        for p, lab, q in a.transitions:
            if p in phi and q in phi and (phi[p], lab, phi[q]) not in tb:
                return False
        return True

    def search(idx, phi, used):
        if idx == len(sa):
            return True
        s = sa[idx]
        for t in candidates[s]:
            if t in used:
                continue
            phi[s] = t
            if consistent(phi) and search(idx + 1, phi, used | {t}):
                return True
            del phi[s]
        return False

    return search(0, {}, frozenset())


def equivalent(a: Automaton, b: Automaton) -> bool:
    """Language equality, by exploring the product of the two subset automata."""
    if set(a.alphabet) != set(b.alphabet):
        return False
    ma, mb = a.delta_map(), b.delta_map()
    start = (frozenset(a.initial), frozenset(b.initial))
    seen = {start}
    queue = deque([start])
    while queue:
        sa, sb = queue.popleft()
        if bool(sa & a.final) != bool(sb & b.final):
            return False
        for lab in a.alphabet:
            nxt = (a.step_set(sa, lab, ma), b.step_set(sb, lab, mb))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def strongly_connected_from(auto: Automaton, root) -> bool:
    fwd: dict = {}
    bwd: dict = {}
    for p, _, q in auto.transitions:
        fwd.setdefault(p, set()).add(q)
        bwd.setdefault(q, set()).add(p)

    def closure(adj):
        seen = {root}
        queue = deque([root])
        while queue:
            p = queue.popleft()
            for q in adj.get(p, ()):
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return seen

    return closure(fwd) == set(auto.states) == closure(bwd)


def accepts(auto: Automaton, seq: Iterable[str]) -> bool:
    """True iff ``seq`` traces a path from the initial state ending in a final state."""
    if not auto.deterministic:
        raise NonDeterministicInput("accepts requires a deterministic automaton")
    labels = [canonical_label(s) if s not in auto.alphabet else s for s in seq]
    end = auto.run(labels)
    return bool(end & auto.final)


def rejection_index(auto: Automaton, seq: Iterable[str]) -> int | None:
    """Index of the first label with no transition, or None if accepted."""
    dmap = auto.delta_map()
    current = auto.initial
    for idx, s in enumerate(seq):
        lab = canonical_label(s) if s not in auto.alphabet else s
        current = auto.step_set(current, lab, dmap)
        if not current:
            return idx
    return None


def minimized_markov() -> Automaton:
    """Determinized, minimized Markov automaton over substitution labels."""
    return minimize(determinize(build_markov_nfa())).relabel(MARKOV_TO_SUBSTITUTION)
