import math

import pytest

from corpus import REFERENCE_LABELS, reference_handle

from arpsadic.arithmetic import IDENTITY, named_matrix, normalize, orbit, parse_vector
from arpsadic.convergence import (
    ConeProduct,
    balance_report,
    cone_diameter,
    convergence_trace,
    frequency_report,
    hilbert_distance,
)
from arpsadic.sadic import DirectiveSequence, SadicWord, weakly_primitive_window


def test_identity_cone_is_unbounded():
    assert math.isinf(cone_diameter(IDENTITY))


def test_reference_window_has_a_finite_diameter():
    cp = ConeProduct.from_matrices(named_matrix(l) for l in ["A2", "P13", "A2", "A3", "A1"])
    assert cp.matrix.det() == 1
    d = cone_diameter(cp)
    assert 0 < d < math.inf
    assert cp.contains(parse_vector("1,pi,sqrt(2)"))


def test_equal_columns_have_distance_zero():
    assert hilbert_distance((1, 2, 3), (2, 4, 6)) == 0


def test_positivity_matches_weak_primitivity():
    for n in range(1, 12):
        cp = ConeProduct.from_labels(REFERENCE_LABELS[:n])
        assert cp.columns_positive == weakly_primitive_window(REFERENCE_LABELS[:n])


def test_diameters_shrink_along_orbits():
    import random

    rng = random.Random(5)
    for _ in range(50):
        x = normalize(*(rng.randint(1, 10**6) for _ in range(3)))
        cp = ConeProduct(IDENTITY, 0)
        prev = math.inf
        for st in orbit(x, 200):
            cp = cp.then(st.matrix)
            d = cone_diameter(cp)
            assert d <= prev + 1e-12
            prev = d
            assert cp.contains(x)


def test_trace_reaches_the_threshold():
    trace = convergence_trace(parse_vector("1,pi,sqrt(2)"), 100)
    assert len(trace) == 100
    assert trace[-1].cone_diameter < 1e-6
    assert [s.label for s in trace[:5]] == ["A2", "P13", "A2", "A3", "A1"]


def test_frequencies_of_the_reference_word():
    x = parse_vector("1,pi,sqrt(2)")
    h = SadicWord(DirectiveSequence(tuple(REFERENCE_LABELS) + tuple(s.cell.substitution_label for s in orbit(x, 80)[29:])), 1)
    rep = frequency_report(h, 10**5, x)
    assert sum(rep.frequencies) == 1
    assert rep.deviation < 1e-3


def test_single_letter_word():
    assert frequency_report("1111", 4, normalize(1, 0, 0)).deviation == 0


def test_balance():
    assert balance_report("1" * 50, 50, 10).max_imbalance == (0, 0, 0)
    sturmian = SadicWord(DirectiveSequence((), ("a1", "a2")), 1)
    assert max(balance_report(sturmian, 10**4, 200).max_imbalance) <= 1
    rep = balance_report(reference_handle(), 10**4, 100)
    assert all(v >= 0 for v in rep.max_imbalance) and rep.n_cap == 100
