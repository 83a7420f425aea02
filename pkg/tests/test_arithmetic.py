from fractions import Fraction

import pytest

from arpsadic.arithmetic import (
    CELLS,
    IDENTITY,
    PartitionCell,
    Scalar,
    classify,
    matrix_labels,
    membership,
    named_matrix,
    normalize,
    orbit,
    parse_scalar,
    parse_vector,
    step,
)
from arpsadic.errors import DegenerateVector, ParseError, PrecisionExhausted, UnknownLabel


def test_scalar_signs_against_known_constants():
    assert (Scalar.pi() - Scalar.of(Fraction(355, 113))).sign() == -1
    assert (Scalar.sqrt(2) - Scalar.of(Fraction(140, 99))).sign() == 1
    assert (Scalar.sqrt(8) - Scalar.sqrt(2) * 2).sign() == 0


def test_sign_gives_up_at_the_precision_cap():
    lo, _ = Scalar.pi().bounds(300)
    tiny = Scalar.pi() - Scalar.of(lo)
    assert tiny.sign(bits=4096) == 1
    with pytest.raises(PrecisionExhausted):
        tiny.sign(bits=128)


def test_parse_scalar_forms():
    assert parse_scalar("3/4").rational() == Fraction(3, 4)
    assert parse_scalar("0.25").rational() == Fraction(1, 4)
    assert parse_scalar("2*pi - 1").to_float() == pytest.approx(2 * 3.141592653589793 - 1)
    with pytest.raises(ParseError):
        parse_scalar("e")


def test_every_matrix_is_unimodular():
    for label in matrix_labels():
        m = named_matrix(label)
        assert m.det() == 1
        assert m @ m.inverse() == IDENTITY
    for cell in CELLS:
        assert cell.cone().det() == 1


def test_unknown_matrix_label():
    with pytest.raises(UnknownLabel):
        named_matrix("B7")


def test_example_orbit():
    o = orbit(parse_vector("1,pi,sqrt(2)"), 5)
    assert o.labels == ["A2", "P13", "A2", "A3", "A1"]
    assert not o.terminated


def test_rational_point_in_a_poincare_cell():
    x = normalize(Fraction(45, 100), Fraction(35, 100), Fraction(20, 100))
    assert classify(x) == PartitionCell.poincare(2, 1)


def test_exactly_one_cell_for_generic_points():
    for text in ("1,pi,sqrt(2)", "3,1,sqrt(5)", "sqrt(3),sqrt(2),1", "7/3,2/9,5/11"):
        hits = [c for c, inside in membership(parse_vector(text)).items() if inside]
        assert len(hits) == 1


def test_boundary_points_are_degenerate():
    assert classify(normalize(1, 1, 1)).is_degenerate
    # a zero in the preimage under the strict positivity rule
    assert classify(normalize(2, 1, 1)).is_degenerate
    with pytest.raises(DegenerateVector):
        step(normalize(1, 1, 1))
    o = orbit(normalize(2, 1, 1), 4)
    assert o.terminated and len(o) == 0


def test_step_preserves_the_simplex():
    x = parse_vector("3/17,9/17,5/17")
    m, y = step(x)
    assert sum(y.rationals()) == 1
    assert all(c > 0 for c in y.rationals())
    scaled = m.apply(y.rationals())
    ratio = {a / b for a, b in zip(scaled, x.rationals())}
    assert len(ratio) == 1


def test_vectors_must_be_nonnegative():
    with pytest.raises(ValueError):
        normalize(-1, 2, 3)
    with pytest.raises(ValueError):
        normalize(0, 0, 0)
