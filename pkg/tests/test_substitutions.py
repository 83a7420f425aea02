import pytest

from arpsadic.arithmetic import named_matrix
from arpsadic.errors import ParseError, UnknownLabel
from arpsadic.substitutions import (
    LABELS,
    abelianize,
    canonical_label,
    compose,
    incidence,
    named_substitution,
    parse_labels,
    parse_substitution,
    product,
    serialize_substitution,
)


def test_images():
    assert named_substitution("a2")("1") == "12"
    assert named_substitution("p23").images == ("123", "23", "3")
    assert named_substitution("a3").images == ("13", "23", "3")


@pytest.mark.parametrize("label", LABELS)
def test_incidence_matches_the_matrix_of_the_cell(label):
    matrix_label = ("A" + label[1:]) if label[0] == "a" else ("P" + label[1:])
    assert incidence(named_substitution(label)).rows == named_matrix(matrix_label).rows


@pytest.mark.parametrize("label", LABELS)
def test_every_image_ends_with_the_distinguished_letter(label):
    k = label[-1]
    assert all(img.endswith(k) for img in named_substitution(label).images)


def test_composed_images():
    a2, p13 = named_substitution("a2"), named_substitution("p13")
    assert compose(a2, p13)("1") == "1232"
    assert compose(a2, compose(p13, a2))("1") == "123221232"
    assert product(["a2", "p13", "a2", "a3"])("1") == "1232212323221232"


def test_abelianization_of_a_composed_image():
    # counted directly: the composed image has two 1s, five 2s and two 3s
    assert abelianize("123221232").as_tuple() == (2, 5, 2)


def test_label_spellings():
    for text in ("alpha1", "α1", "A1", "a_1"):
        assert canonical_label(text) == "a1"
    for text in ("pi23", "π23", "P23", "p_23"):
        assert canonical_label(text) == "p23"
    with pytest.raises(UnknownLabel):
        canonical_label("p22")
    with pytest.raises(UnknownLabel):
        canonical_label("a4")
    assert parse_labels("a1, p23  A3") == ["a1", "p23", "a3"]


def test_explicit_substitution_round_trip():
    s = parse_substitution("1>123;2>23;3>3")
    assert s.images == named_substitution("p23").images
    assert parse_substitution(serialize_substitution(s)).images == s.images
    with pytest.raises(ParseError):
        parse_substitution("1>12;2>2")
    with pytest.raises(ParseError):
        parse_substitution("1>14;2>2;3>3")


def test_words_are_checked():
    with pytest.raises(ParseError):
        named_substitution("a1")("124")
