import pytest

from corpus import QUADRATIC_LABELS, reference_handle, quadratic_word, type3_vectors, vector_handle

from arpsadic.errors import InvalidTable, NotAFactorImage, ParseError, PatternMismatch
from arpsadic.factors import NEUTRAL_NON_ORDINARY, NEUTRAL_ORDINARY, ExtensionTable, build_language, classify_bispecial
from arpsadic.genealogy import (
    alternance_report,
    antecedent_bispecial,
    bispecial_records,
    classify_history,
    compare_abelian,
    desubstitute,
    empty_word_table,
    extended_images,
    life,
    matches_non_neutral_shape,
)
from arpsadic.sadic import DirectiveSequence, SadicWord


def test_two_extended_images_of_the_same_word():
    d1 = desubstitute("231231231", "p23")
    assert (d1.prepended, d1.antecedent, d1.appended, d1.case) == ("23", "11", "1", "v")
    d2 = desubstitute("31231232", "p23")
    assert (d2.prepended, d2.antecedent, d2.appended, d2.case) == ("3", "11", "2", "vi")


@pytest.mark.parametrize("label", ["a1", "p23"])
def test_empty_word_desubstitutes_to_itself(label):
    d = desubstitute("", label)
    assert (d.prepended, d.antecedent, d.appended) == ("", "", "")


def test_lone_j_under_poincare():
    d = desubstitute("2", "p23")
    assert (d.prepended, d.antecedent, d.case) == ("2", "", "iv")


def test_non_images_are_refused():
    with pytest.raises(NotAFactorImage):
        desubstitute("11", "a3")
    with pytest.raises(NotAFactorImage):
        desubstitute("21", "p23")


def test_antecedents():
    assert antecedent_bispecial("3", "a3") == ""
    assert antecedent_bispecial("33", "p23") == "3"
    assert antecedent_bispecial("23123123", "p23") == "11"
    with pytest.raises(ParseError):
        antecedent_bispecial("123", "p23")


def test_extended_images_of_the_empty_word():
    t = ExtensionTable.from_pairs(["12", "23", "31", "32", "33"])
    a, b = extended_images("", t, "p23")
    assert (a.word, str(a.table), a.bispecial) == ("3", "{22,23,31,32,33}", True)
    assert (b.word, str(b.table), b.bispecial) == ("23", "{12,33}", True)


def test_left_valence_two_gives_one_bispecial_image():
    # E-(v) = {i, j} = {1, 2} for p23
    t = ExtensionTable.from_pairs(["11", "12", "21", "22"])
    flags = [e.bispecial for e in extended_images("", t, "p23")]
    assert flags == [False, True]


def test_arnoux_rauzy_images_keep_the_table():
    t = ExtensionTable.from_pairs(["12", "23", "31", "32", "33"])
    (img,) = extended_images("12", t, "a2")
    assert img.word == "2122" and img.table == t


def test_extended_images_need_a_bispecial_table():
    with pytest.raises(InvalidTable):
        extended_images("", ExtensionTable.from_pairs(["12", "13"]), "p23")


def test_empty_word_tables():
    a = empty_word_table("a3")
    assert str(a) == "{13,23,31,32,33}" and classify_bispecial(a).tag == NEUTRAL_ORDINARY
    p = empty_word_table("p23")
    assert str(p) == "{12,23,31,32,33}" and classify_bispecial(p).tag == NEUTRAL_NON_ORDINARY
    assert len(a) == len(p) == 5


def test_history_rows():
    assert classify_history(["a1", "a2"]).w.as_tuple() == (3, 0, True)
    assert classify_history(["a1", "p12"]).w.as_tuple() == (3, 0, False)
    row6 = classify_history(["p23", "a1", "p13"])
    assert row6.row == 6 and row6.w.m == 1 and row6.w_prime.m == -1
    assert classify_history(["p23", "a3"]).w_prime is None
    assert classify_history(["p23", "p21"]).row == 5
    shape = ["p23", "a2", "a1", "a3", "p23"]
    assert classify_history(shape).row == 6 and matches_non_neutral_shape(shape)
    with pytest.raises(PatternMismatch):
        classify_history([])


def test_compare_abelian():
    assert compare_abelian((0, 0, 0), (1, 1, 1)).kind == "StrictLess"
    c = compare_abelian((0, 0, 0), (0, 0, 1))
    assert c.kind == "LeqWithStrictSet" and c.strict == {3}
    assert compare_abelian((1, 0, 1), (0, 0, 2)).kind == "Incomparable"


def test_lives_in_the_quadratic_word():
    d = DirectiveSequence(tuple(QUADRATIC_LABELS))
    lang = build_language(quadratic_word(), 20)
    strong = {w: life(w, d, lang) for w in ("3", "33", "333", "3333")}
    assert all(r.m == 1 for r in strong.values())
    assert [strong[w].age for w in ("3", "33", "333", "3333")] == [1, 2, 3, 4]
    r = life("33333", d, lang)
    assert r.m == 0 and r.age == 5
    assert life("", d, lang).age == 0


def test_histories_of_younger_factors_are_prefixes():
    d = DirectiveSequence(tuple(QUADRATIC_LABELS))
    recs = bispecial_records(build_language(quadratic_word(), 20), 20, d)
    for a in recs:
        for b in recs:
            if a.age <= b.age:
                assert b.history[: a.age] == a.history[: a.age]


def test_quadratic_word_breaks_alternance():
    rep = alternance_report(build_language(quadratic_word(), 20), 20, DirectiveSequence(tuple(QUADRATIC_LABELS)))
    assert not rep.ok
    assert any("not shorter than strong" in v for v in rep.violations)


def test_reference_word_alternance():
    rep = alternance_report(build_language(reference_handle(), 100), 100)
    assert rep.ok


def test_arnoux_rauzy_word_has_no_signed_bispecials():
    h = SadicWord(DirectiveSequence((), ("a1", "a2", "a3")), 1)
    rep = alternance_report(build_language(h, 60), 60)
    assert rep.ok and not rep.non_neutral()


def test_observed_tables_follow_the_image_rules():
    # shifted language gives E(v); the original language must show the predicted E(w)
    from arpsadic.errors import FactorNotFound

    for v in type3_vectors()[0][:8]:
        h = vector_handle(v)
        top = build_language(h, 40)
        below = build_language(h.shifted(1), 40)
        label = h.directive.label(0)
        for word, table in below.bispecials(30):
            for img in extended_images(word, table, label):
                try:
                    seen = top.extensions(img.word)
                except FactorNotFound:
                    seen = ExtensionTable(0)
                assert seen == img.table
