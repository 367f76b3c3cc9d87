import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smallfusion.autos import is_isomorphic
from smallfusion.corpus.grammar import CorpusEntry, format_corpus, parse, parse_corpus
from smallfusion.corpus.runner import bundled_corpus_path
from smallfusion.errors import InconsistentPresentation, ParseError, SemanticError
from smallfusion.families import build, catalogue, parse_spec

MOD4_AS_WRITTEN = "group Mod4 { gens x:8, y:2; rel y^x = y; pow y: 1; conj x^y = x^5 }"
MOD4 = "group Mod4 { gens x:8, y:2; pow y: 1; conj x^y = x^5 }"


def test_bundled_corpus_round_trips():
    text = bundled_corpus_path().read_text()
    entries = parse_corpus(text)
    assert len(entries) >= 16
    for e in entries:
        assert parse(e.text()) == e
    assert parse_corpus(format_corpus(entries)) == entries


def test_bundled_corpus_covers_every_family_at_minimal_parameters():
    texts = {e.text() for e in parse_corpus(bundled_corpus_path().read_text())}
    for want in ("family C:1", "family D:2", "family Mod:4", "family wr:1", "family QDstar:3,3",
                 "family X:6", "family Y:6", "family Q8wrC2", "family suz"):
        assert want in texts


def test_mod4_as_written_declares_order_16_but_is_inconsistent():
    e = parse(MOD4_AS_WRITTEN)
    assert e.name == "Mod4" and e.body.order == 16
    # y^x = y makes x and y commute, which contradicts x^y = x^5
    with pytest.raises(InconsistentPresentation):
        e.to_group()


def test_mod4_without_the_commuting_relation_builds_mod4():
    e = parse(MOD4)
    G = e.to_group()
    assert G.order == 16
    assert is_isomorphic(G, build("Mod:4"))
    assert e.text() == MOD4


def test_family_entry():
    e = parse("family X:7")
    assert e.body == parse_spec("X:7")
    assert e.to_group().order == 128


def test_family_entry_with_label_and_expectations():
    e = parse('family QC:3,2 label "SmallGroup(32,26)" expect num_involutions=3')
    assert e.label == "SmallGroup(32,26)"
    assert dict(e.expected) == {"num_involutions": "3"}
    assert parse(e.text()) == e


def test_non_prime_power_order_is_a_positioned_semantic_error():
    with pytest.raises(SemanticError) as info:
        parse("gens x:6")
    assert (info.value.line, info.value.column) == (1, 8)


def test_undefined_generator():
    with pytest.raises(SemanticError, match="undefined generator 'z'"):
        parse("group A { gens x:4; pow z: x }")


def test_missing_brace_is_a_parse_error_with_position():
    with pytest.raises(ParseError) as info:
        parse("group A { gens x:4 ")
    assert info.value.line == 1 and info.value.column is not None


def test_error_position_on_later_line():
    with pytest.raises(SemanticError) as info:
        parse("group A {\n gens x:4;\n pow q: x }")
    assert info.value.line == 3


def test_unknown_expect_key_is_rejected():
    with pytest.raises(SemanticError):
        parse("family D:3 expect colour=red")


def test_anonymous_statement_block():
    e = parse("gens b:2, a:4\npow b: a^2\nconj a^b = a^-1")
    assert is_isomorphic(e.to_group(), build("Q:3"))


def test_juxtaposed_word_syntax():
    e = parse("group Y6 { gens d:2, b:2, a:4, c:4; pow d: a2 c2; pow b: a^2; conj a^b = a^-1; conj c^d = c^-1 }")
    assert is_isomorphic(e.to_group(), build("Y:6"))


def test_comment_lines_and_blank_lines_are_ignored():
    entries = parse_corpus("# header\n\nfamily D:3\n\n# more\nfamily Q:3\n")
    assert [e.text() for e in entries] == ["family D:3", "family Q:3"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([s.text() for s in catalogue(2**8)]))
def test_family_entries_round_trip(spec):
    e = CorpusEntry(parse_spec(spec))
    assert parse(e.text()) == e
