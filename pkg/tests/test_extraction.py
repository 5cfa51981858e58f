import io
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from helpers import events_from, gen_of, sent, strict_of
from ternex.corpus import ChunkKind, Sentence, Token, chunk_sentence
from ternex.extraction import (
    DEFAULT_PREPOSITIONS,
    EventConfigError,
    EventSpec,
    extract_generalized,
    extract_strict,
    load_event_config,
)


# ---------------------------------------------------------------------------
# event config

def test_event_config_parses_triggers():
    specs = load_event_config(io.StringIO("AcquisitionEvent\tbuy\tacquire\n"))
    assert len(specs) == 1
    assert specs[0].event_type == "AcquisitionEvent"
    assert specs[0].trigger_lemmas() == {"buy", "acquire"}
    assert specs[0].triggers["buy"] == "manual"


def test_event_config_allows_empty_trigger_slots():
    specs = load_event_config(io.StringIO("AwardEvent\n"))
    assert specs[0].trigger_lemmas() == set()


def test_event_config_casefolds_lemmas():
    specs = load_event_config(io.StringIO("MurderEvent\tKill\n"))
    assert specs[0].trigger_lemmas() == {"kill"}


def test_event_config_skips_comments():
    specs = load_event_config(io.StringIO("# header\nMurderEvent\tkill\n"))
    assert len(specs) == 1


def test_event_config_rejects_duplicate_event():
    with pytest.raises(EventConfigError):
        load_event_config(io.StringIO("MurderEvent\tkill\nMurderEvent\tstab\n"))


def test_event_config_rejects_four_triggers():
    with pytest.raises(EventConfigError):
        load_event_config(io.StringIO("MurderEvent\ta\tb\tc\td\n"))


def test_default_event_config_ships_eighteen_types():
    text = resources.files("ternex").joinpath("data/default_events.tsv").read_text()
    specs = load_event_config(io.StringIO(text))
    assert len(specs) == 18
    assert all(not s.triggers for s in specs)


def test_add_trigger_reports_novelty():
    spec = EventSpec("MurderEvent", {"kill": "manual"})
    assert spec.add_trigger("stab") is True
    assert spec.triggers["stab"] == "bootstrapped"
    assert spec.add_trigger("kill") is False


# ---------------------------------------------------------------------------
# strict extraction

ACQ = events_from(("AcquisitionEvent", ["buy"]))


def test_strict_acquisition_sentence():
    s = sent("CBS/NNP bought/VBD/buy WCCO/NNP from/IN General/NNP Mills/NNP")
    tuples = strict_of(s, ACQ)
    assert len(tuples) == 1
    t = tuples[0]
    assert t.args() == ("cbs", "wcco", "general mills")
    assert t.verb_lemma == "buy"
    assert t.connector == ("from",)
    assert t.mode == "strict"
    assert t.event_type == "AcquisitionEvent"
    assert (t.doc_id, t.sent_index) == ("d1", 0)


def test_strict_empty_trigger_set():
    s = sent("CBS/NNP bought/VBD/buy WCCO/NNP from/IN General/NNP Mills/NNP")
    assert strict_of(s, []) == []
    assert strict_of(s, events_from(("AcquisitionEvent", []))) == []


def test_strict_two_prepositional_phrases_give_two_tuples():
    s = sent("X/NNP sued/VBD/sue Y/NNP in/IN court/NN for/IN damages/NNS")
    tuples = strict_of(s, events_from(("SuingEvent", ["sue"])))
    assert [(t.connector, t.n3) for t in tuples] == [
        (("in",), "court"),
        (("for",), "damages"),
    ]


def test_strict_one_tuple_per_matching_event_type():
    events = events_from(("AcquisitionEvent", ["buy"]), ("SaleEvent", ["buy", "sell"]))
    s = sent("CBS/NNP bought/VBD/buy WCCO/NNP from/IN General/NNP Mills/NNP")
    tuples = strict_of(s, events)
    assert {t.event_type for t in tuples} == {"AcquisitionEvent", "SaleEvent"}
    assert len(tuples) == 2


def test_strict_requires_known_preposition():
    s = sent("CBS/NNP bought/VBD/buy WCCO/NNP despite/IN objections/NNS")
    assert strict_of(s, ACQ) == []
    assert len(strict_of(s, ACQ, preps={"despite"})) == 1


def test_strict_rejects_gap_longer_than_three_tokens():
    s = sent(
        "X/NNP sued/VBD/sue Y/NNP very/RB very/RB early/RB for/IN damages/NNS"
    )
    assert strict_of(s, events_from(("SuingEvent", ["sue"]))) == []


def test_strict_rejects_verb_group_between_object_and_third_argument():
    s = sent("X/NNP sued/VBD/sue Y/NNP met/VBD/meet Z/NNP for/IN damages/NNS")
    assert strict_of(s, events_from(("SuingEvent", ["sue"]))) == []


def test_strict_tolerates_two_other_tokens_before_the_verb():
    s = sent(
        "Bob/NNP however/RB ,/, killed/VBD/kill Alice/NNP with/IN a/DT knife/NN"
    )
    tuples = strict_of(s, events_from(("MurderEvent", ["kill"])))
    assert len(tuples) == 1
    assert tuples[0].n3 == "knife"


def test_strict_rejects_three_other_tokens_before_the_verb():
    s = sent(
        "Bob/NNP even/RB so/RB ,/, killed/VBD/kill Alice/NNP with/IN a/DT knife/NN"
    )
    assert strict_of(s, events_from(("MurderEvent", ["kill"]))) == []


def test_strict_matches_verb_by_lemma_not_surface():
    s = sent("CBS/NNP buys/VBZ/buy WCCO/NNP from/IN General/NNP Mills/NNP")
    tuples = strict_of(s, ACQ)
    assert len(tuples) == 1
    assert tuples[0].verb_surface == "buys"


# ---------------------------------------------------------------------------
# generalized extraction

def test_generalized_endorsement_sentence():
    s = sent(
        "The/DT New/NNP Yorker/NNP endorsed/VBD/endorse Obama/NNP over/IN Romney/NNP"
    )
    tuples = gen_of(s)
    assert len(tuples) == 1
    t = tuples[0]
    assert t.args() == ("new yorker", "obama", "romney")
    assert t.verb_lemma == "endorse"
    assert t.connector == ("over",)
    assert t.mode == "generalized"
    assert t.event_type is None


def test_generalized_rejects_four_token_gap():
    s = sent(
        "X/NNP sued/VBD/sue Y/NNP very/RB very/RB early/RB for/IN damages/NNS"
    )
    assert gen_of(s) == []


def test_generalized_emits_three_token_connector_verbatim():
    s = sent(
        "Acme/NNP hired/VBD/hire Bob/NNP as/IN chief/NN of/IN Widgetco/NNP"
    )
    tuples = gen_of(s)
    connectors = {t.connector: t.n3 for t in tuples}
    assert connectors[("as", "chief", "of")] == "widgetco"
    assert connectors[("as",)] == "chief"


def test_generalized_connector_keeps_surface_case():
    s = sent("X/NNP beat/VBD/beat Y/NNP At/IN Z/NNP")
    assert gen_of(s)[0].connector == ("At",)


def test_generalized_requires_nonzero_gap():
    s = sent("Bob/NNP gave/VBD/give Alice/NNP flowers/NNS")
    assert gen_of(s) == []


def test_generalized_custom_connector_limit():
    s = sent("Acme/NNP hired/VBD/hire Bob/NNP as/IN chief/NN of/IN Widgetco/NNP")
    short = gen_of(s, max_connector_len=1)
    assert {t.connector for t in short} == {("as",)}


def test_extractors_reject_mismatched_inputs():
    s = sent("Bob/NNP runs/VBZ/run")
    assert strict_of(s, ACQ) == []
    assert gen_of(s) == []


# ---------------------------------------------------------------------------
# properties

_WORDS = ["bob", "alice", "corp", "deal", "buy", "sell", "win", "the", "big",
          "very", "and", "$40", "billion", "court"]
_POS = ["NN", "NNS", "NNP", "JJ", "CD", "DT", "VB", "VBD", "VBZ", "RB",
        "IN", "TO", "MD", ",", ".", "$", "CC"]


@st.composite
def random_sentences(draw):
    n = draw(st.integers(min_value=1, max_value=14))
    tokens = []
    for i in range(n):
        surface = draw(st.sampled_from(_WORDS))
        pos = draw(st.sampled_from(_POS))
        tokens.append(Token(surface, pos, surface.casefold(), i))
    return Sentence("d", 0, tuple(tokens))


@st.composite
def trigger_sets(draw):
    lemmas = draw(st.sets(st.sampled_from(["buy", "sell", "win", "court"]), max_size=3))
    return events_from(("AnyEvent", sorted(lemmas)))


@given(random_sentences(), trigger_sets())
def test_every_strict_tuple_has_a_generalized_counterpart(s, events):
    chunks = chunk_sentence(s)
    strict = extract_strict(s, chunks, events, DEFAULT_PREPOSITIONS)
    gen = {(t.chunk_indices, t.args(), t.connector) for t in extract_generalized(s, chunks)}
    for t in strict:
        matches = [g for g in gen if g[0] == t.chunk_indices and g[1] == t.args()]
        assert matches, t
        # the strict preposition is the last token of the generalized connector
        assert all(g[2][-1] == t.connector[0] for g in matches)


@given(random_sentences())
def test_strict_output_monotone_in_trigger_set(s):
    chunks = chunk_sentence(s)
    small = events_from(("AnyEvent", ["buy"]))
    large = events_from(("AnyEvent", ["buy", "sell", "win"]))
    a = extract_strict(s, chunks, small, DEFAULT_PREPOSITIONS)
    b = extract_strict(s, chunks, large, DEFAULT_PREPOSITIONS)
    assert set(a) <= set(b)
    assert len(a) <= len(b)


@given(random_sentences())
def test_emitted_chunk_indices_are_valid(s):
    chunks = chunk_sentence(s)
    for t in extract_generalized(s, chunks):
        n1, vg, n2, n3 = t.chunk_indices
        assert 0 <= n1 < vg < n2 < n3 < len(chunks)
        assert chunks[n1].kind is ChunkKind.NP
        assert chunks[vg].kind is ChunkKind.VG
        assert chunks[n2].kind is ChunkKind.NP
        assert chunks[n3].kind is ChunkKind.NP
        assert 1 <= len(t.connector) <= 3
        assert t.n1 and t.n2 and t.n3
