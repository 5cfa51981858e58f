import io

import pytest
from hypothesis import given, strategies as st

from helpers import sent
from ternex.corpus import (
    ChunkKind,
    CorpusFormatError,
    ReadStats,
    Sentence,
    Token,
    chunk_sentence,
    normalize_phrase,
    normalize_text,
    read_corpus,
    write_corpus,
)


def read_all(text: str):
    stats = ReadStats()
    return list(read_corpus(io.StringIO(text), stats=stats)), stats


# ---------------------------------------------------------------------------
# reader

def test_read_minimal_sentence():
    text = "Bob\tNNP\tbob\nkilled\tVBD\tkill\nAlice\tNNP\talice\n\n"
    sentences, stats = read_all(text)
    assert len(sentences) == 1
    s = sentences[0]
    assert [t.surface for t in s.tokens] == ["Bob", "killed", "Alice"]
    assert [t.lemma for t in s.tokens] == ["bob", "kill", "alice"]
    assert [t.index for t in s.tokens] == [0, 1, 2]
    assert not stats.line_errors and stats.skipped_sentences == 0


def test_read_empty_stream():
    sentences, stats = read_all("")
    assert sentences == []
    assert not stats.line_errors


def test_read_two_column_lines_default_lemma():
    sentences, _ = read_all("Dogs\tNNS\n\n")
    assert sentences[0].tokens[0].lemma == "dogs"


def test_read_missing_trailing_blank_line():
    sentences, _ = read_all("Run\tVB\trun")
    assert len(sentences) == 1


def test_read_doc_headers_reset_sentence_index():
    text = (
        "#doc alpha\n"
        "A\tNNP\n\n"
        "B\tNNP\n\n"
        "#doc beta\n"
        "C\tNNP\n\n"
    )
    sentences, _ = read_all(text)
    assert [(s.doc_id, s.sent_index) for s in sentences] == [
        ("alpha", 0),
        ("alpha", 1),
        ("beta", 0),
    ]


def test_read_two_doc_fixture_with_one_malformed_line():
    """10 sentences across 2 docs, one poisoned by a bad line -> 9 survive."""
    blocks_a = [f"w{i}\tNN\n\n" for i in range(5)]
    blocks_b = [f"v{i}\tNN\n\n" for i in range(5)]
    blocks_b[2] = "good\tNN\nonecolumn\nalso\tNN\n\n"
    text = "#doc a\n" + "".join(blocks_a) + "#doc b\n" + "".join(blocks_b)
    sentences, stats = read_all(text)
    assert len(sentences) == 9
    assert len(stats.line_errors) == 1
    assert stats.skipped_sentences == 1
    lineno, message = stats.line_errors[0]
    assert "onecolumn" in message
    # the poisoned sentence does not consume an index
    assert [s.sent_index for s in sentences if s.doc_id == "b"] == [0, 1, 2, 3]


def test_read_records_line_number_of_bad_line():
    text = "ok\tNN\n\nbad line with spaces\n\n"
    _, stats = read_all(text)
    assert stats.line_errors[0][0] == 3


def test_read_rejects_unknown_format():
    with pytest.raises(CorpusFormatError):
        list(read_corpus(io.StringIO(""), format="conllu"))


def test_read_accepts_bytes():
    sentences, _ = read_all_bytes(b"Bob\tNNP\tbob\n\n")
    assert sentences[0].tokens[0].surface == "Bob"


def read_all_bytes(data: bytes):
    stats = ReadStats()
    return list(read_corpus(io.BytesIO(data), stats=stats)), stats


def test_write_read_round_trip():
    original = [
        sent("Bob/NNP killed/VBD/kill Alice/NNP", doc_id="d1", sent_index=0),
        sent("He/PRP fled/VBD/flee", doc_id="d1", sent_index=1),
        sent("Rain/NN fell/VBD/fall", doc_id="d2", sent_index=0),
    ]
    buf = io.StringIO()
    write_corpus(original, buf)
    reread = list(read_corpus(io.StringIO(buf.getvalue())))
    assert [(s.doc_id, s.sent_index, s.tokens) for s in reread] == [
        (s.doc_id, s.sent_index, s.tokens) for s in original
    ]


# ---------------------------------------------------------------------------
# normalization

def test_normalize_strips_leading_determiner():
    assert normalize_text("The New Yorker") == "new yorker"


def test_normalize_fixpoint_on_plain_word():
    assert normalize_text("knife") == "knife"


def test_normalize_collapses_whitespace():
    assert normalize_text("a  $40   billion") == "$40 billion"


def test_normalize_keeps_degenerate_determiner_only_phrase():
    assert normalize_text("The") == "the"


def test_normalize_phrase_rejects_non_np():
    chunks = chunk_sentence(sent("ran/VBD/run"))
    assert chunks[0].kind is ChunkKind.VG
    with pytest.raises(ValueError):
        normalize_phrase(chunks[0])


@given(st.text(alphabet="abc $40THEa\t", max_size=30))
def test_normalize_idempotent(text):
    once = normalize_text(text)
    assert normalize_text(once) == once


# ---------------------------------------------------------------------------
# chunker

def kinds(chunks):
    return [c.kind.value for c in chunks]


def test_chunk_endorsement_sentence():
    s = sent("Joe/NNP Lieberman/NNP endorsed/VBD/endorse McCain/NNP for/IN president/NN")
    chunks = chunk_sentence(s)
    assert kinds(chunks) == ["NP", "VG", "NP", "PREP", "NP"]
    assert chunks[0].text == "Joe Lieberman"
    assert chunks[0].norm_text == "joe lieberman"
    assert chunks[0].head_index == 1  # rightmost noun heads the NP
    assert chunks[1].head_index == 2
    assert chunks[4].text == "president"


def test_chunk_single_verb_token():
    chunks = chunk_sentence(sent("Run/VB/run"))
    assert kinds(chunks) == ["VG"]


def test_chunk_dollar_amount_as_one_np():
    s = sent("Mercedes-Benz/NNP bought/VBD/buy Chrysler/NNP for/IN $40/CD billion/CD")
    chunks = chunk_sentence(s)
    assert kinds(chunks) == ["NP", "VG", "NP", "PREP", "NP"]
    assert chunks[4].text == "$40 billion"
    assert chunks[4].norm_text == "$40 billion"


def test_chunk_determiner_joins_amount_np():
    chunks = chunk_sentence(sent("a/DT $40/CD billion/CD deal/NN"))
    assert kinds(chunks) == ["NP"]
    assert chunks[0].norm_text == "$40 billion deal"


def test_chunk_bare_cardinals_are_not_an_np():
    # without a currency token, cardinals alone never form an NP
    chunks = chunk_sentence(sent("40/CD billion/CD"))
    assert kinds(chunks) == ["OTHER", "OTHER"]


def test_chunk_split_currency_symbol():
    chunks = chunk_sentence(sent("$/$ 40/CD billion/CD"))
    assert kinds(chunks) == ["NP"]
    assert chunks[0].text == "$ 40 billion"


def test_chunk_adverb_starts_verb_group():
    s = sent("Joe/NNP formally/RB endorsed/VBD/endorse McCain/NNP")
    chunks = chunk_sentence(s)
    assert kinds(chunks) == ["NP", "VG", "NP"]
    assert chunks[1].text == "formally endorsed"
    assert chunks[1].head_index == 2


def test_chunk_auxiliary_is_not_the_head():
    s = sent("CBS/NNP has/VBZ/have bought/VBD/buy WCCO/NNP")
    chunks = chunk_sentence(s)
    assert kinds(chunks) == ["NP", "VG", "NP"]
    vg = chunks[1]
    assert s.tokens[vg.head_index].lemma == "buy"


def test_chunk_to_is_a_preposition():
    chunks = chunk_sentence(sent("went/VBD/go to/TO town/NN"))
    assert kinds(chunks) == ["VG", "PREP", "NP"]


def test_chunk_punctuation_is_other():
    chunks = chunk_sentence(sent("Bob/NNP ,/, though/IN"))
    assert kinds(chunks) == ["NP", "OTHER", "PREP"]


_POS = ["NN", "NNS", "NNP", "JJ", "CD", "DT", "PRP$", "VB", "VBD", "VBZ",
        "RB", "IN", "TO", "MD", ",", ".", "$", "CC", "PRP"]
_WORDS = ["alpha", "beta", "The", "runs", "$40", "billion", "12", "very", "and"]


@st.composite
def random_sentences(draw):
    n = draw(st.integers(min_value=1, max_value=12))
    tokens = tuple(
        Token(draw(st.sampled_from(_WORDS)), draw(st.sampled_from(_POS)), "x", i)
        for i in range(n)
    )
    return Sentence("d", 0, tokens)


@given(random_sentences())
def test_chunks_partition_the_sentence(s):
    chunks = chunk_sentence(s)
    covered = []
    for c in chunks:
        assert c.start <= c.end
        assert c.start <= c.head_index <= c.end
        covered.extend(range(c.start, c.end + 1))
    assert covered == list(range(len(s.tokens)))


@given(random_sentences())
def test_chunking_is_deterministic(s):
    assert chunk_sentence(s) == chunk_sentence(s)
