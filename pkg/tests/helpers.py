"""Small builders shared by the test modules."""

import io

from ternex.corpus import Sentence, Token, chunk_sentence
from ternex.extraction import (
    DEFAULT_PREPOSITIONS,
    EventSpec,
    extract_generalized,
    extract_strict,
)
from ternex.lexicon import TypeLexicon, load_lexicon


def sent(tagged: str, doc_id: str = "d1", sent_index: int = 0) -> Sentence:
    """Build a Sentence from space-separated "surface/POS" or
    "surface/POS/lemma" items; lemma defaults to the case-folded surface."""
    tokens = []
    for i, item in enumerate(tagged.split()):
        parts = item.split("/")
        if len(parts) == 2:
            surface, pos = parts
            lemma = surface.casefold()
        else:
            surface, pos, lemma = parts
        tokens.append(Token(surface, pos, lemma, i))
    return Sentence(doc_id, sent_index, tuple(tokens))


def lex_from(text: str) -> TypeLexicon:
    return load_lexicon(io.StringIO(text))


def events_from(*specs) -> list[EventSpec]:
    """events_from(("MurderEvent", ["kill"]), ...) with manual origins."""
    return [
        EventSpec(event_type, {lemma: "manual" for lemma in lemmas})
        for event_type, lemmas in specs
    ]


def strict_of(sentence: Sentence, events, preps=DEFAULT_PREPOSITIONS):
    return extract_strict(sentence, chunk_sentence(sentence), events, preps)


def gen_of(sentence: Sentence, max_connector_len: int = 3):
    return extract_generalized(sentence, chunk_sentence(sentence), max_connector_len)
