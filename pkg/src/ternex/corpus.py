"""Tagged-corpus reading and rule-based chunking.

The corpus format is tagged TSV: one token per line with columns
``surface<TAB>pos<TAB>lemma`` (the lemma column may be omitted, in which
case the lemma defaults to the case-folded surface), a blank line ends a
sentence, and a line of the form ``#doc <id>`` starts a new document::

    #doc wiki-001
    Bob	NNP	bob
    killed	VBD	kill
    Alice	NNP	alice

Chunking is a deterministic finite-state pass over Penn-style POS tags;
every token ends up in exactly one chunk (NP, VG, PREP, or OTHER).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Iterator

NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
ADJ_TAGS = frozenset({"JJ", "JJR", "JJS"})
DET_TAGS = frozenset({"DT", "PRP$"})
VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"})
ADV_TAGS = frozenset({"RB", "RBR", "RBS"})
MODAL_TAG = "MD"
PREP_TAGS = frozenset({"IN", "TO"})

AUX_LEMMAS = frozenset({"be", "have", "do"})
CURRENCY_SYMBOLS = "$€£¥"
LEADING_DETERMINERS = frozenset({"the", "a", "an"})


class CorpusFormatError(ValueError):
    """Raised for an unsupported corpus format name."""


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    lemma: str
    index: int


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    sent_index: int
    tokens: tuple[Token, ...]


class ChunkKind(str, Enum):
    NP = "NP"
    VG = "VG"
    PREP = "PREP"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Chunk:
    kind: ChunkKind
    start: int
    end: int  # inclusive token index
    head_index: int
    text: str
    norm_text: str

    def token_length(self) -> int:
        return self.end - self.start + 1


@dataclass
class ReadStats:
    """Side channel for recoverable problems seen while streaming a corpus."""

    line_errors: list[tuple[int, str]] = field(default_factory=list)
    skipped_sentences: int = 0


def normalize_text(phrase: str) -> str:
    """Normalization key for a noun phrase: case-fold, collapse whitespace,
    strip leading determiners. Idempotent."""
    words = phrase.casefold().split()
    trimmed = list(words)
    while trimmed and trimmed[0] in LEADING_DETERMINERS:
        trimmed.pop(0)
    if not trimmed:  # degenerate input like "the"; keep something non-empty
        trimmed = words
    return " ".join(trimmed)


def normalize_phrase(chunk: Chunk) -> str:
    """Normalization key for an NP chunk (see :func:`normalize_text`)."""
    if chunk.kind is not ChunkKind.NP:
        raise ValueError(f"normalize_phrase expects an NP chunk, got {chunk.kind.value}")
    return normalize_text(chunk.text)


def _decode_lines(source: Iterable[str] | Iterable[bytes] | IO) -> Iterator[str]:
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line


def read_corpus(
    source: Iterable[str] | Iterable[bytes] | IO,
    format: str = "tagged-tsv",
    stats: ReadStats | None = None,
) -> Iterator[Sentence]:
    """Stream sentences from a tagged-TSV corpus.

    Yields sentences in document order without materializing the corpus.
    Malformed lines (wrong column count, empty surface/pos) are recorded in
    ``stats.line_errors`` with their 1-based line number and poison the
    enclosing sentence, which is then dropped and counted in
    ``stats.skipped_sentences``. Blank runs are ignored.
    """
    if format != "tagged-tsv":
        raise CorpusFormatError(f"unsupported corpus format: {format!r}")
    if stats is None:
        stats = ReadStats()

    doc_id = ""
    sent_index = 0
    tokens: list[Token] = []
    poisoned = False

    def flush() -> Sentence | None:
        nonlocal tokens, poisoned, sent_index
        out = None
        if tokens and not poisoned:
            out = Sentence(doc_id, sent_index, tuple(tokens))
            sent_index += 1
        elif poisoned:
            stats.skipped_sentences += 1
        tokens = []
        poisoned = False
        return out

    for lineno, raw in enumerate(_decode_lines(source), start=1):
        line = raw.rstrip("\r\n")
        if line == "#doc" or line.startswith("#doc "):
            sent = flush()
            if sent is not None:
                yield sent
            doc_id = line[4:].strip()
            sent_index = 0
            continue
        if not line.strip():
            sent = flush()
            if sent is not None:
                yield sent
            continue
        cols = line.split("\t")
        if len(cols) not in (2, 3) or not cols[0] or not cols[1]:
            stats.line_errors.append((lineno, f"malformed token line: {line!r}"))
            poisoned = True
            continue
        surface, pos = cols[0], cols[1]
        lemma = cols[2] if len(cols) == 3 and cols[2] else surface.casefold()
        tokens.append(Token(surface, pos, lemma, len(tokens)))

    sent = flush()
    if sent is not None:
        yield sent


def write_corpus(sentences: Iterable[Sentence], out: IO[str]) -> None:
    """Write sentences back out in tagged-TSV form (inverse of read_corpus)."""
    current_doc: str | None = None
    for sentence in sentences:
        if sentence.doc_id != current_doc:
            out.write(f"#doc {sentence.doc_id}".rstrip() + "\n")
            current_doc = sentence.doc_id
        for token in sentence.tokens:
            out.write(f"{token.surface}\t{token.pos}\t{token.lemma}\n")
        out.write("\n")


def _is_currency(token: Token) -> bool:
    return token.pos == "$" or token.surface[:1] in CURRENCY_SYMBOLS


def _match_np(tokens: tuple[Token, ...], start: int) -> int | None:
    """Longest NP starting at ``start``: optional determiner/possessive, then
    adjectives/cardinals/nouns (currency symbols allowed), ending in a noun.
    A span that contains a currency token may instead end in a cardinal, so
    amounts like "$40 billion" chunk as one NP. Returns the inclusive end
    index, or None."""
    i = start
    n = len(tokens)
    if i < n and tokens[i].pos in DET_TAGS:
        i += 1
    body_start = i
    last_noun = None
    last_amount = None
    seen_currency = False
    while i < n:
        tok = tokens[i]
        if tok.pos in NOUN_TAGS:
            last_noun = i
        elif _is_currency(tok):
            seen_currency = True
            if tok.pos == "CD":
                last_amount = i
        elif tok.pos == "CD":
            if seen_currency:
                last_amount = i
        elif tok.pos not in ADJ_TAGS:
            break
        i += 1
    if i == body_start:
        return None
    if last_noun is not None and (last_amount is None or last_noun > last_amount):
        return last_noun
    if seen_currency and last_amount is not None:
        return max(last_amount, last_noun if last_noun is not None else -1)
    return last_noun


def _match_vg(tokens: tuple[Token, ...], start: int) -> int | None:
    """Verb group: optional adverbs then one or more verb/modal tokens.
    Returns the inclusive end index, or None."""
    i = start
    n = len(tokens)
    while i < n and tokens[i].pos in ADV_TAGS:
        i += 1
    verb_start = i
    while i < n and (tokens[i].pos in VERB_TAGS or tokens[i].pos == MODAL_TAG):
        i += 1
    if i == verb_start:
        return None
    return i - 1


def _vg_head(tokens: tuple[Token, ...], start: int, end: int) -> int:
    head = end
    for i in range(end, start - 1, -1):
        tok = tokens[i]
        if tok.pos in VERB_TAGS and tok.lemma not in AUX_LEMMAS:
            return i
    return head


def _np_head(tokens: tuple[Token, ...], start: int, end: int) -> int:
    for i in range(end, start - 1, -1):
        if tokens[i].pos in NOUN_TAGS:
            return i
    return end


def _make_chunk(kind: ChunkKind, tokens: tuple[Token, ...], start: int, end: int) -> Chunk:
    text = " ".join(t.surface for t in tokens[start : end + 1])
    if kind is ChunkKind.NP:
        head = _np_head(tokens, start, end)
        norm = normalize_text(text)
    elif kind is ChunkKind.VG:
        head = _vg_head(tokens, start, end)
        norm = text.casefold()
    else:
        head = start
        norm = text.casefold()
    return Chunk(kind, start, end, head, text, norm)


def chunk_sentence(sentence: Sentence) -> list[Chunk]:
    """Partition a sentence into NP / VG / PREP / OTHER chunks.

    Deterministic single left-to-right pass; at each position the NP rule is
    tried first, then VG, then single-token PREP (IN/TO); anything else
    becomes a one-token OTHER chunk. The resulting spans cover every token
    exactly once, in order.
    """
    tokens = sentence.tokens
    chunks: list[Chunk] = []
    i = 0
    n = len(tokens)
    while i < n:
        end = _match_np(tokens, i)
        if end is not None:
            chunks.append(_make_chunk(ChunkKind.NP, tokens, i, end))
            i = end + 1
            continue
        end = _match_vg(tokens, i)
        if end is not None:
            chunks.append(_make_chunk(ChunkKind.VG, tokens, i, end))
            i = end + 1
            continue
        if tokens[i].pos in PREP_TAGS:
            chunks.append(_make_chunk(ChunkKind.PREP, tokens, i, i))
            i += 1
            continue
        chunks.append(_make_chunk(ChunkKind.OTHER, tokens, i, i))
        i += 1
    return chunks
