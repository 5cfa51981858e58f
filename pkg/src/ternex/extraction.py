"""5-item sequence extraction from chunked sentences.

Two modes share one clause core (a subject NP, a following verb group
separated only by short OTHER material, and the adjacent object NP):

* strict: the verb group head must be a trigger verb of a configured event
  type and the third argument must be introduced by a single preposition
  from a fixed set; used for initial template induction.
* generalized: any verb, and any connector phrase of one to three tokens
  between the second and third argument; used during bootstrapping.

The third argument may attach across earlier prepositional phrases in the
same clause ("X sued Y in court for damages" yields both the "in" and the
"for" tuple), bounded by a three-token gap and, in strict mode, stopped by
any intervening verb group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable

from .corpus import Chunk, ChunkKind, Sentence

DEFAULT_PREPOSITIONS = frozenset(
    {"in", "at", "for", "from", "to", "with", "over", "on", "by", "against", "of", "during"}
)

MAX_CORE_GAP_TOKENS = 2  # OTHER tokens tolerated between N1 and the verb group
MAX_CONNECTOR_TOKENS = 3

MODE_STRICT = "strict"
MODE_GENERALIZED = "generalized"

ORIGIN_MANUAL = "manual"
ORIGIN_BOOTSTRAPPED = "bootstrapped"


class EventConfigError(ValueError):
    """Raised for a malformed event configuration file."""


@dataclass
class EventSpec:
    event_type: str
    triggers: dict[str, str] = field(default_factory=dict)  # lemma -> origin

    def trigger_lemmas(self) -> set[str]:
        return set(self.triggers)

    def add_trigger(self, lemma: str, origin: str = ORIGIN_BOOTSTRAPPED) -> bool:
        if lemma in self.triggers:
            return False
        self.triggers[lemma] = origin
        return True


@dataclass(frozen=True)
class Tuple5:
    doc_id: str
    sent_index: int
    chunk_indices: tuple[int, ...]  # (n1, vg, n2, n3) chunk positions
    n1: str
    n2: str
    n3: str
    raw_n1: str
    raw_n2: str
    raw_n3: str
    verb_lemma: str
    verb_surface: str
    connector: tuple[str, ...]
    mode: str
    event_type: str | None = None

    def args(self) -> tuple[str, str, str]:
        return (self.n1, self.n2, self.n3)


def load_event_config(source: Iterable[str] | Iterable[bytes] | IO) -> list[EventSpec]:
    """Parse the event config: one event per line, ``EventType<TAB>lemma...``
    with up to three manual trigger lemmas; a line with only the event name
    declares an event whose triggers are still to be filled in. ``#`` starts
    a comment."""
    specs: list[EventSpec] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in line.split("\t") if c.strip()]
        event_type, lemmas = cols[0], cols[1:]
        if event_type in seen:
            raise EventConfigError(f"line {lineno}: duplicate event type {event_type!r}")
        if len(lemmas) > 3:
            raise EventConfigError(f"line {lineno}: more than three trigger verbs for {event_type!r}")
        seen.add(event_type)
        specs.append(EventSpec(event_type, {l.casefold(): ORIGIN_MANUAL for l in lemmas}))
    return specs


def dump_event_config(specs: Iterable[EventSpec], out: IO[str]) -> None:
    for spec in specs:
        out.write("\t".join([spec.event_type] + sorted(spec.triggers)) + "\n")


def _find_cores(chunks: list[Chunk]) -> list[tuple[int, int, int]]:
    """(n1, vg, n2) chunk index triples: an NP, then a verb group separated
    only by OTHER chunks totaling at most MAX_CORE_GAP_TOKENS tokens, then
    the adjacent object NP."""
    cores = []
    for i, c1 in enumerate(chunks):
        if c1.kind is not ChunkKind.NP:
            continue
        gap_tokens = 0
        for j in range(i + 1, len(chunks)):
            cj = chunks[j]
            if cj.kind is ChunkKind.OTHER:
                gap_tokens += cj.token_length()
                if gap_tokens > MAX_CORE_GAP_TOKENS:
                    break
                continue
            if cj.kind is ChunkKind.VG and j + 1 < len(chunks) and chunks[j + 1].kind is ChunkKind.NP:
                cores.append((i, j, j + 1))
            break
    return cores


def _gap_token_count(chunks: list[Chunk], after: int, before: int) -> int:
    """Tokens strictly between chunk ``after`` and chunk ``before``."""
    return chunks[before].start - chunks[after].end - 1


def _tuple_from(
    sentence: Sentence,
    chunks: list[Chunk],
    core: tuple[int, int, int],
    m: int,
    connector: tuple[str, ...],
    mode: str,
    event_type: str | None,
) -> Tuple5:
    i, j, k = core
    head = sentence.tokens[chunks[j].head_index]
    return Tuple5(
        doc_id=sentence.doc_id,
        sent_index=sentence.sent_index,
        chunk_indices=(i, j, k, m),
        n1=chunks[i].norm_text,
        n2=chunks[k].norm_text,
        n3=chunks[m].norm_text,
        raw_n1=chunks[i].text,
        raw_n2=chunks[k].text,
        raw_n3=chunks[m].text,
        verb_lemma=head.lemma,
        verb_surface=head.surface,
        connector=connector,
        mode=mode,
        event_type=event_type,
    )


def extract_strict(
    sentence: Sentence,
    chunks: list[Chunk],
    events: Iterable[EventSpec],
    preps: frozenset[str] | set[str] = DEFAULT_PREPOSITIONS,
) -> list[Tuple5]:
    """Trigger-verb tuples: a clause core plus a third NP immediately
    preceded by a single preposition from ``preps``, with no verb group
    between the object NP and that preposition and at most three tokens
    between the two NPs. One tuple per event type whose trigger set
    contains the verb group's head lemma."""
    out: list[Tuple5] = []
    events = list(events)
    for core in _find_cores(chunks):
        _, j, k = core
        verb_lemma = sentence.tokens[chunks[j].head_index].lemma
        matching = [e.event_type for e in events if verb_lemma in e.triggers]
        if not matching:
            continue
        for m in range(k + 2, len(chunks)):
            if chunks[m].kind is not ChunkKind.NP:
                continue
            prep = chunks[m - 1]
            if prep.kind is not ChunkKind.PREP or prep.text.casefold() not in preps:
                continue
            gap = _gap_token_count(chunks, k, m)
            if gap < 1 or gap > MAX_CONNECTOR_TOKENS:
                continue
            if any(chunks[x].kind is ChunkKind.VG for x in range(k + 1, m - 1)):
                continue
            for event_type in matching:
                out.append(_tuple_from(sentence, chunks, core, m, (prep.text,), MODE_STRICT, event_type))
    return out


def extract_generalized(
    sentence: Sentence,
    chunks: list[Chunk],
    max_connector_len: int = MAX_CONNECTOR_TOKENS,
) -> list[Tuple5]:
    """Any-verb tuples: a clause core plus any later NP whose gap from the
    object NP is one to ``max_connector_len`` tokens; the gap token surfaces
    are recorded verbatim as the connector."""
    out: list[Tuple5] = []
    for core in _find_cores(chunks):
        _, _, k = core
        for m in range(k + 1, len(chunks)):
            if chunks[m].kind is not ChunkKind.NP:
                continue
            gap = _gap_token_count(chunks, k, m)
            if gap < 1:
                continue
            if gap > max_connector_len:
                break
            connector = tuple(
                tok.surface for tok in sentence.tokens[chunks[k].end + 1 : chunks[m].start]
            )
            out.append(_tuple_from(sentence, chunks, core, m, connector, MODE_GENERALIZED, None))
    return out
