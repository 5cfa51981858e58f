"""Semantic type lexicons.

A lexicon maps normalized noun phrases to semantic types drawn from two
sources: a common-noun-oriented hierarchy (prefix ``WDN_``) and a
proper-noun-oriented one (prefix ``NEL_``). The file format is TSV::

    # phrase<TAB>TYPENAME
    knife	WDN_weapon
    mccain	NEL_politician

Phrases are normalized at load time with the same rule used for NP chunks,
so lookups against extraction output are exact string matches. Lookup falls
back to the head word (last word of the phrase) when the full phrase is
unknown.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .corpus import normalize_text

TYPE_NAME_RE = re.compile(r"^(WDN|NEL)_([a-z0-9_]+)$")


@dataclass(frozen=True)
class TypeName:
    source: str  # "WDN" or "NEL"
    name: str

    def __post_init__(self) -> None:
        if self.source not in ("WDN", "NEL"):
            raise ValueError(f"unknown type source: {self.source!r}")

    def render(self) -> str:
        return f"{self.source}_{self.name}"

    @classmethod
    def parse(cls, rendered: str) -> "TypeName":
        m = TYPE_NAME_RE.match(rendered)
        if not m:
            raise ValueError(f"bad type name: {rendered!r}")
        return cls(m.group(1), m.group(2))


@dataclass
class LexiconEntry:
    phrase_key: str
    types: list[TypeName] = field(default_factory=list)  # rank 0 = preferred


class TypeLexicon:
    """Immutable after load; safe for concurrent lookup."""

    def __init__(self) -> None:
        self.entries: dict[str, LexiconEntry] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def source_counts(self) -> dict[str, int]:
        counts = {"WDN": 0, "NEL": 0}
        for entry in self.entries.values():
            for t in entry.types:
                counts[t.source] += 1
        return counts

    def add(self, phrase: str, type_name: TypeName) -> None:
        key = normalize_text(phrase)
        entry = self.entries.setdefault(key, LexiconEntry(key))
        if type_name not in entry.types:
            entry.types.append(type_name)


def load_lexicon(
    source: Iterable[str] | Iterable[bytes] | IO,
    lexicon: TypeLexicon | None = None,
    errors: list[tuple[int, str]] | None = None,
) -> TypeLexicon:
    """Load a lexicon-TSV stream. Duplicate (phrase, type) lines are ignored;
    rank is first-seen order per phrase. Lines with a bad type name are
    recorded in ``errors`` and skipped. Pass an existing lexicon to merge
    several files."""
    lex = lexicon if lexicon is not None else TypeLexicon()
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0].strip():
            if errors is not None:
                errors.append((lineno, f"malformed lexicon line: {line!r}"))
            continue
        try:
            type_name = TypeName.parse(cols[1].strip())
        except ValueError:
            if errors is not None:
                errors.append((lineno, f"bad type prefix: {cols[1].strip()!r}"))
            continue
        lex.add(cols[0], type_name)
    return lex


def resolve_types(lex: TypeLexicon, phrase_key: str, max_per_source: int = 1) -> list[TypeName]:
    """Resolve a normalized phrase to at most ``max_per_source`` types per
    source, preserving rank. Exact match shadows the head-word fallback
    (last whitespace-delimited word); returns [] on a total miss."""
    if max_per_source < 1:
        raise ValueError("max_per_source must be >= 1")
    entry = lex.entries.get(phrase_key)
    if entry is None:
        words = phrase_key.split()
        if len(words) > 1:
            entry = lex.entries.get(words[-1])
    if entry is None:
        return []
    taken = {"WDN": 0, "NEL": 0}
    out: list[TypeName] = []
    for t in entry.types:
        if taken[t.source] < max_per_source:
            taken[t.source] += 1
            out.append(t)
    return out
