"""ternex: ternary relation template induction from POS-tagged text.

The pipeline extracts 5-item sequences (two noun-phrase arguments around a
trigger verb plus a connector-introduced third argument), types the arguments
against WDN_/NEL_ lexicons, promotes frequent typed patterns to candidate
templates, and grows the template set by bootstrapping over accepted ones.
"""

from .corpus import (
    Chunk,
    ChunkKind,
    CorpusFormatError,
    ReadStats,
    Sentence,
    Token,
    chunk_sentence,
    normalize_phrase,
    read_corpus,
    write_corpus,
)
from .extraction import (
    DEFAULT_PREPOSITIONS,
    EventConfigError,
    EventSpec,
    Tuple5,
    extract_generalized,
    extract_strict,
    load_event_config,
)
from .lexicon import TypeLexicon, TypeName, load_lexicon, resolve_types
from .induction import (
    Instance,
    Template,
    TemplateKey,
    TernaryRelation,
    induce_candidates,
    materialize_instances,
)
from .bootstrap import BootstrapConfig, IterationReport, run_iterations
from .store import ProjectState, load, save

__version__ = "0.1.0"

__all__ = [
    "BootstrapConfig",
    "Chunk",
    "ChunkKind",
    "CorpusFormatError",
    "DEFAULT_PREPOSITIONS",
    "EventConfigError",
    "EventSpec",
    "Instance",
    "IterationReport",
    "ProjectState",
    "ReadStats",
    "Sentence",
    "Template",
    "TemplateKey",
    "TernaryRelation",
    "Token",
    "Tuple5",
    "TypeLexicon",
    "TypeName",
    "chunk_sentence",
    "extract_generalized",
    "extract_strict",
    "induce_candidates",
    "load",
    "load_event_config",
    "load_lexicon",
    "materialize_instances",
    "normalize_phrase",
    "read_corpus",
    "resolve_types",
    "run_iterations",
    "save",
    "write_corpus",
    "__version__",
]
