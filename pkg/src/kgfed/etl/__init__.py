"""ETL framework: mapping-driven loading of delimited files with
cross-source deduplication, plus the synthetic corpus generator."""

from .registry import DedupRegistry
from .mapping import MappingConfig, load_mapping
from .native_loader import load_native
from .http_loader import load_cypher
from .corpus import gen_corpus, CorpusManifest, load_manifest

__all__ = [
    "DedupRegistry",
    "MappingConfig",
    "load_mapping",
    "load_native",
    "load_cypher",
    "gen_corpus",
    "CorpusManifest",
    "load_manifest",
]
