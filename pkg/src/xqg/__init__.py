"""Cross-lingual dense retrieval with generated-query passage augmentation.

Passage embeddings are augmented at indexing time with the embeddings of
synthetic queries generated in the target languages; searching is plain
maximum inner-product retrieval and stays unchanged. The package bundles
the aggregation itself, file formats for every artifact, exact and IVF
search, the recall-at-kilotokens metric with paired significance tests,
experiment sweeps and a seeded synthetic benchmark world.
"""

from .augment import AugmentedCorpusEmbeddings, aggregate, augment_corpus
from .core import (
    AugmentationConfig,
    DEFAULT_LANGUAGES,
    EvalQuery,
    GeneratedQuery,
    GeneratedQuerySet,
    LanguageTag,
    Passage,
    RankedList,
    genq_embedding_id,
    query_embedding_id,
)
from .encoder import (
    EmbeddingStore,
    HashEncoderConfig,
    encode_text,
    encode_with_language_offset,
)
from .evaluation import (
    MetricReport,
    SignificanceReport,
    bonferroni,
    paired_t_test,
    recall_at_kilotokens,
)
from .experiments import (
    CrossLanguageMatrix,
    SweepResult,
    SweepSpec,
    SyntheticWorld,
    SyntheticWorldSpec,
    cross_language_matrix,
    generate_synthetic_world,
    run_sweep,
)
from .index import VectorIndex, build_exact, build_ivf, search

__version__ = "0.1.0"

__all__ = [
    "AugmentationConfig",
    "AugmentedCorpusEmbeddings",
    "CrossLanguageMatrix",
    "DEFAULT_LANGUAGES",
    "EmbeddingStore",
    "EvalQuery",
    "GeneratedQuery",
    "GeneratedQuerySet",
    "HashEncoderConfig",
    "LanguageTag",
    "MetricReport",
    "Passage",
    "RankedList",
    "SignificanceReport",
    "SweepResult",
    "SweepSpec",
    "SyntheticWorld",
    "SyntheticWorldSpec",
    "VectorIndex",
    "aggregate",
    "augment_corpus",
    "bonferroni",
    "build_exact",
    "build_ivf",
    "cross_language_matrix",
    "encode_text",
    "encode_with_language_offset",
    "generate_synthetic_world",
    "genq_embedding_id",
    "paired_t_test",
    "query_embedding_id",
    "recall_at_kilotokens",
    "run_sweep",
    "search",
]
