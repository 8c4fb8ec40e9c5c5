"""Model-backed query generation and embedding export.

Fine-tunes a tiny byte-level seq2seq model to generate target-language
queries for English passages via language-specific prompts, samples query
sets per passage, and exports encoder embeddings. All outputs use the
retrieval engine's interchange formats.
"""

from .config import FinetuneConfig, GenerationConfig, LANGUAGE_NAMES, TARGET_LANGUAGES
from .export import export_embeddings
from .finetune import finetune_xqg
from .generate import generate_queries
from .io import CorpusDoc, TrainPair
from .prompts import build_prompt
from .scripts import contains_script

__version__ = "0.1.0"

__all__ = [
    "CorpusDoc",
    "FinetuneConfig",
    "GenerationConfig",
    "LANGUAGE_NAMES",
    "TARGET_LANGUAGES",
    "TrainPair",
    "build_prompt",
    "contains_script",
    "export_embeddings",
    "finetune_xqg",
    "generate_queries",
]
