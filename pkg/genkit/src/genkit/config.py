"""Configuration for fine-tuning, generation and export."""

from __future__ import annotations

from dataclasses import dataclass

TARGET_LANGUAGES: tuple[str, ...] = ("Ar", "Bn", "Fi", "Ja", "Ko", "Ru", "Te")

# English names used inside generation prompts.
LANGUAGE_NAMES: dict[str, str] = {
    "Ar": "Arabic",
    "Bn": "Bengali",
    "En": "English",
    "Fi": "Finnish",
    "Ja": "Japanese",
    "Ko": "Korean",
    "Ru": "Russian",
    "Te": "Telugu",
}


def normalize_code(code: str) -> str:
    code = code.strip().capitalize()
    if not code:
        raise ValueError("language code must be non-empty")
    return code


@dataclass(frozen=True)
class GenerationConfig:
    """Sampling setup: which languages, how many samples, top-k width."""

    languages: tuple[str, ...] = TARGET_LANGUAGES
    samples_per_language: int = 5
    top_k: int = 10
    max_input_tokens: int = 64
    max_output_tokens: int = 24
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "languages", tuple(normalize_code(c) for c in self.languages))
        if not self.languages:
            raise ValueError("GenerationConfig.languages: at least one language")
        if self.samples_per_language < 1:
            raise ValueError("GenerationConfig.samples_per_language: must be >= 1")
        if self.top_k < 1:
            raise ValueError("GenerationConfig.top_k: must be >= 1")
        if self.max_input_tokens < 1 or self.max_output_tokens < 1:
            raise ValueError("GenerationConfig: token limits must be >= 1")
        for code in self.languages:
            if code not in LANGUAGE_NAMES:
                raise ValueError(f"GenerationConfig.languages: no prompt name for {code!r}")


@dataclass(frozen=True)
class FinetuneConfig:
    """Desk-scale training setup for the tiny byte-level seq2seq model."""

    languages: tuple[str, ...] = TARGET_LANGUAGES
    steps: int = 400
    batch_size: int = 16
    learning_rate: float = 3e-3
    max_input_tokens: int = 64
    max_output_tokens: int = 24
    d_model: int = 64
    num_layers: int = 2
    num_heads: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "languages", tuple(normalize_code(c) for c in self.languages))
        if self.steps < 2:
            raise ValueError("FinetuneConfig.steps: must be >= 2")
        if self.batch_size < 1:
            raise ValueError("FinetuneConfig.batch_size: must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("FinetuneConfig.learning_rate: must be positive")
        if self.d_model < 8 or self.d_model % self.num_heads:
            raise ValueError("FinetuneConfig.d_model: must be >= 8 and divisible by num_heads")
