"""Language-specific generation prompts."""

from __future__ import annotations

from typing import Mapping

from .config import LANGUAGE_NAMES


def build_prompt(
    lang_code: str,
    passage_text: str,
    names: Mapping[str, str] = LANGUAGE_NAMES,
) -> str:
    """Prompt asking for a question in the target language about a passage."""
    if lang_code not in names:
        raise ValueError(f"no English name configured for language {lang_code!r}")
    return f"Generate a {names[lang_code]} question for this passage: {passage_text}"
