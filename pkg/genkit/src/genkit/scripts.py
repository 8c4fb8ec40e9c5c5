"""Unicode script ranges for sanity-checking generated text."""

from __future__ import annotations

SCRIPT_RANGES: dict[str, tuple[tuple[int, int], ...]] = {
    "Ar": ((0x0600, 0x06FF), (0x0750, 0x077F)),
    "Bn": ((0x0980, 0x09FF),),
    "Ja": ((0x3040, 0x309F), (0x30A0, 0x30FF), (0x4E00, 0x9FFF)),
    "Ko": ((0x1100, 0x11FF), (0xAC00, 0xD7AF)),
    "Ru": ((0x0400, 0x04FF),),
    "Te": ((0x0C00, 0x0C7F),),
    "Fi": ((0x0041, 0x005A), (0x0061, 0x007A), (0x00C0, 0x00FF)),
    "En": ((0x0041, 0x005A), (0x0061, 0x007A)),
}


def contains_script(text: str, lang_code: str) -> bool:
    """True when at least one character falls in the language's script ranges."""
    try:
        ranges = SCRIPT_RANGES[lang_code]
    except KeyError:
        raise ValueError(f"no script ranges configured for language {lang_code!r}") from None
    return any(lo <= ord(ch) <= hi for ch in text for lo, hi in ranges)
