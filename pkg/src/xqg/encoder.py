"""Embedding providers: the pluggable stand-in for the dense encoder.

Two sources exist: a file-backed :class:`EmbeddingStore` holding exported
vectors, and a deterministic feature-hashing encoder used by tests and the
synthetic experiments. The hashing encoder is specified bit-exactly (FNV-1a
64-bit, signed one-hot per token, final L2 normalization) so results are
reproducible everywhere without any model runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

from .core import LanguageTag, as_embedding

__all__ = [
    "EmbeddingStore",
    "HashEncoderConfig",
    "fnv1a_64",
    "encode_text",
    "encode_with_language_offset",
]

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit hash of a byte string."""
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _U64
    return h


@dataclass(frozen=True)
class HashEncoderConfig:
    """Configuration of the deterministic hashing encoder."""

    dim: int = 64
    seed: int = 0
    lowercase: bool = True

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"HashEncoderConfig.dim: must be >= 2, got {self.dim}")
        if not (0 <= self.seed <= _U64):
            raise ValueError("HashEncoderConfig.seed: must fit in unsigned 64 bits")


@lru_cache(maxsize=1_000_000)
def _token_hash(seed: int, token: str) -> int:
    return fnv1a_64(seed.to_bytes(8, "little") + token.encode("utf-8"))


def _accumulate(cfg: HashEncoderConfig, text: str) -> np.ndarray:
    """Signed token counts in float64; not normalized."""
    acc = np.zeros(cfg.dim, dtype=np.float64)
    if cfg.lowercase:
        text = text.lower()
    for token in text.split():
        h = _token_hash(cfg.seed, token)
        acc[h % cfg.dim] += 1.0 if (h >> 63) == 0 else -1.0
    return acc


def encode_text(cfg: HashEncoderConfig, text: str) -> np.ndarray:
    """Embed text by signed feature hashing of whitespace tokens.

    Tokens hash to one coordinate each (sign from bit 63); the sum is
    L2-normalized. Empty or all-cancelling input yields the zero vector.
    """
    acc = _accumulate(cfg, text)
    norm = float(np.linalg.norm(acc))
    if norm > 0.0:
        acc /= norm
    return as_embedding(acc, cfg.dim, "encoded text")


def language_direction(cfg: HashEncoderConfig, code: str) -> np.ndarray:
    """Unit vector for a language code, derived with the same hashing scheme."""
    return encode_text(cfg, code)


def encode_with_language_offset(
    cfg: HashEncoderConfig,
    text: str,
    lang: LanguageTag,
    offset_scale: float,
) -> np.ndarray:
    """Embed text, then shift it along the language's unit direction.

    Returns ``normalize(encode_text(text) + offset_scale * u_lang)``; at
    offset_scale 0 this is exactly ``encode_text``. Used only by synthetic
    experiment generation to model a cross-lingual embedding gap.
    """
    if offset_scale < 0:
        raise ValueError(f"offset_scale: must be >= 0, got {offset_scale}")
    if offset_scale == 0.0:
        return encode_text(cfg, text)
    base = encode_text(cfg, text).astype(np.float64)
    u = language_direction(cfg, lang.code).astype(np.float64)
    v = base + offset_scale * u
    norm = float(np.linalg.norm(v))
    if norm > 0.0:
        v /= norm
    return as_embedding(v, cfg.dim, "offset-encoded text")


class EmbeddingStore:
    """Fixed-dimension embeddings keyed by id; lookup of a missing id raises.

    Iteration order is insertion order, which makes writes reproducible.
    """

    def __init__(
        self,
        dim: int,
        vectors: Mapping[str, np.ndarray] | Iterable[tuple[str, np.ndarray]] = (),
    ) -> None:
        if dim < 1:
            raise ValueError(f"EmbeddingStore.dim: must be >= 1, got {dim}")
        self._dim = int(dim)
        self._vectors: dict[str, np.ndarray] = {}
        items = vectors.items() if isinstance(vectors, Mapping) else vectors
        for eid, vec in items:
            self.add(eid, vec)

    @property
    def dim(self) -> int:
        return self._dim

    def add(self, eid: str, vec: np.ndarray) -> None:
        if not eid:
            raise ValueError("EmbeddingStore: id must be non-empty")
        if eid in self._vectors:
            raise ValueError(f"EmbeddingStore: duplicate id {eid!r}")
        self._vectors[eid] = as_embedding(vec, self._dim, f"embedding {eid!r}")

    def get(self, eid: str) -> np.ndarray:
        try:
            return self._vectors[eid]
        except KeyError:
            raise KeyError(f"no embedding for id {eid!r}") from None

    def ids(self) -> tuple[str, ...]:
        return tuple(self._vectors)

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        return iter(self._vectors.items())

    def normalized(self) -> "EmbeddingStore":
        """A copy with every vector L2-normalized (zero vectors kept as-is)."""
        out = EmbeddingStore(self._dim)
        for eid, vec in self.items():
            v = vec.astype(np.float64)
            norm = float(np.linalg.norm(v))
            out.add(eid, (v / norm) if norm > 0 else v)
        return out

    @classmethod
    def merge(cls, stores: Iterable["EmbeddingStore"]) -> "EmbeddingStore":
        """Union of stores; dimensions must agree and ids must not collide."""
        stores = list(stores)
        if not stores:
            raise ValueError("EmbeddingStore.merge: at least one store required")
        dims = {s.dim for s in stores}
        if len(dims) != 1:
            raise ValueError(f"EmbeddingStore.merge: dimension mismatch {sorted(dims)}")
        out = cls(stores[0].dim)
        for s in stores:
            for eid, vec in s.items():
                out.add(eid, vec)
        return out

    def __contains__(self, eid: str) -> bool:
        return eid in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingStore):
            return NotImplemented
        return (
            self._dim == other._dim
            and self.ids() == other.ids()
            and all(np.array_equal(self._vectors[i], other._vectors[i]) for i in self._vectors)
        )
