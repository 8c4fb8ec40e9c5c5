"""Maximum inner-product search over passage embeddings.

Two variants share one scoring path: an exact scan and an IVF index built
with seeded k-means (k-means++ initialization, Lloyd iterations, assignment
by inner product against L2-normalized centroids). ``nprobe == nlist``
makes IVF search equal to the exact scan, which turns approximation into a
testable knob. All scoring accumulates in float64; ties break by
passage_id ascending everywhere.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .augment import AugmentedCorpusEmbeddings
from .core import RankedList
from .encoder import EmbeddingStore

__all__ = [
    "IvfParams",
    "VectorIndex",
    "build_exact",
    "build_ivf",
    "search",
    "write_index",
    "read_index",
]

INDEX_MAGIC = b"XQGI"
INDEX_VERSION = 1
_VARIANT_EXACT = 0
_VARIANT_IVF = 1

_INDEX_HEADER = struct.Struct("<4sIIIQI")  # magic, version, variant, dim, count, nlist
_ID_LEN = struct.Struct("<H")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")


@dataclass(frozen=True, eq=False)
class IvfParams:
    """Inverted-file layout: centroids plus one row-index list per centroid."""

    centroids: np.ndarray  # (nlist, dim) float32, L2-normalized
    lists: tuple[np.ndarray, ...]  # int64 row indices per centroid
    default_nprobe: int

    def __post_init__(self) -> None:
        nlist = self.centroids.shape[0]
        if not (1 <= self.default_nprobe <= nlist):
            raise ValueError(
                f"IvfParams.default_nprobe: must be in [1, {nlist}], got {self.default_nprobe}"
            )
        if len(self.lists) != nlist:
            raise ValueError("IvfParams: one inverted list required per centroid")
        c = np.ascontiguousarray(self.centroids, dtype=np.float32)
        c.flags.writeable = False
        object.__setattr__(self, "centroids", c)
        frozen = []
        for lst in self.lists:
            a = np.ascontiguousarray(lst, dtype=np.int64)
            a.flags.writeable = False
            frozen.append(a)
        object.__setattr__(self, "lists", tuple(frozen))

    @property
    def nlist(self) -> int:
        return int(self.centroids.shape[0])


@dataclass(frozen=True, eq=False)
class VectorIndex:
    """Searchable collection of vectors; exact when ``ivf`` is None."""

    ids: tuple[str, ...]
    matrix: np.ndarray  # (N, dim) float32
    ivf: IvfParams | None = None

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.ids):
            raise ValueError("VectorIndex: matrix row count must equal id count")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("VectorIndex: duplicate ids")
        m = np.ascontiguousarray(self.matrix, dtype=np.float32)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if self.ivf is not None:
            assigned = np.concatenate([lst for lst in self.ivf.lists]) if self.ivf.lists else np.array([], np.int64)
            if len(assigned) != len(self.ids) or len(np.unique(assigned)) != len(self.ids):
                raise ValueError("VectorIndex: IVF lists must cover every row exactly once")
        object.__setattr__(self, "_id_array", np.array(self.ids))

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return len(self.ids)


def _vectors_of(embs: AugmentedCorpusEmbeddings | EmbeddingStore) -> tuple[tuple[str, ...], np.ndarray]:
    if isinstance(embs, AugmentedCorpusEmbeddings):
        return embs.ids, embs.matrix
    ids = embs.ids()
    matrix = np.stack([embs.get(i) for i in ids]) if ids else np.zeros((0, embs.dim), np.float32)
    return ids, matrix


def build_exact(embs: AugmentedCorpusEmbeddings | EmbeddingStore) -> VectorIndex:
    """Exact-scan index over all vectors, in input (corpus) order."""
    ids, matrix = _vectors_of(embs)
    if not ids:
        raise ValueError("build_exact: input is empty")
    return VectorIndex(ids=ids, matrix=matrix)


def _kmeans_pp_init(x: np.ndarray, nlist: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded k-means++ seeding on squared Euclidean distance."""
    n = x.shape[0]
    centroids = np.empty((nlist, x.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centroids[0] = x[first]
    d2 = np.sum((x - centroids[0]) ** 2, axis=1)
    for c in range(1, nlist):
        total = float(d2.sum())
        if total <= 0.0:
            nxt = int(rng.integers(n))
        else:
            nxt = int(rng.choice(n, p=d2 / total))
        centroids[c] = x[nxt]
        d2 = np.minimum(d2, np.sum((x - centroids[c]) ** 2, axis=1))
    return centroids


def _normalize_rows(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    safe = np.where(norms > 0.0, norms, 1.0)
    return m / safe


def _assign(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Row-to-centroid assignment by max inner product against normalized centroids."""
    sims = x @ _normalize_rows(centroids).T
    return np.argmax(sims, axis=1)  # ties: lowest centroid index


def build_ivf(
    embs: AugmentedCorpusEmbeddings | EmbeddingStore,
    nlist: int,
    kmeans_iters: int = 10,
    seed: int = 0,
    default_nprobe: int | None = None,
) -> VectorIndex:
    """IVF index: seeded k-means clustering plus per-centroid inverted lists.

    Empty clusters are re-seeded with the largest cluster's farthest member
    (lowest similarity to its own normalized centroid; ties by row index).
    """
    ids, matrix = _vectors_of(embs)
    n = len(ids)
    if n == 0:
        raise ValueError("build_ivf: input is empty")
    if not (1 <= nlist <= n):
        raise ValueError(f"build_ivf: nlist must be in [1, {n}], got {nlist}")
    if kmeans_iters < 1:
        raise ValueError(f"build_ivf: kmeans_iters must be >= 1, got {kmeans_iters}")

    rng = np.random.default_rng(seed)
    x = matrix.astype(np.float64)
    centroids = _kmeans_pp_init(x, nlist, rng)

    assign = _assign(x, centroids)
    for _ in range(kmeans_iters):
        for c in range(nlist):
            members = np.flatnonzero(assign == c)
            if len(members):
                centroids[c] = x[members].mean(axis=0)
        # re-seed empties from the largest cluster's farthest member
        sizes = np.bincount(assign, minlength=nlist)
        for c in np.flatnonzero(sizes == 0):
            largest = int(np.argmax(sizes))
            members = np.flatnonzero(assign == largest)
            cn = centroids[largest]
            norm = np.linalg.norm(cn)
            cn = cn / norm if norm > 0 else cn
            far = members[int(np.argmin(x[members] @ cn))]
            centroids[c] = x[far]
            assign[far] = c
            sizes = np.bincount(assign, minlength=nlist)
        assign = _assign(x, centroids)

    lists = tuple(np.flatnonzero(assign == c).astype(np.int64) for c in range(nlist))
    if default_nprobe is None:
        default_nprobe = max(1, int(round(np.sqrt(nlist))))
    ivf = IvfParams(
        centroids=_normalize_rows(centroids).astype(np.float32),
        lists=lists,
        default_nprobe=min(default_nprobe, nlist),
    )
    return VectorIndex(ids=ids, matrix=matrix, ivf=ivf)


def _rank_rows(
    index: VectorIndex, rows: np.ndarray, scores: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    ids = index._id_array[rows]  # type: ignore[attr-defined]
    order = np.lexsort((ids, -scores))[:k]
    return rows[order], scores[order]


def search(
    index: VectorIndex,
    q_emb: np.ndarray,
    k: int,
    nprobe: int | None = None,
    qid: str = "q",
) -> RankedList:
    """Top-k by inner product; ties broken by passage_id ascending.

    For IVF indexes ``nprobe`` selects how many inverted lists to scan
    (defaulting to the index's stored default); asking for more results
    than indexed vectors returns them all.
    """
    q = np.asarray(q_emb, dtype=np.float64)
    if q.shape != (index.dim,):
        raise ValueError(f"search: query dimension {q.shape} does not match index dim {index.dim}")
    if k < 1:
        raise ValueError(f"search: k must be >= 1, got {k}")

    if index.ivf is None:
        if nprobe is not None:
            raise ValueError("search: nprobe is only valid for IVF indexes")
        rows = np.arange(len(index.ids))
        scores = index.matrix.astype(np.float64) @ q
    else:
        ivf = index.ivf
        np_eff = ivf.default_nprobe if nprobe is None else nprobe
        if not (1 <= np_eff <= ivf.nlist):
            raise ValueError(f"search: nprobe must be in [1, {ivf.nlist}], got {np_eff}")
        cent_scores = ivf.centroids.astype(np.float64) @ q
        probe = np.lexsort((np.arange(ivf.nlist), -cent_scores))[:np_eff]
        rows = np.concatenate([ivf.lists[c] for c in probe]) if len(probe) else np.array([], np.int64)
        rows = np.sort(rows)
        scores = index.matrix[rows].astype(np.float64) @ q

    top_rows, top_scores = _rank_rows(index, rows, scores, k)
    entries = tuple(
        (index.ids[int(r)], float(s)) for r, s in zip(top_rows, top_scores)
    )
    return RankedList(qid=qid, entries=entries)


def write_index(index: VectorIndex, path: str | Path) -> None:
    """Serialize an index: header, id/vector records, then IVF sections."""
    variant = _VARIANT_EXACT if index.ivf is None else _VARIANT_IVF
    nlist = 0 if index.ivf is None else index.ivf.nlist
    with open(path, "wb") as fh:
        fh.write(
            _INDEX_HEADER.pack(
                INDEX_MAGIC, INDEX_VERSION, variant, index.dim, len(index.ids), nlist
            )
        )
        for i, eid in enumerate(index.ids):
            raw = eid.encode("utf-8")
            fh.write(_ID_LEN.pack(len(raw)))
            fh.write(raw)
            fh.write(index.matrix[i].astype("<f4").tobytes())
        if index.ivf is not None:
            fh.write(_U32.pack(index.ivf.default_nprobe))
            fh.write(index.ivf.centroids.astype("<f4").tobytes())
            for lst in index.ivf.lists:
                fh.write(_U64.pack(len(lst)))
                fh.write(lst.astype("<u8").tobytes())


def read_index(path: str | Path) -> VectorIndex:
    from .formats import FormatError  # local import: formats depends on encoder only

    data = Path(path).read_bytes()
    if len(data) < _INDEX_HEADER.size:
        raise FormatError(f"{path}: truncated file (no header)")
    magic, version, variant, dim, count, nlist = _INDEX_HEADER.unpack_from(data, 0)
    if magic != INDEX_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r} (expected {INDEX_MAGIC!r})")
    if version != INDEX_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if variant not in (_VARIANT_EXACT, _VARIANT_IVF):
        raise FormatError(f"{path}: unknown variant {variant}")
    if dim < 1:
        raise FormatError(f"{path}: bad dimension {dim}")
    offset = _INDEX_HEADER.size

    ids: list[str] = []
    rows = np.empty((count, dim), dtype=np.float32)
    for r in range(count):
        if offset + _ID_LEN.size > len(data):
            raise FormatError(f"{path}: truncated file (record {r})")
        (id_len,) = _ID_LEN.unpack_from(data, offset)
        offset += _ID_LEN.size
        if id_len == 0 or offset + id_len + 4 * dim > len(data):
            raise FormatError(f"{path}: truncated file (record {r})")
        try:
            ids.append(data[offset : offset + id_len].decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise FormatError(f"{path}: invalid UTF-8 id in record {r}") from exc
        offset += id_len
        rows[r] = np.frombuffer(data, dtype="<f4", count=dim, offset=offset)
        offset += 4 * dim

    ivf = None
    if variant == _VARIANT_IVF:
        if nlist < 1:
            raise FormatError(f"{path}: IVF index requires nlist >= 1")
        if offset + _U32.size + 4 * dim * nlist > len(data):
            raise FormatError(f"{path}: truncated IVF section")
        (default_nprobe,) = _U32.unpack_from(data, offset)
        offset += _U32.size
        centroids = np.frombuffer(data, dtype="<f4", count=nlist * dim, offset=offset)
        centroids = centroids.reshape(nlist, dim).astype(np.float32)
        offset += 4 * dim * nlist
        lists: list[np.ndarray] = []
        for c in range(nlist):
            if offset + _U64.size > len(data):
                raise FormatError(f"{path}: truncated inverted list {c}")
            (length,) = _U64.unpack_from(data, offset)
            offset += _U64.size
            if offset + 8 * length > len(data):
                raise FormatError(f"{path}: truncated inverted list {c}")
            lst = np.frombuffer(data, dtype="<u8", count=length, offset=offset).astype(np.int64)
            if len(lst) and (lst.min() < 0 or lst.max() >= count):
                raise FormatError(f"{path}: inverted list {c} references invalid rows")
            lists.append(lst)
            offset += 8 * length
        ivf = IvfParams(centroids=centroids, lists=tuple(lists), default_nprobe=default_nprobe)

    if offset != len(data):
        raise FormatError(f"{path}: {len(data) - offset} trailing bytes")
    if not np.isfinite(rows).all():
        raise FormatError(f"{path}: non-finite vector components")
    return VectorIndex(ids=tuple(ids), matrix=rows, ivf=ivf)
