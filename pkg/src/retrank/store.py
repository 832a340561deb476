"""Bit-exact binary persistence for embedding matrices.

On-disk layout (little-endian):

    magic ``LMRA`` (4 bytes) | u16 version=1 | u16 reserved=0 |
    u32 dim | u64 count | count x dim float32 rows (row-major)

A sidecar ``<name>.ids`` file holds one UTF-8 doc id per line in row
order, and a JSON manifest records the dimension, count, a CRC-32 of the
data section, and the id-file path. Vectors are stored unnormalized so the
raw embedder output stays recoverable; normalization is an explicit pass.
"""
from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Sequence

import numpy as np

from .errors import DuplicateId, FormatError, NonFiniteValue, NotFound, ZeroVector

MAGIC = b"LMRA"
VERSION = 1
_HEADER = struct.Struct("<4sHHIQ")  # magic, version, reserved, dim, count


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Dense float32 vectors keyed by doc id, row-major."""

    ids: tuple
    data: np.ndarray  # (N, D) float32

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    @property
    def count(self) -> int:
        return int(self.data.shape[0])

    def validate(self) -> None:
        if len(self.ids) != self.data.shape[0]:
            raise FormatError(
                f"{len(self.ids)} ids vs {self.data.shape[0]} rows"
            )
        if len(set(self.ids)) != len(self.ids):
            seen, dup = set(), None
            for i in self.ids:
                if i in seen:
                    dup = i
                    break
                seen.add(i)
            raise DuplicateId(f"duplicate id {dup!r}")
        if not np.all(np.isfinite(self.data)):
            bad = int(np.flatnonzero(~np.isfinite(self.data).all(axis=1))[0])
            raise NonFiniteValue(f"non-finite value in row for {self.ids[bad]!r}")

    def index_of(self) -> Dict[str, int]:
        return {doc_id: i for i, doc_id in enumerate(self.ids)}

    def lookup(self, doc_id: str) -> np.ndarray:
        try:
            row = self.ids.index(doc_id)
        except ValueError:
            raise NotFound(doc_id) from None
        return self.data[row]


@dataclass(frozen=True)
class StoreManifest:
    dim: int
    count: int
    checksum: int  # CRC-32 of the data section
    id_file: str
    created_at: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "count": self.count,
                "checksum": self.checksum,
                "id_file": self.id_file,
                "created_at": self.created_at,
            },
            indent=2,
        )


class Store:
    """A loaded, immutable embedding matrix with O(1) id lookup."""

    def __init__(self, matrix: EmbeddingMatrix):
        matrix.validate()
        self.matrix = matrix
        self._index = matrix.index_of()

    @property
    def ids(self):
        return self.matrix.ids

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def __len__(self) -> int:
        return self.matrix.count

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._index

    def row_of(self, doc_id: str) -> int:
        try:
            return self._index[doc_id]
        except KeyError:
            raise NotFound(doc_id) from None

    def lookup(self, doc_id: str) -> np.ndarray:
        return self.matrix.data[self.row_of(doc_id)]


def write_store(m: EmbeddingMatrix, path) -> StoreManifest:
    """Write the matrix, its id sidecar, and a JSON manifest.

    ``path`` is the binary file; ``<path>.ids`` and ``<path>.manifest.json``
    are written beside it. Round-trips bit-exactly through
    :func:`read_store`.
    """
    m.validate()
    path = Path(path)
    data_bytes = m.data.tobytes(order="C")
    header = _HEADER.pack(MAGIC, VERSION, 0, m.dim, m.count)
    with open(path, "wb") as f:
        f.write(header)
        f.write(data_bytes)

    id_path = path.with_suffix(path.suffix + ".ids")
    with open(id_path, "w", encoding="utf-8") as f:
        for doc_id in m.ids:
            f.write(doc_id + "\n")

    manifest = StoreManifest(
        dim=m.dim,
        count=m.count,
        checksum=zlib.crc32(data_bytes),
        id_file=id_path.name,
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    with open(path.with_suffix(path.suffix + ".manifest.json"), "w") as f:
        f.write(manifest.to_json())
    return manifest


def read_store(path) -> EmbeddingMatrix:
    """Read a matrix written by :func:`write_store`, verifying the header,
    the CRC-32 when a manifest is present, and the id count."""
    path = Path(path)
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < _HEADER.size:
        raise FormatError("file shorter than header")
    magic, version, _reserved, dim, count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    expected = _HEADER.size + 4 * dim * count
    if len(raw) != expected:
        raise FormatError(f"expected {expected} bytes, found {len(raw)}")
    data_bytes = raw[_HEADER.size:]

    manifest_path = path.with_suffix(path.suffix + ".manifest.json")
    if manifest_path.exists():
        with open(manifest_path) as f:
            manifest = json.load(f)
        if zlib.crc32(data_bytes) != manifest["checksum"]:
            raise FormatError("data checksum mismatch (truncated or corrupt)")

    id_path = path.with_suffix(path.suffix + ".ids")
    with open(id_path, "r", encoding="utf-8") as f:
        ids = [line.rstrip("\n") for line in f if line.rstrip("\n")]
    if len(ids) != count:
        raise FormatError(f"{len(ids)} ids vs count {count}")

    data = np.frombuffer(data_bytes, dtype="<f4").reshape(count, dim).copy()
    return EmbeddingMatrix(ids=tuple(ids), data=data)


def l2_normalize(m: EmbeddingMatrix) -> EmbeddingMatrix:
    """Scale every row to unit Euclidean norm. Idempotent; raises
    :class:`ZeroVector` naming the first offending id."""
    norms = np.linalg.norm(m.data.astype(np.float64), axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVector(m.ids[int(zero[0])])
    data = (m.data.astype(np.float64) / norms[:, None]).astype(np.float32)
    return EmbeddingMatrix(ids=m.ids, data=data)


def from_rows(pairs: Sequence) -> EmbeddingMatrix:
    """Build a matrix from (id, vector) pairs in the given order."""
    ids = tuple(p[0] for p in pairs)
    data = np.asarray([p[1] for p in pairs], dtype=np.float32)
    return EmbeddingMatrix(ids=ids, data=data)
