"""Core identifier, record, and ranked-list types shared by every module.

All types here are immutable after construction and safe to share across
threads. Document ids are plain strings; ordering between ids is byte-wise
(the default ``str`` comparison on the UTF-8 code points), which is the
tie-breaking rule used everywhere scores collide.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import (
    EmptyId,
    EmptySegments,
    InterleavedMissingModality,
    ValidationError,
)


class Modality(Enum):
    TEXT = "text"
    IMAGE = "image"
    INTERLEAVED = "interleaved"


@dataclass(frozen=True)
class TextSegment:
    text: str


@dataclass(frozen=True)
class ImageRef:
    """Opaque pointer to an image asset. The engine never decodes pixels;
    whoever sits behind the embedder/scorer boundary resolves the path."""

    path: str


Segment = Union[TextSegment, ImageRef]


@dataclass(frozen=True)
class Record:
    """A query or candidate: an id, a declared modality, and ordered segments.

    ``instruction`` carries the task-specific instruction string and is only
    meaningful on query records.
    """

    id: str
    modality: Modality
    segments: tuple
    instruction: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))


def validate_record(r: Record) -> None:
    """Raise a :class:`ValidationError` subclass naming the violated invariant."""
    if not r.id:
        raise EmptyId("record id must be non-empty")
    if not r.segments:
        raise EmptySegments(f"record {r.id!r} has no segments")
    has_text = any(isinstance(s, TextSegment) for s in r.segments)
    has_image = any(isinstance(s, ImageRef) for s in r.segments)
    if r.modality is Modality.INTERLEAVED and not (has_text and has_image):
        raise InterleavedMissingModality(
            f"record {r.id!r} is interleaved but lacks "
            + ("a text segment" if not has_text else "an image segment")
        )
    if r.modality is Modality.TEXT and has_image:
        raise ValidationError(f"text record {r.id!r} contains image segments")
    if r.modality is Modality.IMAGE and has_text:
        raise ValidationError(f"image record {r.id!r} contains text segments")


@dataclass(frozen=True)
class ScoredCandidate:
    id: str
    score: float
    rank: int  # 1-based


@dataclass(frozen=True)
class RankedList:
    """Ordered retrieval or rerank output for one query.

    Invariants: entry ids distinct, ranks contiguous from 1, scores
    non-increasing, equal scores ordered by ascending id, and
    ``len(entries) <= pool_size``.
    """

    query_id: str
    entries: tuple
    pool_size: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def validate(self) -> None:
        if len(self.entries) > self.pool_size:
            raise ValidationError(
                f"{len(self.entries)} entries exceed pool size {self.pool_size}"
            )
        seen = set()
        prev = None
        for i, e in enumerate(self.entries):
            if e.rank != i + 1:
                raise ValidationError(f"rank {e.rank} at position {i}")
            if e.id in seen:
                raise ValidationError(f"duplicate id {e.id!r}")
            seen.add(e.id)
            if prev is not None:
                if e.score > prev.score:
                    raise ValidationError("scores increase with rank")
                if e.score == prev.score and e.id < prev.id:
                    raise ValidationError("tie not broken by ascending id")
            prev = e

    def ids(self) -> list:
        return [e.id for e in self.entries]


def rank_candidates(scored: Iterable, query_id: str, pool_size: int) -> RankedList:
    """Sort (id, score) pairs by (score desc, id asc) and assign 1-based ranks."""
    ordered = sorted(scored, key=lambda p: (-p[1], p[0]))
    entries = [
        ScoredCandidate(id=i, score=float(s), rank=r + 1)
        for r, (i, s) in enumerate(ordered)
    ]
    return RankedList(query_id=query_id, entries=entries, pool_size=pool_size)


# --- JSON serialization -------------------------------------------------------

def record_to_dict(r: Record) -> dict:
    segs = []
    for s in r.segments:
        if isinstance(s, TextSegment):
            segs.append({"text": s.text})
        else:
            segs.append({"image": s.path})
    d = {"id": r.id, "modality": r.modality.value, "segments": segs}
    if r.instruction is not None:
        d["instruction"] = r.instruction
    return d


def record_from_dict(d: dict) -> Record:
    segs = []
    for s in d["segments"]:
        if "text" in s:
            segs.append(TextSegment(s["text"]))
        elif "image" in s:
            segs.append(ImageRef(s["image"]))
        else:
            raise ValidationError(f"segment with neither text nor image: {s}")
    return Record(
        id=d["id"],
        modality=Modality(d["modality"]),
        segments=tuple(segs),
        instruction=d.get("instruction"),
    )


def read_records_jsonl(path) -> list:
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line)))
    return records


def write_records_jsonl(records: Sequence[Record], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(record_to_dict(r)) + "\n")


def ranked_list_to_dict(rl: RankedList) -> dict:
    return {
        "query_id": rl.query_id,
        "pool_size": rl.pool_size,
        "entries": [
            {"id": e.id, "score": e.score, "rank": e.rank} for e in rl.entries
        ],
    }


def ranked_list_from_dict(d: dict) -> RankedList:
    return RankedList(
        query_id=d["query_id"],
        entries=tuple(
            ScoredCandidate(id=e["id"], score=e["score"], rank=e["rank"])
            for e in d["entries"]
        ),
        pool_size=d["pool_size"],
    )
