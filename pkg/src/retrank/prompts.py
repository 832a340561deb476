"""One-word summarization prompt construction for embedding extraction.

The engine never runs a language model itself; it only guarantees the exact
prompt string an external embedder must consume. Image content stays behind
the literal ``<image>`` placeholder, which the embedder binds to the actual
asset; text segments are substituted inline. Every prompt ends with the
``<emb>`` token whose preceding hidden state serves as the embedding.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .types import ImageRef, Modality, Record, TextSegment, validate_record

EMB_TOKEN = "<emb>"
IMAGE_PLACEHOLDER = "<image>"

_SUFFIX = {
    Modality.IMAGE: "Summarize above image in one word:",
    Modality.TEXT: "Summarize above sentence in one word:",
    Modality.INTERLEAVED: "Summarize above image and sentence in one word:",
}


@dataclass(frozen=True)
class EolPrompt:
    """A prompt string with literal ``<image>`` slots and a trailing ``<emb>``."""

    text: str
    image_slots: int


def build_eol_prompt(r: Record) -> EolPrompt:
    """Build the summarization prompt for a record.

    Segments are concatenated in record order with no separator between
    them; the instruction, when present, is prepended followed by a single
    space. The modality-specific suffix and the ``<emb>`` token close the
    prompt.

    Raises:
        ValidationError: if the record violates its invariants.
    """
    validate_record(r)

    parts = []
    image_slots = 0
    for seg in r.segments:
        if isinstance(seg, ImageRef):
            parts.append(IMAGE_PLACEHOLDER)
            image_slots += 1
        elif isinstance(seg, TextSegment):
            parts.append(seg.text)
        else:  # pragma: no cover - Segment union is closed
            raise ValidationError(f"unknown segment type: {seg!r}")

    body = "".join(parts)
    if r.instruction is not None:
        body = r.instruction + " " + body

    text = f"{body} {_SUFFIX[r.modality]} {EMB_TOKEN}"
    return EolPrompt(text=text, image_slots=image_slots)
