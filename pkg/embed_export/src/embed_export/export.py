"""Batch transformer inference from a corpus manifest to an embedding CSV.

The output file has the header ``id,e0,...,e767`` and one row per
manifest document, which is the embedding interchange format of the
readability toolkit.  Inference only: with the same weights, manifest
and batch size, the file is byte-identical across runs.

What "the" 768-dim document vector is depends on which hidden states
get averaged, and toolchains disagree.  Both readings are available:
``last`` mean-pools the final layer's token vectors, ``all`` first
averages every transformer layer's output (embedding layer excluded)
and then mean-pools over tokens.  Neither is claimed canonical.
"""

from __future__ import annotations

import csv
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import torch

EMBED_DIM = 768
POOLING_MODES = ("last", "all")

# tokenizers report a huge sentinel when no max length is configured
_MAX_LENGTH_SENTINEL = 10**6


class ExportError(Exception):
    """Unusable input or model; the CLI maps this to exit code 1."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class ExportJob:
    manifest: Path
    model: str
    out: Path
    batch_size: int = 8
    pooling: str = "last"

    def validate(self) -> None:
        if self.batch_size < 1:
            raise ExportError("invalid-batch-size", "batch size must be >= 1")
        if self.pooling not in POOLING_MODES:
            raise ExportError(
                "invalid-pooling",
                f"pooling must be one of {POOLING_MODES}, got {self.pooling!r}",
            )


@dataclass(frozen=True)
class ExportResult:
    out: Path
    rows: int
    dimension: int
    truncated_ids: tuple[str, ...] = field(default_factory=tuple)


def read_manifest(path: str | Path) -> list[tuple[str, str]]:
    """Document ids and raw texts from a corpus manifest.

    The manifest is tab-separated with columns id, language, grade and
    either inline text or a text_path relative to the manifest.
    """
    path = Path(path)
    if not path.is_file():
        raise ExportError("missing-file", f"manifest not found: {path}")
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise ExportError("empty-manifest", f"{path} has no header") from None
        columns = {name: i for i, name in enumerate(header)}
        required = {"id", "language", "grade"}
        if not required.issubset(columns):
            raise ExportError(
                "malformed-row",
                f"{path} header must contain {sorted(required)}, got {header}",
            )
        inline = "text" in columns
        by_path = "text_path" in columns
        if inline == by_path:
            raise ExportError(
                "malformed-row",
                f"{path} needs exactly one of 'text' or 'text_path'",
            )
        text_col = columns["text" if inline else "text_path"]

        docs: list[tuple[str, str]] = []
        seen: set[str] = set()
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise ExportError(
                    "malformed-row",
                    f"{path}:{line_no} has {len(row)} fields, expected {len(header)}",
                )
            doc_id = row[columns["id"]].strip()
            if not doc_id:
                raise ExportError("malformed-row", f"{path}:{line_no} has an empty id")
            if doc_id in seen:
                raise ExportError(
                    "duplicate-id", f"{path}:{line_no} repeats document id {doc_id!r}"
                )
            seen.add(doc_id)
            if inline:
                text = row[text_col]
            else:
                text_path = path.parent / row[text_col]
                if not text_path.is_file():
                    raise ExportError(
                        "missing-text-file",
                        f"{path}:{line_no} points at missing file {text_path}",
                    )
                text = text_path.read_text(encoding="utf-8")
            if not text.strip():
                raise ExportError(
                    "empty-document", f"{path}:{line_no} document {doc_id!r} is empty"
                )
            docs.append((doc_id, text))
    if not docs:
        raise ExportError("empty-manifest", f"{path} has no document rows")
    return docs


def _load_encoder(model_name: str):
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_name)
        model = AutoModel.from_pretrained(model_name)
    except Exception as exc:
        raise ExportError("model-load-failure", f"cannot load {model_name!r}: {exc}") from exc
    hidden = getattr(model.config, "hidden_size", None)
    if hidden != EMBED_DIM:
        raise ExportError(
            "dimension-mismatch",
            f"{model_name!r} produces {hidden}-dim states, need {EMBED_DIM}",
        )
    model.eval()
    return tokenizer, model


def _max_length(tokenizer, model) -> int:
    length = getattr(tokenizer, "model_max_length", None)
    if length is None or length > _MAX_LENGTH_SENTINEL:
        length = getattr(model.config, "max_position_embeddings", 512)
    return int(length)


def _pool(outputs, attention_mask: torch.Tensor, pooling: str) -> torch.Tensor:
    if pooling == "last":
        states = outputs.last_hidden_state
    else:
        # hidden_states[0] is the embedding layer; average the rest
        states = torch.stack(outputs.hidden_states[1:], dim=0).mean(dim=0)
    mask = attention_mask.unsqueeze(-1).to(states.dtype)
    summed = (states * mask).sum(dim=1)
    counts = mask.sum(dim=1).clamp(min=1.0)
    return summed / counts


def export_embeddings(
    job: ExportJob, log: Callable[[str], None] | None = None
) -> ExportResult:
    """Embed every manifest document and write the CSV atomically."""
    job.validate()
    if log is None:
        log = lambda message: print(message, file=sys.stderr)
    docs = read_manifest(job.manifest)
    tokenizer, model = _load_encoder(job.model)
    max_length = _max_length(tokenizer, model)

    vectors: list[torch.Tensor] = []
    truncated: list[str] = []
    with torch.no_grad():
        for start in range(0, len(docs), job.batch_size):
            batch = docs[start : start + job.batch_size]
            texts = [text for _, text in batch]
            for doc_id, text in batch:
                n_tokens = len(
                    tokenizer(text, truncation=False, verbose=False)["input_ids"]
                )
                if n_tokens > max_length:
                    truncated.append(doc_id)
                    log(
                        f"truncated {doc_id}: {n_tokens} tokens, "
                        f"encoder limit {max_length}"
                    )
            encoded = tokenizer(
                texts,
                padding=True,
                truncation=True,
                max_length=max_length,
                return_tensors="pt",
            )
            outputs = model(**encoded, output_hidden_states=job.pooling == "all")
            vectors.append(_pool(outputs, encoded["attention_mask"], job.pooling))

    stacked = torch.cat(vectors, dim=0)
    if stacked.shape != (len(docs), EMBED_DIM):
        raise ExportError(
            "row-count-mismatch",
            f"embedded {tuple(stacked.shape)}, expected ({len(docs)}, {EMBED_DIM})",
        )
    if not torch.isfinite(stacked).all():
        raise ExportError("non-finite", "model produced non-finite values")

    _write_atomically(job.out, docs, stacked)
    return ExportResult(
        out=job.out,
        rows=len(docs),
        dimension=EMBED_DIM,
        truncated_ids=tuple(truncated),
    )


def _write_atomically(
    out: Path, docs: list[tuple[str, str]], vectors: torch.Tensor
) -> None:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    header = "id," + ",".join(f"e{i}" for i in range(EMBED_DIM))
    handle = tempfile.NamedTemporaryFile(
        "w",
        encoding="utf-8",
        newline="",
        dir=out.parent,
        prefix=out.name + ".",
        suffix=".tmp",
        delete=False,
    )
    try:
        with handle:
            handle.write(header + "\n")
            for (doc_id, _), row in zip(docs, vectors):
                # 9 significant digits round-trip float32 exactly
                cells = ",".join(f"{value:.8e}" for value in row.tolist())
                handle.write(f"{doc_id},{cells}\n")
        os.replace(handle.name, out)
    except BaseException:
        os.unlink(handle.name)
        raise
