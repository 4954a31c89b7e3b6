"""Shared fixtures: a tiny local encoder so tests never touch the network."""

from __future__ import annotations

import os

os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("HF_HUB_OFFLINE", "1")

from pathlib import Path

import pytest


def build_encoder(path: Path, hidden_size: int, heads: int) -> Path:
    import torch
    from transformers import BertConfig, BertModel, BertTokenizerFast

    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    letters = list("abcdefghijklmnopqrstuvwxyz")
    vocab = specials + letters + ["##" + c for c in letters]
    (path / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(
        vocab_file=str(path / "vocab.txt"), model_max_length=16
    )
    tokenizer.save_pretrained(path)

    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=hidden_size,
        num_hidden_layers=2,
        num_attention_heads=heads,
        intermediate_size=256,
        max_position_embeddings=64,
    )
    model = BertModel(config)
    model.eval()
    model.save_pretrained(path)
    return path


@pytest.fixture(scope="session")
def encoder_dir(tmp_path_factory) -> Path:
    return build_encoder(tmp_path_factory.mktemp("encoder"), 768, 12)


@pytest.fixture(scope="session")
def narrow_encoder_dir(tmp_path_factory) -> Path:
    return build_encoder(tmp_path_factory.mktemp("narrow"), 64, 8)


@pytest.fixture(scope="session")
def manifest(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("corpus") / "docs.tsv"
    long_text = "ang bata ay " * 12
    rows = [
        "id\tlanguage\tgrade\ttext",
        "doc-a\ttgl\t1\tmata tubig araw",
        "doc-b\ttgl\t2\tang bata ay masaya sa paaralan",
        f"doc-c\ttgl\t3\t{long_text.strip()}",
        "doc-d\ttgl\t1\tisda at ibon",
    ]
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path
