"""Deterministic k-fold manifests with train/validation/test roles.

Items are shuffled once with a PCG64 generator seeded by a user-supplied
64-bit seed (Fisher-Yates via numpy permutation), then cut into k
contiguous blocks. Fold f tests on block f, validates on block
(f + 1) mod k and trains on the rest, so every item is tested exactly
once across the k folds. With 100 items and k = 10 this gives the
classic 80/10/10 split per fold.

Manifests serialise to JSON as {"seed": ..., "k": ..., "folds":
[{"train": [...], "val": [...], "test": [...]}]} and round-trip
losslessly (the shuffled item order is the concatenation of the test
blocks).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class FoldSplit:
    """Train / validation / test item ids for one fold."""

    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]


@dataclass(frozen=True)
class FoldManifest:
    """Complete assignment of items to roles across all folds."""

    seed: int
    k: int
    items: tuple[str, ...]
    folds: tuple[FoldSplit, ...]


def make_folds(item_ids: list[str], k: int, seed: int) -> FoldManifest:
    """Build a deterministic k-fold manifest; same inputs, same manifest."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got k={k}")
    if len(set(item_ids)) != len(item_ids):
        dupes = sorted({x for x in item_ids if item_ids.count(x) > 1})
        raise ValueError(f"duplicate item ids: {dupes}")
    if len(item_ids) < 2 * k:
        raise ValueError(
            f"need at least 2k={2 * k} items for k={k} folds, got {len(item_ids)}"
        )

    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(len(item_ids))
    shuffled = [item_ids[i] for i in order]

    n = len(shuffled)
    base, extra = divmod(n, k)
    blocks: list[list[str]] = []
    start = 0
    for f in range(k):
        size = base + (1 if f < extra else 0)
        blocks.append(shuffled[start : start + size])
        start += size

    folds = []
    for f in range(k):
        test = blocks[f]
        val = blocks[(f + 1) % k]
        train = [
            item
            for g, block in enumerate(blocks)
            if g not in (f, (f + 1) % k)
            for item in block
        ]
        folds.append(FoldSplit(train=tuple(train), val=tuple(val), test=tuple(test)))

    return FoldManifest(seed=seed, k=k, items=tuple(shuffled), folds=tuple(folds))


def validate_manifest(m: FoldManifest) -> list[str]:
    """Check all manifest invariants; returns one message per violation."""
    violations: list[str] = []
    item_set = set(m.items)

    if len(m.folds) != m.k:
        violations.append(f"manifest: k={m.k} but {len(m.folds)} folds present")

    for f, split in enumerate(m.folds):
        for role, ids in (("train", split.train), ("val", split.val), ("test", split.test)):
            if len(set(ids)) != len(ids):
                violations.append(f"fold {f}: duplicate ids in {role}")
        train, val, test = set(split.train), set(split.val), set(split.test)
        for name_a, a, name_b, b in (
            ("train", train, "val", val),
            ("train", train, "test", test),
            ("val", val, "test", test),
        ):
            overlap = a & b
            if overlap:
                violations.append(
                    f"fold {f}: {name_a} and {name_b} share {len(overlap)} item(s)"
                )
        union = train | val | test
        if union != item_set or len(split.train) + len(split.val) + len(split.test) != len(
            m.items
        ):
            violations.append(f"fold {f}: roles do not partition the item set")

    test_count: dict[str, int] = dict.fromkeys(m.items, 0)
    for split in m.folds:
        for item in split.test:
            if item in test_count:
                test_count[item] += 1
    for item, count in test_count.items():
        if count != 1:
            violations.append(f"item {item!r}: appears in {count} test sets, expected 1")

    return violations


def manifest_to_dict(m: FoldManifest) -> dict:
    return {
        "seed": m.seed,
        "k": m.k,
        "folds": [
            {"train": list(s.train), "val": list(s.val), "test": list(s.test)}
            for s in m.folds
        ],
    }


def manifest_from_dict(data: dict) -> FoldManifest:
    folds = tuple(
        FoldSplit(
            train=tuple(entry["train"]),
            val=tuple(entry["val"]),
            test=tuple(entry["test"]),
        )
        for entry in data["folds"]
    )
    items = tuple(item for split in folds for item in split.test)
    return FoldManifest(seed=int(data["seed"]), k=int(data["k"]), items=items, folds=folds)


def save_manifest(m: FoldManifest, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest_to_dict(m), indent=2) + "\n", encoding="utf-8")


def load_manifest(path: str | Path) -> FoldManifest:
    return manifest_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
