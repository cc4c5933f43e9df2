"""Pipeline orchestration behind the command-line interface.

Each subcommand body lives here as a plain function returning a process
exit code, so tests can drive the pipeline without spawning processes.
Exit code 0 means success and 2 means a data problem (missing or
malformed inputs); argument problems raise UsageError, which the CLI
maps to exit code 1.

Filesystem layout under the output directory:

    gt/centrelines/<id>.png   binary centreline masks
    gt/soft/<id>.png          16-bit soft groundtruth masks
    gt/provenance.json        parameters and per-image status
    folds.json                cross-validation manifest
    preds/<arch>__<enc>/fold<f>/<id>.png   predictions (written by trainers)
    metrics/                  per-image, per-fold and per-model tables
    compare/                  heatmap + Bayesian artifacts (csv/json/svg)
    report/                   same artifacts plus rendered PNG figures

All outputs are deterministic for a fixed config: inputs are processed
in sorted order, result rows are sorted, floats are written in shortest
round-trip form, and nothing embeds timestamps. Per-image work runs in a
thread pool sized by the TRAILBENCH_WORKERS environment variable.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .colour import DEFAULT_REFERENCE, ReferenceColour
from .extract import ExtractionConfig, extract_centreline
from .folds import load_manifest, make_folds, save_manifest, validate_manifest
from .metrics import (
    METRIC_NAMES,
    ConfusionCounts,
    MetricSet,
    aggregate,
    binarise,
    confusion,
    count_defined,
    metric_set,
)
from .raster import ImageFormatError, load_prob, load_rgb, save_mask, save_prob
from .report import build_heatmap, render
from .softmask import SoftMaskConfig, soft_mask_from_centreline
from .stats import PairwiseMatrix, ScoreGrid, pairwise_matrix

WORKERS_ENV = "TRAILBENCH_WORKERS"

_IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp")


class UsageError(Exception):
    """Bad arguments or configuration values; maps to exit code 1."""


class DataError(Exception):
    """Missing or malformed input data; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Every free parameter of the pipeline in one place.

    Defaults follow the groundtruth recipe (threshold 0.3 on normalised
    colour distance, sigma 16, downscale factor 8, 10 folds) and the
    comparison protocol (tau 0.5, ROPE 0.01, 50000 posterior samples,
    rho defaulting to the test fraction 1/k).
    """

    dataset_root: Path
    out_dir: Path
    reference: ReferenceColour = DEFAULT_REFERENCE
    threshold: float = 0.3
    normalise: bool = True
    sigma: float = 16.0
    downscale: int = 8
    order: str = "mask_then_downscale"
    tau: float = 0.5
    k: int = 10
    fold_seed: int = 0
    aggregation: str = "mean_over_images"
    rope: float = 0.01
    rho: float | None = None
    n_samples: int = 50_000
    stats_seed: int = 0
    stats_metric: str = "iou"

    @property
    def extraction(self) -> ExtractionConfig:
        return ExtractionConfig(
            ref=self.reference, threshold=self.threshold, normalise=self.normalise
        )

    @property
    def softmask(self) -> SoftMaskConfig:
        return SoftMaskConfig(sigma=self.sigma, downscale=self.downscale, order=self.order)


_CONFIG_KEYS = {
    "dataset_root",
    "out_dir",
    "reference_colour",
    "threshold",
    "normalise",
    "sigma",
    "downscale",
    "order",
    "tau",
    "k",
    "fold_seed",
    "aggregation",
    "rope",
    "rho",
    "n_samples",
    "stats_seed",
    "stats_metric",
}


def load_run_config(config_path: Path | None, overrides: dict[str, Any]) -> RunConfig:
    """Merge defaults, the optional JSON config file, and flag overrides.

    Flags win over the file; the file wins over defaults. Unknown keys in
    the file are rejected so typos cannot silently fall back to defaults.
    """
    payload: dict[str, Any] = {}
    if config_path is not None:
        try:
            payload = json.loads(Path(config_path).read_text())
        except FileNotFoundError as exc:
            raise DataError(f"config file not found: {config_path}") from exc
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read config file {config_path}: {exc}") from exc
        if not isinstance(payload, dict):
            raise DataError(f"config file {config_path} must hold a JSON object")
        unknown = sorted(set(payload) - _CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")

    merged = dict(payload)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value

    try:
        reference = DEFAULT_REFERENCE
        if "reference_colour" in merged:
            ref = merged["reference_colour"]
            reference = ReferenceColour(h=float(ref["h"]), s=float(ref["s"]), i=float(ref["i"]))
        cfg = RunConfig(
            dataset_root=Path(merged.get("dataset_root", ".")),
            out_dir=Path(merged.get("out_dir", "out")),
            reference=reference,
            threshold=float(merged.get("threshold", 0.3)),
            normalise=bool(merged.get("normalise", True)),
            sigma=float(merged.get("sigma", 16.0)),
            downscale=int(merged.get("downscale", 8)),
            order=str(merged.get("order", "mask_then_downscale")),
            tau=float(merged.get("tau", 0.5)),
            k=int(merged.get("k", 10)),
            fold_seed=int(merged.get("fold_seed", 0)),
            aggregation=str(merged.get("aggregation", "mean_over_images")),
            rope=float(merged.get("rope", 0.01)),
            rho=None if merged.get("rho") is None else float(merged["rho"]),
            n_samples=int(merged.get("n_samples", 50_000)),
            stats_seed=int(merged.get("stats_seed", 0)),
            stats_metric=str(merged.get("stats_metric", "iou")),
        )
        # construct the module configs now so bad values fail before any work
        cfg.extraction
        cfg.softmask
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from exc

    if not 0.0 < cfg.tau < 1.0:
        raise UsageError(f"tau must lie strictly inside (0, 1), got {cfg.tau}")
    if cfg.k < 2:
        raise UsageError(f"k must be at least 2, got {cfg.k}")
    if cfg.aggregation not in ("mean_over_images", "pooled_pixels"):
        raise UsageError(f"unknown aggregation mode {cfg.aggregation!r}")
    if cfg.rope < 0:
        raise UsageError(f"rope must be nonnegative, got {cfg.rope}")
    if cfg.rho is not None and not 0.0 < cfg.rho < 1.0:
        raise UsageError(f"rho must lie strictly inside (0, 1), got {cfg.rho}")
    if cfg.n_samples < 1:
        raise UsageError(f"n_samples must be positive, got {cfg.n_samples}")
    if cfg.stats_metric not in METRIC_NAMES:
        raise UsageError(f"stats_metric must be one of {METRIC_NAMES}, got {cfg.stats_metric!r}")
    return cfg


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


def _find_images(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise DataError(f"input directory not found: {directory}")
    paths = sorted(
        p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES
    )
    if not paths:
        raise DataError(f"no input images found in {directory}")
    return paths


def _annotated_dir(cfg: RunConfig) -> Path:
    return cfg.dataset_root / "annotated"


def _write_json(path: Path, payload: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


# ---------------------------------------------------------------------------
# make-gt
# ---------------------------------------------------------------------------


def _make_gt_one(
    path: Path, cfg: RunConfig, centre_dir: Path, soft_dir: Path
) -> dict[str, Any]:
    image_id = path.stem
    try:
        rgb = load_rgb(path)
    except (FileNotFoundError, ImageFormatError) as exc:
        return {"id": image_id, "status": "error", "error": str(exc)}
    centre = extract_centreline(rgb, cfg.extraction)
    soft = soft_mask_from_centreline(centre, cfg.softmask)
    save_mask(centre, centre_dir / f"{image_id}.png")
    save_prob(soft, soft_dir / f"{image_id}.png")
    return {
        "id": image_id,
        "status": "ok",
        "empty_centreline": bool(not centre.bits.any()),
    }


def cmd_make_gt(cfg: RunConfig) -> int:
    """Extract centrelines and soft masks for every annotated image."""
    images = _find_images(_annotated_dir(cfg))
    centre_dir = cfg.out_dir / "gt" / "centrelines"
    soft_dir = cfg.out_dir / "gt" / "soft"
    centre_dir.mkdir(parents=True, exist_ok=True)
    soft_dir.mkdir(parents=True, exist_ok=True)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        records = list(pool.map(lambda p: _make_gt_one(p, cfg, centre_dir, soft_dir), images))
    records.sort(key=lambda r: r["id"])

    provenance = {
        "parameters": {
            "reference_colour": {
                "h": cfg.reference.h,
                "s": cfg.reference.s,
                "i": cfg.reference.i,
            },
            "threshold": cfg.threshold,
            "normalise": cfg.normalise,
            "sigma": cfg.sigma,
            "downscale": cfg.downscale,
            "order": cfg.order,
        },
        "images": records,
    }
    _write_json(cfg.out_dir / "gt" / "provenance.json", provenance)

    failures = [r for r in records if r["status"] == "error"]
    for rec in failures:
        print(f"failed to process {rec['id']}: {rec['error']}", file=sys.stderr)
    print(
        f"wrote {len(records) - len(failures)} centreline/soft mask pairs to "
        f"{cfg.out_dir / 'gt'} ({len(failures)} failures)"
    )
    return 2 if failures else 0


# ---------------------------------------------------------------------------
# split
# ---------------------------------------------------------------------------


def cmd_split(cfg: RunConfig) -> int:
    """Write the deterministic cross-validation manifest."""
    images = _find_images(_annotated_dir(cfg))
    ids = [p.stem for p in images]
    try:
        manifest = make_folds(ids, cfg.k, cfg.fold_seed)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    violations = validate_manifest(manifest)
    if violations:
        raise DataError("manifest failed validation: " + "; ".join(violations))
    path = cfg.out_dir / "folds.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    save_manifest(manifest, path)
    print(f"wrote {cfg.k}-fold manifest for {len(ids)} items to {path}")
    return 0


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------


def _parse_model_dir(name: str) -> tuple[str, str]:
    parts = name.split("__")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise DataError(
            f"prediction directory {name!r} does not match the <architecture>__<encoder> convention"
        )
    return parts[0], parts[1]


def _load_gt_bits(cfg: RunConfig, image_ids: Iterable[str]) -> dict[str, Any]:
    soft_dir = cfg.out_dir / "gt" / "soft"
    bits: dict[str, Any] = {}
    for image_id in sorted(set(image_ids)):
        path = soft_dir / f"{image_id}.png"
        try:
            bits[image_id] = binarise(load_prob(path), cfg.tau)
        except FileNotFoundError as exc:
            raise DataError(f"groundtruth soft mask missing for {image_id!r}: {path}") from exc
        except ImageFormatError as exc:
            raise DataError(f"groundtruth soft mask unreadable for {image_id!r}: {exc}") from exc
    return bits


def cmd_evaluate(cfg: RunConfig, preds_dir: Path | None = None) -> int:
    """Score every prediction named by the manifest and write metric tables."""
    manifest_path = cfg.out_dir / "folds.json"
    try:
        manifest = load_manifest(manifest_path)
    except FileNotFoundError as exc:
        raise DataError(f"fold manifest not found: {manifest_path} (run split first)") from exc
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise DataError(f"fold manifest unreadable: {exc}") from exc

    preds_root = preds_dir if preds_dir is not None else cfg.out_dir / "preds"
    if not preds_root.is_dir():
        raise DataError(f"predictions directory not found: {preds_root}")
    model_dirs = sorted((p for p in preds_root.iterdir() if p.is_dir()), key=lambda p: p.name)
    if not model_dirs:
        raise DataError(f"no model directories under {preds_root}")
    models = [(p, *_parse_model_dir(p.name)) for p in model_dirs]

    gt_bits = _load_gt_bits(cfg, manifest.items)

    tasks = []  # (arch, enc, fold, image_id, pred_path)
    gaps: list[dict[str, Any]] = []
    for model_dir, arch, enc in models:
        for f, fold in enumerate(manifest.folds):
            for image_id in fold.test:
                pred_path = model_dir / f"fold{f}" / f"{image_id}.png"
                if pred_path.is_file():
                    tasks.append((arch, enc, f, image_id, pred_path))
                else:
                    gaps.append(
                        {
                            "architecture": arch,
                            "encoder": enc,
                            "fold": f,
                            "image_id": image_id,
                            "reason": "missing file",
                        }
                    )

    def score(task: tuple[str, str, int, str, Path]):
        arch, enc, f, image_id, pred_path = task
        try:
            pred = load_prob(pred_path)
        except ImageFormatError as exc:
            return (arch, enc, f, image_id, None, str(exc))
        gt = gt_bits[image_id]
        try:
            counts = confusion(binarise(pred, cfg.tau), gt)
        except ValueError as exc:
            return (arch, enc, f, image_id, None, str(exc))
        return (arch, enc, f, image_id, counts, None)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = list(pool.map(score, tasks))

    rows: list[tuple[str, str, int, str, ConfusionCounts]] = []
    for arch, enc, f, image_id, counts, error in results:
        if counts is None:
            gaps.append(
                {
                    "architecture": arch,
                    "encoder": enc,
                    "fold": f,
                    "image_id": image_id,
                    "reason": error,
                }
            )
        else:
            rows.append((arch, enc, f, image_id, counts))
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    gaps.sort(key=lambda g: (g["architecture"], g["encoder"], g["fold"], g["image_id"]))

    metrics_dir = cfg.out_dir / "metrics"
    metrics_dir.mkdir(parents=True, exist_ok=True)

    per_image_json = []
    with (metrics_dir / "per_image.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["architecture", "encoder", "fold", "image_id", "tp", "fp", "tn", "fn", *METRIC_NAMES]
        )
        for arch, enc, f, image_id, counts in rows:
            ms = metric_set(counts)
            writer.writerow(
                [
                    arch,
                    enc,
                    f,
                    image_id,
                    counts.tp,
                    counts.fp,
                    counts.tn,
                    counts.fn,
                    *(_fmt(v) for v in (ms.iou, ms.precision, ms.recall, ms.f1)),
                ]
            )
            per_image_json.append(
                {
                    "architecture": arch,
                    "encoder": enc,
                    "fold": f,
                    "image_id": image_id,
                    "tp": counts.tp,
                    "fp": counts.fp,
                    "tn": counts.tn,
                    "fn": counts.fn,
                    **ms.as_dict(),
                }
            )

    per_fold_groups: dict[tuple[str, str, int], list[ConfusionCounts]] = {}
    per_model_groups: dict[tuple[str, str], list[ConfusionCounts]] = {}
    for arch, enc, f, _image_id, counts in rows:
        per_fold_groups.setdefault((arch, enc, f), []).append(counts)
        per_model_groups.setdefault((arch, enc), []).append(counts)

    def aggregate_group(counts_list: list[ConfusionCounts]) -> tuple[MetricSet, dict[str, int]]:
        return aggregate(counts_list, cfg.aggregation), count_defined(counts_list)

    per_fold_json = []
    with (metrics_dir / "per_fold.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "architecture",
                "encoder",
                "fold",
                "n_images",
                *METRIC_NAMES,
                *(f"defined_{m}" for m in METRIC_NAMES),
            ]
        )
        for (arch, enc, f), counts_list in sorted(per_fold_groups.items()):
            ms, defined = aggregate_group(counts_list)
            writer.writerow(
                [
                    arch,
                    enc,
                    f,
                    len(counts_list),
                    *(_fmt(getattr(ms, m)) for m in METRIC_NAMES),
                    *(defined[m] for m in METRIC_NAMES),
                ]
            )
            per_fold_json.append(
                {
                    "architecture": arch,
                    "encoder": enc,
                    "fold": f,
                    "n_images": len(counts_list),
                    **ms.as_dict(),
                    "defined": defined,
                }
            )

    per_model_json = []
    with (metrics_dir / "per_model.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                "architecture",
                "encoder",
                "n_images",
                *METRIC_NAMES,
                *(f"defined_{m}" for m in METRIC_NAMES),
            ]
        )
        for (arch, enc), counts_list in sorted(per_model_groups.items()):
            ms, defined = aggregate_group(counts_list)
            writer.writerow(
                [
                    arch,
                    enc,
                    len(counts_list),
                    *(_fmt(getattr(ms, m)) for m in METRIC_NAMES),
                    *(defined[m] for m in METRIC_NAMES),
                ]
            )
            per_model_json.append(
                {
                    "architecture": arch,
                    "encoder": enc,
                    "n_images": len(counts_list),
                    **ms.as_dict(),
                    "defined": defined,
                }
            )

    payload = {
        "tau": cfg.tau,
        "aggregation": cfg.aggregation,
        "complete": not gaps,
        "gaps": gaps,
        "per_image": per_image_json,
        "per_fold": per_fold_json,
        "per_model": per_model_json,
    }
    _write_json(metrics_dir / "metrics.json", payload)

    for gap in gaps:
        print(
            "missing or bad prediction: "
            f"{gap['architecture']}__{gap['encoder']}/fold{gap['fold']}/{gap['image_id']}.png"
            f" ({gap['reason']})",
            file=sys.stderr,
        )
    print(
        f"scored {len(rows)} predictions across {len(models)} models into {metrics_dir}"
        + ("" if not gaps else f" ({len(gaps)} gaps, results incomplete)")
    )
    return 2 if gaps else 0


# ---------------------------------------------------------------------------
# compare / report
# ---------------------------------------------------------------------------


def _load_metrics_payload(metrics_path: Path) -> dict[str, Any]:
    try:
        payload = json.loads(metrics_path.read_text())
    except FileNotFoundError as exc:
        raise DataError(f"metrics file not found: {metrics_path} (run evaluate first)") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"metrics file unreadable: {exc}") from exc
    if not isinstance(payload, dict) or "per_fold" not in payload:
        raise DataError(f"metrics file {metrics_path} lacks per-fold results")
    return payload


def _grids_from_payload(
    payload: dict[str, Any], metric_names: Sequence[str]
) -> dict[str, ScoreGrid]:
    """Assemble one complete ScoreGrid per requested metric from per-fold rows."""
    cells: dict[tuple[str, str], dict[int, dict[str, Any]]] = {}
    folds_seen: set[int] = set()
    for row in payload["per_fold"]:
        key = (row["architecture"], row["encoder"])
        cells.setdefault(key, {})[int(row["fold"])] = row
        folds_seen.add(int(row["fold"]))

    if not cells:
        raise DataError("metrics file holds no per-fold rows")
    folds = sorted(folds_seen)
    if folds != list(range(len(folds))):
        raise DataError(f"fold indices are not contiguous from 0: {folds}")

    architectures = sorted({a for a, _ in cells})
    encoders = sorted({e for _, e in cells})
    problems = []
    for a in architectures:
        for e in encoders:
            entry = cells.get((a, e))
            if entry is None:
                problems.append(f"missing cell {a}/{e}")
                continue
            for f in folds:
                if f not in entry:
                    problems.append(f"missing fold {f} for {a}/{e}")
                    continue
                for m in metric_names:
                    if entry[f].get(m) is None:
                        problems.append(f"undefined {m} for {a}/{e} fold {f}")
    if problems:
        raise DataError("incomplete metric grid: " + "; ".join(problems[:10]))

    grids = {}
    for m in metric_names:
        scores = {
            (a, e): [float(cells[(a, e)][f][m]) for f in folds]
            for a in architectures
            for e in encoders
        }
        grids[m] = ScoreGrid.from_fold_scores(architectures, encoders, scores)
    return grids


def _best_methods(grid: ScoreGrid) -> list[tuple[str, list[float]]]:
    """One method per architecture: its best-mean encoder (ties by name)."""
    means = grid.mean_score
    methods = []
    for i, arch in enumerate(grid.architectures):
        order = sorted(range(len(grid.encoders)), key=lambda j: (-means[i, j], grid.encoders[j]))
        j = order[0]
        methods.append((f"{arch}__{grid.encoders[j]}", list(grid.per_fold[i, j, :])))
    return methods


def _comparison_artifacts(cfg: RunConfig, payload: dict[str, Any], out_dir: Path) -> dict[str, Any]:
    heatmap_metrics = ["iou", "f1"]
    needed = sorted(set(heatmap_metrics + [cfg.stats_metric]))
    grids = _grids_from_payload(payload, needed)

    out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict[str, Any] = {"heatmaps": {}, "bayes": {}}
    specs = {}
    for m in heatmap_metrics:
        spec = build_heatmap(grids[m], metric_name=m)
        specs[m] = spec
        files = [render(spec, fmt, out_dir / f"heatmap_{m}.{fmt}").name for fmt in ("csv", "json", "svg")]
        summary["heatmaps"][m] = files

    stats_grid = grids[cfg.stats_metric]
    methods = _best_methods(stats_grid)
    matrix: PairwiseMatrix | None = None
    if len(methods) < 2:
        summary["bayes"] = {
            "status": "skipped",
            "reason": "need at least 2 methods for pairwise comparison",
            "methods": [name for name, _ in methods],
            "files": [],
        }
        print("Bayesian matrix skipped: only one method in the grid", file=sys.stderr)
    else:
        matrix = pairwise_matrix(
            methods,
            rope=cfg.rope,
            rho=cfg.rho,
            n_samples=cfg.n_samples,
            seed=cfg.stats_seed,
        )
        files = [render(matrix, fmt, out_dir / f"bayes.{fmt}").name for fmt in ("csv", "json", "svg")]
        summary["bayes"] = {
            "status": "written",
            "metric": cfg.stats_metric,
            "methods": [name for name, _ in methods],
            "files": files,
        }
    return {"summary": summary, "specs": specs, "matrix": matrix}


def cmd_compare(cfg: RunConfig, metrics_path: Path | None = None) -> int:
    """Build rankings, heatmap tables and the Bayesian matrix from metrics."""
    path = metrics_path if metrics_path is not None else cfg.out_dir / "metrics" / "metrics.json"
    payload = _load_metrics_payload(path)
    if not payload.get("complete", True):
        print("warning: metrics file is flagged incomplete; comparing what is there", file=sys.stderr)
    out_dir = cfg.out_dir / "compare"
    result = _comparison_artifacts(cfg, payload, out_dir)
    _write_json(out_dir / "summary.json", result["summary"])
    print(f"wrote comparison artifacts to {out_dir}")
    return 0


def cmd_report(cfg: RunConfig, metrics_path: Path | None = None) -> int:
    """Write the comparison artifacts plus rendered PNG figures."""
    path = metrics_path if metrics_path is not None else cfg.out_dir / "metrics" / "metrics.json"
    payload = _load_metrics_payload(path)
    if not payload.get("complete", True):
        print("warning: metrics file is flagged incomplete; reporting what is there", file=sys.stderr)
    out_dir = cfg.out_dir / "report"
    result = _comparison_artifacts(cfg, payload, out_dir)

    from . import figures  # matplotlib import deferred to the one command that needs it

    pngs = []
    for m, spec in result["specs"].items():
        pngs.append(figures.heatmap_png(spec, out_dir / f"heatmap_{m}.png").name)
    if result["matrix"] is not None:
        pngs.append(figures.bayes_png(result["matrix"], out_dir / "bayes.png").name)
    summary = result["summary"]
    summary["figures"] = sorted(pngs)
    _write_json(out_dir / "summary.json", summary)
    print(f"wrote report artifacts and figures to {out_dir}")
    return 0
