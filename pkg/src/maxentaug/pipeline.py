"""Batch engine: manifests, class-balanced sampling weights, parallel
augmentation over a dataset, figure-style parameter sweeps and a
throughput benchmark.

Manifests are JSON-lines files, one record per image:

    {"path": "img.png", "label": "full", "container_id": "c3", "split_tag": "s1"}

``container_id`` and ``split_tag`` are optional.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from .config import PipelineConfig
from .core import RngStream
from .errors import InvalidParameterError, ManifestError
from .imageio import load_image, save_png
from .mixer import transform_image
from .transforms.color import ColorMapParams, apply_color_map, sample_color_map
from .transforms.spatial import DiffeoParams, apply_diffeo, sample_diffeo
from .transforms.spectral import SpectralKernelParams, apply_spectral, sample_spectral_kernel

LABELS = ("empty", "half-full", "full", "unknown")

SWEEP_DEFAULTS = {
    "spatial": [2, 5, 10, 20, 40, 100, 300],
    "color": [2, 5, 10, 20, 40, 100, 300],
    "spectral": [3, 5, 7, 9, 11, 13, 15],
}


@dataclass(frozen=True)
class ManifestEntry:
    image_path: str
    label: str
    container_id: Optional[str] = None
    split_tag: Optional[str] = None


def load_manifest(path) -> List[ManifestEntry]:
    """Parse and validate a JSON-lines manifest; order is preserved."""
    base = Path(path).parent
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                rec = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"line {line_no}: malformed record: {exc}", line=line_no)
            if not isinstance(rec, dict) or "path" not in rec or "label" not in rec:
                raise ManifestError(
                    f"line {line_no}: record must have 'path' and 'label'", line=line_no
                )
            if rec["label"] not in LABELS:
                raise ManifestError(
                    f"line {line_no}: label {rec['label']!r} not in {LABELS}", line=line_no
                )
            img = Path(rec["path"])
            if not img.is_absolute():
                img = base / img
            if not img.is_file():
                raise ManifestError(f"line {line_no}: no such image {img}", line=line_no)
            unknown = set(rec) - {"path", "label", "container_id", "split_tag"}
            if unknown:
                raise ManifestError(
                    f"line {line_no}: unknown fields {sorted(unknown)}", line=line_no
                )
            entries.append(
                ManifestEntry(str(img), rec["label"], rec.get("container_id"), rec.get("split_tag"))
            )
    return entries


def balanced_weights(entries: List[ManifestEntry]) -> np.ndarray:
    """Per-entry sampling probabilities inversely proportional to class size.

    Every class present in the manifest gets equal expected draw frequency.
    """
    if not entries:
        raise InvalidParameterError("manifest is empty")
    counts = {}
    for e in entries:
        counts[e.label] = counts.get(e.label, 0) + 1
    w = np.array([1.0 / counts[e.label] for e in entries])
    return w / w.sum()


def _output_name(entry_path: str, copy: int, stream_id: int) -> str:
    return f"{Path(entry_path).stem}__c{copy}__s{stream_id}.png"


def _augment_task(args):
    path, copy, stream_id, cfg, seed, out_dir = args
    try:
        x = load_image(path)
        out, record = transform_image(RngStream(seed, stream_id), cfg, x)
        name = _output_name(path, copy, stream_id)
        save_png(os.path.join(out_dir, name), out)
        return (stream_id, name, record.to_json(), None)
    except Exception as exc:  # report-and-continue; caller decides exit status
        return (stream_id, None, None, f"{path}: {exc}")


def run_augment(manifest_path, cfg: PipelineConfig, out_dir, seed=0, workers=1, copies=1):
    """Augment every manifest image ``copies`` times into ``out_dir``.

    Outputs and the records file are byte-identical for a fixed
    (manifest, config, seed) regardless of ``workers``.
    """
    cfg.validate()
    if copies < 1:
        raise InvalidParameterError("copies must be >= 1")
    entries = load_manifest(manifest_path)
    os.makedirs(out_dir, exist_ok=True)

    tasks = [
        (e.image_path, copy, idx * copies + copy, cfg, seed, str(out_dir))
        for idx, e in enumerate(entries)
        for copy in range(copies)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_augment_task, tasks, chunksize=4))
    else:
        results = [_augment_task(t) for t in tasks]

    results.sort(key=lambda r: r[0])
    failures = [err for _, _, _, err in results if err is not None]
    with open(os.path.join(out_dir, "records.jsonl"), "w", encoding="utf-8") as fh:
        for _, _, record_json, err in results:
            if err is None:
                fh.write(record_json + "\n")
    return {
        "processed": len(results) - len(failures),
        "failed": len(failures),
        "failures": failures,
        "outputs": [name for _, name, _, err in results if err is None],
    }


def _sweep_transform(family, value, x, stream):
    h, w, c = x.shape
    if family == "spatial":
        if value < 1 or value >= min(h, w):
            raise InvalidParameterError(f"invalid warp smoothness {value} for {h}x{w} image")
        f = sample_diffeo(stream, DiffeoParams(int(value)), h, w)
        return apply_diffeo(x, f)
    if family == "color":
        if value < 1:
            raise InvalidParameterError(f"invalid color smoothness {value}")
        cm = sample_color_map(stream, ColorMapParams(int(value), 0.001), c)
        return apply_color_map(x, cm)
    if family == "spectral":
        if value < 1 or value % 2 == 0 or value > min(h, w):
            raise InvalidParameterError(f"invalid kernel size {value} for {h}x{w} image")
        k = sample_spectral_kernel(stream, SpectralKernelParams(int(value), 0.01))
        return apply_spectral(x, k)
    raise InvalidParameterError(f"unknown family {family!r}")


def run_sweep(image_path, family, out_path, values=None, seed=0):
    """Emit a grid PNG: original + one variant per smoothness value.

    Default value lists mirror the qualitative figure sweeps (strengths stay
    at the preset defaults; warp strength is sampled from its interval).
    """
    if family not in SWEEP_DEFAULTS:
        raise InvalidParameterError(f"unknown family {family!r}")
    if values is None:
        values = SWEEP_DEFAULTS[family]
    if not values:
        raise InvalidParameterError("values must be non-empty")
    x = load_image(image_path)
    cells = [x]
    for idx, v in enumerate(values):
        cells.append(_sweep_transform(family, v, x, RngStream(seed, idx)))

    cols = 4
    rows = (len(cells) + cols - 1) // cols
    h, w, c = x.shape
    pad = 2
    grid = np.ones((rows * (h + pad) - pad, cols * (w + pad) - pad, c), dtype=np.float32)
    for i, cell in enumerate(cells):
        r, col = divmod(i, cols)
        grid[r * (h + pad) : r * (h + pad) + h, col * (w + pad) : col * (w + pad) + w] = cell
    save_png(out_path, grid)
    return grid


@dataclass
class BenchReport:
    decode_per_sec: float
    augmented_per_sec: float
    overhead_ratio: float
    resolution: str
    workers: int
    preset_name: str

    def to_text(self) -> str:
        return (
            f"decode_per_sec = {self.decode_per_sec:.2f}\n"
            f"augmented_per_sec = {self.augmented_per_sec:.2f}\n"
            f"overhead_ratio = {self.overhead_ratio:.3f}\n"
            f"resolution = {self.resolution}\n"
            f"workers = {self.workers}\n"
            f"preset_name = {self.preset_name}\n"
        )


def run_bench(manifest_path, cfg: PipelineConfig, workers=1, duration=4.0, preset_name="custom"):
    """Measure decode-only vs decode+augment throughput (images/s per worker)."""
    cfg.validate()
    entries = load_manifest(manifest_path)
    if not entries:
        raise ManifestError("benchmark manifest is empty")
    first = load_image(entries[0].image_path)
    resolution = f"{first.shape[0]}x{first.shape[1]}"

    def _measure(augment):
        # warm-up pass so one-time costs (caches, imports) are excluded
        x = load_image(entries[0].image_path)
        if augment:
            transform_image(RngStream(0, 0), cfg, x)
        count = 0
        start = time.perf_counter()
        budget = duration / 2.0
        while time.perf_counter() - start < budget:
            e = entries[count % len(entries)]
            x = load_image(e.image_path)
            if augment:
                transform_image(RngStream(0, count), cfg, x)
            count += 1
        return count / (time.perf_counter() - start)

    decode_rate = _measure(augment=False)
    aug_rate = _measure(augment=True)
    return BenchReport(
        decode_per_sec=decode_rate,
        augmented_per_sec=aug_rate,
        overhead_ratio=max(decode_rate / aug_rate, 1.0),
        resolution=resolution,
        workers=workers,
        preset_name=preset_name,
    )
