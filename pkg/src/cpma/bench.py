"""Experiment orchestration: noise, rotation, and tau-sweep protocols.

Every run walks a flat dataset directory (.pbm / .vox / .ply files),
applies a list of skeletonization methods under controlled
perturbations, and emits one record per (item, method, perturbation,
metric).  All randomness derives from a single seed through
SeedSequence spawning, and records are sorted before emission, so a
repeated run produces byte-identical output files.
"""

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import CpmaConfig, connect_cpma, extract_cpma
from .errors import CpmaError, ParameterError
from .grid import load_grid
from .metrics import dubuisson_jain, hausdorff, jaccard
from .perturb import NoiseKind, NoiseSpec, RotationSpec, apply_noise, rotate_grid, rotate_points
from .ply import parse_ply, voxelize
from .skeleton import Method, PrunerSpec, prune, reconstruct

log = logging.getLogger(__name__)

CSV_COLUMNS = ("dataset", "item", "method", "params", "perturbation", "metric", "value", "seed")

AVERAGE_ITEM = "__average__"
STD_ITEM = "__std__"


@dataclass(frozen=True)
class BenchmarkRecord:
    dataset: str
    item: str
    method: str
    params: str
    perturbation: str
    metric: str
    value: float
    seed: int

    def key(self):
        return (
            self.dataset,
            self.item,
            self.method,
            self.params,
            self.perturbation,
            self.metric,
            str(self.seed),
        )


class SkeletonMethod:
    """A named skeleton extractor: a baseline pruner, CPMA, or C-CPMA."""

    def __init__(self, name, pruner=None, cfg=None):
        self.name = name
        self.pruner = pruner
        self.cfg = cfg

    @classmethod
    def from_string(cls, text):
        """Parse specs like "mat", "gima:2.0", "cpma", "cpma:0.5", "ccpma"."""
        name, _, arg = text.strip().lower().partition(":")
        if name in ("cpma", "ccpma"):
            cfg = CpmaConfig(tau=float(arg)) if arg else CpmaConfig()
            return cls(name, cfg=cfg)
        try:
            method = Method(name)
        except ValueError:
            raise ParameterError(f"unknown method {text!r}") from None
        kwargs = {}
        if arg:
            if method is Method.GIMA:
                kwargs["gamma"] = float(arg)
            elif method is Method.BEMA:
                kwargs["theta"] = float(arg)
            elif method in (Method.SAT, Method.SFEMA):
                kwargs["scale"] = float(arg)
            else:
                raise ParameterError(f"method {name!r} takes no parameter")
        return cls(name, pruner=PrunerSpec(method=method, **kwargs))

    def params_label(self):
        if self.cfg is not None:
            return f"tau={self.cfg.tau:g}"
        p = self.pruner
        if p.method is Method.GIMA:
            return f"gamma={p.gamma:g}"
        if p.method is Method.BEMA:
            return f"theta={p.theta:g}"
        if p.method in (Method.SAT, Method.SFEMA):
            return f"scale={p.scale:g}"
        return ""

    def extract(self, grid):
        if self.cfg is not None:
            mat, field = extract_cpma(grid, self.cfg)
            if self.name == "ccpma":
                return connect_cpma(mat, field, grid, self.cfg).mat
            return mat
        return prune(grid, self.pruner)


def load_item(path, ply_resolution=64):
    """Load one dataset file, dispatching on its extension."""
    path = str(path)
    if path.endswith(".ply"):
        return voxelize(parse_ply(path), resolution=ply_resolution)
    return load_grid(path)


def dataset_items(dataset_dir):
    """Sorted (stem, path) pairs of loadable files in a flat directory."""
    entries = []
    for name in sorted(os.listdir(dataset_dir)):
        stem, ext = os.path.splitext(name)
        if ext in (".pbm", ".vox", ".ply"):
            entries.append((stem, os.path.join(dataset_dir, name)))
    if not entries:
        raise ParameterError(f"no dataset files (.pbm/.vox/.ply) in {dataset_dir}")
    return entries


def _item_seed(seed, *key):
    return int(np.random.SeedSequence([seed, *key]).generate_state(1)[0])


def _noise_spec_for(grid, level, seed):
    kind = NoiseKind.CONTOUR_2D if grid.ndim == 2 else NoiseKind.EDEN_3D
    return NoiseSpec(kind=kind, level=level, seed=seed)


def _pair_metrics(sk_a, sk_b):
    return (("hausdorff", hausdorff(sk_a, sk_b)), ("dubuisson_jain", dubuisson_jain(sk_a, sk_b)))


def _noise_item_records(args):
    dataset, item, path, methods, levels, seed, idx, ply_resolution = args
    records = []
    try:
        grid = load_item(path, ply_resolution)
    except CpmaError as exc:
        log.warning("skipping %s: %s", path, exc)
        return records
    for method in methods:
        try:
            reference = method.extract(grid)
        except CpmaError as exc:
            log.warning("skipping %s on %s: %s", method.name, item, exc)
            continue
        for level in levels:
            noisy = apply_noise(grid, _noise_spec_for(grid, level, _item_seed(seed, idx, level)))
            try:
                perturbed = method.extract(noisy)
                pairs = _pair_metrics(reference, perturbed)
            except CpmaError as exc:
                log.warning("skipping %s on %s at k=%d: %s", method.name, item, level, exc)
                continue
            for metric, value in pairs:
                records.append(
                    BenchmarkRecord(
                        dataset=dataset,
                        item=item,
                        method=method.name,
                        params=method.params_label(),
                        perturbation=f"k={level}",
                        metric=metric,
                        value=value,
                        seed=seed,
                    )
                )
    return records


def _rotation_item_records(args):
    dataset, item, path, methods, angles, seed, idx, ply_resolution = args
    records = []
    try:
        grid = load_item(path, ply_resolution)
    except CpmaError as exc:
        log.warning("skipping %s: %s", path, exc)
        return records
    for method in methods:
        try:
            reference = method.extract(grid)
        except CpmaError as exc:
            log.warning("skipping %s on %s: %s", method.name, item, exc)
            continue
        for rot in angles:
            try:
                rotated_first = method.extract(rotate_grid(grid, rot))
                skeleton_rotated = rotate_points(reference, rot, grid.dims)
                pairs = _pair_metrics(rotated_first, skeleton_rotated)
            except CpmaError as exc:
                log.warning("skipping %s on %s at %s: %s", method.name, item, rot, exc)
                continue
            for metric, value in pairs:
                records.append(
                    BenchmarkRecord(
                        dataset=dataset,
                        item=item,
                        method=method.name,
                        params=method.params_label(),
                        perturbation=_rotation_label(rot, grid.ndim),
                        metric=metric,
                        value=value,
                        seed=seed,
                    )
                )
    return records


def _rotation_label(rot, ndim):
    if ndim == 2:
        return f"angle={rot.angle2d:g}"
    return f"az={rot.azimuth:g};el={rot.elevation:g}"


def _tau_item_records(args):
    dataset, item, path, taus, scales, seed, idx, ply_resolution = args
    from .perturb import rescale_grid

    records = []
    try:
        base = load_item(path, ply_resolution)
    except CpmaError as exc:
        log.warning("skipping %s: %s", path, exc)
        return records
    for scale in scales:
        grid = rescale_grid(base, scale) if scale != 1.0 else base
        for tau in taus:
            cfg = CpmaConfig(tau=tau)
            try:
                mat, field = extract_cpma(grid, cfg)
                connected = connect_cpma(mat, field, grid, cfg).mat
                value = jaccard(reconstruct(connected, grid.dims), grid)
            except CpmaError as exc:
                log.warning("skipping tau=%g on %s: %s", tau, item, exc)
                continue
            records.append(
                BenchmarkRecord(
                    dataset=dataset,
                    item=item,
                    method="ccpma",
                    params=f"tau={tau:g}",
                    perturbation=f"scale={scale:g}",
                    metric="jaccard",
                    value=value,
                    seed=seed,
                )
            )
    return records


def _run(worker, tasks, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(worker, tasks))
    else:
        chunks = [worker(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    return sorted(records, key=BenchmarkRecord.key)


def _with_aggregates(records, stds=False):
    """Append per-(method, params, perturbation, metric) dataset averages."""
    groups = {}
    for r in records:
        if r.item in (AVERAGE_ITEM, STD_ITEM):
            continue
        groups.setdefault((r.dataset, r.method, r.params, r.perturbation, r.metric, r.seed), []).append(
            r.value
        )
    out = list(records)
    for (dataset, method, params, pert, metric, seed), values in groups.items():
        mean = math.fsum(values) / len(values)
        out.append(
            BenchmarkRecord(dataset, AVERAGE_ITEM, method, params, pert, metric, mean, seed)
        )
        if stds:
            var = math.fsum((v - mean) ** 2 for v in values) / len(values)
            out.append(
                BenchmarkRecord(dataset, STD_ITEM, method, params, pert, metric, math.sqrt(var), seed)
            )
    return sorted(out, key=BenchmarkRecord.key)


def run_noise_experiment(dataset_dir, methods, levels, seed=0, jobs=1, ply_resolution=64):
    """Compare each method's skeleton before and after boundary noise."""
    dataset = os.path.basename(os.path.normpath(dataset_dir))
    tasks = [
        (dataset, item, path, list(methods), list(levels), seed, idx, ply_resolution)
        for idx, (item, path) in enumerate(dataset_items(dataset_dir))
    ]
    return _with_aggregates(_run(_noise_item_records, tasks, jobs))


def run_rotation_experiment(dataset_dir, methods, angles, seed=0, jobs=1, ply_resolution=64):
    """Compare skeleton-of-rotation against rotation-of-skeleton."""
    dataset = os.path.basename(os.path.normpath(dataset_dir))
    tasks = [
        (dataset, item, path, list(methods), list(angles), seed, idx, ply_resolution)
        for idx, (item, path) in enumerate(dataset_items(dataset_dir))
    ]
    return _with_aggregates(_run(_rotation_item_records, tasks, jobs))


def run_tau_sweep(dataset_dir, taus, scales=(1.0,), seed=0, jobs=1, ply_resolution=64):
    """Reconstruction quality of the connected CPMA across thresholds."""
    dataset = os.path.basename(os.path.normpath(dataset_dir))
    tasks = [
        (dataset, item, path, list(taus), list(scales), seed, idx, ply_resolution)
        for idx, (item, path) in enumerate(dataset_items(dataset_dir))
    ]
    return _with_aggregates(_run(_tau_item_records, tasks, jobs), stds=True)


def format_records_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in sorted(records, key=BenchmarkRecord.key):
        writer.writerow(
            [r.dataset, r.item, r.method, r.params, r.perturbation, r.metric, f"{r.value:.12g}", r.seed]
        )
    return buf.getvalue()


def emit_results(records, path, fmt="csv"):
    """Write records to ``path`` as CSV or JSON with stable row order."""
    if fmt == "csv":
        payload = format_records_csv(records)
    elif fmt == "json":
        rows = [
            {
                "dataset": r.dataset,
                "item": r.item,
                "method": r.method,
                "params": r.params,
                "perturbation": r.perturbation,
                "metric": r.metric,
                "value": float(f"{r.value:.12g}"),
                "seed": r.seed,
            }
            for r in sorted(records, key=BenchmarkRecord.key)
        ]
        payload = json.dumps(rows, indent=2) + "\n"
    else:
        raise ParameterError(f"unknown output format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(payload)


def read_results(path):
    """Parse a results file back into records (inverse of emit_results)."""
    if str(path).endswith(".json"):
        with open(path) as fh:
            rows = json.load(fh)
        return [
            BenchmarkRecord(
                r["dataset"], r["item"], r["method"], r["params"], r["perturbation"],
                r["metric"], float(r["value"]), int(r["seed"]),
            )
            for r in rows
        ]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            BenchmarkRecord(
                row["dataset"], row["item"], row["method"], row["params"], row["perturbation"],
                row["metric"], float(row["value"]), int(row["seed"]),
            )
            for row in reader
        ]
