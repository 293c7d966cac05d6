"""Monte Carlo experiment harness.

Runs replicated W-random graph counts, compares the empirical law of the
normalized statistic against draws from the theoretical limit, and emits
machine-readable reports. All randomness derives from one master seed via
per-purpose Philox streams, so results are byte-identical across runs and
worker counts.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .density import REGULARITY_TOL, mean_count
from .graphon import DEFAULT_DISCRETIZATION, KernelSpec, StepGraphon, as_step_graphon
from .graphs import LabeledGraph
from .limits import LimitLaw, limit_law, sample_limit
from .sampler import SampleRecord, count_copies, sample_graph

SCHEMA_VERSION = 1
THREADS_ENV_VAR = "GRAPHONLAB_THREADS"

# Stream tags for deriving independent Philox seeds from the master seed.
_REPLICATE_STREAM = 0
_REFERENCE_STREAM = 1


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the
    merged support."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    support = np.concatenate([a_sorted, b_sorted])
    cdf_a = np.searchsorted(a_sorted, support, side="right") / a.size
    cdf_b = np.searchsorted(b_sorted, support, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


@dataclass(frozen=True)
class ExperimentConfig:
    """Description of one Monte Carlo run."""

    pattern: LabeledGraph
    kernel: KernelSpec
    n: int
    replicates: int
    master_seed: int
    discretization: int = DEFAULT_DISCRETIZATION
    reference_draws: int = 100_000
    regularity_tol: float = REGULARITY_TOL
    ks_threshold: float = 0.08
    variance_band: float = 0.25

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.n < self.pattern.vertex_count:
            raise ValueError("n must be at least the pattern size")
        if self.reference_draws < 1_000:
            raise ValueError("reference_draws must be >= 1000")
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        if self.discretization < 1:
            raise ValueError("discretization must be >= 1")

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "pattern": self.pattern.to_json_dict(),
            "kernel": self.kernel.to_json_dict(),
            "discretization": self.discretization,
            "n": self.n,
            "replicates": self.replicates,
            "reference_draws": self.reference_draws,
            "master_seed": self.master_seed,
            "regularity_tol": self.regularity_tol,
            "ks_threshold": self.ks_threshold,
            "variance_band": self.variance_band,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "ExperimentConfig":
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {version!r}")
        kwargs = {}
        for key in ("regularity_tol", "ks_threshold", "variance_band"):
            if key in data:
                kwargs[key] = float(data[key])
        if "discretization" in data:
            kwargs["discretization"] = int(data["discretization"])
        if "reference_draws" in data:
            kwargs["reference_draws"] = int(data["reference_draws"])
        return cls(
            pattern=LabeledGraph.from_json_dict(data["pattern"]),
            kernel=KernelSpec.from_json_dict(data["kernel"]),
            n=int(data["n"]),
            replicates=int(data["replicates"]),
            master_seed=int(data["master_seed"]),
            **kwargs,
        )


@dataclass(frozen=True)
class ExperimentResult:
    """Summary of one run plus the per-replicate records."""

    config: ExperimentConfig
    law: LimitLaw
    mean_count_value: float
    raw_mean: float
    raw_std: float
    empirical_mean: float
    empirical_variance: float
    reference_mean: float
    reference_variance: float
    ks: float
    records: tuple[SampleRecord, ...] = field(repr=False)
    mean_pass: bool
    ks_pass: bool
    variance_pass: bool

    @property
    def passed(self) -> bool:
        return self.mean_pass and self.ks_pass and self.variance_pass

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_json_dict(),
            "limit_law": self.law.to_json_dict(),
            "mean_count": self.mean_count_value,
            "raw_mean": self.raw_mean,
            "raw_std": self.raw_std,
            "empirical_mean": self.empirical_mean,
            "empirical_variance": self.empirical_variance,
            "reference_mean": self.reference_mean,
            "reference_variance": self.reference_variance,
            "ks_distance": self.ks,
            "checks": {
                "mean_within_4se": self.mean_pass,
                "ks_below_threshold": self.ks_pass,
                "variance_within_band": self.variance_pass,
                "passed": self.passed,
            },
            "records": [
                {
                    "replicate": i,
                    "seed": r.seed,
                    "raw_count": r.raw_count,
                    "normalized": r.normalized,
                }
                for i, r in enumerate(self.records)
            ],
        }

    def to_canonical_json(self) -> str:
        """Deterministic serialization: sorted keys, no whitespace, shortest
        round-trip float representation."""
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        """Write result.json and replicates.csv into out_dir."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result_path = out / "result.json"
        result_path.write_text(self.to_canonical_json(), encoding="utf-8")
        csv_path = out / "replicates.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["replicate", "seed", "raw_count", "normalized"])
            for i, r in enumerate(self.records):
                writer.writerow([i, r.seed, r.raw_count, repr(r.normalized)])
        return result_path, csv_path


def stream_seed(master_seed: int, purpose: int, index: int = 0) -> int:
    """Derive an independent 64-bit seed from the master seed; replicates and
    the reference sample live on disjoint spawn keys."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(purpose, index))
    return int(ss.generate_state(1, np.uint64)[0])


def replicate_seed(master_seed: int, index: int) -> int:
    return stream_seed(master_seed, _REPLICATE_STREAM, index)


def reference_seed(master_seed: int) -> int:
    return stream_seed(master_seed, _REFERENCE_STREAM)


def _count_chunk(args) -> list[int]:
    (pi, values, n, pattern_n, pattern_edges), seeds = args
    W = StepGraphon(np.asarray(pi), np.asarray(values))
    H = LabeledGraph.from_edges(pattern_n, pattern_edges)
    return [count_copies(H, sample_graph(W, n, s)) for s in seeds]


def _worker_count(replicates: int) -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    return max(1, min(workers, replicates))


def _replicate_counts(
    H: LabeledGraph, W: StepGraphon, n: int, seeds: Sequence[int]
) -> list[int]:
    workers = _worker_count(len(seeds))
    if workers == 1:
        return [count_copies(H, sample_graph(W, n, s)) for s in seeds]
    payload = (
        W.block_weights.tolist(),
        W.values.tolist(),
        n,
        H.vertex_count,
        H.sorted_edges(),
    )
    size = math.ceil(len(seeds) / workers)
    chunks = [seeds[i : i + size] for i in range(0, len(seeds), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_count_chunk, [(payload, chunk) for chunk in chunks]))
    return [c for part in parts for c in part]


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the replicates, draw the reference sample, and score the run.

    Fully deterministic given the config (including across worker counts).
    Raises DegenerateGraphonError for all-ones or pattern-free kernels.
    """
    W = as_step_graphon(config.kernel, config.discretization)
    H = config.pattern
    law = limit_law(H, W, regularity_tol=config.regularity_tol)

    n = config.n
    mu = mean_count(H, W, n)
    denom = float(n) ** law.scale_exponent
    seeds = [replicate_seed(config.master_seed, i) for i in range(config.replicates)]
    counts = _replicate_counts(H, W, n, seeds)
    records = tuple(
        SampleRecord(n=n, seed=s, raw_count=c, normalized=(c - mu) / denom)
        for s, c in zip(seeds, counts)
    )

    normalized = np.array([r.normalized for r in records])
    raw = np.array([r.raw_count for r in records], dtype=float)
    reference = sample_limit(law, reference_seed(config.master_seed), config.reference_draws)

    raw_std = float(np.std(raw, ddof=1)) if raw.size > 1 else 0.0
    se = raw_std / math.sqrt(raw.size) if raw.size > 1 else float("inf")
    mean_pass = abs(float(np.mean(raw)) - mu) <= 4.0 * se

    ks = ks_distance(normalized, reference)
    ks_pass = ks < config.ks_threshold

    emp_var = float(np.var(normalized, ddof=1)) if normalized.size > 1 else 0.0
    law_var = law.variance
    if law_var > 0:
        variance_pass = abs(emp_var - law_var) <= config.variance_band * law_var
    else:
        variance_pass = emp_var <= 1e-12

    return ExperimentResult(
        config=config,
        law=law,
        mean_count_value=mu,
        raw_mean=float(np.mean(raw)),
        raw_std=raw_std,
        empirical_mean=float(np.mean(normalized)),
        empirical_variance=emp_var,
        reference_mean=float(np.mean(reference)),
        reference_variance=float(np.var(reference, ddof=1)),
        ks=ks,
        records=records,
        mean_pass=mean_pass,
        ks_pass=ks_pass,
        variance_pass=variance_pass,
    )
