"""W-random graph sampling and the normalized count statistic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import mean_count
from .graphon import StepGraphon
from .graphs import LabeledGraph, automorphism_count, count_copies, falling_factorial
from .limits import LimitLaw


@dataclass(frozen=True)
class SampleRecord:
    """One Monte Carlo replicate: the raw copy count and its normalization."""

    n: int
    seed: int
    raw_count: int
    normalized: float


def sample_graph(W: StepGraphon, n: int, seed: int) -> LabeledGraph:
    """Graph on n vertices: latent uniforms U_i pick blocks, edge (i, j) is
    present when an independent uniform falls below the block value.

    The Philox stream is consumed as the n latent uniforms followed by the
    n(n-1)/2 edge uniforms in row-major (i < j) order, so identical
    (W, n, seed) yields an identical graph. The strict comparison makes the
    all-ones kernel produce the complete graph and the zero kernel the empty
    graph deterministically.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not W.is_probability_kernel:
        raise ValueError("sampling requires a kernel with values in [0,1]")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    latent = rng.random(n)
    blocks = np.asarray(W.block_index(latent))
    iu, ju = np.triu_indices(n, k=1)
    y = rng.random(iu.size)
    probs = W.values[blocks[iu], blocks[ju]]
    keep = y < probs
    edges = zip((iu[keep] + 1).tolist(), (ju[keep] + 1).tolist())
    return LabeledGraph.from_edges(n, edges)


def normalized_statistic(
    H: LabeledGraph, W: StepGraphon, G: LabeledGraph, law: LimitLaw, seed: int = 0
) -> SampleRecord:
    """Centered and scaled copy count of H in G:
    (count - mean_count(H, W, n)) / n^scale_exponent with the exponent taken
    from the limit law."""
    n = G.vertex_count
    v = H.vertex_count
    if n < v:
        raise ValueError(f"host graph needs at least {v} vertices")
    raw = count_copies(H, G)
    upper = falling_factorial(n, v) // automorphism_count(H)
    if raw > upper:
        raise RuntimeError("copy count exceeds the complete-graph bound; counting bug")
    normalized = (raw - mean_count(H, W, n)) / float(n) ** law.scale_exponent
    return SampleRecord(n=n, seed=seed, raw_count=raw, normalized=normalized)
