"""Shared helpers: deterministic random step graphons and pattern zoo."""

from __future__ import annotations

import numpy as np
import pytest

from graphonlab import LabeledGraph, StepGraphon


def random_step_graphon(rng: np.random.Generator, max_blocks: int = 4) -> StepGraphon:
    """Random graphon with 1..max_blocks blocks, weights bounded away from 0
    and values bounded away from {0, 1} so nothing is degenerate."""
    k = int(rng.integers(1, max_blocks + 1))
    weights = rng.random(k) + 0.25
    weights /= weights.sum()
    values = rng.uniform(0.05, 0.95, size=(k, k))
    values = (values + values.T) / 2.0
    return StepGraphon(weights, values)


@pytest.fixture
def graphon_suite() -> list[StepGraphon]:
    """20 seeded random step graphons with at most 4 blocks."""
    rng = np.random.default_rng(20240817)
    return [random_step_graphon(rng) for _ in range(20)]


@pytest.fixture
def small_patterns() -> dict[str, LabeledGraph]:
    return {
        "k2": LabeledGraph.complete(2),
        "star2": LabeledGraph.star(2),
        "k3": LabeledGraph.complete(3),
    }
