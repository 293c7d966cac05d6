"""Exact homomorphism densities on step graphons.

The density of a pattern F in a step kernel W is the sum over all maps from
V(F) to blocks of the product of block weights and edge values. That sum is
a tensor-network contraction (one index per pattern vertex, one matrix per
edge) and is evaluated exactly, in time far below the naive k^|V(F)| bound
for the small patterns in scope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import (
    PATTERN_VERTEX_BOUND,
    Edge,
    LabeledGraph,
    MultiGraph,
    automorphism_count,
    falling_factorial,
)
from .graphon import StepGraphon

# A step computation is declared regular when the defect is at most this.
REGULARITY_TOL = 1e-10

_LETTERS = "abcdefgh"


class DegenerateGraphonError(ValueError):
    """The pair (H, W) pins the subgraph count almost surely: W is the
    all-ones kernel, or H has zero density in W."""

    def __init__(self, reason: str, message: str) -> None:
        self.reason = reason
        super().__init__(message)


def _edge_items(F: LabeledGraph | MultiGraph) -> list[tuple[Edge, int]]:
    if isinstance(F, MultiGraph):
        return list(F.edges)
    return [(e, 1) for e in F.sorted_edges()]


def _contract(F, W: StepGraphon, marks: tuple[int, ...] = ()) -> np.ndarray:
    v = F.vertex_count
    if v > PATTERN_VERTEX_BOUND:
        raise ValueError(f"pattern limited to {PATTERN_VERTEX_BOUND} vertices, got {v}")
    marked = set(marks)
    k = W.block_count
    subscripts: list[str] = []
    operands: list[np.ndarray] = []
    for u in range(1, v + 1):
        if u not in marked:
            subscripts.append(_LETTERS[u - 1])
            operands.append(W.block_weights)
    for (a, b), mult in _edge_items(F):
        M = W.values if mult == 1 else W.values**mult
        subscripts.append(_LETTERS[a - 1] + _LETTERS[b - 1])
        operands.append(M)
    for u in marks:  # keeps isolated marked vertices addressable
        subscripts.append(_LETTERS[u - 1])
        operands.append(np.ones(k))
    out = "".join(_LETTERS[u - 1] for u in marks)
    expr = ",".join(subscripts) + "->" + out
    return np.einsum(expr, *operands, optimize=True)


def hom_density(F: LabeledGraph | MultiGraph, W: StepGraphon) -> float:
    """Homomorphism density t(F, W); multigraph edges enter with their
    multiplicity as a power of the kernel.

    For derived kernels with values outside [0,1] the result may leave
    [0,1] as well.
    """
    return float(_contract(F, W))


@dataclass(frozen=True, eq=False)
class ConditionalDensity:
    """Density of `pattern` with the vertices in `marks` (ordered) pinned to
    coordinates; piecewise constant, stored as one value per block tuple."""

    pattern: LabeledGraph
    marks: tuple[int, ...]
    block_weights: np.ndarray
    values: np.ndarray

    def average(self) -> float:
        """Integrate out the pinned coordinates; recovers hom_density."""
        out = self.values
        for axis in range(len(self.marks)):
            out = np.tensordot(self.block_weights, out, axes=([0], [0]))
        return float(out)


def conditional_density(
    H: LabeledGraph, marks, W: StepGraphon
) -> ConditionalDensity:
    """K-point conditional density of H in W given the ordered marked vertices."""
    mk = tuple(int(a) for a in marks)
    if len(mk) == 0 or len(set(mk)) != len(mk):
        raise ValueError("marks must be a non-empty list of distinct vertices")
    for a in mk:
        if not (1 <= a <= H.vertex_count):
            raise ValueError(f"marked vertex {a} not in the pattern")
    values = _contract(H, W, marks=mk)
    return ConditionalDensity(H, mk, W.block_weights, values)


def mean_count(H: LabeledGraph, W: StepGraphon, n: int) -> float:
    """Expected number of copies of H in a W-random graph on n vertices:
    (n)_{|V(H)|} / |Aut(H)| * t(H, W)."""
    v = H.vertex_count
    if n < v:
        raise ValueError(f"need n >= {v}, got {n}")
    return falling_factorial(n, v) / automorphism_count(H) * hom_density(H, W)


def _check_degenerate(H: LabeledGraph, W: StepGraphon) -> float:
    if not W.is_probability_kernel:
        raise ValueError("regularity is defined for kernels with values in [0,1]")
    if np.all(W.values == 1.0):
        raise DegenerateGraphonError("complete", "kernel is identically 1; count is a.s. constant")
    t = hom_density(H, W)
    if t == 0.0:
        raise DegenerateGraphonError(
            "pattern_free", "pattern has zero density in the kernel; count is a.s. 0"
        )
    return t


def regularity_defect(H: LabeledGraph, W: StepGraphon) -> float:
    """Sup-norm distance between the vertex-averaged 1-point conditional
    density and the plain density t(H, W).

    Zero defect is the regularity that switches the limit law to the
    chi-square-mixture branch. Raises DegenerateGraphonError for the
    all-ones kernel and for H-free kernels.
    """
    t = _check_degenerate(H, W)
    v = H.vertex_count
    total = np.zeros(W.block_count)
    for a in range(1, v + 1):
        total += conditional_density(H, (a,), W).values
    return float(np.max(np.abs(total / v - t)))


def is_regular(H: LabeledGraph, W: StepGraphon, tol: float = REGULARITY_TOL) -> bool:
    return regularity_defect(H, W) <= tol


def two_point_graphon(H: LabeledGraph, W: StepGraphon) -> StepGraphon:
    """Derived kernel averaging the 2-point conditional densities of H over
    all ordered vertex pairs, scaled by 1/(2 |Aut(H)|).

    Lives on W's partition; values may exceed 1. Its degree function equals
    (|V(H)|-1)/(2|Aut(H)|) times the sum of 1-point conditional densities,
    so it is degree-regular exactly when W is H-regular.
    """
    v = H.vertex_count
    if v < 2:
        raise ValueError("pattern needs at least 2 vertices")
    k = W.block_count
    total = np.zeros((k, k))
    for a in range(1, v + 1):
        for b in range(a + 1, v + 1):
            vals = conditional_density(H, (a, b), W).values
            total += vals + vals.T  # the (b, a) term is the transpose
    return StepGraphon(W.block_weights, total / (2 * automorphism_count(H)))
