"""Finite labeled graphs and multigraphs: joins, automorphisms, copy counting.

Vertices are labeled 1..n throughout. Edges of simple graphs are unordered
pairs stored as (a, b) with a < b; multigraph edges carry a multiplicity.
All types are immutable and safe to share across workers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

Edge = tuple[int, int]

# Brute-force automorphism enumeration refuses larger patterns.
AUTOMORPHISM_VERTEX_BOUND = 10
# Copy counting and density computations refuse patterns above this size.
PATTERN_VERTEX_BOUND = 8


def _sorted_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class LabeledGraph:
    """Simple graph on the vertex set {1, ..., vertex_count}."""

    vertex_count: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be a positive integer")
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (1 <= a < b <= self.vertex_count):
                raise ValueError(f"edge ({a},{b}) out of range or not sorted")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "LabeledGraph":
        """Build a graph, normalizing edge orientation and dropping duplicates."""
        return cls(vertex_count, frozenset(_sorted_edge(a, b) for a, b in edges))

    @classmethod
    def complete(cls, r: int) -> "LabeledGraph":
        return cls.from_edges(r, itertools.combinations(range(1, r + 1), 2))

    @classmethod
    def star(cls, leaf_count: int) -> "LabeledGraph":
        """Star with center 1 and leaves 2..leaf_count+1."""
        return cls.from_edges(leaf_count + 1, ((1, j) for j in range(2, leaf_count + 2)))

    @classmethod
    def path(cls, edge_count: int) -> "LabeledGraph":
        """Path 1-2-...-(edge_count+1)."""
        return cls.from_edges(edge_count + 1, ((i, i + 1) for i in range(1, edge_count + 1)))

    @classmethod
    def cycle(cls, length: int) -> "LabeledGraph":
        if length < 3:
            raise ValueError("cycle needs at least 3 vertices")
        edges = [(i, i + 1) for i in range(1, length)] + [(1, length)]
        return cls.from_edges(length, edges)

    @classmethod
    def empty(cls, vertex_count: int) -> "LabeledGraph":
        return cls(vertex_count, frozenset())

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return _sorted_edge(a, b) in self.edges

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for a, b in self.edges:
            deg[a - 1] += 1
            deg[b - 1] += 1
        return tuple(deg)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_json_dict(self) -> dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "LabeledGraph":
        return cls.from_edges(int(data["n"]), ((int(a), int(b)) for a, b in data["edges"]))


@dataclass(frozen=True)
class MultiGraph:
    """Loop-free multigraph: unordered edges with multiplicity >= 1."""

    vertex_count: int
    edges: tuple[tuple[Edge, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be a positive integer")
        seen: set[Edge] = set()
        for (a, b), mult in self.edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (1 <= a < b <= self.vertex_count):
                raise ValueError(f"edge ({a},{b}) out of range or not sorted")
            if mult < 1:
                raise ValueError(f"multiplicity of ({a},{b}) must be >= 1")
            if (a, b) in seen:
                raise ValueError(f"duplicate edge entry ({a},{b})")
            seen.add((a, b))

    @classmethod
    def from_multiplicities(cls, vertex_count: int, mult: Mapping[tuple[int, int], int]) -> "MultiGraph":
        items = {(_sorted_edge(a, b)): m for (a, b), m in mult.items()}
        return cls(vertex_count, tuple(sorted(items.items())))

    @property
    def edge_count(self) -> int:
        """Number of distinct edges (multiplicities ignored)."""
        return len(self.edges)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.edges)

    def multiplicity(self, a: int, b: int) -> int:
        e = _sorted_edge(a, b)
        for edge, m in self.edges:
            if edge == e:
                return m
        return 0

    def as_simple(self) -> LabeledGraph:
        """Clamp every multiplicity to 1."""
        return LabeledGraph(self.vertex_count, frozenset(e for e, _ in self.edges))

    def to_json_dict(self) -> dict:
        return {
            "n": self.vertex_count,
            "edges": [list(e) for e, _ in self.edges],
            "mult": [m for _, m in self.edges],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "MultiGraph":
        pairs = {(int(a), int(b)): int(m) for (a, b), m in zip(data["edges"], data["mult"])}
        return cls.from_multiplicities(int(data["n"]), pairs)


@dataclass(frozen=True)
class CopySet:
    """All subgraphs of the complete graph on `vertices` isomorphic to `pattern`."""

    pattern: LabeledGraph
    vertices: tuple[int, ...]
    copies: tuple[frozenset[Edge], ...]

    def __len__(self) -> int:
        return len(self.copies)

    def __iter__(self) -> Iterator[frozenset[Edge]]:
        return iter(self.copies)

    def as_graphs(self) -> list[LabeledGraph]:
        """Each copy as a labeled graph on {1..max(vertices)}."""
        n = max(self.vertices)
        return [LabeledGraph(n, edges) for edges in self.copies]


def automorphism_count(H: LabeledGraph, max_vertices: int = AUTOMORPHISM_VERTEX_BOUND) -> int:
    """Number of vertex permutations of H mapping its edge set onto itself.

    Brute force over all permutations; refuses patterns with more than
    `max_vertices` vertices.
    """
    v = H.vertex_count
    if v > max_vertices:
        raise ValueError(f"automorphism enumeration limited to {max_vertices} vertices, got {v}")
    edges = H.edges
    count = 0
    for perm in itertools.permutations(range(1, v + 1)):
        if all(_sorted_edge(perm[a - 1], perm[b - 1]) in edges for a, b in edges):
            count += 1
    return count


def copy_set(H: LabeledGraph, vertices: Iterable[int]) -> CopySet:
    """Distinct edge sets on `vertices` isomorphic to H.

    The result has exactly |V(H)|!/|Aut(H)| members.
    """
    verts = tuple(vertices)
    if len(set(verts)) != len(verts):
        raise ValueError("vertex set contains duplicates")
    if len(verts) != H.vertex_count:
        raise ValueError(f"need exactly {H.vertex_count} vertices, got {len(verts)}")
    copies: set[frozenset[Edge]] = set()
    for perm in itertools.permutations(verts):
        copies.add(frozenset(_sorted_edge(perm[a - 1], perm[b - 1]) for a, b in H.edges))
    ordered = tuple(sorted(copies, key=sorted))
    return CopySet(H, verts, ordered)


def _check_vertex(H: LabeledGraph, v: int, name: str) -> None:
    if not (1 <= v <= H.vertex_count):
        raise ValueError(f"vertex {v} not in {name}")


def _relabel_second(
    H1: LabeledGraph, H2: LabeledGraph, identified: dict[int, int]
) -> dict[int, int]:
    """Map H2's vertices into the joined graph: identified ones to their H1
    partner, the rest to fresh labels |V(H1)|+1, ... in increasing order."""
    mapping = dict(identified)
    nxt = H1.vertex_count + 1
    for u in range(1, H2.vertex_count + 1):
        if u not in mapping:
            mapping[u] = nxt
            nxt += 1
    return mapping


def vertex_join(H1: LabeledGraph, a: int, H2: LabeledGraph, b: int) -> LabeledGraph:
    """Glue H1 and H2 by identifying vertex a of H1 with vertex b of H2.

    The result keeps H1's labels and appends H2's remaining vertices.
    """
    _check_vertex(H1, a, "H1")
    _check_vertex(H2, b, "H2")
    mapping = _relabel_second(H1, H2, {b: a})
    edges = set(H1.edges)
    edges.update(_sorted_edge(mapping[x], mapping[y]) for x, y in H2.edges)
    return LabeledGraph(H1.vertex_count + H2.vertex_count - 1, frozenset(edges))


def _check_join_edges(H1: LabeledGraph, e1: tuple[int, int], H2: LabeledGraph, e2: tuple[int, int]):
    a, b = e1
    c, d = e2
    if not H1.has_edge(a, b):
        raise ValueError(f"({a},{b}) is not an edge of H1")
    if not H2.has_edge(c, d):
        raise ValueError(f"({c},{d}) is not an edge of H2")
    return a, b, c, d


def weak_edge_join(
    H1: LabeledGraph, e1: tuple[int, int], H2: LabeledGraph, e2: tuple[int, int]
) -> LabeledGraph:
    """Glue H1 and H2 along the edges e1=(a,b), e2=(c,d), keeping one copy
    of the shared edge.

    Identification is positional: a with c and b with d, in the order the
    pairs are passed.
    """
    a, b, c, d = _check_join_edges(H1, e1, H2, e2)
    mapping = _relabel_second(H1, H2, {c: a, d: b})
    edges = set(H1.edges)
    edges.update(_sorted_edge(mapping[x], mapping[y]) for x, y in H2.edges)
    return LabeledGraph(H1.vertex_count + H2.vertex_count - 2, frozenset(edges))


def strong_edge_join(
    H1: LabeledGraph, e1: tuple[int, int], H2: LabeledGraph, e2: tuple[int, int]
) -> MultiGraph:
    """Glue H1 and H2 along the edges e1=(a,b), e2=(c,d), keeping both copies
    of the shared edge (it gets multiplicity 2)."""
    a, b, c, d = _check_join_edges(H1, e1, H2, e2)
    mapping = _relabel_second(H1, H2, {c: a, d: b})
    mult: dict[Edge, int] = {e: 1 for e in H1.edges}
    for x, y in H2.edges:
        e = _sorted_edge(mapping[x], mapping[y])
        mult[e] = mult.get(e, 0) + 1
    return MultiGraph(H1.vertex_count + H2.vertex_count - 2, tuple(sorted(mult.items())))


def _pattern_order(H: LabeledGraph) -> list[int]:
    """Vertex order for backtracking: max degree first, then greedily the
    vertex with the most already-placed neighbors."""
    deg = H.degrees()
    nbrs: dict[int, set[int]] = {u: set() for u in range(1, H.vertex_count + 1)}
    for a, b in H.edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(1, H.vertex_count + 1))
    while remaining:
        u = max(remaining, key=lambda w: (len(nbrs[w] & placed), deg[w - 1], -w))
        order.append(u)
        placed.add(u)
        remaining.remove(u)
    return order


def count_injective_homomorphisms(H: LabeledGraph, G: LabeledGraph) -> int:
    """Injective maps V(H) -> V(G) sending every edge of H to an edge of G.

    Backtracking over a bitmask adjacency with degree pruning; the final
    pattern vertex is counted by popcount instead of iterated.
    """
    if H.vertex_count > PATTERN_VERTEX_BOUND:
        raise ValueError(f"pattern limited to {PATTERN_VERTEX_BOUND} vertices")
    if H.vertex_count > G.vertex_count:
        raise ValueError("pattern has more vertices than the host graph")
    n = G.vertex_count
    adj = [0] * (n + 1)
    for a, b in G.edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    gdeg = [m.bit_count() for m in adj]
    order = _pattern_order(H)
    pos = {u: i for i, u in enumerate(order)}
    hdeg = H.degrees()

    all_hosts = ((1 << (n + 1)) - 1) & ~1  # bits 1..n
    allowed = []
    for u in order:
        mask = 0
        need = hdeg[u - 1]
        for w in range(1, n + 1):
            if gdeg[w] >= need:
                mask |= 1 << w
        allowed.append(mask & all_hosts)

    # Each pattern edge constrains its later endpoint in the order.
    parents: list[list[int]] = [[] for _ in order]
    for a, b in H.edges:
        i, j = pos[a], pos[b]
        if i > j:
            i, j = j, i
        parents[j].append(i)

    assigned = [0] * len(order)
    last = len(order) - 1

    def rec(i: int, used: int) -> int:
        cand = allowed[i] & ~used
        for j in parents[i]:
            cand &= adj[assigned[j]]
        if i == last:
            return cand.bit_count()
        total = 0
        m = cand
        while m:
            bit = m & -m
            assigned[i] = bit.bit_length() - 1
            total += rec(i + 1, used | bit)
            m ^= bit
        return total

    return rec(0, 0)


def count_copies(H: LabeledGraph, G: LabeledGraph) -> int:
    """Number of subgraphs of G isomorphic to H (injective homomorphisms
    divided by the automorphism count)."""
    inj = count_injective_homomorphisms(H, G)
    aut = automorphism_count(H)
    if inj % aut != 0:
        raise RuntimeError("injective homomorphism count not divisible by |Aut|")
    return inj // aut


def falling_factorial(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return math.prod(range(n - k + 1, n + 1))
