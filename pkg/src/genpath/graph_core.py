"""Graph families built from antiregular blocks, plus degree-sequence combinatorics.

Vertices are labeled 1..N everywhere a label leaves this module; the
index arithmetic of the interconnection (terminal vertex ``i*k`` joined to
vertex ``i*k + kappa_bar``) relies on that.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Labeled simple undirected graph on vertices ``1..num_vertices``."""

    num_vertices: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.num_vertices < 1:
            raise ValueError(f"num_vertices must be >= 1, got {self.num_vertices}")
        normalized = set()
        for edge in self.edges:
            u, v = edge
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            u, v = min(u, v), max(u, v)
            if u < 1 or v > self.num_vertices:
                raise ValueError(f"edge {edge} outside 1..{self.num_vertices}")
            normalized.add((int(u), int(v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[Sequence[int]]) -> "Graph":
        edge_list = [tuple(e) for e in edges]
        seen = set()
        for u, v in edge_list:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return cls(num_vertices, frozenset(edge_list))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self) -> list[int]:
        """Degree of each vertex, indexed by label - 1 (not sorted)."""
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u - 1] += 1
            deg[v - 1] += 1
        return deg

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in self.sorted_edges():
            adj[u - 1].append(v)
            adj[v - 1].append(u)
        return adj

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.num_vertices, self.num_vertices))
        for u, v in self.edges:
            a[u - 1, v - 1] = a[v - 1, u - 1] = 1.0
        return a

    def is_connected(self) -> bool:
        return len(_bfs_distances(self.neighbors(), 1)) == self.num_vertices


@dataclass(frozen=True)
class DegreeSequence:
    """Non-increasing sequence of non-negative integers."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(x) for x in self.values)
        if not vals:
            raise ValueError("degree sequence must have length >= 1")
        if any(x < 0 for x in vals):
            raise ValueError(f"negative degree in {vals}")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"degree sequence must be non-increasing: {vals}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values: Iterable[int]) -> "DegreeSequence":
        """Build from arbitrary order by sorting first."""
        return cls(tuple(sorted((int(v) for v in values), reverse=True)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class BlockLayout:
    """``n`` copies of the ``k``-vertex antiregular graph, optionally with one appended vertex."""

    k: int
    n: int
    extra_vertex: bool = False

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"block size k must be >= 2, got {self.k}")
        if self.n < 1:
            raise ValueError(f"block count n must be >= 1, got {self.n}")

    @property
    def kappa_bar(self) -> int:
        return math.ceil(self.k / 2)

    @property
    def kappa_under(self) -> int:
        return self.k // 2

    @property
    def beta(self) -> int:
        return 1 if self.k % 2 == 0 else 0

    @property
    def num_vertices(self) -> int:
        return self.k * self.n + (1 if self.extra_vertex else 0)


@dataclass(frozen=True)
class ControlSetup:
    """A graph with a single input attached at ``input_vertex`` (b = e_input_vertex)."""

    graph: Graph
    input_vertex: int

    def __post_init__(self) -> None:
        if not 1 <= self.input_vertex <= self.graph.num_vertices:
            raise ValueError(
                f"input vertex {self.input_vertex} outside 1..{self.graph.num_vertices}"
            )

    @property
    def b(self) -> np.ndarray:
        vec = np.zeros(self.graph.num_vertices)
        vec[self.input_vertex - 1] = 1.0
        return vec


# ---------------------------------------------------------------------------
# degree sequences


def degree_sequence(g: Graph) -> DegreeSequence:
    return DegreeSequence.of(g.degrees())


def conjugate(d: DegreeSequence) -> DegreeSequence:
    """d*_i = #{j : d_j >= i}, same length as ``d`` (zero padded)."""
    return DegreeSequence(tuple(sum(1 for x in d if x >= i) for i in range(1, len(d) + 1)))


def trace_of(d: DegreeSequence) -> int:
    return sum(1 for j, x in enumerate(d, start=1) if x >= j)


@dataclass(frozen=True)
class GraphicalReport:
    graphical: bool
    slacks: tuple[int, ...]
    even_sum: bool


def graphical_report(d: DegreeSequence) -> GraphicalReport:
    """Slack ``sum_{i<=j} d*_i - sum_{i<=j} (d_i + 1)`` for ``j = 1..trace``.

    The sequence is graphical iff every slack is >= 0 and the degree sum is even.
    """
    dstar = conjugate(d)
    slacks = []
    lhs = rhs = 0
    for j in range(trace_of(d)):
        lhs += d[j] + 1
        rhs += dstar[j]
        slacks.append(rhs - lhs)
    even = sum(d) % 2 == 0
    return GraphicalReport(all(s >= 0 for s in slacks) and even, tuple(slacks), even)


def is_graphical(d: DegreeSequence) -> bool:
    return graphical_report(d).graphical


def is_threshold(d: DegreeSequence) -> bool:
    report = graphical_report(d)
    if not report.graphical:
        raise ValueError(f"{tuple(d)} is not graphical")
    return all(s == 0 for s in report.slacks)


def erdos_gallai(d: Sequence[int]) -> bool:
    """Independent graphicality test (Erdos-Gallai), used as an oracle."""
    vals = sorted((int(x) for x in d), reverse=True)
    if sum(vals) % 2:
        return False
    n = len(vals)
    for r in range(1, n + 1):
        lhs = sum(vals[:r])
        rhs = r * (r - 1) + sum(min(x, r) for x in vals[r:])
        if lhs > rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# builders


def build_path(v: int) -> Graph:
    if v < 1:
        raise ValueError(f"path needs v >= 1 vertices, got {v}")
    return Graph(v, frozenset((i, i + 1) for i in range(1, v)))


def _antiregular_edges(k: int, offset: int = 0) -> list[tuple[int, int]]:
    return [
        (offset + i, offset + j)
        for i in range(1, k + 1)
        for j in range(i + 1, k + 1)
        if i + j <= k + 1
    ]


def build_antiregular(k: int) -> Graph:
    """Connected antiregular graph on ``k`` vertices: ``{i, j}`` is an edge iff ``i + j <= k + 1``.

    Labels come out in non-increasing degree order; the degree-repeating pair
    sits at ``ceil(k/2)`` and ``ceil(k/2) + 1``.
    """
    if k < 2:
        raise ValueError(f"antiregular block needs k >= 2, got {k}")
    return Graph(k, frozenset(_antiregular_edges(k)))


def connector_edges(layout: BlockLayout) -> list[tuple[int, int]]:
    """Cross edges ``{i*k, i*k + kappa_bar}`` for ``i = 1..n-1``."""
    k, kb = layout.k, layout.kappa_bar
    return [(i * k, i * k + kb) for i in range(1, layout.n)]


def interconnect_antiregular(layout: BlockLayout, *, drop_cross_edges: bool = False) -> Graph:
    """Chain ``n`` antiregular blocks, terminal vertex of block p to vertex kappa_bar of block p+1.

    ``drop_cross_edges`` exists only to exercise negative paths in the
    verification suite; the result is then disconnected for ``n >= 2``.
    """
    if layout.extra_vertex:
        raise ValueError("interconnect_antiregular expects extra_vertex=False")
    k = layout.k
    edges = []
    for p in range(layout.n):
        edges.extend(_antiregular_edges(k, offset=p * k))
    if not drop_cross_edges:
        edges.extend(connector_edges(layout))
    return Graph(k * layout.n, frozenset(edges))


def append_vertex(g: Graph, n_c: int) -> Graph:
    if not 1 <= n_c <= g.num_vertices:
        raise ValueError(f"attachment vertex {n_c} outside 1..{g.num_vertices}")
    n_a = g.num_vertices + 1
    return Graph(n_a, g.edges | {(n_c, n_a)})


def build_generalized_path(layout: BlockLayout, *, drop_cross_edges: bool = False) -> ControlSetup:
    """Interconnected blocks with the input on the degree-repeating vertex of block 1.

    With ``extra_vertex`` the new vertex ``k*n + 1`` hangs off that vertex and
    carries the input instead.
    """
    base = BlockLayout(layout.k, layout.n, extra_vertex=False)
    g = interconnect_antiregular(base, drop_cross_edges=drop_cross_edges)
    if not layout.extra_vertex:
        return ControlSetup(g, layout.kappa_bar)
    return ControlSetup(append_vertex(g, layout.kappa_bar), g.num_vertices + 1)


# ---------------------------------------------------------------------------
# metric properties


def _bfs_distances(adj: list[list[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u - 1]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    adj = g.neighbors()
    best = 0
    for s in range(1, g.num_vertices + 1):
        dist = _bfs_distances(adj, s)
        if len(dist) != g.num_vertices:
            raise ValueError("diameter undefined for a disconnected graph")
        best = max(best, max(dist.values()))
    return best


def max_degree(g: Graph) -> int:
    if not g.is_connected():
        raise ValueError("max_degree expects a connected graph")
    return max(g.degrees())


def laplacian(g: Graph) -> np.ndarray:
    a = g.adjacency()
    return np.diag(a.sum(axis=1)) - a
