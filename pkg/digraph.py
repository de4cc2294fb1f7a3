"""
Directed graphs, regularity, distance profiles and the distance-sum bound.

A ``Digraph`` is an ordered edge list over vertices ``0..n-1``. Parallel edges
are allowed; self-loops are not. Edge order is whatever the constructor emits
and is kept for serialization.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from config import GRAPH_SETTINGS
from errors import BadParams, Disconnected, NotRegular, UsageError
from workers import map_chunks

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def ceil_div(a: int, b: int) -> int:
    """Exact ceiling of a/b for integers, b > 0."""
    return (a + b - 1) // b


@dataclass
class Digraph:
    n: int
    edges: Tuple[Edge, ...]
    vertex_labels: Optional[Tuple[str, ...]] = None
    _out: List[List[int]] = field(init=False, repr=False, compare=False)
    _in_degree: List[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.edges = tuple((int(t), int(h)) for t, h in self.edges)
        if self.vertex_labels is not None:
            self.vertex_labels = tuple(str(s) for s in self.vertex_labels)
            if len(self.vertex_labels) != self.n:
                raise UsageError("InvalidGraph", "vertex_labels length differs from n",
                                 n=self.n, labels=len(self.vertex_labels))
        if self.n < 1:
            raise UsageError("InvalidGraph", "graph needs at least one vertex", n=self.n)
        if self.n > GRAPH_SETTINGS["max_vertices"]:
            raise BadParams(f"{self.n} vertices exceeds max_vertices", n=self.n,
                            cap=GRAPH_SETTINGS["max_vertices"])
        self._out = [[] for _ in range(self.n)]
        self._in_degree = [0] * self.n
        for index, (tail, head) in enumerate(self.edges):
            if not (0 <= tail < self.n and 0 <= head < self.n):
                raise UsageError("InvalidGraph", f"edge {index} leaves the vertex range",
                                 edge=[tail, head])
            if tail == head:
                raise UsageError("InvalidGraph", f"edge {index} is a self-loop", edge=[tail, head])
            self._out[tail].append(head)
            self._in_degree[head] += 1

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_neighbors(self, v: int) -> List[int]:
        return list(self._out[v])

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return self._in_degree[v]

    @property
    def is_elementary(self) -> bool:
        """True when no ordered pair appears twice."""
        return len(set(self.edges)) == len(self.edges)

    def label(self, v: int) -> str:
        if self.vertex_labels is None:
            return str(v)
        return self.vertex_labels[v]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph


@dataclass
class DistanceProfile:
    """Counts N_1..N_D of ordered pairs at each distance."""
    n: int
    counts: Tuple[int, ...]
    per_vertex: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def diameter(self) -> int:
        return len(self.counts)

    @property
    def distance_sum(self) -> int:
        return sum(k * count for k, count in enumerate(self.counts, start=1))

    def count(self, k: int) -> int:
        if 1 <= k <= len(self.counts):
            return self.counts[k - 1]
        return 0


def relabel(g: Digraph, perm: Sequence[int]) -> Digraph:
    """Conjugate ``g`` by a vertex permutation: vertex v becomes perm[v]."""
    if sorted(perm) != list(range(g.n)):
        raise BadParams("relabeling is not a permutation of the vertices")
    labels = None
    if g.vertex_labels is not None:
        inverse = [0] * g.n
        for v, image in enumerate(perm):
            inverse[image] = v
        labels = tuple(g.vertex_labels[inverse[w]] for w in range(g.n))
    return Digraph(g.n, tuple((perm[t], perm[h]) for t, h in g.edges), labels)


def check_regular(g: Digraph) -> int:
    """Return d when every vertex has in-degree = out-degree = d."""
    d = g.out_degree(0)
    for v in range(g.n):
        if g.in_degree(v) != d or g.out_degree(v) != d:
            raise NotRegular(v, g.in_degree(v), g.out_degree(v), d)
    return d


def _distance_rows(graph: nx.MultiDiGraph, n: int, sources: Sequence[int]) -> List[Dict[int, int]]:
    rows = []
    for source in sources:
        lengths = nx.single_source_shortest_path_length(graph, source)
        if len(lengths) < n:
            missing = next(v for v in range(n) if v not in lengths)
            raise Disconnected(source, missing)
        histogram: Dict[int, int] = {}
        for dist in lengths.values():
            if dist:
                histogram[dist] = histogram.get(dist, 0) + 1
        rows.append(histogram)
    return rows


def distance_profile(g: Digraph, per_vertex: bool = False,
                     workers: Optional[int] = None) -> DistanceProfile:
    """
    Breadth-first distances from every source.

    Raises Disconnected naming the first source that misses a vertex and the
    first vertex it misses.
    """
    graph = g.to_networkx()
    sources = list(range(g.n))
    chunks = map_chunks(lambda chunk: _distance_rows(graph, g.n, chunk), sources, workers=workers)
    rows = [row for chunk in chunks for row in chunk]

    diameter = max((max(row) for row in rows if row), default=0)
    table = np.zeros((g.n, diameter + 1), dtype=np.int64)
    for source, row in enumerate(rows):
        table[source, 0] = 1
        for dist, count in row.items():
            table[source, dist] = count
    counts = tuple(int(x) for x in table[:, 1:].sum(axis=0))
    logger.info(f"Distance profile: n={g.n}, diameter={diameter}, counts={counts}")
    return DistanceProfile(g.n, counts, table if per_vertex else None)


def theta_from_profile(profile: DistanceProfile, d: int) -> int:
    if profile.n == 1:
        return 0   # nothing to exchange
    return ceil_div(profile.distance_sum, profile.n * d)


def theta(g: Digraph, profile: Optional[DistanceProfile] = None) -> int:
    """ceil(sum_k k*N_k / (n*d)) in exact integers."""
    d = check_regular(g)
    if profile is None:
        profile = distance_profile(g)
    return theta_from_profile(profile, d)


def diameter2_bound(n: int, d: int) -> int:
    """theta of any d-regular diameter-2 graph on n vertices."""
    if d < 1 or n < 2:
        raise BadParams("diameter2_bound needs n >= 2 and d >= 1", n=n, d=d)
    return ceil_div(2 * (n - 1), d) - 1
