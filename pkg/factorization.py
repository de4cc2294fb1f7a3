"""
1-factorizations, words and spanning factorizations.

Factor indices are 1-based wherever a human or a file sees them (F_1..F_d) and
0-based inside ``Factorization.succ``.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from config import FACTOR_SETTINGS
from digraph import DistanceProfile, Digraph, ceil_div, check_regular, theta_from_profile
from errors import (BadFactorIndex, Disconnected, FactorNotPermutation, InvalidArtifact,
                    MatchingFailed, SpanningSearchFailed, UsageError)
from workers import map_chunks

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass
class Factorization:
    """d successor permutations; succ[i][v] is the head of the F_{i+1} edge out of v."""
    d: int
    succ: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        self.succ = tuple(tuple(int(x) for x in row) for row in self.succ)
        if len(self.succ) != self.d:
            raise InvalidArtifact(f"expected {self.d} factors, got {len(self.succ)}")
        for index, row in enumerate(self.succ, start=1):
            check_permutation(row, index)

    @property
    def n(self) -> int:
        return len(self.succ[0]) if self.succ else 0

    def edges(self) -> List[Tuple[int, int]]:
        return [(v, row[v]) for row in self.succ for v in range(len(row))]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.succ, dtype=np.int64)


@dataclass
class WordList:
    d: int
    words: Tuple[Word, ...]

    def __post_init__(self):
        self.words = tuple(tuple(int(x) for x in w) for w in self.words)
        if not self.words or self.words[0] != ():
            raise UsageError("InvalidWords", "words[0] must be the empty word")
        for w in self.words:
            for letter in w:
                if not 1 <= letter <= self.d:
                    raise BadFactorIndex(letter, self.d)

    @property
    def n(self) -> int:
        return len(self.words)

    @property
    def max_length(self) -> int:
        return max(len(w) for w in self.words)

    def occurrences(self) -> List[Tuple[int, int]]:
        """All (word, position) pairs, in (word, position) order."""
        return [(i, p) for i, w in enumerate(self.words) for p in range(len(w))]


@dataclass
class SpanningResult:
    ok: bool
    witness: Optional[Tuple[int, int, int]] = None   # (v, i, j) with v.w_i == v.w_j, i < j
    collisions: int = 0

    def to_dict(self) -> Dict:
        result = {"spanning": "ok" if self.ok else "fail", "collisions": self.collisions}
        if self.witness is not None:
            v, i, j = self.witness
            result["witness"] = {"vertex": v, "i": i, "j": j}
        return result


@dataclass
class UsageMetrics:
    counts: Tuple[int, ...]
    max_count: int
    avg_ceiling: int
    theta: int
    balanced: bool
    short: bool
    optimal: bool
    ordered: bool

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "factor": [f"F_{i}" for i in range(1, len(self.counts) + 1)],
            "count": list(self.counts),
        })

    def to_dict(self) -> Dict:
        return {
            "counts": list(self.counts),
            "max": self.max_count,
            "avg_ceiling": self.avg_ceiling,
            "theta": self.theta,
            "balanced": self.balanced,
            "short": self.short,
            "optimal": self.optimal,
            "ordered": self.ordered,
        }


def check_permutation(row: Sequence[int], factor: int) -> None:
    seen = [False] * len(row)
    for v, head in enumerate(row):
        if not 0 <= head < len(row) or seen[head] or head == v:
            raise FactorNotPermutation(factor, v)
        seen[head] = True


def check_covers(g: Digraph, f: Factorization) -> None:
    """The factor edges must be exactly the edge multiset of g."""
    if f.n != g.n:
        raise InvalidArtifact("factorization and graph disagree on n", graph_n=g.n, factors_n=f.n)
    want = Counter(g.edges)
    have = Counter(f.edges())
    if want != have:
        extra = sorted((have - want).elements())[:1]
        missing = sorted((want - have).elements())[:1]
        raise InvalidArtifact("factors do not cover the graph's edges",
                              extra=[list(e) for e in extra], missing=[list(e) for e in missing])


def decompose_into_factors(g: Digraph) -> Factorization:
    """
    Split a d-regular digraph into d 1-factors.

    Each round matches out-copies u' to in-copies v'' over the edges still
    unused; the leftover graph stays regular, so every round's maximum
    matching is perfect. Deterministic for a given edge order.
    """
    d = check_regular(g)
    n = g.n
    remaining: Dict[Tuple[int, int], int] = {}
    for edge in g.edges:
        remaining[edge] = remaining.get(edge, 0) + 1

    succ: List[Tuple[int, ...]] = []
    for round_index in range(d):
        bipartite = nx.Graph()
        bipartite.add_nodes_from(range(n), bipartite=0)
        bipartite.add_nodes_from(range(n, 2 * n), bipartite=1)
        bipartite.add_edges_from((u, n + v) for (u, v), mult in remaining.items() if mult > 0)
        matching = nx.bipartite.hopcroft_karp_matching(bipartite, top_nodes=range(n))
        matched = sum(1 for u in range(n) if u in matching)
        if matched != n:
            raise MatchingFailed(round_index + 1, matched, n)
        row = tuple(matching[u] - n for u in range(n))
        for u, v in enumerate(row):
            remaining[(u, v)] -= 1
        succ.append(row)

    f = Factorization(d, tuple(succ))
    check_covers(g, f)
    logger.info(f"Decomposed {n}-vertex {d}-regular graph into {d} factors")
    return f


def apply_word(f: Factorization, v: int, word: Sequence[int]) -> List[int]:
    """The path v, v.w[0], v.w[0]w[1], ... ; last element is the endpoint."""
    path = [v]
    for letter in word:
        if not 1 <= letter <= f.d:
            raise BadFactorIndex(letter, f.d)
        path.append(f.succ[letter - 1][path[-1]])
    return path


def endpoint_table(f: Factorization, wl: WordList, sources: Optional[Sequence[int]] = None) -> np.ndarray:
    """table[i, k] = sources[k] . words[i]."""
    succ = f.as_array()
    start = np.arange(f.n) if sources is None else np.asarray(sources, dtype=np.int64)
    table = np.empty((wl.n, len(start)), dtype=np.int64)
    for i, word in enumerate(wl.words):
        current = start
        for letter in word:
            current = succ[letter - 1][current]
        table[i] = current
    return table


def _first_collision(column: np.ndarray) -> Tuple[int, int]:
    first_seen: Dict[int, int] = {}
    for j, target in enumerate(column.tolist()):
        if target in first_seen:
            return first_seen[target], j
        first_seen[target] = j
    raise AssertionError("column has no collision")


def _spanning_chunk(f: Factorization, wl: WordList, sources: Sequence[int]) -> Tuple[int, Optional[Tuple[int, int, int]]]:
    table = endpoint_table(f, wl, sources)
    ordered = np.sort(table, axis=0)
    duplicates = (ordered[1:] == ordered[:-1]).sum(axis=0)
    collisions = int(duplicates.sum())
    witness = None
    bad = np.nonzero(duplicates)[0]
    if len(bad):
        k = int(bad[0])
        i, j = _first_collision(table[:, k])
        witness = (int(sources[k]), i, j)
    return collisions, witness


def verify_spanning(f: Factorization, wl: WordList, workers: Optional[int] = None) -> SpanningResult:
    """Ok iff, from every vertex, the n word endpoints are pairwise distinct."""
    if wl.d != f.d:
        raise UsageError("DegreeMismatch", "word list and factorization disagree on d",
                         words_d=wl.d, factors_d=f.d)
    if wl.n != f.n:
        raise UsageError("WordCountMismatch", f"expected {f.n} words, got {wl.n}",
                         n=f.n, words=wl.n)
    parts = map_chunks(lambda chunk: _spanning_chunk(f, wl, chunk), list(range(f.n)), workers=workers)
    collisions = sum(c for c, _ in parts)
    witness = next((w for _, w in parts if w is not None), None)
    return SpanningResult(witness is None, witness, collisions)


def is_hierarchical(wl: WordList) -> bool:
    """True iff the word set is prefix-closed."""
    present = set(wl.words)
    return all(w[:-1] in present for w in wl.words if w)


def broadcast_tree_counts(wl: WordList) -> Optional[Tuple[int, ...]]:
    """
    For a hierarchical list, the number of broadcast tree edges carried by each
    factor (each non-empty word is one tree edge, labeled by its last letter).
    None when the list is not prefix-closed.
    """
    if not is_hierarchical(wl):
        return None
    counts = [0] * wl.d
    for w in wl.words:
        if w:
            counts[w[-1] - 1] += 1
    return tuple(counts)


def factor_counts(wl: WordList) -> Tuple[int, ...]:
    counts = [0] * wl.d
    for w in wl.words:
        for letter in w:
            counts[letter - 1] += 1
    return tuple(counts)


def usage_metrics(wl: WordList, profile: DistanceProfile, d: int) -> UsageMetrics:
    if wl.d != d:
        raise UsageError("DegreeMismatch", "word list and graph disagree on d", words_d=wl.d, d=d)
    counts = factor_counts(wl)
    max_count = max(counts)
    avg_ceiling = ceil_div(sum(counts), d)
    bound = theta_from_profile(profile, d)
    ordered = bound <= avg_ceiling <= max_count
    if not ordered:
        logger.warning(f"Usage chain broken: theta={bound}, avg_ceiling={avg_ceiling}, max={max_count}")
    return UsageMetrics(
        counts=counts,
        max_count=max_count,
        avg_ceiling=avg_ceiling,
        theta=bound,
        balanced=max_count == avg_ceiling,
        short=avg_ceiling == bound,
        optimal=max_count == bound,
        ordered=ordered,
    )


def bfs_tree(f: Factorization, priority: Sequence[int], root: int = 0) -> Dict[int, Word]:
    """
    Breadth-first shortest-path tree from ``root`` trying factors in
    ``priority`` order (0-based). Maps each reached vertex to its tree word,
    in discovery order.
    """
    seen: Dict[int, Word] = {root: ()}
    frontier = [root]
    while frontier:
        next_frontier = []
        for u in frontier:
            for factor in priority:
                w = f.succ[factor][u]
                if w not in seen:
                    seen[w] = seen[u] + (factor + 1,)
                    next_frontier.append(w)
        frontier = next_frontier
    return seen


def bfs_tree_words(f: Factorization, priority: Sequence[int], root: int = 0) -> Optional[WordList]:
    """Tree words in discovery order, or None when the tree misses a vertex."""
    tree = bfs_tree(f, priority, root)
    if len(tree) < f.n:
        return None
    return WordList(f.d, tuple(tree.values()))


def search_spanning(g: Digraph, f: Factorization, budget: Optional[int] = None,
                    seed: Optional[int] = None) -> WordList:
    """
    Try shortest-path tree word lists from vertex 0 until one is spanning.

    Attempt k < d rotates the factor priority by k (attempt 0 is F_1 first);
    later attempts shuffle it with ``random.Random(seed + k)``.
    """
    check_regular(g)
    check_covers(g, f)
    budget = FACTOR_SETTINGS["search_budget"] if budget is None else budget
    seed = FACTOR_SETTINGS["default_seed"] if seed is None else seed
    base = list(range(f.d))

    best: Optional[Dict] = None
    for attempt in range(budget):
        if attempt < f.d:
            priority = base[attempt:] + base[:attempt]
        else:
            priority = base[:]
            random.Random(seed + attempt).shuffle(priority)
        tree = bfs_tree(f, priority)
        if len(tree) < f.n:
            raise Disconnected(0, next(v for v in range(f.n) if v not in tree))
        wl = WordList(f.d, tuple(tree.values()))
        result = verify_spanning(f, wl)
        if result.ok:
            logger.info(f"search_spanning succeeded on attempt {attempt + 1} with priority {[p + 1 for p in priority]}")
            return wl
        logger.info(f"Attempt {attempt + 1}: {result.collisions} collisions")
        if best is None or result.collisions < best["collisions"]:
            v, i, j = result.witness
            best = {"vertex": v, "i": i, "j": j, "collisions": result.collisions,
                    "priority": [p + 1 for p in priority]}
    raise SpanningSearchFailed(budget, best or {})
