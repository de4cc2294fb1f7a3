"""
Counting formulas for the G(d, D) shortest-path tree.

T(c, t)      leaves at depth k below one node labeled (c, t)
V(c, t)      number of nodes labeled (c, t)
U(j, c, t)   F_j edges leaving the nodes labeled (c, t)
S_k(j, t)    length-k words whose letter at step t is F_j
mu, theta    F_d occurrences over all words, and the distance-sum bound

Everything is exact integer arithmetic. Falling factorials are zero when
the argument or the index is out of range. ``TreeCensus`` counts the same
quantities on a grown tree so each formula has an independent oracle.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

import pandas as pd

from cpgraph import CPTree, grow_tree
from digraph import ceil_div
from errors import BadParams
from factorization import factor_counts

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountContext:
    d: int
    D: int
    k: int

    def __post_init__(self):
        if not 2 <= self.D <= self.d:
            raise BadParams(f"need 2 <= D <= d, got d={self.d}, D={self.D}", d=self.d, D=self.D)
        if not 1 <= self.k <= self.D:
            raise BadParams(f"need 1 <= k <= D, got k={self.k}", k=self.k, D=self.D)


def ff(n: int, k: int) -> int:
    """Falling factorial n(n-1)...(n-k+1); 1 for k = 0, 0 for k < 0 or n < 0."""
    if k < 0 or n < 0:
        return 0
    result = 1
    for i in range(k):
        result *= n - i
    return result


def _in_domain(d: int, k: int, c: int, t: int) -> bool:
    return 1 <= t <= k and 1 <= c <= d - t + 1


@lru_cache(maxsize=None)
def _t_rec(d: int, k: int, c: int, t: int) -> int:
    if not _in_domain(d, k, c, t):
        return 0
    if t == k:
        return 1
    return c * _t_rec(d, k, c - 1, t + 1) + (d + 1 - t - c) * _t_rec(d, k, c, t + 1)


def T_rec(c: int, t: int, ctx: CountContext) -> int:
    return _t_rec(ctx.d, ctx.k, c, t)


def T_closed(c: int, t: int, ctx: CountContext) -> int:
    d, k = ctx.d, ctx.k
    if not _in_domain(d, k, c, t):
        return 0
    full = ff(d - t + 1, k - t)
    if c > k - t:
        return full
    return full - ff(k - t, c) * ff(d - t + 1 - c, k - t - c)


def V_closed(c: int, t: int, d: int) -> int:
    if t < 1 or not 1 <= c <= d - t + 1:
        return 0
    return ff(d + 1, t - 1)


@lru_cache(maxsize=None)
def V_rec(c: int, t: int, d: int) -> int:
    """V(c, t+1) = (d-t-c+1) V(c, t) + (c+1) V(c+1, t), V(c, 1) = 1."""
    if t < 1 or not 1 <= c <= d - t + 1:
        return 0
    if t == 1:
        return 1
    s = t - 1
    return (d - s - c + 1) * V_rec(c, s, d) + (c + 1) * V_rec(c + 1, s, d)


def U(j: int, c: int, t: int, d: int) -> int:
    if t < j <= d or (c != 1 and j == t):
        return V_closed(c, t, d)
    return 0


@lru_cache(maxsize=None)
def _s_rec(d: int, k: int, j: int, t: int) -> int:
    if not (1 <= t <= k and 1 <= j <= d):
        return 0
    if t == 1:
        return _t_rec(d, k, j, 1)
    prev = t - 1
    if j < prev:
        return 0
    total = sum(_t_rec(d, k, c, t) for c in range(1, d - prev + 1))
    return ff(d + 1, prev - 1) * (total + _t_rec(d, k, j - prev, t))


def S_rec(j: int, t: int, ctx: CountContext) -> int:
    return _s_rec(ctx.d, ctx.k, j, t)


def S_closed(j: int, t: int, ctx: CountContext) -> int:
    d, k = ctx.d, ctx.k
    if not (1 <= t <= k and 1 <= j <= d):
        return 0
    if t == 1:
        if j >= k:
            return ff(d, k - 1)
        return ff(d, k - 1) - ff(k - 1, j) * ff(d - j, k - j - 1)
    if j < t - 1:
        return 0
    scale = ff(d + 1, t - 2)
    if j == t - 1:
        if j == k - 1:
            return scale * (d - t + 1)
        return scale * (d - k + 1) * ff(d - t + 2, k - t)
    base = (d - k + 1) * ff(d - t + 2, k - t) + ff(d - t + 1, k - t)
    if j < k:
        return scale * (base - ff(k - t, j - t + 1) * ff(d - j, k - j - 1))
    return scale * base


def words_at_distance(d: int, k: int) -> int:
    """n_k = (d+1)_{k-1} (d+1-k)."""
    return ff(d + 1, k - 1) * (d + 1 - k)


def mu(d: int, D: int) -> int:
    """F_d occurrences over the whole word list, summed from the closed forms."""
    CountContext(d, D, 1)
    return sum(S_closed(d, t, CountContext(d, D, k)) for k in range(1, D + 1) for t in range(1, k + 1))


def mu_direct(d: int, D: int, tree: Optional[CPTree] = None) -> int:
    tree = tree or grow_tree(d, D)
    return factor_counts(tree.words)[d - 1]


def theta_cp(d: int, D: int) -> int:
    CountContext(d, D, 1)
    return ceil_div(sum(k * words_at_distance(d, k) for k in range(1, D + 1)), d)


def mu_theta_gap(d: int, D: int) -> int:
    return mu(d, D) - theta_cp(d, D)


@dataclass
class Counterexample:
    j: int
    t: int
    k: int
    lower: int
    upper: int


def check_monotone(ctx: CountContext) -> Optional[Counterexample]:
    """
    S_k(j+1, t) >= S_k(j, t) for t-1 <= j < d, every t <= k <= D.
    None when it holds everywhere, else the first failure.
    """
    for k in range(1, ctx.D + 1):
        kctx = CountContext(ctx.d, ctx.D, k)
        for t in range(1, k + 1):
            for j in range(max(1, t - 1), ctx.d):
                here, there = S_closed(j, t, kctx), S_closed(j + 1, t, kctx)
                if there < here:
                    logger.error(f"Monotonicity fails at d={ctx.d}: j={j}, t={t}, k={k}")
                    return Counterexample(j, t, k, here, there)
    return None


def falling_factorial_identity(a: int, p: int) -> bool:
    """sum_{b=1}^{p} (p)_b (a-b)_{p-b} == p (a)_{p-1}."""
    left = sum(ff(p, b) * ff(a - b, p - b) for b in range(1, p + 1))
    return left == p * ff(a, p - 1)


@dataclass
class TreeCensus:
    """Brute-force counts over a grown tree."""
    tree: CPTree
    below: List[List[int]] = field(init=False, repr=False)
    children: List[Dict[int, int]] = field(init=False, repr=False)

    def __post_init__(self):
        self.below = [[0] * (self.tree.D + 1) for _ in self.tree.nodes]
        for k, node in enumerate(self.tree.nodes):
            walker: Optional[int] = k
            while walker is not None:
                self.below[walker][node.t] += 1
                walker = self.tree.nodes[walker].parent
        self.children = self.tree.children()

    def T(self, c: int, t: int, k: int) -> Set[int]:
        """Leaf counts at depth k below every node labeled (c, t)."""
        return {self.below[i][k] for i, node in enumerate(self.tree.nodes)
                if node.t == t and node.c == c}

    def V(self, c: int, t: int) -> int:
        return sum(1 for node in self.tree.nodes if node.t == t and node.c == c)

    def U(self, j: int, c: int, t: int) -> int:
        return sum(1 for i, node in enumerate(self.tree.nodes)
                   if node.t == t and node.c == c and j in self.children[i])

    def S(self, j: int, t: int, k: int) -> int:
        return sum(1 for node in self.tree.nodes if node.t == k and node.word[t - 1] == j)

    def depth(self, k: int) -> int:
        return sum(1 for node in self.tree.nodes if node.t == k)


def count_table(d: int, D: int, k: Optional[int] = None, tree: Optional[CPTree] = None) -> pd.DataFrame:
    """
    One row per formula evaluation with the recursive value, the closed
    value, the tree count and an agreement flag.
    """
    tree = tree or grow_tree(d, D)
    census = TreeCensus(tree)
    rows: List[Dict] = []

    def add(quantity: str, args: str, rec: int, closed: int, enum: Optional[int]):
        values = {rec, closed} if enum is None else {rec, closed, enum}
        rows.append({"quantity": quantity, "args": args, "recursive": rec, "closed": closed,
                     "enumerated": enum, "agree": len(values) == 1})

    for t in range(1, D + 1):
        for c in range(1, d + 2):
            add("V", f"c={c},t={t}", V_rec(c, t, d), V_closed(c, t, d), census.V(c, t))
            if t < D:
                for j in range(1, d + 1):
                    add("U", f"j={j},c={c},t={t}", U(j, c, t, d), U(j, c, t, d), census.U(j, c, t))

    for kk in ([k] if k is not None else range(1, D + 1)):
        ctx = CountContext(d, D, kk)
        for t in range(1, kk + 1):
            for c in range(1, d - t + 2):
                seen = census.T(c, t, kk)
                enum_t = seen.pop() if len(seen) == 1 else (None if not seen else -1)
                add("T", f"c={c},t={t},k={kk}", T_rec(c, t, ctx), T_closed(c, t, ctx), enum_t)
            for j in range(1, d + 1):
                add("S", f"j={j},t={t},k={kk}", S_rec(j, t, ctx), S_closed(j, t, ctx),
                    census.S(j, t, kk))
            column = sum(S_closed(j, t, ctx) for j in range(1, d + 1))
            add("sum_j S", f"t={t},k={kk}", words_at_distance(d, kk), column, census.depth(kk))

    add("mu", f"d={d},D={D}", mu_direct(d, D, tree), mu(d, D), None)
    add("theta", f"d={d},D={D}", theta_cp(d, D), theta_cp(d, D), None)
    frame = pd.DataFrame(rows)
    bad = frame[~frame["agree"]]
    if len(bad):
        logger.warning(f"{len(bad)} count disagreements for G({d},{D})")
    return frame


def check_counts(d: int, D: int, tree: Optional[CPTree] = None) -> Tuple[bool, pd.DataFrame]:
    """All formulas against the tree, plus monotonicity; returns (all agree, table)."""
    frame = count_table(d, D, tree=tree)
    monotone = check_monotone(CountContext(d, D, D))
    return bool(frame["agree"].all()) and monotone is None, frame
