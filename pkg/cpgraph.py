"""
Cycle-prefix graphs G(d, D).

Vertices are the length-D sequences of distinct symbols from 1..d+1 in
lexicographic order. Rotation R_k pulls x_k to the front; shift S_m pushes a
new symbol m in and drops x_D. F_j = R_{j+1} for j < D, and F_{D+j} = S_{y_j}
where y_0, y_1, ... run through the unused symbols cyclically, starting just
after x_D.
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from digraph import Digraph
from errors import BadParams, InternalInconsistency
from factorization import Factorization, WordList, check_permutation
from schedule import Schedule, verify_schedule

logger = logging.getLogger(__name__)

CPVertex = Tuple[int, ...]


def _check_params(d: int, D: int) -> None:
    if not (isinstance(d, int) and isinstance(D, int)) or not 2 <= D <= d:
        raise BadParams(f"cycle-prefix graphs need 2 <= D <= d, got d={d}, D={D}", d=d, D=D)


def cp_vertices(d: int, D: int) -> List[CPVertex]:
    _check_params(d, D)
    return list(permutations(range(1, d + 2), D))


def cp_label(x: Sequence[int]) -> str:
    """Digit string while symbols are single digits, CSV otherwise."""
    if max(x) <= 9:
        return "".join(str(s) for s in x)
    return ",".join(str(s) for s in x)


def rotate(x: CPVertex, k: int) -> CPVertex:
    """R_k: x_k x_1 ... x_{k-1} x_{k+1} ... x_D (k is 1-based)."""
    return (x[k - 1],) + x[:k - 1] + x[k:]


def shift(x: CPVertex, m: int) -> CPVertex:
    """S_m: m x_1 ... x_{D-1}."""
    return (m,) + x[:-1]


def cyclic_complement(x: CPVertex, d: int) -> List[int]:
    """Unused symbols y_0, y_1, ... in cyclic order starting after x_D."""
    last = x[-1]
    unused = [m for m in range(1, d + 2) if m not in x]
    return sorted(unused, key=lambda m: (m - last) % (d + 1))


def cp_successor(x: CPVertex, j: int, d: int) -> CPVertex:
    """Head of the F_j edge leaving x."""
    D = len(x)
    if j < D:
        return rotate(x, j + 1)
    return shift(x, cyclic_complement(x, d)[j - D])


def build_cp(d: int, D: int) -> Digraph:
    """G(d, D) with out-edges listed in factor order F_1..F_d."""
    vertices = cp_vertices(d, D)
    index = {x: v for v, x in enumerate(vertices)}
    edges = [(v, index[cp_successor(x, j, d)])
             for v, x in enumerate(vertices) for j in range(1, d + 1)]
    logger.info(f"Built G({d},{D}): {len(vertices)} vertices, degree {d}")
    return Digraph(len(vertices), tuple(edges), tuple(cp_label(x) for x in vertices))


def cp_factorization(d: int, D: int) -> Factorization:
    vertices = cp_vertices(d, D)
    index = {x: v for v, x in enumerate(vertices)}
    succ = []
    for j in range(1, d + 1):
        row = tuple(index[cp_successor(x, j, d)] for x in vertices)
        check_permutation(row, j)
        succ.append(row)
    return Factorization(d, tuple(succ))


@dataclass
class TreeNode:
    vertex: int
    c: int
    t: int
    parent: Optional[int] = None       # index of the parent node
    parent_edge: Optional[int] = None  # factor index of the edge into this node
    word: Tuple[int, ...] = ()


@dataclass
class CPTree:
    d: int
    D: int
    nodes: List[TreeNode]
    words: WordList

    def depth_counts(self) -> List[int]:
        counts = [0] * (self.D + 1)
        for node in self.nodes:
            counts[node.t] += 1
        return counts

    def children(self) -> List[Dict[int, int]]:
        """children()[u][j] = index of the node reached from node u by F_j."""
        table: List[Dict[int, int]] = [{} for _ in self.nodes]
        for k, node in enumerate(self.nodes):
            if node.parent is not None:
                table[node.parent][node.parent_edge] = k
        return table


def grow_tree(d: int, D: int) -> CPTree:
    """
    Shortest-path tree from the identity 12...D with (c, t) labels.

    The root gets a child by every F_j, labeled (j, 1). A node (c, t) with
    t < D gets a child by F_j for every j >= t except j = t when c = 1; that
    child is (c, t+1) when j >= t + c and (c-1, t+1) otherwise.
    """
    f = cp_factorization(d, D)
    root = TreeNode(vertex=0, c=0, t=0)
    nodes = [root]
    frontier = [0]
    for _ in range(D):
        next_frontier = []
        for k in frontier:
            node = nodes[k]
            if node.t == 0:
                choices = [(j, j) for j in range(1, d + 1)]
            else:
                choices = []
                for j in range(node.t, d + 1):
                    if j == node.t and node.c == 1:
                        continue
                    choices.append((j, node.c if j >= node.t + node.c else node.c - 1))
            for j, c in choices:
                nodes.append(TreeNode(vertex=f.succ[j - 1][node.vertex], c=c, t=node.t + 1,
                                      parent=k, parent_edge=j, word=node.word + (j,)))
                next_frontier.append(len(nodes) - 1)
        frontier = next_frontier
    tree = CPTree(d, D, nodes, WordList(d, tuple(node.word for node in nodes)))
    logger.info(f"Grew G({d},{D}) tree: depth counts {tree.depth_counts()}")
    return tree


def cp_min_schedule(d: int, D: int, tree: Optional[CPTree] = None) -> Schedule:
    """
    Schedule of makespan mu (the number of F_d occurrences).

    F_d occurrences get times 1..mu ordered by (position, word). Any other
    occurrence leaves some tree node u by F_i; the k-th word below u's F_i
    child borrows the time of the k-th word below u's F_d child at the same
    position.
    """
    tree = tree or grow_tree(d, D)
    wl = tree.words
    children = tree.children()

    fd_occurrences = sorted(((p, i) for i, w in enumerate(wl.words)
                             for p, letter in enumerate(w) if letter == d))
    entries: Dict[Tuple[int, int], int] = {(i, p): t for t, (p, i) in enumerate(fd_occurrences, start=1)}

    below: List[List[int]] = [[] for _ in tree.nodes]
    for k, node in enumerate(tree.nodes):
        walker: Optional[int] = k
        while walker is not None:
            below[walker].append(k)
            walker = tree.nodes[walker].parent

    for u, out in enumerate(children):
        if not out:
            continue
        p = tree.nodes[u].t
        heavy = below[out[d]]
        for j, child in out.items():
            if j == d:
                continue
            light = below[child]
            if len(light) > len(heavy):
                raise InternalInconsistency("InjectionInfeasible",
                                            f"F_{j} subtree at {u} is larger than its F_{d} subtree",
                                            tail=u, factor=j, light=len(light), heavy=len(heavy))
            for word_i, word_d in zip(light, heavy):
                entries[(word_i, p)] = entries[(word_d, p)]

    s = Schedule(entries)
    check = verify_schedule(wl, s)
    if not check.ok or s.T != len(fd_occurrences):
        raise InternalInconsistency("ScheduleConstructionFailed",
                                    f"G({d},{D}) schedule failed verification",
                                    check=check.to_dict(), mu=len(fd_occurrences))
    logger.info(f"G({d},{D}) minimum schedule: T={s.T}")
    return s
