"""
Cayley graphs and Cayley coset graphs of permutation groups.

Group elements are permutations of 0..k-1 and multiplication is composition:
(p * q)(i) = p(q(i)). Generators act on the right, so the edge for generator
delta leaves g and enters g * delta.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config import GROUP_SETTINGS
from cpgraph import build_cp, cp_label
from digraph import Digraph
from errors import CapExceeded, UsageError, VerificationError
from factorization import Factorization, WordList

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Perm:
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise UsageError("NotPermutation", f"{list(images)} is not a bijection", images=list(images))

    @classmethod
    def identity(cls, k: int) -> "Perm":
        return cls(tuple(range(k)))

    @classmethod
    def from_cycles(cls, k: int, cycles: Iterable[Sequence[int]]) -> "Perm":
        """Build from 1-based cycles, e.g. from_cycles(3, [(1, 2, 3)]) sends 1->2->3->1."""
        images = list(range(k))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a - 1] = b - 1
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, image in enumerate(self.images):
            inv[image] = i
        return Perm(tuple(inv))

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == image for i, image in enumerate(self.images))

    def label(self) -> str:
        return ",".join(str(image + 1) for image in self.images)


@dataclass
class GroupSpec:
    generators: Dict[str, Perm]
    cap: int = field(default_factory=lambda: GROUP_SETTINGS["element_cap"])

    def __post_init__(self):
        if not self.generators:
            raise UsageError("InvalidGroup", "a group needs at least one generator")
        degrees = {p.degree for p in self.generators.values()}
        if len(degrees) != 1:
            raise UsageError("InvalidGroup", "generators act on different domains",
                             degrees=sorted(degrees))

    @property
    def degree(self) -> int:
        return next(iter(self.generators.values())).degree

    def names(self) -> List[str]:
        return list(self.generators)


@dataclass
class CosetSpec:
    group: GroupSpec
    subgroup: Dict[str, Perm]
    delta: List[str]

    def __post_init__(self):
        for name in self.delta:
            if name not in self.group.generators:
                raise UsageError("InvalidGroup", f"delta names unknown generator {name!r}", name=name)
        for p in self.subgroup.values():
            if p.degree != self.group.degree:
                raise UsageError("InvalidGroup", "subgroup generator acts on a different domain")

    def delta_perms(self) -> List[Perm]:
        return [self.group.generators[name] for name in self.delta]


@dataclass
class CosetCheck:
    ok: bool
    which: Optional[str] = None
    witness: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        if self.ok:
            return {"conditions": "ok"}
        return {"conditions": "fail", "which": self.which, "witness": self.witness}


class ConditionViolated(VerificationError):
    def __init__(self, which: str, witness: Dict):
        super().__init__("ConditionViolated", f"coset condition ({which}) fails",
                         which=which, witness=witness)


def _closure(generators: Sequence[Perm], degree: int, cap: int) -> Tuple[List[Perm], List[Tuple[int, ...]]]:
    """Elements in discovery order and their breadth-first tree words (1-based)."""
    identity = Perm.identity(degree)
    elements = [identity]
    words: List[Tuple[int, ...]] = [()]
    index = {identity: 0}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        g = elements[k]
        for letter, delta in enumerate(generators, start=1):
            h = g * delta
            if h not in index:
                if len(elements) >= cap:
                    raise CapExceeded(cap, "group elements")
                index[h] = len(elements)
                elements.append(h)
                words.append(words[k] + (letter,))
                queue.append(index[h])
    return elements, words


def close_group(gs: GroupSpec) -> List[Perm]:
    """Breadth-first closure from the identity, in discovery order."""
    elements, _ = _closure(list(gs.generators.values()), gs.degree, gs.cap)
    logger.info(f"Closed group of degree {gs.degree}: {len(elements)} elements")
    return elements


def build_cayley(gs: GroupSpec) -> Tuple[Digraph, Factorization]:
    """Vertices are group elements; generator k gives factor F_k: g -> g * delta_k."""
    generators = list(gs.generators.values())
    for name, p in gs.generators.items():
        if p.is_identity():
            raise UsageError("IdentityGenerator", f"generator {name!r} is the identity", name=name)
    elements = close_group(gs)
    index = {g: v for v, g in enumerate(elements)}
    succ = tuple(tuple(index[g * delta] for g in elements) for delta in generators)
    edges = tuple((v, row[v]) for v in range(len(elements)) for row in succ)
    graph = Digraph(len(elements), edges, tuple(g.label() for g in elements))
    return graph, Factorization(len(generators), succ)


def cayley_words(gs: GroupSpec) -> WordList:
    """Words of the breadth-first tree from the identity, smallest generator first."""
    _, words = _closure(list(gs.generators.values()), gs.degree, gs.cap)
    return WordList(len(gs.generators), tuple(words))


def _coset_index(elements: List[Perm], subgroup: List[Perm]) -> Tuple[Dict[Perm, int], List[Perm]]:
    """Map every element to the index of its left coset gH; representatives are discovery-least."""
    which: Dict[Perm, int] = {}
    representatives: List[Perm] = []
    for g in elements:
        if g in which:
            continue
        for h in subgroup:
            which[g * h] = len(representatives)
        representatives.append(g)
    return which, representatives


def _subgroup_elements(cs: CosetSpec) -> List[Perm]:
    return _closure(list(cs.subgroup.values()), cs.group.degree, cs.group.cap)[0]


def check_coset_conditions(cs: CosetSpec) -> CosetCheck:
    gs = cs.group
    elements = close_group(gs)
    subgroup = _subgroup_elements(cs)
    members = set(subgroup)
    deltas = cs.delta_perms()

    for name, delta in zip(cs.delta, deltas):
        if delta in members:
            return CosetCheck(False, "i", {"delta": name, "reason": "delta lies in H"})
    generated = _closure(deltas + list(cs.subgroup.values()), gs.degree, gs.cap)[0]
    if len(generated) != len(elements):
        return CosetCheck(False, "i", {"reason": "delta and H do not generate the group",
                                       "generated": len(generated), "order": len(elements)})

    delta_h = {delta * h for delta in deltas for h in subgroup}
    for h in subgroup:
        for name, delta in zip(cs.delta, deltas):
            if h * delta not in delta_h:
                return CosetCheck(False, "ii", {"h": h.label(), "delta": name})

    which, _ = _coset_index(elements, subgroup)
    owner: Dict[int, str] = {}
    for name, delta in zip(cs.delta, deltas):
        coset = which[delta]
        if coset in owner:
            return CosetCheck(False, "iii", {"first": owner[coset], "second": name})
        owner[coset] = name
    return CosetCheck(True)


def coset_representatives(cs: CosetSpec) -> List[Perm]:
    elements = close_group(cs.group)
    subgroup = _subgroup_elements(cs)
    return _coset_index(elements, subgroup)[1]


def build_coset_graph(cs: CosetSpec) -> Digraph:
    """Cosets gH joined by (gH, g delta H); repeated pairs from one tail are kept once."""
    check = check_coset_conditions(cs)
    if not check.ok:
        raise ConditionViolated(check.which, check.witness)
    gs = cs.group
    elements = close_group(gs)
    subgroup = _subgroup_elements(cs)
    which, representatives = _coset_index(elements, subgroup)
    edges: List[Tuple[int, int]] = []
    for v, g in enumerate(representatives):
        heads: List[int] = []
        for delta in cs.delta_perms():
            head = which[g * delta]
            if head not in heads:
                heads.append(head)
        edges.extend((v, head) for head in heads)
    logger.info(f"Coset graph: {len(representatives)} cosets of a subgroup of order {len(subgroup)}")
    return Digraph(len(representatives), tuple(edges), tuple(g.label() for g in representatives))


def cp_coset_spec(d: int, D: int) -> CosetSpec:
    """
    G(d, D) as a coset graph of S_{d+1}: delta_k is the cycle k -> k-1 -> ... -> 1 -> k
    for k = 2..d+1, and H fixes 1..D pointwise.
    """
    if not 2 <= D <= d:
        raise UsageError("BadParams", f"need 2 <= D <= d, got d={d}, D={D}", d=d, D=D)
    k = d + 1
    generators = {f"c{j}": Perm.from_cycles(k, [tuple(range(j, 0, -1))]) for j in range(2, k + 1)}
    subgroup = {f"s{j}": Perm.from_cycles(k, [(j, j + 1)]) for j in range(D + 1, k)}
    return CosetSpec(GroupSpec(generators), subgroup, list(generators))


def coset_graph_matches_cp(d: int, D: int) -> bool:
    """Relabel each coset gH as g(1)..g(D) and compare edge sets with G(d, D)."""
    spec = cp_coset_spec(d, D)
    graph = build_coset_graph(spec)
    labels = [cp_label(tuple(g(i) + 1 for i in range(D))) for g in coset_representatives(spec)]
    cp = build_cp(d, D)
    if sorted(labels) != sorted(cp.vertex_labels):
        return False
    coset_edges = {(labels[t], labels[h]) for t, h in graph.edges}
    cp_edges = {(cp.label(t), cp.label(h)) for t, h in cp.edges}
    return coset_edges == cp_edges and graph.m == cp.m
