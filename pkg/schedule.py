"""
Schedules for spanning factorizations and the universal-exchange simulator.

A schedule gives every (word, position) occurrence a time >= 1. It is valid
when each factor uses each time at most once and times increase along every
word. Any valid schedule lets all n(n-1) packets move with no edge carrying
two packets in the same step; ``simulate_exchange`` checks that directly.
"""

import heapq
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import SCHEDULE_SETTINGS
from digraph import Digraph, DistanceProfile, ceil_div, theta_from_profile
from errors import CapExceeded, InternalInconsistency, InvalidArtifact, UsageError
from factorization import Factorization, WordList, endpoint_table, factor_counts
from workers import map_chunks

logger = logging.getLogger(__name__)

Occurrence = Tuple[int, int]

DUPLICATE_FACTOR_TIME = "DuplicateFactorTime"
NON_INCREASING_WORD = "NonIncreasingWord"
UNASSIGNED = "Unassigned"


@dataclass
class Schedule:
    entries: Dict[Occurrence, int]

    @property
    def T(self) -> int:
        return max(self.entries.values(), default=0)

    def sorted_items(self) -> List[Tuple[Occurrence, int]]:
        return sorted(self.entries.items())


@dataclass
class ScheduleCheck:
    ok: bool
    T: int
    max_count: int
    is_minimum: bool
    kind: Optional[str] = None
    detail: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        result = {"schedule": "ok" if self.ok else "fail", "T": self.T,
                  "max_count": self.max_count, "is_minimum": self.is_minimum}
        if not self.ok:
            result["violation"] = {"kind": self.kind, **self.detail}
        return result


@dataclass
class ExchangeReport:
    n: int
    packets_delivered: int
    conflicts: List[Dict]
    makespan_observed: int
    per_time_link_load: int
    distinct_destinations: bool

    @property
    def ok(self) -> bool:
        return (not self.conflicts and self.per_time_link_load <= 1
                and self.packets_delivered == self.n * (self.n - 1)
                and self.distinct_destinations)

    def to_dict(self) -> Dict:
        return {
            "packets_delivered": self.packets_delivered,
            "expected_packets": self.n * (self.n - 1),
            "conflicts": self.conflicts,
            "conflict_count": len(self.conflicts),
            "makespan_observed": self.makespan_observed,
            "per_time_link_load": self.per_time_link_load,
            "distinct_destinations": self.distinct_destinations,
            "ok": self.ok,
        }


def verify_schedule(wl: WordList, s: Schedule) -> ScheduleCheck:
    """Check the three schedule rules and report whether T equals the max factor count."""
    occurrences = set(wl.occurrences())
    for occ, t in s.entries.items():
        if occ not in occurrences:
            raise InvalidArtifact("schedule entry targets no occurrence", word=occ[0], pos=occ[1])
        if t < 1:
            raise InvalidArtifact("schedule times start at 1", word=occ[0], pos=occ[1], time=t)

    counts = factor_counts(wl)
    max_count = max(counts) if counts else 0
    T = s.T

    def failed(kind: str, **detail) -> ScheduleCheck:
        return ScheduleCheck(False, T, max_count, False, kind, detail)

    for occ in wl.occurrences():
        if occ not in s.entries:
            return failed(UNASSIGNED, word=occ[0], pos=occ[1])

    used: Dict[Tuple[int, int], Occurrence] = {}
    for (i, p), t in s.sorted_items():
        letter = wl.words[i][p]
        if (letter, t) in used:
            other = used[(letter, t)]
            return failed(DUPLICATE_FACTOR_TIME, factor=letter, time=t,
                          first={"word": other[0], "pos": other[1]}, second={"word": i, "pos": p})
        used[(letter, t)] = (i, p)

    for i, w in enumerate(wl.words):
        for p in range(1, len(w)):
            if s.entries[(i, p)] <= s.entries[(i, p - 1)]:
                return failed(NON_INCREASING_WORD, word=i, pos=p,
                              times=[s.entries[(i, q)] for q in range(len(w))])

    return ScheduleCheck(True, T, max_count, T == max_count)


def greedy_schedule(wl: WordList, seed: Optional[int] = None) -> Schedule:
    """
    List scheduling one time step at a time.

    Each factor fires at most one ready occurrence per step. Priority is the
    longest remaining suffix, then (word, position). With a seed the priority
    is a seeded random order instead; the result is still valid.
    """
    rank: Dict[Occurrence, int] = {}
    if seed is not None:
        order = wl.occurrences()
        random.Random(seed).shuffle(order)
        rank = {occ: k for k, occ in enumerate(order)}

    def key(occ: Occurrence):
        i, p = occ
        if seed is not None:
            return (rank[occ],)
        return (-(len(wl.words[i]) - p), i, p)

    ready: List[List] = [[] for _ in range(wl.d)]
    for i, w in enumerate(wl.words):
        if w:
            heapq.heappush(ready[w[0] - 1], (key((i, 0)), (i, 0)))

    entries: Dict[Occurrence, int] = {}
    total = len(wl.occurrences())
    t = 0
    while len(entries) < total:
        t += 1
        fired = []
        for heap in ready:
            if heap:
                _, occ = heapq.heappop(heap)
                entries[occ] = t
                fired.append(occ)
        for i, p in fired:
            w = wl.words[i]
            if p + 1 < len(w):
                heapq.heappush(ready[w[p + 1] - 1], (key((i, p + 1)), (i, p + 1)))
    logger.info(f"Greedy schedule: T={t} over {total} occurrences")
    return Schedule(entries)


def exceeds_fact2(wl: WordList) -> List[int]:
    """
    Factors (1-based) of maximum count that are not a one-letter word and are
    missing from one of the two positions of the two-letter words.
    """
    counts = factor_counts(wl)
    top = max(counts)
    singles = {w[0] for w in wl.words if len(w) == 1}
    first = {w[0] for w in wl.words if len(w) == 2}
    second = {w[1] for w in wl.words if len(w) == 2}
    return [f for f in range(1, wl.d + 1)
            if counts[f - 1] == top and f not in singles and (f not in first or f not in second)]


def _diam2_variables(wl: WordList) -> List[Occurrence]:
    counts = factor_counts(wl)
    by_factor: Dict[int, Dict[str, List[Occurrence]]] = {
        f: {"first": [], "single": [], "second": []} for f in range(1, wl.d + 1)}
    for i, w in enumerate(wl.words):
        if len(w) == 1:
            by_factor[w[0]]["single"].append((i, 0))
        elif len(w) == 2:
            by_factor[w[0]]["first"].append((i, 0))
            by_factor[w[1]]["second"].append((i, 1))
    factors = sorted(by_factor, key=lambda f: (-counts[f - 1], f))
    variables = []
    for f in factors:
        groups = by_factor[f]
        variables.extend(groups["first"] + groups["single"] + groups["second"])
    return variables


def find_schedule(wl: WordList, T: int, node_budget: Optional[int] = None) -> Optional[Schedule]:
    """
    Backtracking search for a schedule of words of length <= 2 within time T.

    Factors go in descending count order. Within a factor, first letters of
    two-letter words take the earliest free time, one-letter words next, and
    second letters the latest free time. Returns None when no schedule fits;
    raises when the node budget runs out first.
    """
    if wl.max_length > 2:
        raise UsageError("WordsTooLong", "diameter-2 scheduling needs words of length <= 2",
                         max_length=wl.max_length)
    if any(c > T for c in factor_counts(wl)):
        return None
    node_budget = SCHEDULE_SETTINGS["max_backtrack_nodes"] if node_budget is None else node_budget

    variables = _diam2_variables(wl)

    def candidates(occ: Occurrence) -> range:
        i, p = occ
        if len(wl.words[i]) == 1:
            return range(1, T + 1)
        if p == 0:
            return range(1, T)
        return range(T, 1, -1)

    entries: Dict[Occurrence, int] = {}
    used = set()
    iterators: List[Iterator[int]] = [iter(candidates(variables[0]))] if variables else []
    nodes = 0
    depth = 0
    while 0 <= depth < len(variables):
        occ = variables[depth]
        i, p = occ
        letter = wl.words[i][p]
        if occ in entries:
            used.discard((letter, entries.pop(occ)))
        partner = (i, 1 - p) if len(wl.words[i]) == 2 else None
        placed = False
        for t in iterators[depth]:
            if (letter, t) in used:
                continue
            if partner in entries:
                other = entries[partner]
                if (p == 0 and t >= other) or (p == 1 and t <= other):
                    continue
            entries[occ] = t
            used.add((letter, t))
            placed = True
            break
        if placed:
            nodes += 1
            if nodes > node_budget:
                raise InternalInconsistency("SearchBudgetExceeded",
                                            f"backtracking passed {node_budget} nodes at T={T}",
                                            T=T, nodes=nodes)
            depth += 1
            if depth < len(variables):
                if len(iterators) > depth:
                    iterators[depth] = iter(candidates(variables[depth]))
                else:
                    iterators.append(iter(candidates(variables[depth])))
        else:
            depth -= 1
    if depth < 0:
        return None
    logger.debug(f"find_schedule: T={T} after {nodes} nodes")
    return Schedule(dict(entries))


def diam2_schedule(wl: WordList, node_budget: Optional[int] = None) -> Schedule:
    """
    Minimum-time schedule for a diameter-2 word list.

    The target is the maximum factor count M, or M+1 when a maximum-count
    factor hits the exception in ``exceeds_fact2``. Failing to reach the target
    is an internal inconsistency, never a reason to relax it.
    """
    if wl.max_length > 2:
        raise UsageError("WordsTooLong", "diameter-2 scheduling needs words of length <= 2",
                         max_length=wl.max_length)
    counts = factor_counts(wl)
    top = max(counts)
    exceptional = exceeds_fact2(wl)
    target = top + 1 if exceptional else top
    if exceptional:
        logger.info(f"Factors {exceptional} hit the diameter-2 exception; target T={target}")
    s = find_schedule(wl, target, node_budget)
    if s is None:
        logger.error(f"No schedule at predicted T={target}; counts={counts}")
        raise InternalInconsistency("Fact2Exhausted", f"no schedule exists at T={target}",
                                    target=target, counts=list(counts), exceptional=exceptional)
    logger.info(f"Diameter-2 schedule: T={s.T} (max count {top})")
    return s


def exhaustive_feasible(wl: WordList, T: int) -> Optional[Schedule]:
    """
    Exhaustive search over every time assignment with makespan <= T.
    Returns a schedule or None when none exists. Small instances only.
    """
    occurrences = wl.occurrences()
    cap = SCHEDULE_SETTINGS["exhaustive_max_occurrences"]
    if len(occurrences) > cap:
        raise CapExceeded(cap, "occurrences for exhaustive search")
    entries: Dict[Occurrence, int] = {}
    used = set()

    def place(k: int) -> bool:
        if k == len(occurrences):
            return True
        i, p = occurrences[k]
        w = wl.words[i]
        low = entries[(i, p - 1)] + 1 if p else 1
        high = T - (len(w) - 1 - p)
        for t in range(low, high + 1):
            if (w[p], t) in used:
                continue
            entries[(i, p)] = t
            used.add((w[p], t))
            if place(k + 1):
                return True
            used.discard((w[p], t))
            del entries[(i, p)]
        return False

    if place(0):
        return Schedule(dict(entries))
    return None


def schedule_array(wl: WordList, s: Schedule) -> List[List[Optional[Occurrence]]]:
    """d x T grid; row f-1 column t-1 holds the occurrence F_f fires at time t, or None."""
    grid: List[List[Optional[Occurrence]]] = [[None] * s.T for _ in range(wl.d)]
    for (i, p), t in s.sorted_items():
        grid[wl.words[i][p] - 1][t - 1] = (i, p)
    return grid


def usage_chain(wl: WordList, s: Schedule, profile: DistanceProfile) -> Dict:
    """tau >= max count >= ceil(sum/d) >= theta, reported with a flag."""
    counts = factor_counts(wl)
    chain = {
        "tau": s.T,
        "max": max(counts),
        "avg_ceiling": ceil_div(sum(counts), wl.d),
        "theta": theta_from_profile(profile, wl.d),
    }
    chain["ordered"] = chain["tau"] >= chain["max"] >= chain["avg_ceiling"] >= chain["theta"]
    return chain


def _load_chunk(succ: np.ndarray, wl: WordList, s: Schedule, T: int,
                sources: Sequence[int]) -> np.ndarray:
    d, n = succ.shape
    load = np.zeros((d, n, T + 1), dtype=np.int32)
    start = np.asarray(sources, dtype=np.int64)
    for i, w in enumerate(wl.words):
        current = start
        for p, letter in enumerate(w):
            np.add.at(load, (letter - 1, current, s.entries[(i, p)]), 1)
            current = succ[letter - 1][current]
    return load


def simulate_exchange(g: Digraph, f: Factorization, wl: WordList, s: Schedule,
                      workers: Optional[int] = None) -> ExchangeReport:
    """
    Send one packet from every vertex to every other vertex along the word
    paths at the scheduled times and count packets per (edge, time).

    An edge is identified by (factor, tail). Violations land in the report.
    """
    if f.n != g.n or wl.n != g.n or wl.d != f.d:
        raise UsageError("InconsistentInputs", "graph, factors and words disagree",
                         n=g.n, factors_n=f.n, words=wl.n, factors_d=f.d, words_d=wl.d)
    missing = [occ for occ in wl.occurrences() if occ not in s.entries]
    if missing:
        raise InvalidArtifact("schedule leaves occurrences unassigned", first=list(missing[0]))

    succ = f.as_array()
    T = s.T
    sources = list(range(g.n))
    parts = map_chunks(lambda chunk: _load_chunk(succ, wl, s, T, chunk), sources, workers=workers)
    load = parts[0]
    for part in parts[1:]:
        load = load + part

    table = endpoint_table(f, wl)
    conflicts: List[Dict] = []
    hot = {tuple(int(x) for x in cell) for cell in np.argwhere(load > 1)}
    if hot:
        occupants: Dict[Tuple[int, int, int], List[Tuple[int, int]]] = {cell: [] for cell in hot}
        for i, w in enumerate(wl.words):
            for v in range(g.n):
                current = v
                for p, letter in enumerate(w):
                    cell = (letter - 1, current, s.entries[(i, p)])
                    if cell in occupants:
                        occupants[cell].append((v, int(table[i, v])))
                    current = f.succ[letter - 1][current]
        for (factor, tail, t) in sorted(occupants):
            packets = occupants[(factor, tail, t)]
            for a, b in zip(packets, packets[1:]):
                conflicts.append({
                    "edge": {"factor": factor + 1, "tail": tail, "head": f.succ[factor][tail]},
                    "time": t,
                    "packet_a": list(a),
                    "packet_b": list(b),
                })

    sent = np.array([bool(w) for w in wl.words])
    arrived = table[sent] != np.arange(g.n)
    delivered = int(arrived.sum())
    distinct = all(len(set(table[sent, v].tolist()) - {v}) == g.n - 1 for v in range(g.n))
    report = ExchangeReport(
        n=g.n,
        packets_delivered=delivered,
        conflicts=conflicts,
        makespan_observed=int(np.nonzero(load.sum(axis=(0, 1)))[0].max()) if delivered else 0,
        per_time_link_load=int(load.max()) if load.size else 0,
        distinct_destinations=distinct,
    )
    if report.conflicts:
        logger.warning(f"Exchange produced {len(report.conflicts)} conflicts")
    logger.info(f"Exchange: {delivered} packets, makespan {report.makespan_observed}, "
                f"max link load {report.per_time_link_load}")
    return report
