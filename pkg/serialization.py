"""
JSON artifacts, DOT export and the per-run manifest.

Factor indices are 1-based on the wire: ``succ[0]`` in a factorization file is
F_1 and a word [2, 1] means F_2 then F_1. Vertex indices are 0-based.
"""

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import graphviz

from cayley import CosetSpec, GroupSpec, Perm
from config import OUTPUT_SETTINGS
from digraph import Digraph
from errors import InvalidArtifact, SpanFactError
from factorization import Factorization, WordList
from schedule import Schedule

logger = logging.getLogger(__name__)


def save_json(path: str, data: Any) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=OUTPUT_SETTINGS["json_indent"], sort_keys=False)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def load_json(path: str) -> Any:
    if not os.path.exists(path):
        raise InvalidArtifact(f"{path} does not exist", path=path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InvalidArtifact(f"{path} is not valid JSON: {e}", path=path)


def _parsing(kind: str):
    """Turn shape errors while reading an artifact into InvalidArtifact."""
    def wrap(func):
        def inner(data):
            try:
                return func(data)
            except SpanFactError:
                raise
            except (KeyError, TypeError, ValueError, AttributeError) as e:
                raise InvalidArtifact(f"malformed {kind} artifact: {e}", artifact=kind)
        inner.__name__ = func.__name__
        inner.__doc__ = func.__doc__
        return inner
    return wrap


def graph_to_dict(g: Digraph) -> Dict:
    data: Dict[str, Any] = {"n": g.n}
    if g.vertex_labels is not None:
        data["vertex_labels"] = list(g.vertex_labels)
    data["edges"] = [[t, h] for t, h in g.edges]
    return data


@_parsing("graph")
def graph_from_dict(data: Dict) -> Digraph:
    labels = data.get("vertex_labels")
    return Digraph(int(data["n"]), tuple((int(t), int(h)) for t, h in data["edges"]),
                   tuple(str(x) for x in labels) if labels is not None else None)


def factorization_to_dict(f: Factorization) -> Dict:
    return {"d": f.d, "succ": [list(row) for row in f.succ]}


@_parsing("factorization")
def factorization_from_dict(data: Dict) -> Factorization:
    return Factorization(int(data["d"]), tuple(tuple(int(v) for v in row) for row in data["succ"]))


def words_to_dict(wl: WordList) -> Dict:
    return {"d": wl.d, "words": [list(w) for w in wl.words]}


@_parsing("words")
def words_from_dict(data: Dict) -> WordList:
    return WordList(int(data["d"]), tuple(tuple(int(x) for x in w) for w in data["words"]))


def schedule_to_list(s: Schedule) -> List[Dict]:
    return [{"word": i, "pos": p, "time": t} for (i, p), t in s.sorted_items()]


@_parsing("schedule")
def schedule_from_list(data: List[Dict]) -> Schedule:
    entries = {}
    for item in data:
        key = (int(item["word"]), int(item["pos"]))
        if key in entries:
            raise InvalidArtifact(f"occurrence {key} is scheduled twice", word=key[0], pos=key[1])
        entries[key] = int(item["time"])
    return Schedule(entries)


def _perm_to_wire(p: Perm) -> List[int]:
    return [image + 1 for image in p.images]


def _perm_from_wire(images: List[int]) -> Perm:
    return Perm(tuple(int(x) - 1 for x in images))


def group_to_dict(spec: Union[GroupSpec, CosetSpec]) -> Dict:
    """Permutations travel in 1-based one-line notation."""
    group = spec.group if isinstance(spec, CosetSpec) else spec
    data: Dict[str, Any] = {"degree": group.degree,
                            "generators": {k: _perm_to_wire(p) for k, p in group.generators.items()}}
    if isinstance(spec, CosetSpec):
        data["subgroup"] = {k: _perm_to_wire(p) for k, p in spec.subgroup.items()}
        data["delta"] = list(spec.delta)
    return data


@_parsing("group")
def group_from_dict(data: Dict) -> Union[GroupSpec, CosetSpec]:
    """A GroupSpec, or a CosetSpec when the file carries a subgroup or a delta list."""
    degree = int(data["degree"])
    generators = {str(k): _perm_from_wire(v) for k, v in data["generators"].items()}
    for name, p in generators.items():
        if p.degree != degree:
            raise InvalidArtifact(f"generator {name!r} has degree {p.degree}, expected {degree}",
                                  generator=name)
    group = GroupSpec(generators)
    if "subgroup" not in data and "delta" not in data:
        return group
    subgroup = {str(k): _perm_from_wire(v) for k, v in data.get("subgroup", {}).items()}
    return CosetSpec(group, subgroup, [str(x) for x in data.get("delta", list(generators))])


def save_graph(path: str, g: Digraph) -> str:
    return save_json(path, graph_to_dict(g))


def load_graph(path: str) -> Digraph:
    return graph_from_dict(load_json(path))


def save_factorization(path: str, f: Factorization) -> str:
    return save_json(path, factorization_to_dict(f))


def load_factorization(path: str) -> Factorization:
    return factorization_from_dict(load_json(path))


def save_words(path: str, wl: WordList) -> str:
    return save_json(path, words_to_dict(wl))


def load_words(path: str) -> WordList:
    return words_from_dict(load_json(path))


def save_schedule(path: str, s: Schedule) -> str:
    return save_json(path, schedule_to_list(s))


def load_schedule(path: str) -> Schedule:
    return schedule_from_list(load_json(path))


def load_group(path: str) -> Union[GroupSpec, CosetSpec]:
    return group_from_dict(load_json(path))


def to_dot(g: Digraph, name: str = "G", factors: Optional[Factorization] = None) -> str:
    """DOT source with one line per edge; edges carry their factor when one is given."""
    dot = graphviz.Digraph(name=name, comment=f"{g.n} vertices, {g.m} edges")
    for v in range(g.n):
        dot.node(str(v), g.label(v))
    if factors is None:
        for t, h in g.edges:
            dot.edge(str(t), str(h))
    else:
        for k, row in enumerate(factors.succ, start=1):
            for t, h in enumerate(row):
                dot.edge(str(t), str(h), label=f"F{k}")
    return dot.source


def file_digest(path: str) -> str:
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(65536), b""):
            sha.update(block)
    return sha.hexdigest()


@dataclass
class RunManifest:
    """One per CLI run: what went in, what came out, and whether it passed."""
    argv: List[str]
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def add_input(self, path: str):
        if path and os.path.exists(path):
            self.inputs[path] = file_digest(path)

    def add_output(self, path: str):
        if path not in self.outputs:
            self.outputs.append(path)

    def to_dict(self) -> Dict:
        return {"argv": self.argv, "inputs": self.inputs, "outputs": self.outputs,
                "summary": self.summary, "wall_time": round(self.wall_time, 6)}

    def write(self, out_dir: str) -> str:
        return save_json(os.path.join(out_dir, "manifest.json"), self.to_dict())
