"""ParamObject: a polynomial vector plus the construction trace that produced it."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .polycore import PolyVector, make_var, var_key
from .textform import vector_from_json, vector_to_json


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    raise TypeError(f"provenance parameter {x!r} is not JSON-representable")


@dataclass(frozen=True)
class Provenance:
    tag: str
    params: dict = field(default_factory=dict)
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", _jsonable(self.params))
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class ParamObject:
    vector: PolyVector
    provenance: Provenance

    @property
    def k(self) -> int:
        return self.vector.k

    @property
    def vars(self) -> tuple[str, ...]:
        return self.vector.vars

    def evaluate(self, args: Sequence[int]) -> tuple:
        return self.vector.evaluate(args)

    def stats(self) -> dict[str, Any]:
        v = self.vector
        return {"k": v.k, "variables": len(v.vars), "total_degree": v.total_degree(),
                "max_var_degree": max((v.degree(x) for x in v.vars), default=0), "terms": v.n_terms()}

    def to_json(self) -> dict[str, Any]:
        return {"vector": vector_to_json(self.vector),
                "provenance": _prov_to_json(self.provenance),
                "stats": self.stats()}

    def dumps(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def from_json(cls, obj) -> "ParamObject":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if "vector" not in obj:
            # a bare vector: treat as externally supplied
            return given(vector_from_json(obj))
        prov = obj.get("provenance") or {"tag": "given"}
        return cls(vector_from_json(obj["vector"]), _prov_from_json(prov))


def _prov_to_json(p: Provenance) -> dict[str, Any]:
    return {"tag": p.tag, "params": p.params, "children": [c.to_json() for c in p.children]}


def _prov_from_json(obj) -> Provenance:
    return Provenance(obj["tag"], obj.get("params", {}),
                      tuple(ParamObject.from_json(c) for c in obj.get("children", [])))


def given(vector: PolyVector) -> ParamObject:
    """Wrap a hand-written vector; witnesses for it come from bounded search only."""
    return ParamObject(vector, Provenance("given"))


class VarAllocator:
    """Hands out variable names whose indices are above everything already used, per tag."""

    def __init__(self, used: Iterable[str] = ()):
        self.next: dict[str, int] = {}
        self.reserve(used)

    def reserve(self, names: Iterable[str]):
        for name in names:
            tag, idx, _ = var_key(name)
            self.next[tag] = max(self.next.get(tag, 0), idx + 1)

    def fresh(self, tag: str) -> str:
        idx = max(self.next.get(tag, 1), 1)
        self.next[tag] = idx + 1
        return make_var(tag, idx)

    def rename_apart(self, names: Sequence[str]) -> dict[str, str]:
        """Map ``names`` onto fresh names, preserving each tag and relative index order."""
        mapping = {}
        by_tag = itertools.groupby(sorted(names, key=var_key), key=lambda n: n[0])
        for tag, group in by_tag:
            group = list(group)
            lo = var_key(group[0])[1]
            base = max(self.next.get(tag, 0), lo)
            for name in group:
                mapping[name] = make_var(tag, base + var_key(name)[1] - lo)
            self.next[tag] = base + var_key(group[-1])[1] - lo + 1
        return mapping
