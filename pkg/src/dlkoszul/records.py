"""Text records for modules: a JSON object with a fixed set of keys.

::

    {
      "name": "F(1)*",
      "cutoff": 8,
      "generators": {"1": ["a1"], "2": ["a2"]},
      "sq": [{"r": 1, "degree": 2, "columns": [[0]]}],
      "q": [{"a": 0, "degree": 1, "columns": [[0]]}],
      "length": {"1": [0], "2": [1]},
      "flags": {"unstable": true, "max_length": null}
    }

``columns[i]`` lists the target basis indices hit by source basis element ``i``.
``q`` and ``length`` are optional; without them the record is a plain
:class:`FpModule`.
"""
from __future__ import annotations

import json

from .dyerlashof import QModule
from .fpmodule import FpModule
from .gf2 import F2Matrix, support, vec

KEYS = {"name", "cutoff", "generators", "sq", "q", "length", "flags"}
FLAG_KEYS = {"unstable", "max_length"}


class RecordError(ValueError):
    pass


def _check_keys(obj: dict, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise RecordError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise RecordError(f"{where}: unknown keys {sorted(extra)}")


def _matrices(entries, index_key: str, basis, target, where: str) -> dict:
    out = {}
    for e in entries or []:
        _check_keys(e, {index_key, "degree", "columns"}, where)
        k, n = int(e[index_key]), int(e["degree"])
        t = target(k, n)
        nrows = len(basis.get(t, ()))
        cols = e["columns"]
        if len(cols) != len(basis.get(n, ())):
            raise RecordError(f"{where} ({k}, {n}): {len(cols)} columns for a degree of dim "
                              f"{len(basis.get(n, ()))}")
        for c in cols:
            if any(not 0 <= i < nrows for i in c):
                raise RecordError(f"{where} ({k}, {n}): row index out of range")
        out[(k, n)] = F2Matrix(tuple(vec(c) for c in cols), nrows)
    return out


def from_dict(obj: dict) -> FpModule:
    _check_keys(obj, KEYS, "record")
    for key in ("name", "cutoff", "generators"):
        if key not in obj:
            raise RecordError(f"record: missing key {key!r}")
    flags = obj.get("flags") or {}
    _check_keys(flags, FLAG_KEYS, "flags")
    basis = {int(n): tuple(labels) for n, labels in obj["generators"].items()}
    sq = _matrices(obj.get("sq"), "r", basis, lambda r, n: n - r, "sq")
    common = dict(name=obj["name"], cutoff=int(obj["cutoff"]), basis=basis, sq=sq,
                  unstable=bool(flags.get("unstable", False)))
    if "q" not in obj and "length" not in obj:
        return FpModule(**common)
    lengths = {int(n): tuple(ls) for n, ls in (obj.get("length") or {}).items()}
    if not lengths:
        lengths = {n: (0,) * len(b) for n, b in basis.items()}
    q = _matrices(obj.get("q"), "a", basis, lambda a, n: 2 * n + a, "q")
    return QModule(**common, lengths=lengths, q=q, max_length=flags.get("max_length"))


def to_dict(m: FpModule) -> dict:
    def entries(tables, key):
        return [{key: k, "degree": n, "columns": [support(c) for c in mat.cols]}
                for (k, n), mat in sorted(tables.items())]

    out = {
        "name": m.name,
        "cutoff": m.cutoff,
        "generators": {str(n): list(m.basis[n]) for n in m.degrees()},
        "sq": entries(m.sq, "r"),
        "flags": {"unstable": bool(m.unstable)},
    }
    if isinstance(m, QModule):
        out["q"] = entries(m.q, "a")
        out["length"] = {str(n): list(m.lengths[n]) for n in m.degrees()}
        out["flags"]["max_length"] = m.max_length
    return out


def loads(text: str) -> FpModule:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordError(f"not JSON: {exc}") from exc
    return from_dict(obj)


def dumps(m: FpModule) -> str:
    return json.dumps(to_dict(m), indent=1, sort_keys=True) + "\n"


def load(path: str) -> FpModule:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
