"""JSON space bundles: points, metrics, gauges, functions, maps, chains, data.

Reals are written as decimal strings with 17 significant digits so that a
load/save cycle is exact.  :func:`dumps` is canonical (sorted keys, fixed
indentation), so saving a loaded bundle reproduces the same bytes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import metrics as M
from .gauges import Gauge, generate_gauge
from .metrics import InputError, MetricTable, PointSet, ToleranceProfile

SCHEMA_VERSION = 1


def real(x: float) -> str:
    return "%.17g" % float(x)


def _num(v, where: str) -> float:
    try:
        x = float(v)
    except (TypeError, ValueError):
        raise InputError(f"{where}: {v!r} is not a number") from None
    if math.isnan(x):
        raise InputError(f"{where}: NaN is not allowed")
    return x


def _nums(vs, where: str) -> list:
    if not isinstance(vs, list):
        raise InputError(f"{where}: expected a list")
    return [_num(v, f"{where}[{i}]") for i, v in enumerate(vs)]


def _reals(obj):
    """Numbers inside ``obj`` become canonical strings."""
    if isinstance(obj, list):
        return [_reals(v) for v in obj]
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    return real(obj)


def canonical(doc: dict) -> dict:
    """Copy of ``doc`` with every real-valued field written as a string.

    Point ids, axis numbers and other labels keep their JSON type.
    """
    out = json.loads(json.dumps(doc, default=_jsonable))
    pts = out.get("points") or {}
    for key in ("coords", "resolution"):
        if key in pts:
            pts[key] = _reals(pts[key])
    for spec in out.get("metrics") or []:
        if isinstance(spec, dict):
            for key in ("c", "values"):
                if key in spec:
                    spec[key] = _reals(spec[key])
    for section in ("functions", "tolerances"):
        if isinstance(out.get(section), dict):
            out[section] = {k: _reals(v) for k, v in out[section].items()}
    for v in (out.get("maps") or {}).values():
        if isinstance(v, dict) and "values" in v:
            v["values"] = _reals(v["values"])
    for v in (out.get("data") or {}).values():
        if isinstance(v, dict):
            for e in v:
                v[e] = _reals(v[e])
    return out


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


@dataclass
class SpaceBundle:
    """A loaded space file; ``doc`` is its normalized JSON document."""

    space: PointSet
    metrics: dict
    gauge: Gauge
    gauges: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    stacks: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    chains: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    tolerances: ToleranceProfile = field(default_factory=ToleranceProfile)
    doc: dict = field(default_factory=dict)

    def named_gauge(self, name: str | None) -> Gauge:
        if name is None:
            return self.gauge
        if name not in self.gauges:
            raise InputError(f"unknown gauge {name!r}")
        return self.gauges[name]

    def function_dict(self):
        from .compactify import FunctionDict

        if not self.functions:
            raise InputError("the file declares no functions")
        return FunctionDict(self.space, self.functions, self.stacks)


# --------------------------------------------------------------------------
# loading


def _ids(raw, where: str) -> list:
    if not isinstance(raw, list) or not raw:
        raise InputError(f"{where}: expected a nonempty list of point ids")
    for i, p in enumerate(raw):
        if not isinstance(p, (str, int)) or isinstance(p, bool):
            raise InputError(f"{where}[{i}]: point ids are strings or integers")
    return raw


def _metric(spec: dict, space: PointSet, built: dict, where: str) -> MetricTable:
    if not isinstance(spec, dict) or "id" not in spec or "kind" not in spec:
        raise InputError(f"{where}: a metric needs 'id' and 'kind'")
    mid, kind = str(spec["id"]), spec["kind"]

    def ref(key):
        name = spec.get(key)
        if name not in built:
            raise InputError(f"{where}.{key}: unknown metric {name!r}")
        return built[name]

    if kind in ("euclidean", "taxicab", "chebyshev"):
        return M.coordinate_metric(space, kind, mid)
    if kind == "coordinate":
        axis = int(_num(spec.get("axis", 0), f"{where}.axis"))
        if space.coords is None or not 0 <= axis < space.coords.shape[1]:
            raise InputError(f"{where}.axis: no coordinate {axis}")
        return M.coordinate_tables(space)[axis].renamed(mid)
    if kind == "discrete":
        return M.discrete(space, _num(spec.get("c", 1), f"{where}.c"), mid)
    if kind == "indiscrete":
        return M.indiscrete(space, mid)
    if kind == "table":
        rows = spec.get("values")
        if not isinstance(rows, list) or len(rows) != len(space):
            raise InputError(f"{where}.values: need {len(space)} rows")
        vals = np.array([_nums(r, f"{where}.values[{i}]") for i, r in enumerate(rows)], dtype=object)
        try:
            vals = np.array(vals.tolist(), dtype=float)
        except ValueError:
            raise InputError(f"{where}.values: rows have unequal lengths") from None
        return M.MetricTable(space, vals, mid)
    if kind == "truncate":
        return M.truncate(ref("of"), _num(spec.get("c", 1), f"{where}.c"), mid)
    if kind == "max":
        names = spec.get("of")
        if not isinstance(names, list) or not names:
            raise InputError(f"{where}.of: expected a list of metric ids")
        for n in names:
            if n not in built:
                raise InputError(f"{where}.of: unknown metric {n!r}")
        return M.max_metric(*(built[n] for n in names), id=mid)
    if kind == "partition":
        return M.partition_metric(space, spec.get("blocks") or [], mid)
    if kind == "collapse":
        return M.collapse(ref("of"), spec.get("set") or [], mid)
    if kind in ("sup_family", "weighted_sum"):
        axes = spec.get("axes")
        tables = M.coordinate_tables(space) if space.coords is not None else []
        if not isinstance(axes, list) or not axes or any(not 0 <= int(a) < len(tables) for a in axes):
            raise InputError(f"{where}.axes: expected coordinate axes")
        fam = [tables[int(a)] for a in axes]
        return (M.sup_family if kind == "sup_family" else M.weighted_sum)(fam, mid)
    raise InputError(f"{where}.kind: unknown metric kind {kind!r}")


def from_doc(doc: Any) -> SpaceBundle:
    """Validate a parsed document and build the bundle."""
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"schema_version must be {SCHEMA_VERSION}")
    known = {"schema_version", "points", "metrics", "gauge", "gauges", "functions", "stacks",
             "maps", "chains", "data", "tolerances"}
    extra = set(doc) - known
    if extra:
        raise InputError(f"unknown section {sorted(extra)[0]!r}")

    pts = doc.get("points")
    if not isinstance(pts, dict):
        raise InputError("points: expected an object")
    ids = _ids(pts.get("ids"), "points.ids")
    coords = pts.get("coords")
    if coords is not None:
        if not isinstance(coords, list) or len(coords) != len(ids):
            raise InputError("points.coords: need one row per point")
        coords = [_nums(c, f"points.coords[{i}]") for i, c in enumerate(coords)]
        if len({len(c) for c in coords}) != 1:
            raise InputError("points.coords: rows differ in dimension")
    res = pts.get("resolution")
    res = None if res is None else _num(res, "points.resolution")
    space = PointSet(ids, coords, res)

    specs = doc.get("metrics")
    if not isinstance(specs, list) or not specs:
        raise InputError("metrics: expected a nonempty list")
    built = {}
    for i, spec in enumerate(specs):
        t = _metric(spec, space, built, f"metrics[{i}]")
        if t.id in built:
            raise InputError(f"metrics[{i}]: duplicate metric id {t.id!r}")
        try:
            M.require_metric(t)
        except InputError as e:
            raise InputError(f"metrics[{i}]: {e}") from None
        built[t.id] = t

    def gauge_of(names, where):
        if not isinstance(names, list) or not names:
            raise InputError(f"{where}: expected a nonempty list of metric ids")
        for n in names:
            if n not in built:
                raise InputError(f"{where}: unknown metric {n!r}")
        return generate_gauge([built[n] for n in names])

    gauge = gauge_of(doc.get("gauge", list(built)), "gauge")
    gauges = {str(k): gauge_of(v, f"gauges.{k}") for k, v in (doc.get("gauges") or {}).items()}

    functions = {}
    for k, v in (doc.get("functions") or {}).items():
        vals = np.array(_nums(v, f"functions.{k}"))
        if len(vals) != len(space):
            raise InputError(f"functions.{k}: need {len(space)} values")
        if vals.min() < 0 or vals.max() > 1:
            raise InputError(f"functions.{k}: values must lie in [0, 1]")
        functions[str(k)] = vals
    stacks = {}
    for k, v in (doc.get("stacks") or {}).items():
        if not isinstance(v, list) or any(p not in functions for p in v):
            raise InputError(f"stacks.{k}: expected a list of function names")
        stacks[str(k)] = list(v)

    maps = {}
    for k, v in (doc.get("maps") or {}).items():
        if not isinstance(v, dict) or ("values" in v) == ("image" in v):
            raise InputError(f"maps.{k}: give exactly one of 'values' or 'image'")
        if "values" in v:
            vals = _nums(v["values"], f"maps.{k}.values")
            if len(vals) != len(space):
                raise InputError(f"maps.{k}.values: need {len(space)} values")
            maps[str(k)] = {"values": np.array(vals)}
        else:
            img = v["image"]
            if not isinstance(img, list) or len(img) != len(space):
                raise InputError(f"maps.{k}.image: need {len(space)} target ids")
            maps[str(k)] = {"image": list(img)}

    chains = {}
    for k, v in (doc.get("chains") or {}).items():
        if not isinstance(v, dict) or v.get("type") not in ("exhaustion", "tail"):
            raise InputError(f"chains.{k}: type must be 'exhaustion' or 'tail'")
        sets = v.get("sets")
        if not isinstance(sets, list):
            raise InputError(f"chains.{k}.sets: expected a list of id lists")
        for j, s in enumerate(sets):
            for p in s:
                if p not in space:
                    raise InputError(f"chains.{k}.sets[{j}]: unknown point {p!r}")
        chains[str(k)] = (v["type"], [list(s) for s in sets])

    data = {}
    for k, v in (doc.get("data") or {}).items():
        if not isinstance(v, dict):
            raise InputError(f"data.{k}: expected an object of intervals")
        iv = {}
        for e, pair in v.items():
            if e not in functions:
                raise InputError(f"data.{k}: unknown function {e!r}")
            lohi = _nums(pair, f"data.{k}.{e}")
            if len(lohi) != 2:
                raise InputError(f"data.{k}.{e}: expected [lo, hi]")
            iv[e] = tuple(lohi)
        data[str(k)] = iv

    tol = doc.get("tolerances") or {}
    try:
        tolerances = ToleranceProfile(
            _num(tol.get("slack", 0), "tolerances.slack"),
            tuple(_nums(tol.get("epsilon_grid", [1, 0.5, 0.25]), "tolerances.epsilon_grid")))
    except InputError:
        raise
    except ValueError as e:
        raise InputError(f"tolerances: {e}") from None

    return SpaceBundle(space, built, gauge, gauges, functions, stacks, maps, chains, data,
                       tolerances, canonical(doc))


def loads(text: str) -> SpaceBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"not valid JSON: {e}") from None
    return from_doc(doc)


def load_space(path) -> SpaceBundle:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return loads(text)


def dumps_doc(doc: dict) -> str:
    return json.dumps(canonical(doc), sort_keys=True, indent=1) + "\n"


def dumps(bundle: SpaceBundle) -> str:
    return dumps_doc(bundle.doc)


def save(bundle: SpaceBundle, path) -> None:
    Path(path).write_text(dumps(bundle))


# --------------------------------------------------------------------------
# corpus


def _doc(ids, coords, metrics, gauge, resolution=None, **extra) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "points": {"ids": list(ids), "coords": None if coords is None else np.asarray(coords).tolist(),
                   "resolution": resolution},
        "metrics": metrics,
        "gauge": gauge,
    }
    doc.update({k: v for k, v in extra.items() if v})
    return canonical(doc)


def grid_plane(n: int, spacing: float = 1.0) -> dict:
    """``n x n`` planar grid with the three coordinate metrics, one named gauge each."""
    if n < 1 or not spacing > 0:
        raise InputError("grid needs n >= 1 and a positive spacing")
    coords = [[i * spacing, j * spacing] for i in range(n) for j in range(n)]
    ids = [f"{i},{j}" for i in range(n) for j in range(n)]
    kinds = ["euclidean", "taxicab", "chebyshev"]
    return _doc(ids, coords, [{"id": k, "kind": k} for k in kinds], ["euclidean"], spacing,
                gauges={k: [k] for k in kinds})


def interval(n: int, lo: float = 0.0, hi: float = 1.0) -> dict:
    """``n`` evenly spaced points of ``[lo, hi]`` with the maps ``x^2`` and ``x/2``."""
    if n < 2 or not hi > lo:
        raise InputError("interval needs n >= 2 and hi > lo")
    k = np.arange(n)
    x = lo + (hi - lo) * k / (n - 1)
    return _doc(k.tolist(), x.reshape(-1, 1), [{"id": "abs", "kind": "euclidean"}], ["abs"],
                (hi - lo) / (n - 1), maps={"square": {"values": (x * x).tolist()},
                                           "half": {"values": (x / 2).tolist()}})


def circle(n: int) -> dict:
    """``n`` equally spaced points of the unit circle, chord metric truncated at 1."""
    if n < 1:
        raise InputError("circle needs n >= 1")
    a = 2 * np.pi * np.arange(n) / n
    return _doc(list(range(n)), np.c_[np.cos(a), np.sin(a)],
                [{"id": "euclidean", "kind": "euclidean"},
                 {"id": "chord", "kind": "truncate", "of": "euclidean", "c": 1}],
                ["chord"], 2 * np.pi / n)


def cylinder(n: int, m: int) -> dict:
    """``n`` circle points times ``m`` heights in ``[0, 1]``, euclidean in space."""
    if n < 1 or m < 1:
        raise InputError("cylinder needs n, m >= 1")
    a = 2 * np.pi * np.arange(n) / n
    h = np.linspace(0, 1, m) if m > 1 else np.zeros(1)
    coords = [[np.cos(t), np.sin(t), z] for z in h for t in a]
    ids = [f"{i},{j}" for j in range(m) for i in range(n)]
    return _doc(ids, coords, [{"id": "euclidean", "kind": "euclidean"}], ["euclidean"])


def discrete_space(n: int) -> dict:
    if n < 1:
        raise InputError("discrete space needs n >= 1")
    return _doc(list(range(1, n + 1)), None, [{"id": "discrete", "kind": "discrete", "c": 1}],
                ["discrete"])


CORPUS = {"grid_plane": grid_plane, "interval": interval, "circle": circle,
          "cylinder": cylinder, "discrete": discrete_space}
