"""Finite point sets, pseudometric tables, constructors and open balls.

A :class:`MetricTable` is an ``n x n`` matrix over a :class:`PointSet`.  Tables
built from coordinates are evaluated lazily, row block by row block, so that
dense samples (ten thousand points and more) can be scanned without ever
holding the full matrix in memory.  Accessing :attr:`MetricTable.values`
materializes the matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

#: absolute allowance for floating-point roundoff in axiom checks
ROUNDOFF = 1e-12

BLOCK = 512


class InputError(ValueError):
    """Raised for malformed or inconsistent input."""


class PointSet:
    """An ordered, nonempty collection of labeled points.

    Parameters
    ----------
    ids : sequence of hashable
        Unique point labels.  Order is significant: "lowest id" everywhere
        in this package means "earliest in this order".
    coords : array_like, optional
        ``(n, dim)`` real coordinates; a 1-d array is read as ``(n, 1)``.
    resolution : float, optional
        Sample spacing of the continuum this set approximates.
    """

    def __init__(self, ids: Iterable[Hashable], coords=None, resolution: float | None = None):
        ids = tuple(ids)
        if not ids:
            raise InputError("point set is empty")
        index = {}
        for i, p in enumerate(ids):
            if p in index:
                raise InputError(f"duplicate point id {p!r}")
            index[p] = i
        if coords is not None:
            coords = np.array(coords, dtype=float)
            if coords.ndim == 1:
                coords = coords.reshape(-1, 1)
            if coords.ndim != 2 or coords.shape[0] != len(ids):
                raise InputError(
                    f"coords must have one row per point ({len(ids)}), got shape {coords.shape}")
            coords.setflags(write=False)
        if resolution is not None and not resolution > 0:
            raise InputError("resolution must be positive")
        self.ids = ids
        self.coords = coords
        self.resolution = resolution
        self._index = index

    @classmethod
    def from_coords(cls, coords, ids=None, resolution=None) -> "PointSet":
        coords = np.asarray(coords, dtype=float)
        if ids is None:
            ids = [str(i) for i in range(len(coords))]
        return cls(ids, coords, resolution)

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.ids)

    def __contains__(self, p) -> bool:
        return p in self._index

    def __repr__(self) -> str:
        dim = None if self.coords is None else self.coords.shape[1]
        return f"PointSet(n={len(self)}, dim={dim})"

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, PointSet) or self.ids != other.ids:
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        return self.coords is None or np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(self.ids)

    def index(self, p) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise InputError(f"unknown point id {p!r}") from None

    def indices(self, ps: Iterable[Hashable]) -> np.ndarray:
        return np.array([self.index(p) for p in ps], dtype=np.intp)

    def subset(self, ps: Iterable[Hashable]) -> "PointSet":
        """Subspace on ``ps``, kept in this set's order."""
        idx = np.sort(np.unique(self.indices(ps)))
        if len(idx) == 0:
            raise InputError("subset is empty")
        coords = None if self.coords is None else self.coords[idx]
        return PointSet([self.ids[i] for i in idx], coords, self.resolution)


class MetricTable:
    """A square table of distances over a point set.

    Either ``values`` (a full matrix) or ``rows`` (a callable mapping an index
    array to the corresponding block of rows) must be given.  No axiom is
    checked on construction; see :func:`validate_metric`.  ``certified``
    marks tables built by a constructor that always yields a pseudometric
    from pseudometric inputs; :func:`require_metric` trusts those, which keeps
    large lazily evaluated tables from an O(n^3) scan.
    """

    def __init__(self, space: PointSet, values=None, id: str = "d", *,
                 rows: Callable[[np.ndarray], np.ndarray] | None = None, certified: bool = False):
        n = len(space)
        if (values is None) == (rows is None):
            raise InputError("give exactly one of values or rows")
        if values is not None:
            values = np.array(values, dtype=float)
            if values.shape != (n, n):
                raise InputError(
                    f"table {id!r} has shape {values.shape}, expected ({n}, {n})")
            values.setflags(write=False)
            self.__dict__["values"] = values
        self.space = space
        self.id = id
        self._rows = rows
        self.certified = certified

    def __repr__(self) -> str:
        return f"MetricTable({self.id!r}, n={self.n})"

    @property
    def n(self) -> int:
        return len(self.space)

    @property
    def is_materialized(self) -> bool:
        return "values" in self.__dict__

    @cached_property
    def values(self) -> np.ndarray:
        v = np.empty((self.n, self.n))
        for idx, block in self.blocks():
            v[idx] = block
        v.setflags(write=False)
        return v

    def rows(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.intp)
        if self.is_materialized:
            return self.values[idx]
        return np.asarray(self._rows(idx), dtype=float)

    def row(self, i: int) -> np.ndarray:
        return self.rows(np.array([i]))[0]

    def blocks(self, size: int = BLOCK) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        for start in range(0, self.n, size):
            idx = np.arange(start, min(start + size, self.n))
            yield idx, self.rows(idx)

    def __call__(self, x, y) -> float:
        i, j = self.space.index(x), self.space.index(y)
        return float(self.rows(np.array([i]))[0, j])

    @cached_property
    def min_positive(self) -> float:
        """Smallest positive realized distance (``inf`` if there is none)."""
        best = math.inf
        for _, block in self.blocks():
            pos = block[block > 0]
            if pos.size:
                best = min(best, float(pos.min()))
        return best

    def renamed(self, id: str) -> "MetricTable":
        if self.is_materialized:
            return MetricTable(self.space, self.values, id, certified=self.certified)
        return MetricTable(self.space, id=id, rows=self._rows, certified=self.certified)

    def same_values(self, other: "MetricTable") -> bool:
        return self.space == other.space and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class ToleranceProfile:
    """Slack for "counts as zero" and the epsilons tried by scale checks."""

    slack: float = 0.0
    epsilon_grid: tuple[float, ...] = (1.0, 0.5, 0.25)

    def __post_init__(self):
        grid = tuple(float(e) for e in self.epsilon_grid)
        object.__setattr__(self, "epsilon_grid", grid)
        if self.slack < 0:
            raise InputError("slack must be nonnegative")
        if not grid or any(e <= 0 for e in grid):
            raise InputError("epsilon grid entries must be positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise InputError("epsilon grid must be strictly decreasing")


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    excess: float


@dataclass
class MetricReport:
    """Outcome of :func:`validate_metric`.

    ``violations`` holds genuine failures; ``roundoff`` holds failures no
    larger than :data:`ROUNDOFF`, which do not affect ``valid``.  Witness
    indices refer to positions in the point set.  A triangle witness
    ``(i, j, k)`` means ``d[i,j] + d[j,k] < d[i,k]``.
    """

    valid: bool
    violations: list[Violation] = field(default_factory=list)
    roundoff: list[Violation] = field(default_factory=list)
    truncated: bool = False

    def __bool__(self) -> bool:
        return self.valid


def validate_metric(table: MetricTable | np.ndarray, limit: int = 1000) -> MetricReport:
    """Check reflexivity, symmetry, nonnegativity and the triangle inequality.

    At most ``limit`` witnesses of each kind are recorded; ``valid`` is exact
    regardless.
    """
    v = table.values if isinstance(table, MetricTable) else np.asarray(table, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise InputError(f"metric table must be square, got shape {v.shape}")
    report = MetricReport(True)

    def push(axiom, witness, excess):
        genuine = excess > ROUNDOFF
        if genuine:
            report.valid = False
        target = report.violations if genuine else report.roundoff
        if len(target) < limit:
            target.append(Violation(axiom, tuple(int(i) for i in witness), float(excess)))
        else:
            report.truncated = True

    bad = ~np.isfinite(v)
    if bad.any():
        for w in zip(*np.nonzero(bad)):
            push("finiteness", w, math.inf)
        return report
    for w in zip(*np.nonzero(v < 0)):
        push("nonnegativity", w, -v[w])
    diag = np.abs(np.diag(v))
    for i in np.nonzero(diag > 0)[0]:
        push("reflexivity", (i,), diag[i])
    asym = np.abs(v - v.T)
    for w in zip(*np.nonzero(np.triu(asym > 0, k=1))):
        push("symmetry", w, asym[w])
    for j in range(v.shape[0]):
        # excess[i, k] = d[i,k] - (d[i,j] + d[j,k])
        excess = v - (v[:, j][:, None] + v[j][None, :])
        for i, k in zip(*np.nonzero(excess > 0)):
            push("triangle", (i, j, k), excess[i, k])
    report.violations.sort(key=lambda x: (x.axiom, x.witness))
    report.roundoff.sort(key=lambda x: (x.axiom, x.witness))
    return report


def require_metric(table: MetricTable) -> MetricTable:
    """Raise :class:`InputError` naming the first genuine violation, else return ``table``."""
    if table.certified:
        return table
    report = validate_metric(table, limit=1)
    if not report.valid:
        w = report.violations[0]
        names = tuple(table.space.ids[i] for i in w.witness)
        raise InputError(f"table {table.id!r} fails {w.axiom} at {names}")
    return table


# --------------------------------------------------------------------------
# constructors

_COORD_KINDS = ("euclidean", "taxicab", "chebyshev")


def coordinate_metric(space: PointSet, kind: str = "euclidean", id: str | None = None) -> MetricTable:
    """Pairwise distances of ``space.coords`` under a named norm."""
    if space.coords is None:
        raise InputError("coordinate metric needs coordinates")
    if kind not in _COORD_KINDS:
        raise InputError(f"unknown coordinate metric {kind!r}")
    c = space.coords

    def rows(idx):
        diff = np.abs(c[idx][:, None, :] - c[None, :, :])
        if kind == "euclidean":
            return np.sqrt(np.sum(diff * diff, axis=-1))
        if kind == "taxicab":
            return np.sum(diff, axis=-1)
        return np.max(diff, axis=-1)

    return MetricTable(space, id=id or kind, rows=rows, certified=True)


def coordinate_tables(space: PointSet, prefix: str = "d") -> list[MetricTable]:
    """One table ``|x_i - y_i|`` per coordinate axis."""
    if space.coords is None:
        raise InputError("coordinate tables need coordinates")
    out = []
    for axis in range(space.coords.shape[1]):
        col = space.coords[:, axis]
        out.append(MetricTable(
            space, id=f"{prefix}{axis}",
            rows=lambda idx, col=col: np.abs(col[idx][:, None] - col[None, :]), certified=True))
    return out


def discrete(space: PointSet, c: float = 1.0, id: str | None = None) -> MetricTable:
    if not c > 0:
        raise InputError("discrete metric needs a positive constant")
    n = len(space)
    return MetricTable(space, c * (1.0 - np.eye(n)), id or ("discrete" if c == 1 else f"discrete({c:g})"),
                       certified=True)


def indiscrete(space: PointSet, id: str = "indiscrete") -> MetricTable:
    n = len(space)
    return MetricTable(space, np.zeros((n, n)), id, certified=True)


def truncate(d: MetricTable, c: float = 1.0, id: str | None = None) -> MetricTable:
    """``min(d, c)``."""
    if not c > 0:
        raise InputError("truncation level must be positive")
    return MetricTable(d.space, id=id or f"min({d.id},{c:g})",
                       rows=lambda idx: np.minimum(d.rows(idx), c), certified=d.certified)


def max_metric(*tables: MetricTable, id: str | None = None) -> MetricTable:
    """Pointwise maximum of tables over a common point set."""
    if not tables:
        raise InputError("max of no metrics")
    _same_space(tables)
    return MetricTable(tables[0].space, id=id or f"max({','.join(t.id for t in tables)})",
                       rows=lambda idx: np.maximum.reduce([t.rows(idx) for t in tables]),
                       certified=all(t.certified for t in tables))


def partition_metric(space: PointSet, blocks: Sequence[Iterable[Hashable]],
                     id: str | None = None) -> MetricTable:
    """0 inside a block, 1 across blocks."""
    label = np.full(len(space), -1)
    for b, block in enumerate(blocks):
        idx = space.indices(block)
        if len(idx) == 0:
            raise InputError(f"partition block {b} is empty")
        if (label[idx] != -1).any() or len(set(idx.tolist())) != len(idx):
            raise InputError(f"partition blocks overlap at block {b}")
        label[idx] = b
    if (label == -1).any():
        missing = space.ids[int(np.nonzero(label == -1)[0][0])]
        raise InputError(f"partition does not cover point {missing!r}")
    values = (label[:, None] != label[None, :]).astype(float)
    return MetricTable(space, values, id or "partition", certified=True)


def distance_to_set(d: MetricTable, A: Iterable[Hashable]) -> np.ndarray:
    """``d(x, A)`` for every point ``x``."""
    idx = d.space.indices(A)
    if len(idx) == 0:
        raise InputError("distance to an empty set")
    return d.rows(idx).min(axis=0)


def collapse(d: MetricTable, A: Iterable[Hashable], id: str | None = None) -> MetricTable:
    """``min(d(x,y), d(x,A) + d(A,y))``: the subset ``A`` is squashed to a point."""
    A = list(A)
    dA = distance_to_set(d, A)
    return MetricTable(d.space, id=id or f"{d.id}/A",
                       rows=lambda idx: np.minimum(d.rows(idx), dA[idx][:, None] + dA[None, :]),
                       certified=d.certified)


def restrict(d: MetricTable, S: Iterable[Hashable] | PointSet, id: str | None = None) -> MetricTable:
    """The table on the subspace ``S`` (same id by default)."""
    sub = S if isinstance(S, PointSet) else d.space.subset(S)
    idx = d.space.indices(sub.ids)
    return MetricTable(sub, id=id or d.id, rows=lambda r: d.rows(idx[r])[:, idx], certified=d.certified)


def sup_family(tables: Sequence[MetricTable], id: str = "d_sup") -> MetricTable:
    """``max_i min(t_i, 1)`` over a finite list of (coordinate) tables."""
    if not tables:
        raise InputError("empty family")
    _same_space(tables)
    return MetricTable(tables[0].space, id=id,
                       rows=lambda idx: np.max([np.minimum(t.rows(idx), 1.0) for t in tables], axis=0),
                       certified=all(t.certified for t in tables))


def weighted_sum(tables: Sequence[MetricTable], id: str = "d_sum") -> MetricTable:
    """``sum_i min(t_i, 1) * 2**-i``, indices starting at 0."""
    if not tables:
        raise InputError("empty family")
    _same_space(tables)

    def rows(idx):
        acc = np.zeros((len(idx), tables[0].n))
        for i, t in enumerate(tables):
            acc += np.minimum(t.rows(idx), 1.0) * 2.0 ** -i
        return acc

    return MetricTable(tables[0].space, id=id, rows=rows, certified=all(t.certified for t in tables))


def derived_metric(kind: str, *args, **kwargs) -> MetricTable:
    """Dispatch to a derived-metric constructor by name."""
    table = {
        "discrete": discrete,
        "indiscrete": indiscrete,
        "truncate": truncate,
        "max": max_metric,
        "partition": partition_metric,
        "collapse": collapse,
        "restrict": restrict,
        "sup_family": sup_family,
        "weighted_sum": weighted_sum,
    }
    try:
        fn = table[kind]
    except KeyError:
        raise InputError(f"unknown derived metric {kind!r}") from None
    return fn(*args, **kwargs)


def ball(d: MetricTable, x: Hashable, eps: float) -> frozenset:
    """Open ball: the points at distance strictly less than ``eps`` from ``x``."""
    if not eps > 0:
        raise InputError("ball radius must be positive")
    row = d.row(d.space.index(x))
    return frozenset(d.space.ids[i] for i in np.nonzero(row < eps)[0])


def _same_space(tables: Sequence[MetricTable]) -> None:
    first = tables[0].space
    for t in tables[1:]:
        if t.space != first:
            raise InputError(f"table {t.id!r} lives on a different point set")
