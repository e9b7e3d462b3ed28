"""Gauges: finite filtered families of pseudometrics on one point set."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from .metrics import InputError, MetricTable, PointSet, require_metric, restrict

MAX_MEMBERS = 4096


class GaugeSizeError(InputError):
    """The filtered closure exceeded :data:`MAX_MEMBERS`."""


class Gauge:
    """A nonempty family of metric tables on a common point set.

    Parameters
    ----------
    members : sequence of MetricTable
        Member ids must be unique.
    provenance : dict, optional
        Maps a member id to the ids of the generators it is the pointwise
        maximum of.  Members not listed are their own generator.
    top : str, optional
        Id of a member known to dominate every other member.
    check : bool
        Verify filteredness on construction.  Needs every table materialized,
        so large structured gauges pass ``check=False`` together with ``top``.
    """

    def __init__(self, members: Sequence[MetricTable], *, provenance=None,
                 top: str | None = None, check: bool = True):
        members = tuple(members)
        if not members:
            raise InputError("a gauge needs at least one metric")
        space = members[0].space
        seen = {}
        for i, m in enumerate(members):
            if m.space != space:
                raise InputError(f"member {m.id!r} lives on a different point set")
            if m.id in seen:
                raise InputError(f"duplicate member id {m.id!r}")
            seen[m.id] = i
        self.space: PointSet = space
        self.members = members
        self._index = seen
        self.provenance = {m.id: (m.id,) for m in members}
        if provenance:
            self.provenance.update({k: tuple(v) for k, v in provenance.items()})
        if top is not None and top not in seen:
            raise InputError(f"unknown top member {top!r}")
        self._top = top
        if check and not self.is_filtered():
            a, b = self.unfiltered_pair()
            raise InputError(f"gauge is not filtered: nothing dominates {a!r} and {b!r}")

    def __repr__(self) -> str:
        return f"Gauge({[m.id for m in self.members]}, n={len(self.space)})"

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[MetricTable]:
        return iter(self.members)

    def __getitem__(self, id: str) -> MetricTable:
        try:
            return self.members[self._index[id]]
        except KeyError:
            raise InputError(f"unknown gauge member {id!r}") from None

    def __contains__(self, id) -> bool:
        return id in self._index

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.members)

    def position(self, id: str) -> int:
        self[id]
        return self._index[id]

    @cached_property
    def dominance(self) -> np.ndarray:
        """``D[i, j]`` is true when member ``i <= `` member ``j`` pointwise."""
        m = len(self.members)
        D = np.eye(m, dtype=bool)
        if m == 1:
            return D
        vals = [t.values for t in self.members]
        for i in range(m):
            for j in range(m):
                if i != j:
                    D[i, j] = bool(np.all(vals[i] <= vals[j]))
        return D

    @property
    def top(self) -> MetricTable | None:
        """A member dominating all others, if one exists."""
        if self._top is not None:
            return self[self._top]
        full = np.nonzero(self.dominance.all(axis=0))[0]
        return self.members[full[0]] if len(full) else None

    def dominating(self, a: str, b: str) -> MetricTable:
        """First member that dominates both ``a`` and ``b``."""
        i, j = self.position(a), self.position(b)
        if self._top is not None and not self.is_materialized():
            return self[self._top]
        both = self.dominance[i] & self.dominance[j]
        hits = np.nonzero(both)[0]
        if not len(hits):
            raise InputError(f"no member dominates {a!r} and {b!r}")
        return self.members[hits[0]]

    def is_materialized(self) -> bool:
        return all(t.is_materialized for t in self.members)

    def unfiltered_pair(self) -> tuple[str, str] | None:
        D = self.dominance
        for i, j in combinations(range(len(self.members)), 2):
            if not (D[i] & D[j]).any():
                return self.members[i].id, self.members[j].id
        return None

    def is_filtered(self) -> bool:
        if self._top is not None:
            t = self[self._top].values
            return all(np.all(m.values <= t) for m in self.members)
        return self.unfiltered_pair() is None

    def max_table(self) -> np.ndarray:
        """Pointwise maximum over all members."""
        if self._top is not None:
            return self[self._top].values
        return np.maximum.reduce([m.values for m in self.members])

    def restricted(self, ids: Iterable[Hashable]) -> "Gauge":
        """The gauge of restricted members on a subspace; member ids are kept."""
        sub = self.space.subset(ids)
        members = [restrict(m, sub) for m in self.members]
        return Gauge(members, provenance=self.provenance, top=self._top, check=False)


def _key(t: MetricTable) -> bytes:
    return np.ascontiguousarray(t.values).tobytes()


def generate_gauge(seeds: Sequence[MetricTable], cap: int = MAX_MEMBERS) -> Gauge:
    """Close ``seeds`` under pointwise maxima.

    Seeds are validated and deduplicated by exact table equality; every new
    maximum gets the id ``max(a,b,...)`` over the seed ids it is built from.
    """
    seeds = list(seeds)
    if not seeds:
        raise InputError("a gauge needs at least one metric")
    space = seeds[0].space
    for s in seeds:
        if s.space != space:
            raise InputError(f"seed {s.id!r} lives on a different point set")
        require_metric(s)
    order = {s.id: i for i, s in enumerate(seeds)}
    if len(order) != len(seeds):
        raise InputError("seed ids must be unique")
    if len(seeds) == 1:
        # nothing to close; avoids materializing a lazy table
        return Gauge(seeds, check=False)

    members: list[MetricTable] = []
    sources: list[frozenset] = []
    keys: dict[bytes, int] = {}
    for s in seeds:
        k = _key(s)
        if k in keys:
            continue
        keys[k] = len(members)
        members.append(MetricTable(space, s.values, s.id, certified=s.certified))
        sources.append(frozenset([s.id]))

    frontier = list(range(len(members)))
    while frontier:
        fresh = []
        current = set(frontier)
        for i in frontier:
            for j in range(len(members)):
                if j == i or (j in current and j < i):
                    continue
                vals = np.maximum(members[i].values, members[j].values)
                k = vals.tobytes()
                if k in keys:
                    continue
                src = sources[i] | sources[j]
                name = "max(" + ",".join(sorted(src, key=order.__getitem__)) + ")"
                keys[k] = len(members)
                members.append(MetricTable(space, vals, name,
                                           certified=members[i].certified and members[j].certified))
                sources.append(src)
                fresh.append(len(members) - 1)
                if len(members) > cap:
                    raise GaugeSizeError(f"filtered closure exceeds {cap} members")
        frontier = fresh
    provenance = {m.id: tuple(sorted(src, key=order.__getitem__)) for m, src in zip(members, sources)}
    return Gauge(members, provenance=provenance, check=False)


@dataclass(frozen=True)
class SeparationVerdict:
    separated: bool
    witness: tuple[Hashable, Hashable] | None = None

    def __bool__(self) -> bool:
        return self.separated


def is_separated(g: Gauge, slack: float = 0.0) -> SeparationVerdict:
    """False, with a witness pair, when two distinct points are within ``slack`` in every member."""
    M = g.max_table()
    close = np.triu(M <= slack, k=1)
    hits = np.argwhere(close)
    if len(hits):
        i, j = hits[0]
        return SeparationVerdict(False, (g.space.ids[i], g.space.ids[j]))
    return SeparationVerdict(True)


def zero_classes(g: Gauge) -> list[list[int]]:
    """Classes of points at distance zero in every member, in first-index order."""
    M = g.max_table()
    n = len(g.space)
    label = np.full(n, -1)
    classes = []
    for i in range(n):
        if label[i] >= 0:
            continue
        members = np.nonzero((M[i] == 0) & (label < 0))[0]
        label[members] = len(classes)
        classes.append(members.tolist())
    return classes


def separated_quotient(g: Gauge) -> tuple[PointSet, Gauge, dict]:
    """Identify points at distance zero in every member.

    Each class is represented by its first point; the projection maps every
    original id to its representative's id.
    """
    classes = zero_classes(g)
    reps = np.array([c[0] for c in classes], dtype=np.intp)
    space = g.space
    coords = None if space.coords is None else space.coords[reps]
    qspace = PointSet([space.ids[i] for i in reps], coords, space.resolution)
    members = [MetricTable(qspace, m.values[np.ix_(reps, reps)], m.id, certified=m.certified)
               for m in g.members]
    projection = {}
    for c in classes:
        for i in c:
            projection[space.ids[i]] = space.ids[c[0]]
    return qspace, Gauge(members, provenance=g.provenance, check=False), projection


def tuple_space(tuples: Sequence[Sequence[Hashable]], base: PointSet) -> tuple[PointSet, np.ndarray]:
    """Point set whose points are tuples of base ids; also returns the index array."""
    tuples = [tuple(t) for t in tuples]
    if not tuples:
        raise InputError("no tuples given")
    m = len(tuples[0])
    if m == 0 or any(len(t) != m for t in tuples):
        raise InputError("tuples must share a positive length")
    T = np.array([[base.index(c) for c in t] for t in tuples], dtype=np.intp)
    ids = ["(" + ",".join(str(c) for c in t) + ")" for t in tuples]
    return PointSet(ids), T


def pointwise_gauge(base: Gauge, tuples: Sequence[Sequence[Hashable]]) -> tuple[PointSet, Gauge]:
    """Gauge on sampled tuples generated by ``max_{a in B} d(x_a, y_a)``.

    One generator per base member ``d`` and nonempty coordinate set ``B``.
    Generator ids read ``d[1,2]`` with coordinates counted from 1.
    """
    space, T = tuple_space(tuples, base.space)
    m = T.shape[1]
    seeds = []
    for d in base.members:
        D = d.values
        for r in range(1, m + 1):
            for B in combinations(range(m), r):
                vals = np.maximum.reduce([D[np.ix_(T[:, a], T[:, a])] for a in B])
                name = f"{d.id}[{','.join(str(a + 1) for a in B)}]"
                seeds.append(MetricTable(space, vals, name))
    return space, generate_gauge(seeds)
