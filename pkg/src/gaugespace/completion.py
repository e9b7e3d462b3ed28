"""Cauchy points as distance profiles, the completion metric and completed spaces.

A Cauchy point over a gauge assigns to each member ``d`` a vector ``xi_d``
over the points, read as "the distance from the virtual point to ``x``".
On a finite space every valid Cauchy point is represented by an actual
point, so holes only arise from profiles imported from a larger ambient
space.  Locatedness (``min xi_d = 0``) is what finite sampling breaks, and it
is the only axiom the slack relaxes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .gauges import Gauge, separated_quotient
from .metrics import ROUNDOFF, InputError, MetricTable, PointSet, require_metric


class CauchyPointError(InputError):
    """A profile family violates a Cauchy-point axiom or lemma hypothesis."""


class CauchyPoint:
    """Profiles ``xi_d`` for every member of ``gauge``."""

    def __init__(self, gauge: Gauge, profiles: Mapping[str, np.ndarray], label: Hashable = "xi"):
        n = len(gauge.space)
        out = {}
        for d in gauge.members:
            if d.id not in profiles:
                raise InputError(f"no profile for gauge member {d.id!r}")
            v = np.array(profiles[d.id], dtype=float)
            if v.shape != (n,):
                raise InputError(f"profile for {d.id!r} must have {n} entries")
            v.setflags(write=False)
            out[d.id] = v
        self.gauge = gauge
        self.profiles = out
        self.label = label

    def __repr__(self) -> str:
        return f"CauchyPoint({self.label!r}, members={len(self.profiles)})"

    def __getitem__(self, member: str) -> np.ndarray:
        return self.profiles[member]

    def stacked(self) -> np.ndarray:
        """Profiles as an ``(members, points)`` array in gauge order."""
        return np.array([self.profiles[d.id] for d in self.gauge.members])


def profiles_from_generators(g: Gauge, generator_profiles: Mapping[str, np.ndarray]) -> dict:
    """Extend per-generator profiles to every member via its provenance.

    A member that is the maximum of generators gets the maximum of their
    profiles.
    """
    out = {}
    for d in g.members:
        parts = g.provenance.get(d.id, (d.id,))
        try:
            out[d.id] = np.maximum.reduce([np.asarray(generator_profiles[p], dtype=float) for p in parts])
        except KeyError as e:
            raise InputError(f"no profile for generator {e.args[0]!r}") from None
    return out


@dataclass
class CauchyReport:
    """Outcome of :func:`validate_cauchy_point`; witnesses name members and point ids."""

    valid: bool
    violations: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid

    def first(self) -> tuple | None:
        return self.violations[0] if self.violations else None


def represent_point(g: Gauge, z: Hashable) -> CauchyPoint:
    """``z``-hat: the metric rows of ``z``."""
    i = g.space.index(z)
    return CauchyPoint(g, {d.id: d.row(i) for d in g.members}, label=z)


def validate_cauchy_point(xi: CauchyPoint, slack: float = 0.0, limit: int = 20) -> CauchyReport:
    """Check both triangle laws exactly, locatedness at ``slack``, and monotonicity.

    Monotonicity is the strong form: whenever ``d1 <= d2`` pointwise among
    the members, ``xi_d1 <= xi_d2``.
    """
    g = xi.gauge
    ids = g.space.ids
    report = CauchyReport(True)

    def push(*v):
        report.valid = False
        if len(report.violations) < limit:
            report.violations.append(v)

    for d in g.members:
        p = xi.profiles[d.id]
        if (p < 0).any():
            push("nonnegativity", d.id, ids[int(np.argmin(p))])
        for idx, block in d.blocks():
            # A: d(x,y) + xi(y) >= xi(x) with x in the block
            gapA = p[idx][:, None] - (block + p[None, :])
            if (gapA > ROUNDOFF).any():
                a, b = np.unravel_index(int(np.argmax(gapA)), gapA.shape)
                push("triangle A", d.id, (ids[idx[a]], ids[b]))
            gapB = block - (p[idx][:, None] + p[None, :])
            if (gapB > ROUNDOFF).any():
                a, b = np.unravel_index(int(np.argmax(gapB)), gapB.shape)
                push("triangle B", d.id, (ids[idx[a]], ids[b]))
        if p.min() > slack:
            push("locatedness", d.id, float(p.min()))
    if len(g.members) > 1:
        D = g.dominance
        P = xi.stacked()
        for i, j in zip(*np.nonzero(D)):
            if i != j and (P[i] > P[j] + ROUNDOFF).any():
                k = int(np.argmax(P[i] - P[j]))
                push("monotonicity", (g.members[i].id, g.members[j].id), ids[k])
    return report


def require_cauchy_point(xi: CauchyPoint, slack: float = 0.0) -> CauchyPoint:
    report = validate_cauchy_point(xi, slack, limit=1)
    if not report.valid:
        axiom, member, where = report.first()
        raise CauchyPointError(f"{xi.label!r} fails {axiom} for {member!r} at {where!r}")
    return xi


def find_representative(xi: CauchyPoint, slack: float = 0.0, order: Sequence[Hashable] | None = None):
    """Earliest point ``z`` with ``xi_d(z) <= slack`` for every member, or ``None``.

    ``order`` overrides the point set's order for the tie-break.
    """
    worst = xi.stacked().max(axis=0)
    space = xi.gauge.space
    idx = np.arange(len(space)) if order is None else space.indices(order)
    hits = idx[worst[idx] <= slack]
    return space.ids[hits[0]] if len(hits) else None


def hat_distance(d: str, xi: CauchyPoint, zeta: CauchyPoint) -> float:
    """``min_x (xi_d(x) + zeta_d(x))``."""
    if xi.gauge is not zeta.gauge and xi.gauge.space != zeta.gauge.space:
        raise InputError("Cauchy points over different gauges")
    return float(np.min(xi.profiles[d] + zeta.profiles[d]))


def deleted_point_profile(ambient: Gauge, y: Hashable, sub: Gauge | None = None) -> CauchyPoint:
    """The profile ``z -> d(y, z)`` of a point removed from ``ambient``.

    ``sub`` is the gauge on the remaining points (by default the restriction
    to everything but ``y``); its member ids must match the ambient ones.
    """
    iy = ambient.space.index(y)
    if sub is None:
        sub = ambient.restricted([p for p in ambient.space.ids if p != y])
    if y in sub.space:
        raise InputError(f"{y!r} is still a point of the subspace")
    idx = ambient.space.indices(sub.space.ids)
    return CauchyPoint(sub, {d.id: ambient[d.id].row(iy)[idx] for d in sub.members}, label=y)


@dataclass
class CompletedSpace:
    """Original points plus adjoined Cauchy points, after the separated quotient.

    ``embedding`` sends each original id, and each adjoined label, to its
    point in ``space``.
    """

    space: PointSet
    gauge: Gauge
    embedding: dict
    adjoined: tuple = ()


def complete_space(g: Gauge, candidates: Sequence[CauchyPoint], slack: float = 0.0) -> CompletedSpace:
    """Adjoin non-represented candidates and extend every member to them.

    Candidates must be valid at ``slack``.  A candidate is skipped when some
    point has profile zero in every member (it is represented) or when it is
    at completion distance zero from an earlier adjoined candidate.  Entries
    between two candidates are ``hat_distance``; between a candidate and a
    point they are the profile values; the diagonal is zero.  The result is
    passed through the separated quotient.
    """
    n = len(g.space)
    adjoined: list[CauchyPoint] = []
    merged = {}
    for xi in candidates:
        if xi.gauge is not g and (xi.gauge.space != g.space or set(xi.gauge.ids) != set(g.ids)):
            raise InputError(f"candidate {xi.label!r} lives over another gauge")
        require_cauchy_point(xi, slack)
        rep = find_representative(xi, ROUNDOFF)
        if rep is not None:
            merged[xi.label] = rep
            continue
        if xi.label in g.space:
            raise InputError(f"candidate label {xi.label!r} clashes with a point id")
        twin = next((z for z in adjoined
                     if all(hat_distance(d.id, xi, z) <= ROUNDOFF for d in g.members)), None)
        if twin is not None:
            merged[xi.label] = twin.label
            continue
        adjoined.append(xi)

    k = len(adjoined)
    labels = [xi.label for xi in adjoined]
    if len(set(labels)) != k:
        raise InputError("adjoined candidates need distinct labels")
    coords = None
    big = PointSet(list(g.space.ids) + labels, coords, g.space.resolution)
    tables = []
    for d in g.members:
        T = np.zeros((n + k, n + k))
        T[:n, :n] = d.values
        for a, xi in enumerate(adjoined):
            T[n + a, :n] = T[:n, n + a] = xi.profiles[d.id]
            for b in range(a):
                T[n + a, n + b] = T[n + b, n + a] = hat_distance(d.id, xi, adjoined[b])
        tables.append(require_metric(MetricTable(big, T, d.id)))
    full = Gauge(tables, provenance=g.provenance, check=False)
    qspace, qgauge, projection = separated_quotient(full)
    embedding = {p: projection[p] for p in g.space.ids}
    for label in labels:
        embedding[label] = projection[label]
    for label, target in merged.items():
        embedding[label] = projection[target]
    return CompletedSpace(qspace, qgauge, embedding, tuple(labels))


def cauchy_from_partial(g: Gauge, domains: Mapping[str, Sequence[Hashable]],
                        partial: Mapping[str, Sequence[float]], slack: float = 0.0,
                        label: Hashable = "zeta") -> CauchyPoint:
    """Extend profiles known on subsets ``A_d`` by ``min_{a in A_d} (d(x, a) + xi_d(a))``.

    ``partial[d]`` lists values aligned with ``domains[d]``.  The hypotheses
    are checked first on the domains: both triangle laws exactly, locatedness
    at ``slack``, and for every pair of members some member dominating both
    whose domain lies in both domains and whose values dominate both there.
    """
    space = g.space
    dom_idx = {}
    vals = {}
    for d in g.members:
        if d.id not in domains or d.id not in partial:
            raise InputError(f"no partial data for member {d.id!r}")
        idx = space.indices(domains[d.id])
        v = np.asarray(partial[d.id], dtype=float)
        if len(idx) == 0:
            raise CauchyPointError(f"domain of {d.id!r} is empty")
        if v.shape != idx.shape:
            raise InputError(f"partial data for {d.id!r} does not match its domain")
        if len(np.unique(idx)) != len(idx):
            raise InputError(f"domain of {d.id!r} repeats a point")
        dom_idx[d.id], vals[d.id] = idx, v

    for d in g.members:
        idx, v = dom_idx[d.id], vals[d.id]
        sub = d.rows(idx)[:, idx]
        gap = v[:, None] - (sub + v[None, :])
        if (gap > ROUNDOFF).any():
            a, b = np.unravel_index(int(np.argmax(gap)), gap.shape)
            raise CauchyPointError(
                f"condition 1 fails for {d.id!r} at {(space.ids[idx[a]], space.ids[idx[b]])}")
        gap = sub - (v[:, None] + v[None, :])
        if (gap > ROUNDOFF).any():
            a, b = np.unravel_index(int(np.argmax(gap)), gap.shape)
            raise CauchyPointError(
                f"condition 2 fails for {d.id!r} at {(space.ids[idx[a]], space.ids[idx[b]])}")
        if v.min() > slack:
            raise CauchyPointError(f"condition 3 fails for {d.id!r}: smallest value {v.min()!r}")
    if len(g.members) > 1:
        _check_partial_filtered(g, dom_idx, vals)

    profiles = {}
    for d in g.members:
        idx, v = dom_idx[d.id], vals[d.id]
        # d is symmetric, so rows at idx give d(a, x) for all x
        profiles[d.id] = (d.rows(idx) + v[:, None]).min(axis=0)
    return CauchyPoint(g, profiles, label)


def _check_partial_filtered(g: Gauge, dom_idx, vals) -> None:
    D = g.dominance
    ms = g.members
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            ok = False
            for k in np.nonzero(D[i] & D[j])[0]:
                Ak = dom_idx[ms[k].id]
                inside = set(Ak.tolist())
                if not inside <= set(dom_idx[ms[i].id].tolist()) & set(dom_idx[ms[j].id].tolist()):
                    continue
                vk = dict(zip(Ak.tolist(), vals[ms[k].id]))
                if all(vk[a] + ROUNDOFF >= v for m in (i, j)
                       for a, v in zip(dom_idx[ms[m].id].tolist(), vals[ms[m].id]) if a in vk):
                    ok = True
                    break
            if not ok:
                raise CauchyPointError(
                    f"condition 4 fails: nothing dominates {ms[i].id!r} and {ms[j].id!r} on the domains")
