"""Proximity, topological equivalence, continuity checks and sequence status.

All checks are finite searches.  Candidate radii are the realized distances
of the table in question: on a finite set, whether ``d(x, x') < delta``
implies anything only changes when ``delta`` crosses a realized distance, so
the largest admissible radius is always the smallest distance to an
offending point.

A continuity failure is resolution-relative.  With ``floor`` the smallest
positive distance of the domain metric, balls of radius at most ``floor``
only contain points at distance zero, so a radius that small proves
nothing.  A check therefore succeeds only when some member admits a radius
strictly above its floor (up to :data:`~gaugespace.metrics.ROUNDOFF`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .gauges import Gauge
from .metrics import ROUNDOFF, InputError, MetricTable, PointSet, ToleranceProfile, coordinate_metric

MAX_EXHAUSTIVE = 15


class MapTable:
    """A total map between two point sets, stored as an array of codomain indices."""

    def __init__(self, domain: PointSet, codomain: PointSet, assignment):
        if isinstance(assignment, Mapping):
            missing = [x for x in domain.ids if x not in assignment]
            if missing:
                raise InputError(f"map is not total: no image for {missing[0]!r}")
            image = codomain.indices(assignment[x] for x in domain.ids)
        else:
            assignment = list(assignment)
            if len(assignment) != len(domain):
                raise InputError("map needs one image per domain point")
            image = codomain.indices(assignment)
        image.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.image = image

    def __call__(self, x: Hashable) -> Hashable:
        return self.codomain.ids[self.image[self.domain.index(x)]]

    def __repr__(self) -> str:
        return f"MapTable({len(self.domain)} -> {len(self.codomain)})"

    @classmethod
    def from_indices(cls, domain: PointSet, codomain: PointSet, image) -> "MapTable":
        return cls(domain, codomain, [codomain.ids[i] for i in np.asarray(image)])

    def compose(self, outer: "MapTable") -> "MapTable":
        """``outer`` after ``self``."""
        if outer.domain != self.codomain:
            raise InputError("maps do not compose")
        return MapTable.from_indices(self.domain, outer.codomain, outer.image[self.image])


def real_line_gauge(values: Iterable[float]) -> tuple[PointSet, Gauge]:
    """The sorted distinct reals in ``values`` with the metric ``|a - b|``."""
    vals = np.unique(np.asarray(list(values), dtype=float))
    space = PointSet([repr(float(v)) for v in vals], vals.reshape(-1, 1))
    return space, Gauge([coordinate_metric(space, "euclidean", "abs")])


def real_valued_map(domain: PointSet, values) -> tuple[MapTable, Gauge]:
    """A real function on ``domain`` as a map into its value set on the line."""
    values = np.asarray(values, dtype=float)
    if values.shape != (len(domain),):
        raise InputError("need one value per point")
    space, gauge = real_line_gauge(values)
    image = np.searchsorted(space.coords[:, 0], values)
    return MapTable.from_indices(domain, space, image), gauge


def _subset(space: PointSet, ids: Iterable[Hashable]) -> np.ndarray:
    return np.unique(space.indices(ids))


# --------------------------------------------------------------------------
# proximity


def set_distance(d: MetricTable, A: Iterable[Hashable], B: Iterable[Hashable]) -> float:
    """``min`` over pairs of ``d(a, b)``."""
    a, b = _subset(d.space, A), _subset(d.space, B)
    if not len(a) or not len(b):
        raise InputError("set distance needs nonempty sets")
    return float(d.rows(a)[:, b].min())


def near(g: Gauge, A: Iterable[Hashable], B: Iterable[Hashable], slack: float = 0.0) -> bool:
    """``A`` and ``B`` are within ``slack`` of each other in every member.

    An empty set is near nothing.
    """
    A, B = list(A), list(B)
    if not A or not B:
        return False
    return all(set_distance(d, A, B) <= slack for d in g.members)


def make_distance_function(d: MetricTable, A: Iterable[Hashable], clamp: float | None = None) -> np.ndarray:
    """Values of ``y -> d(A, y)``, optionally capped at ``clamp``."""
    a = _subset(d.space, A)
    if not len(a):
        raise InputError("distance function needs a nonempty set")
    vals = d.rows(a).min(axis=0)
    return vals if clamp is None else np.minimum(vals, clamp)


# --------------------------------------------------------------------------
# topological equivalence


@dataclass
class EquivalenceVerdict:
    """Result of :func:`topologically_equivalent`.

    On failure ``witness`` records ``(side, member id, point id, eps, ball)``:
    the ball ``B_member(point, eps)`` of gauge ``side`` (``"left"`` or
    ``"right"``) contains no ball of the other gauge around the point.
    """

    equivalent: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def _contains_ball(d: MetricTable, others: Sequence[MetricTable], eps: float) -> np.ndarray:
    """Per point: does some member of ``others`` have a ball around it inside ``B_d(x, eps)``."""
    ok = np.zeros(d.n, dtype=bool)
    for idx, block in d.blocks():
        outside = block >= eps
        good = np.zeros(len(idx), dtype=bool)
        for o in others:
            r = np.where(outside, o.rows(idx), np.inf).min(axis=1)
            good |= r > 0
        ok[idx] = good
    return ok


def topologically_equivalent(g1: Gauge, g2: Gauge, tol: ToleranceProfile) -> EquivalenceVerdict:
    """Every ball of either gauge contains a ball of the other around the same point.

    For ``B_d(x, eps)`` the widest candidate in a member ``d'`` has radius
    ``min {d'(x, y) : d(x, y) >= eps}``; a ball exists iff that is positive.
    """
    if g1.space != g2.space:
        raise InputError("gauges live on different point sets")
    for side, here, there in (("left", g1, g2), ("right", g2, g1)):
        for d in here.members:
            for eps in tol.epsilon_grid:
                ok = _contains_ball(d, there.members, eps)
                if not ok.all():
                    i = int(np.nonzero(~ok)[0][0])
                    x = d.space.ids[i]
                    inside = frozenset(d.space.ids[k] for k in np.nonzero(d.row(i) < eps)[0])
                    return EquivalenceVerdict(False, (side, d.id, x, eps, inside))
    return EquivalenceVerdict(True)


# --------------------------------------------------------------------------
# continuity


@dataclass
class ContinuityVerdict:
    """Result of a (uniform) continuity check.

    ``certificates[(dY, eps)] = (dX, delta)`` for every target member and
    epsilon that passed; ``delta`` is the widest admissible radius (``inf``
    when nothing offends).  ``counterexamples[(dY, eps)]`` lists, per domain
    member, ``(dX, delta, witness)``: the widest admissible radius (not above
    the floor) and the offending point, or pair for uniform checks, sitting at
    exactly that distance, so every larger radius fails.  ``floors`` holds the
    smallest positive distance of each domain member.
    """

    continuous: bool
    certificates: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)
    floors: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.continuous


def _check_map(f: MapTable, gX: Gauge, gY: Gauge):
    if f.domain != gX.space or f.codomain != gY.space:
        raise InputError("map does not match the gauges' point sets")


def _admits(r: float, delta: float | None, floor: float) -> bool:
    if delta is not None:
        return delta <= r + ROUNDOFF
    return r > floor + ROUNDOFF


def check_continuity(f: MapTable, gX: Gauge, gY: Gauge, x: Hashable, tol: ToleranceProfile,
                     delta_rule: Callable[[float], float] | None = None) -> ContinuityVerdict:
    """Epsilon-delta continuity of ``f`` at ``x``.

    With ``delta_rule`` the given radius ``delta_rule(eps)`` is verified instead
    of searched for.
    """
    _check_map(f, gX, gY)
    i = gX.space.index(x)
    fi = f.image[i]
    verdict = ContinuityVerdict(True)
    rows_x = {dX.id: dX.row(i) for dX in gX.members}
    verdict.floors = {dX.id: dX.min_positive for dX in gX.members}
    for dY in gY.members:
        dy = dY.row(fi)[f.image]
        for eps in tol.epsilon_grid:
            offend = dy >= eps
            found = None
            failures = []
            for dX in gX.members:
                dx = rows_x[dX.id]
                if offend.any():
                    k = int(np.argmin(np.where(offend, dx, np.inf)))
                    r = float(dx[k])
                else:
                    k, r = None, math.inf
                delta = None if delta_rule is None else float(delta_rule(eps))
                if _admits(r, delta, verdict.floors[dX.id]):
                    found = (dX.id, r if delta is None else delta)
                    break
                wit = None if k is None else gX.space.ids[k]
                failures.append((dX.id, r if delta is None else delta, wit))
            if found:
                verdict.certificates[(dY.id, eps)] = found
            else:
                verdict.continuous = False
                verdict.counterexamples[(dY.id, eps)] = failures
    return verdict


def check_uniform_continuity(f: MapTable, gX: Gauge, gY: Gauge, tol: ToleranceProfile,
                             delta_rule: Callable[[float], float] | None = None) -> ContinuityVerdict:
    """Uniform epsilon-delta continuity of ``f``.

    The widest uniform radius for ``(dX, dY, eps)`` is the smallest
    ``dX(x, x')`` over pairs with ``dY(f x, f x') >= eps``.  Rows are scanned in
    blocks, so large lazily evaluated tables are fine.
    """
    _check_map(f, gX, gY)
    verdict = ContinuityVerdict(True)
    grid = tol.epsilon_grid
    for dY in gY.members:
        # best[(dX, eps)] = (r, i, k)
        best = {(dX.id, e): (math.inf, None, None) for dX in gX.members for e in grid}
        floors = {dX.id: math.inf for dX in gX.members}
        for start in range(0, len(f.domain), 256):
            idx = np.arange(start, min(start + 256, len(f.domain)))
            dy = dY.rows(f.image[idx])[:, f.image]
            for dX in gX.members:
                dx = dX.rows(idx)
                pos = dx[dx > 0]
                if pos.size:
                    floors[dX.id] = min(floors[dX.id], float(pos.min()))
                for e in grid:
                    cand = np.where(dy >= e, dx, np.inf)
                    flat = int(np.argmin(cand))
                    r = float(cand.flat[flat])
                    if r < best[(dX.id, e)][0]:
                        a, b = divmod(flat, cand.shape[1])
                        best[(dX.id, e)] = (r, int(idx[a]), b)
        verdict.floors.update(floors)
        for e in grid:
            found = None
            failures = []
            delta = None if delta_rule is None else float(delta_rule(e))
            for dX in gX.members:
                r, a, b = best[(dX.id, e)]
                if _admits(r, delta, floors[dX.id]):
                    found = (dX.id, r if delta is None else delta)
                    break
                pair = None if a is None else (f.domain.ids[a], f.domain.ids[b])
                failures.append((dX.id, r if delta is None else delta, pair))
            if found:
                verdict.certificates[(dY.id, e)] = found
            else:
                verdict.continuous = False
                verdict.counterexamples[(dY.id, e)] = failures
    return verdict


# --------------------------------------------------------------------------
# proximal continuity


@dataclass
class ProximalVerdict:
    continuous: bool
    witness: tuple[frozenset, frozenset] | None = None

    def __bool__(self) -> bool:
        return self.continuous


def _near_masks(D: np.ndarray, slack: float) -> np.ndarray:
    """``N[A, y]``: is ``min_{a in A} D[a, y] <= slack``, for every bitmask ``A``."""
    n = D.shape[0]
    size = 1 << n
    best = np.full((size, D.shape[1]), np.inf)
    for mask in range(1, size):
        low = mask & -mask
        best[mask] = np.minimum(best[mask ^ low], D[low.bit_length() - 1])
    return best <= slack


def check_proximal_continuity(f: MapTable, gX: Gauge, gY: Gauge, slack: float = 0.0,
                              family: Iterable[tuple[Iterable, Iterable]] | None = None) -> ProximalVerdict:
    """``A`` near ``B`` implies ``f(A)`` near ``f(B)``.

    Without ``family`` every pair of nonempty subsets of the domain is covered
    (domain size at most 15).  For a fixed ``A`` the implication can only fail
    for some target member ``e``, and then it fails for the largest ``B``
    avoiding the ``e``-neighbourhood of ``f(A)`` whenever it fails at all, so one
    candidate ``B`` per ``(A, e)`` decides every pair.
    """
    _check_map(f, gX, gY)
    n = len(f.domain)
    if family is not None:
        for A, B in family:
            A, B = frozenset(A), frozenset(B)
            fA = [f(a) for a in A]
            fB = [f(b) for b in B]
            if near(gX, A, B, slack) and not near(gY, fA, fB, slack):
                return ProximalVerdict(False, (A, B))
        return ProximalVerdict(True)
    if n > MAX_EXHAUSTIVE:
        raise InputError(f"exhaustive search needs at most {MAX_EXHAUSTIVE} points; supply a family")
    NX = [_near_masks(d.values, slack) for d in gX.members]
    for e in gY.members:
        E = e.rows(f.image)[:, f.image]
        outside = ~_near_masks(E, slack)
        cond = outside.any(axis=1)
        for N in NX:
            cond &= (outside & N).any(axis=1)
        cond[0] = False
        hits = np.nonzero(cond)[0]
        if len(hits):
            A = int(hits[0])
            ids = f.domain.ids
            Aset = frozenset(ids[k] for k in range(n) if A >> k & 1)
            Bset = frozenset(ids[k] for k in np.nonzero(outside[A])[0])
            return ProximalVerdict(False, (Aset, Bset))
    return ProximalVerdict(True)


# --------------------------------------------------------------------------
# sequences


@dataclass
class SequenceStatus:
    """``cauchy_from`` is the least index from which all pairs are within slack.

    The tail it starts must hold at least two entries (unless the sequence
    has only one), otherwise every finite sequence would qualify.

    ``limits`` maps each point that the sequence eventually stays within slack
    of to the first index of that tail; it is only filled for slack-Cauchy
    sequences.
    """

    cauchy_from: int | None
    limits: dict = field(default_factory=dict)

    @property
    def is_cauchy(self) -> bool:
        return self.cauchy_from is not None


def sequence_status(entries: Sequence[Hashable], g: Gauge, slack: float = 0.0) -> SequenceStatus:
    if not len(entries):
        raise InputError("empty sequence")
    idx = g.space.indices(entries)
    M = g.max_table()
    S = M[np.ix_(idx, idx)] > slack
    L = len(idx)
    cauchy_from = 0 if L == 1 else None
    # a one-entry tail certifies nothing, so tails start at L - 2 at the latest
    for k in range(L - 2, -1, -1):
        if S[k:, k:].any():
            break
        cauchy_from = k
    status = SequenceStatus(cauchy_from)
    if cauchy_from is None:
        return status
    far = M[idx] > slack                       # (L, n)
    for p in range(len(g.space)):
        col = far[:, p]
        if col[-1]:
            continue
        bad = np.nonzero(col)[0]
        status.limits[g.space.ids[p]] = int(bad[-1] + 1) if len(bad) else 0
    return status
