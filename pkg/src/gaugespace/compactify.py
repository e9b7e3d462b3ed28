"""Compactifications at sample scale.

Two constructions live here.  The one-point gauge collapses the outside of
each window ``K`` of an exhaustion chain.  The Stone-Čech gauge pulls back
the coordinate maximum along a finite dictionary of ``[0, 1]``-valued
functions; its points are handled through evaluation data (interval
assignments) that bisection refines to single values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .completion import (CauchyPoint, CauchyPointError, cauchy_from_partial, find_representative,
                         profiles_from_generators)
from .gauges import Gauge, generate_gauge
from .metrics import ROUNDOFF, InputError, MetricTable, PointSet, ToleranceProfile, collapse, distance_to_set
from .relations import MapTable

MAX_ULTRAFILTER_N = 4


# --------------------------------------------------------------------------
# one-point compactification


@dataclass(frozen=True)
class ExhaustionChain:
    """Strictly increasing proper nonempty windows ``K_1 < K_2 < ... < K_m``."""

    space: PointSet
    subsets: tuple

    def __init__(self, space: PointSet, subsets: Iterable[Iterable[Hashable]]):
        sets = tuple(frozenset(s) for s in subsets)
        if not sets:
            raise InputError("exhaustion chain is empty")
        everything = frozenset(space.ids)
        for j, K in enumerate(sets):
            if not K:
                raise InputError(f"window {j + 1} is empty")
            unknown = K - everything
            if unknown:
                raise InputError(f"window {j + 1} has unknown point {next(iter(unknown))!r}")
            if K == everything:
                raise InputError(f"window {j + 1} is the whole space")
            if j and not sets[j - 1] < K:
                raise InputError(f"window {j + 1} does not strictly contain window {j}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "subsets", sets)

    def complement(self, j: int) -> list:
        """Points outside window ``j`` (counted from 0), in space order."""
        K = self.subsets[j]
        return [p for p in self.space.ids if p not in K]

    def __len__(self) -> int:
        return len(self.subsets)


def _window_id(member: str, j: int) -> str:
    return f"{member}|K{j + 1}"


def one_point_gauge(g: Gauge, chain: ExhaustionChain) -> Gauge:
    """Members ``min(d(x,y), d(x,~K) + d(~K,y))`` for every member and window, closed under max."""
    if chain.space != g.space:
        raise InputError("chain lives on another point set")
    seeds = [collapse(d, chain.complement(j), id=_window_id(d.id, j))
             for d in g.members for j in range(len(chain))]
    return generate_gauge(seeds)


def infinity_profile(g: Gauge, chain: ExhaustionChain, gauge: Gauge | None = None) -> CauchyPoint:
    """The point at infinity: ``xi_{d_K}(x) = d(x, ~K)``.

    ``gauge`` is the one-point gauge if already built; closure members get
    the maximum of their generators' profiles.
    """
    if gauge is None:
        gauge = one_point_gauge(g, chain)
    seed_profiles = {_window_id(d.id, j): distance_to_set(d, chain.complement(j))
                     for d in g.members for j in range(len(chain))}
    return CauchyPoint(gauge, profiles_from_generators(gauge, seed_profiles), label="inf")


# --------------------------------------------------------------------------
# function dictionaries and the Stone-Čech gauge


class FunctionDict:
    """Named value tables ``X -> [0, 1]`` plus named stacks of entries.

    Immutable: :meth:`with_entries` and :meth:`with_stack` return new
    dictionaries.  Continuity of the entries is not checked here; see
    :func:`check_dict_continuity`.
    """

    def __init__(self, space: PointSet, entries: Mapping[str, Sequence[float]],
                 stacks: Mapping[str, Sequence[str]] | None = None):
        n = len(space)
        vals = {}
        for k, v in entries.items():
            a = np.array(v, dtype=float)
            if a.shape != (n,):
                raise InputError(f"entry {k!r} needs {n} values")
            if not np.isfinite(a).all() or a.min() < 0 or a.max() > 1:
                raise InputError(f"entry {k!r} leaves [0, 1]")
            a.setflags(write=False)
            vals[str(k)] = a
        if not vals:
            raise InputError("function dictionary is empty")
        st = {}
        for name, parts in (stacks or {}).items():
            parts = tuple(parts)
            if name in vals:
                raise InputError(f"stack name {name!r} clashes with an entry")
            if not parts:
                raise InputError(f"stack {name!r} is empty")
            for p in parts:
                if p not in vals:
                    raise InputError(f"stack {name!r} names unknown entry {p!r}")
            st[name] = parts
        self.space = space
        self.entries = vals
        self.stacks = st

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, k) -> bool:
        return k in self.entries

    def __getitem__(self, k: str) -> np.ndarray:
        try:
            return self.entries[k]
        except KeyError:
            raise InputError(f"unknown dictionary entry {k!r}") from None

    def __repr__(self) -> str:
        return f"FunctionDict(entries={len(self.entries)}, stacks={len(self.stacks)})"

    @property
    def ids(self) -> tuple:
        return tuple(self.entries)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Values as an ``(entries, points)`` array in entry order."""
        m = np.array([self.entries[k] for k in self.entries])
        m.setflags(write=False)
        return m

    def with_entries(self, new: Mapping[str, Sequence[float]]) -> "FunctionDict":
        clash = set(new) & set(self.entries)
        if clash:
            raise InputError(f"entry {sorted(clash)[0]!r} already exists")
        return FunctionDict(self.space, {**self.entries, **new}, self.stacks)

    def with_stack(self, name: str, parts: Sequence[str]) -> "FunctionDict":
        if name in self.stacks:
            raise InputError(f"stack {name!r} already exists")
        return FunctionDict(self.space, self.entries, {**self.stacks, name: parts})


def compose_dict(fdict: FunctionDict, outer: Callable[[float], float] | Mapping[float, float],
                 entry: str, id: str | None = None, name: str = "psi") -> FunctionDict:
    """Register ``outer o entry``.  ``outer`` is a callable or a table over the realized values."""
    phi = fdict[entry]
    if callable(outer):
        vals = [float(outer(v)) for v in phi]
    else:
        try:
            vals = [float(outer[v]) for v in phi.tolist()]
        except KeyError as e:
            raise InputError(f"outer function has no value at {e.args[0]!r}") from None
    return fdict.with_entries({id or f"{name}({entry})": vals})


def distance_dictionary(g: Gauge, clamp: float = 1.0) -> dict:
    """Entries ``min(d(x, .), clamp)`` for every member and point, keyed ``dist[d,x]``."""
    out = {}
    for d in g.members:
        for i, x in enumerate(g.space.ids):
            out[f"dist[{d.id},{x}]"] = np.minimum(d.row(i), clamp)
    return out


def check_dict_continuity(fdict: FunctionDict, g: Gauge, tol: ToleranceProfile) -> dict:
    """Entries failing the pointwise continuity check somewhere, with the first bad point."""
    from .relations import check_continuity, real_valued_map

    bad = {}
    for k, v in fdict.entries.items():
        f, gY = real_valued_map(g.space, v)
        for x in g.space.ids:
            if not check_continuity(f, g, gY, x, tol):
                bad[k] = x
                break
    return bad


TOP = "all"


class StoneCechGauge(Gauge):
    """Members ``|phi(x) - phi(y)|`` per entry, the coordinate maximum per stack, and a top stack.

    Tables are evaluated lazily.  The top member stacks the whole dictionary
    and dominates everything, which is what makes the family filtered.
    Dominance between members is read off their entry sets: ``S <= T`` when
    every entry of ``S`` is in ``T``.  That is sound but may miss
    coincidental dominance between unrelated entries.
    """

    def __init__(self, fdict: FunctionDict):
        self.fdict = fdict
        M = fdict.matrix
        pos = {k: i for i, k in enumerate(fdict.ids)}
        groups = {k: (k,) for k in fdict.ids}
        groups.update(fdict.stacks)
        if len(fdict) > 1:
            groups[TOP] = fdict.ids
        members = []
        for name, parts in groups.items():
            rows = np.array([pos[p] for p in parts], dtype=np.intp)
            members.append(MetricTable(fdict.space, id=name, rows=_stack_rows(M, rows), certified=True))
        top = TOP if len(fdict) > 1 else fdict.ids[0]
        super().__init__(members, provenance=groups, top=top, check=False)

    @cached_property
    def dominance(self) -> np.ndarray:
        sets = [frozenset(self.provenance[m.id]) for m in self.members]
        return np.array([[a <= b for b in sets] for a in sets], dtype=bool)

    def is_filtered(self) -> bool:
        return True


def _stack_rows(M: np.ndarray, parts: np.ndarray):
    sub = M[parts]

    def rows(idx):
        out = np.zeros((len(idx), sub.shape[1]))
        step = max(1, 2**22 // max(1, len(idx) * sub.shape[1]))
        for s in range(0, len(sub), step):
            chunk = sub[s:s + step]
            np.maximum(out, np.abs(chunk[:, idx][:, :, None] - chunk[:, None, :]).max(axis=0), out=out)
        return out

    return rows


def stone_cech_gauge(fdict: FunctionDict) -> StoneCechGauge:
    return StoneCechGauge(fdict)


# --------------------------------------------------------------------------
# evaluation


class LocatednessError(InputError):
    """No sample point is close enough to the virtual point."""

    def __init__(self, message: str, family: tuple = (), eps: float | None = None):
        super().__init__(message)
        self.family = family
        self.eps = eps


@dataclass(frozen=True)
class Evaluation:
    """``value`` of an entry at a Cauchy point and the brackets ``(eps, A, B)`` it came from."""

    value: float
    brackets: tuple

    def __float__(self) -> float:
        return self.value


def _sc_gauge(xi: CauchyPoint) -> StoneCechGauge:
    if not isinstance(xi.gauge, StoneCechGauge):
        raise InputError("point does not live over a Stone-Čech gauge")
    return xi.gauge


def evaluate_point(xi: CauchyPoint, entry: str, tol: ToleranceProfile) -> Evaluation:
    """Value of ``entry`` at ``xi`` from the brackets over ``{x : xi_entry(x) <= eps}``.

    The epsilons are the grid entries above the slack followed by the slack
    itself.  The value is the midpoint of the narrowest bracket.
    """
    g = _sc_gauge(xi)
    phi = g.fdict[entry]
    prof = xi.profiles[entry]
    grid = [e for e in tol.epsilon_grid if e > tol.slack] + [tol.slack]
    brackets = []
    for eps in grid:
        near = prof <= eps
        if not near.any():
            raise LocatednessError(f"no point within {eps!r} of {xi.label!r} for {entry!r}",
                                   (entry,), eps)
        brackets.append((float(eps), float(phi[near].min()), float(phi[near].max())))
    widths = [b - a for _, a, b in brackets]
    k = int(np.nonzero(np.asarray(widths) == min(widths))[0][-1])
    _, a, b = brackets[k]
    return Evaluation((a + b) / 2, tuple(brackets))


def evaluate_all(xi: CauchyPoint, tol: ToleranceProfile) -> dict:
    """Values of every dictionary entry at ``xi``."""
    g = _sc_gauge(xi)
    return {k: evaluate_point(xi, k, tol).value for k in g.fdict.ids}


def _shrink_family(bad: Callable[[list], bool], family: list) -> tuple:
    """Greedily drop entries while the family stays bad."""
    keep = list(family)
    for k in list(family):
        trial = [p for p in keep if p != k]
        if trial and bad(trial):
            keep = trial
    return tuple(keep)


def cauchy_from_evaluation(values: Mapping[str, float], gauge: StoneCechGauge, slack: float = 0.0,
                           label: Hashable = "xi") -> CauchyPoint:
    """``xi_S(y) = max_{i in S} |phi_i(y) - v_i|`` for every member ``S``.

    Locatedness is checked on the top member, the whole dictionary; on
    failure the error carries a small violating family.
    """
    fdict = gauge.fdict
    missing = [k for k in fdict.ids if k not in values]
    if missing:
        raise InputError(f"no value for entry {missing[0]!r}")
    v = np.array([float(values[k]) for k in fdict.ids])
    if not np.isfinite(v).all() or v.min() < 0 or v.max() > 1:
        raise InputError("values must lie in [0, 1]")
    gaps = np.abs(fdict.matrix - v[:, None])
    pos = {k: i for i, k in enumerate(fdict.ids)}

    def bad(family):
        return gaps[[pos[k] for k in family]].max(axis=0).min() > slack

    if gaps.max(axis=0).min() > slack:
        fam = _shrink_family(bad, list(fdict.ids))
        raise LocatednessError(f"no point within {slack!r} of the values on {list(fam)}", fam)
    entry_profiles = {k: gaps[i] for k, i in pos.items()}
    return CauchyPoint(gauge, profiles_from_generators(gauge, entry_profiles), label)


# --------------------------------------------------------------------------
# evaluation data


class EvaluationDatum:
    """Closed intervals ``[lo, hi]`` inside ``[0, 1]``, one per entry."""

    def __init__(self, intervals: Mapping[str, Sequence[float]]):
        out = {}
        for k, iv in intervals.items():
            lo, hi = (float(t) for t in iv)
            if not (0 <= lo <= hi <= 1):
                raise InputError(f"interval for {k!r} must satisfy 0 <= lo <= hi <= 1, got {(lo, hi)}")
            out[k] = (lo, hi)
        if not out:
            raise InputError("evaluation datum is empty")
        self.intervals = out

    def __getitem__(self, k: str) -> tuple:
        return self.intervals[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, EvaluationDatum) and self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"EvaluationDatum({self.intervals!r})"

    def midpoints(self) -> dict:
        return {k: (lo + hi) / 2 for k, (lo, hi) in self.intervals.items()}

    def widths(self) -> dict:
        return {k: hi - lo for k, (lo, hi) in self.intervals.items()}

    def contains(self, other: "EvaluationDatum") -> bool:
        """Every interval of ``other`` lies inside the matching one here."""
        return all(self.intervals[k][0] <= lo and hi <= self.intervals[k][1]
                   for k, (lo, hi) in other.intervals.items())

    @classmethod
    def point(cls, fdict: FunctionDict, x: Hashable) -> "EvaluationDatum":
        i = fdict.space.index(x)
        return cls({k: (v[i], v[i]) for k, v in fdict.entries.items()})

    @classmethod
    def full(cls, fdict: FunctionDict) -> "EvaluationDatum":
        return cls({k: (0.0, 1.0) for k in fdict.ids})


def _gaps(J: EvaluationDatum, fdict: FunctionDict) -> np.ndarray:
    """Distance of each value to its interval, ``(entries, points)``."""
    if set(J.intervals) != set(fdict.ids):
        extra = set(J.intervals) ^ set(fdict.ids)
        raise InputError(f"datum and dictionary disagree on entry {sorted(extra)[0]!r}")
    lo = np.array([J.intervals[k][0] for k in fdict.ids])[:, None]
    hi = np.array([J.intervals[k][1] for k in fdict.ids])[:, None]
    M = fdict.matrix
    return np.maximum(np.maximum(lo - M, M - hi), 0.0)


@dataclass(frozen=True)
class DatumVerdict:
    """``witness`` is a point meeting every interval; ``family`` a violating set of entries."""

    valid: bool
    witness: Hashable | None = None
    family: tuple = ()

    def __bool__(self) -> bool:
        return self.valid


def validate_datum(J: EvaluationDatum, fdict: FunctionDict, slack: float = 0.0) -> DatumVerdict:
    """Some point lies within ``slack`` of every interval at once."""
    G = _gaps(J, fdict)
    worst = G.max(axis=0)
    hits = np.nonzero(worst <= slack)[0]
    if len(hits):
        return DatumVerdict(True, fdict.space.ids[hits[0]])
    pos = {k: i for i, k in enumerate(fdict.ids)}
    fam = _shrink_family(lambda f: G[[pos[k] for k in f]].max(axis=0).min() > slack, list(fdict.ids))
    return DatumVerdict(False, family=fam)


def refine_datum(J: EvaluationDatum, fdict: FunctionDict, width_tol: float = 0.0,
                 slack: float = 0.0) -> EvaluationDatum:
    """Bisect the widest interval (first listed on ties), keeping the lower half when it stays valid.

    Stops once every width is at most ``width_tol``.  With ``width_tol = 0``
    the consistent points eventually agree on every entry and the intervals
    are collapsed onto their common values, which is where the bisection
    converges anyway.  When floating point runs out of midpoints the
    interval collapses to an endpoint, lower first.
    """
    if width_tol < 0:
        raise InputError("width tolerance must be nonnegative")
    if width_tol == 0 and slack > 0:
        raise InputError("refining to zero width needs zero slack")
    G = _gaps(J, fdict)
    alive = G.max(axis=0) <= slack
    if not alive.any():
        raise InputError("input datum is not valid")
    M = fdict.matrix
    ids = fdict.ids
    lo = np.array([J.intervals[k][0] for k in ids])
    hi = np.array([J.intervals[k][1] for k in ids])

    def fits(i, a, b):
        v = M[i]
        return alive & (np.maximum(np.maximum(a - v, v - b), 0.0) <= slack)

    while True:
        if width_tol == 0:
            live = M[:, alive]
            if (live == live[:, :1]).all():
                lo = hi = live[:, 0].copy()
                break
        w = hi - lo
        i = int(np.argmax(w))
        if w[i] <= width_tol:
            break
        a, b = lo[i], hi[i]
        mid = (a + b) / 2
        if mid <= a or mid >= b:
            halves = ((a, a), (b, b))
        else:
            halves = ((a, mid), (mid, b))
        for na, nb in halves:
            keep = fits(i, na, nb)
            if keep.any():
                lo[i], hi[i], alive = na, nb, keep
                break
        else:  # pragma: no cover - a valid datum always keeps one half
            raise AssertionError("bisection lost every point")
    return EvaluationDatum({k: (float(lo[j]), float(hi[j])) for j, k in enumerate(ids)})


# --------------------------------------------------------------------------
# tails and extension


@dataclass(frozen=True)
class TailChain:
    """Strictly decreasing nonempty subsets ``C_1 > C_2 > ... > C_m``."""

    space: PointSet
    subsets: tuple

    def __init__(self, space: PointSet, subsets: Iterable[Iterable[Hashable]]):
        sets = tuple(frozenset(s) for s in subsets)
        if not sets:
            raise InputError("tail chain is empty")
        for j, C in enumerate(sets):
            if not C:
                raise InputError(f"tail {j + 1} is empty")
            for p in C:
                space.index(p)
            if j and not C < sets[j - 1]:
                raise InputError(f"tail {j + 1} is not strictly inside tail {j}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "subsets", sets)

    def __len__(self) -> int:
        return len(self.subsets)


def tail_datum(chain: TailChain, fdict: FunctionDict) -> EvaluationDatum:
    """``A = max over tails of min phi``, ``B = min over tails of max phi``."""
    if chain.space != fdict.space:
        raise InputError("chain and dictionary live on different point sets")
    M = fdict.matrix
    lows, highs = [], []
    for C in chain.subsets:
        idx = fdict.space.indices(C)
        lows.append(M[:, idx].min(axis=1))
        highs.append(M[:, idx].max(axis=1))
    A = np.max(lows, axis=0)
    B = np.min(highs, axis=0)
    return EvaluationDatum({k: (float(A[j]), float(B[j])) for j, k in enumerate(fdict.ids)})


def psi_id(member: str, y: Hashable) -> str:
    return f"psi[{member},{y}]"


def extension_entries(gmap: MapTable, gaugeY: Gauge) -> dict:
    """``min(d(g(x), y), 1)`` for every target member ``d`` and target point ``y``."""
    out = {}
    for d in gaugeY.members:
        D = np.minimum(d.rows(gmap.image), 1.0)   # (domain, target)
        for j, y in enumerate(gaugeY.space.ids):
            out[psi_id(d.id, y)] = D[:, j]
    return out


class TargetNotReachable(InputError):
    """Every target point is at truncated distance 1 for some member."""


class CompletenessSlackError(InputError):
    """The assembled target profile has no representative at the slack."""

    def __init__(self, message: str, best: Hashable, excess: float):
        super().__init__(message)
        self.best = best
        self.excess = excess


def extend_map(gmap: MapTable, gaugeY: Gauge, xi: CauchyPoint, slack: float = 0.0,
               order: Sequence[Hashable] | None = None, tol: ToleranceProfile | None = None) -> Hashable:
    """Image of ``xi`` under the extension of ``gmap`` to the Stone-Čech points.

    The dictionary under ``xi`` must already hold the :func:`extension_entries`.
    ``tol`` sets the evaluation grid (its slack is replaced by ``slack``).
    """
    g = _sc_gauge(xi)
    if gmap.codomain != gaugeY.space or gmap.domain != g.space:
        raise InputError("map does not match the gauges")
    grid = tol.epsilon_grid if tol is not None else (1.0, 0.5, 0.25)
    etol = ToleranceProfile(slack, tuple(e for e in grid if e > slack) or (1.0,))
    domains, partial = {}, {}
    for d in gaugeY.members:
        ys, vs = [], []
        for y in gaugeY.space.ids:
            k = psi_id(d.id, y)
            if k not in g.fdict:
                raise InputError(f"dictionary lacks the extension entry {k!r}")
            v = evaluate_point(xi, k, etol).value
            if v < 1:
                ys.append(y)
                vs.append(v)
        if not ys:
            raise TargetNotReachable(f"every target point is at distance 1 in {d.id!r}")
        domains[d.id], partial[d.id] = ys, vs
    zeta = cauchy_from_partial(gaugeY, domains, partial, slack, label=xi.label)
    rep = find_representative(zeta, slack, order)
    if rep is None:
        worst = zeta.stacked().max(axis=0)
        k = int(np.argmin(worst))
        best = gaugeY.space.ids[k]
        raise CompletenessSlackError(
            f"no target point within {slack!r}; best is {best!r} at {worst[k]!r}", best, float(worst[k]))
    return rep


def tails_toward(gmap: MapTable, d: MetricTable, y: Hashable, eps_grid: Sequence[float]) -> TailChain:
    """Sets ``{x : d(g(x), y) < eps}`` along a decreasing grid, deduplicated, stopped before empty."""
    dist = d.row(d.space.index(y))[gmap.image]
    sets = []
    for eps in eps_grid:
        C = frozenset(gmap.domain.ids[i] for i in np.nonzero(dist < eps)[0])
        if not C:
            break
        if sets and C == sets[-1]:
            continue
        sets.append(C)
    if not sets:
        raise TargetNotReachable(f"no domain point maps within {eps_grid[0]!r} of {y!r}")
    return TailChain(gmap.domain, sets)


# --------------------------------------------------------------------------
# ultrafilters on a finite set


@dataclass(frozen=True)
class Ultrafilter:
    """A family of subsets of ``{1..n}``."""

    n: int
    member_sets: frozenset

    def is_ultrafilter(self) -> bool:
        ground = frozenset(range(1, self.n + 1))
        F = self.member_sets
        if ground not in F or frozenset() in F:
            return False
        subsets = _all_subsets(self.n)
        for A in subsets:
            if A not in F and (ground - A) not in F:
                return False
        for A, B in combinations(F, 2):
            if A & B not in F:
                return False
        return all(B in F for A in F for B in subsets if A <= B)

    @property
    def principal_point(self) -> int | None:
        core = frozenset.intersection(*self.member_sets)
        return next(iter(core)) if len(core) == 1 else None


def _all_subsets(n: int) -> list:
    return [frozenset(k + 1 for k in range(n) if m >> k & 1) for m in range(1 << n)]


def enumerate_ultrafilters(n: int) -> list:
    """Every ultrafilter on ``{1..n}``, found by scanning all families of subsets."""
    if n < 1:
        raise InputError("need at least one point")
    if n > MAX_ULTRAFILTER_N:
        raise InputError(f"exhaustive ultrafilter scan is limited to n <= {MAX_ULTRAFILTER_N}")
    subsets = _all_subsets(n)
    size = len(subsets)
    full = size - 1
    # the whole set is in, the empty set out; scan the remaining bits
    free = list(range(1, full))
    out = []
    for bits in range(1 << len(free)):
        chosen = {full}
        for k, s in enumerate(free):
            if bits >> k & 1:
                chosen.add(s)
        if any((s not in chosen) and (full ^ s not in chosen) for s in range(size)):
            continue
        if any(a & b not in chosen for a in chosen for b in chosen):
            continue
        if any(b not in chosen for a in chosen for b in range(size) if a & b == a):
            continue
        out.append(Ultrafilter(n, frozenset(subsets[s] for s in chosen)))
    return out
