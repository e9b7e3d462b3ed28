"""Epsilon-nets by farthest-first traversal, and cover-number profiles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .gauges import Gauge
from .metrics import InputError, MetricTable, ToleranceProfile


@dataclass(frozen=True)
class CoverCertificate:
    """Centers whose open ``eps``-balls are claimed to cover the space."""

    metric: MetricTable
    eps: float
    centers: tuple[Hashable, ...]

    def __len__(self) -> int:
        return len(self.centers)


def farthest_first(d: MetricTable, eps: float) -> tuple[list[int], list[float]]:
    """Farthest-first traversal from the first point, stopped once ``eps`` covers.

    Returns the center indices and, after each center, the covering radius
    ``max_x d(x, centers)``.  Ties go to the lowest index.  The traversal does
    not depend on ``eps``, only where it stops does.
    """
    if not eps > 0:
        raise InputError("cover radius must be positive")
    dist = d.row(0).copy()
    centers = [0]
    radii = [float(dist.max())]
    while radii[-1] >= eps:
        nxt = int(np.argmax(dist))
        centers.append(nxt)
        np.minimum(dist, d.row(nxt), out=dist)
        radii.append(float(dist.max()))
    return centers, radii


def greedy_net(d: MetricTable, eps: float) -> CoverCertificate:
    centers, _ = farthest_first(d, eps)
    return CoverCertificate(d, float(eps), tuple(d.space.ids[i] for i in centers))


def verify_cover(cert: CoverCertificate) -> tuple[bool, Hashable | None]:
    """``(True, None)`` or ``(False, first uncovered point)``."""
    d = cert.metric
    if not cert.centers:
        return False, d.space.ids[0]
    idx = d.space.indices(cert.centers)
    dist = d.rows(idx).min(axis=0)
    bad = np.nonzero(~(dist < cert.eps))[0]
    if len(bad):
        return False, d.space.ids[bad[0]]
    return True, None


def cover_profile(g: Gauge, tol: ToleranceProfile) -> dict[tuple[str, float], int]:
    """Greedy cover sizes ``N(d, eps)`` for every member and every grid epsilon."""
    out = {}
    smallest = min(tol.epsilon_grid)
    for d in g.members:
        _, radii = farthest_first(d, smallest)
        radii = np.asarray(radii)
        for eps in tol.epsilon_grid:
            out[(d.id, eps)] = int(np.argmax(radii < eps)) + 1
    return out
