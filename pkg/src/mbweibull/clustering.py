"""DBSCAN clustering (classic Ester et al. semantics, written out in
full) plus the k-distance heuristic for picking eps and the helper that
extracts the cluster nearest the origin."""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DomainError, NoClusterError

__all__ = [
    "DbscanParams",
    "ClusterLabels",
    "dbscan",
    "select_eps",
    "origin_cluster",
    "origin_cluster_mask",
]

NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    min_pts: int
    eps: float

    def __post_init__(self):
        if self.min_pts < 1:
            raise DomainError("min_pts must be >= 1")
        if not self.eps > 0:
            raise DomainError("eps must be positive")


@dataclass(frozen=True)
class ClusterLabels:
    """Per-point assignment: cluster id >= 0, or -1 for noise."""

    labels: np.ndarray

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max() + 1) if self.labels.size else 0


def _neighbor_lists(points: np.ndarray, eps: float):
    # closed-ball neighborhoods, self-counting; O(n^2) is fine at the
    # sample sizes this pipeline sees
    d2 = np.sum((points[:, None, :] - points[None, :, :]) ** 2, axis=-1)
    adj = d2 <= eps * eps
    return [np.flatnonzero(row) for row in adj]


def dbscan(points, p: DbscanParams) -> ClusterLabels:
    """Classic DBSCAN over 2-d points with Euclidean distance.

    Core points have >= min_pts neighbors (counting themselves) within
    eps; clusters are maximal density-connected sets; border points join
    the first cluster that reaches them; everything else is noise.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise DomainError("points must be an (n, 2) array")
    if not np.all(np.isfinite(points)):
        raise DomainError("points must be finite")
    n = len(points)
    if n == 0:
        return ClusterLabels(np.empty(0, dtype=int))
    neighbors = _neighbor_lists(points, p.eps)
    core = np.array([len(nb) >= p.min_pts for nb in neighbors])
    labels = np.full(n, NOISE, dtype=int)
    cluster = 0
    for i in range(n):
        if labels[i] != NOISE or not core[i]:
            continue
        # breadth-first expansion from a fresh core point
        labels[i] = cluster
        frontier = list(neighbors[i])
        while frontier:
            j = frontier.pop()
            if labels[j] != NOISE:
                continue
            labels[j] = cluster
            if core[j]:
                frontier.extend(neighbors[j])
        cluster += 1
    return ClusterLabels(labels)


def select_eps(points, min_pts: int) -> float:
    """Knee of the sorted k-nearest-neighbor distance curve (k = min_pts,
    self-counting), located by maximum perpendicular distance to the chord
    between the curve endpoints."""
    points = np.asarray(points, dtype=float)
    n = len(points)
    if n < min_pts:
        raise DomainError("need at least min_pts points")
    d2 = np.sum((points[:, None, :] - points[None, :, :]) ** 2, axis=-1)
    kdist = np.sort(np.sqrt(np.sort(d2, axis=1)[:, min_pts - 1]))
    if kdist[-1] == kdist[0]:
        raise DegenerateDataError("all k-distances are identical")
    idx = np.arange(n, dtype=float)
    # perpendicular distance from each curve point to the end-to-end chord
    dx, dy = n - 1.0, kdist[-1] - kdist[0]
    dist = np.abs(dy * idx - dx * (kdist - kdist[0])) / np.hypot(dx, dy)
    knee = int(np.argmax(dist))
    eps = float(kdist[knee])
    if eps <= 0:
        raise DegenerateDataError("knee k-distance is zero")
    return eps


def origin_cluster_mask(points, labels: ClusterLabels) -> np.ndarray:
    """Boolean mask of the cluster whose closest member is nearest the
    origin (ties broken by smaller cluster id)."""
    points = np.asarray(points, dtype=float)
    lab = labels.labels
    ids = np.unique(lab[lab >= 0])
    if ids.size == 0:
        raise NoClusterError("all points are noise")
    dist = np.hypot(points[:, 0], points[:, 1])
    best = min(ids, key=lambda c: (dist[lab == c].min(), c))
    return lab == best


def origin_cluster(points, labels: ClusterLabels) -> np.ndarray:
    """The member points of the origin cluster."""
    points = np.asarray(points, dtype=float)
    return points[origin_cluster_mask(points, labels)]
