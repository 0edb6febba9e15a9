"""Convex hulls of finite point clouds in the Cartan subspace.

Points are first reduced to their affine span. Spans of dimension <= 2 are
handled exactly (interval, Andrew's monotone chain); dimension 3 goes through
Qhull; higher dimensions keep only points extreme for some functional in a
fixed family (roots, partial sums, coordinates), which is all the downstream
assertions evaluate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

__all__ = ["Hull", "convex_hull", "hausdorff", "functional_family"]

SPAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Hull:
    vertices: np.ndarray
    origin: np.ndarray
    basis: np.ndarray
    halfspaces: np.ndarray | None
    exact: bool

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def reduced(self, p) -> np.ndarray:
        return (np.asarray(p, dtype=float) - self.origin) @ self.basis

    def distance_off_span(self, p) -> float:
        v = np.asarray(p, dtype=float) - self.origin
        return float(np.linalg.norm(v - self.basis @ (self.basis.T @ v)))

    def contains(self, p, tol: float = 1e-9) -> bool:
        if self.distance_off_span(p) > tol:
            return False
        if self.halfspaces is None:
            return _lp_contains(self.vertices, np.asarray(p, dtype=float), tol)
        if self.dim == 0:
            return True
        y = self.reduced(p)
        values = self.halfspaces[:, :-1] @ y + self.halfspaces[:, -1]
        return bool(np.all(values <= tol))

    def evaluate(self, functional) -> tuple[float, float]:
        """Range of a linear functional over the hull (attained at vertices)."""
        values = self.vertices @ np.asarray(functional, dtype=float)
        return float(values.min()), float(values.max())


def functional_family(dim: int) -> np.ndarray:
    rows = []
    for i, j in itertools.combinations(range(dim), 2):
        r = np.zeros(dim)
        r[i], r[j] = 1.0, -1.0
        rows.append(r)
        s = np.zeros(dim)
        s[i] = s[j] = 1.0
        rows.append(s)
    for k in range(1, dim + 1):
        r = np.zeros(dim)
        r[:k] = 1.0
        rows.append(r)
        e = np.zeros(dim)
        e[k - 1] = 1.0
        rows.append(e)
    return np.array(rows)


def _monotone_chain(y: np.ndarray, tol: float) -> list[int]:
    order = sorted(range(len(y)), key=lambda i: (y[i, 0], y[i, 1]))

    def cross(o, a, b):
        return (y[a, 0] - y[o, 0]) * (y[b, 1] - y[o, 1]) - (y[a, 1] - y[o, 1]) * (y[b, 0] - y[o, 0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= tol:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= tol:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _polygon_halfspaces(poly: np.ndarray) -> np.ndarray:
    rows = []
    m = len(poly)
    for k in range(m):
        a, b = poly[k], poly[(k + 1) % m]
        edge = b - a
        normal = np.array([edge[1], -edge[0]])
        normal /= np.linalg.norm(normal)
        rows.append([normal[0], normal[1], -normal @ a])
    return np.array(rows)


def convex_hull(points, span_tol: float = SPAN_TOL) -> Hull:
    """Hull of the rows of ``points``; the returned vertices are rows of the input."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("convex_hull needs a nonempty (N, dim) array")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite point in cloud")
    origin = pts.mean(axis=0)
    centered = pts - origin
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    r = int(np.sum(s > span_tol * np.sqrt(len(pts))))
    basis = vt[:r].T
    y = centered @ basis
    if r == 0:
        return Hull(pts[:1].copy(), pts[0].copy(), basis, np.zeros((0, 1)), True)
    if r == 1:
        lo, hi = int(np.argmin(y[:, 0])), int(np.argmax(y[:, 0]))
        hs = np.array([[1.0, -y[hi, 0]], [-1.0, y[lo, 0]]])
        return Hull(pts[[lo, hi]].copy(), origin, basis, hs, True)
    if r == 2:
        # collinearity tolerance relative to the cloud's own extent
        scale = float(np.max(np.abs(y)))
        idx = _monotone_chain(y, 1e-14 * scale * scale)
        return Hull(pts[idx].copy(), origin, basis, _polygon_halfspaces(y[idx]), True)
    if r == 3:
        qh = ConvexHull(y)
        eq = qh.equations / np.linalg.norm(qh.equations[:, :-1], axis=1)[:, None]
        return Hull(pts[np.sort(qh.vertices)].copy(), origin, basis, eq, True)
    values = pts @ functional_family(pts.shape[1]).T
    keep = set(np.argmin(values, axis=0).tolist()) | set(np.argmax(values, axis=0).tolist())
    return Hull(pts[sorted(keep)].copy(), origin, basis, None, False)


def _lp_contains(vertices: np.ndarray, p: np.ndarray, tol: float) -> bool:
    # minimize the L1 residual of a convex combination
    k, dim = vertices.shape
    c = np.concatenate([np.zeros(k), np.ones(2 * dim)])
    a_eq = np.hstack([vertices.T, np.eye(dim), -np.eye(dim)])
    a_eq = np.vstack([a_eq, np.concatenate([np.ones(k), np.zeros(2 * dim)])])
    b_eq = np.concatenate([p, [1.0]])
    res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return bool(res.status == 0 and res.fun <= tol)


def hausdorff(a, b) -> float:
    """Euclidean Hausdorff distance between two finite point sets."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
