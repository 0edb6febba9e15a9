"""Complete flags in R^n, the linear action on them, and Bruhat-cell labels.

A flag V_1 < V_2 < ... < V_n = R^n is stored as an orthonormal frame whose
first j columns span V_j. Column signs are normalized (first entry of modulus
above the sign tolerance is positive), so each flag has one stored frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lie_core import DEFAULT_TOL, DecompositionError, Tolerances, as_matrix, exp_diag, iwasawa
from .root_system import RootSystem, WeylElement, coset_key, theta_of, type_a

__all__ = [
    "FlagPoint",
    "CellLabel",
    "FixedResult",
    "act",
    "coordinate_flag",
    "bruhat_cell",
    "fixed_by",
    "flag_distance",
    "random_flag",
    "lower_unipotent",
]

DEFAULT_RANK_TOL = 1e-8


def _canonical_signs(frame: np.ndarray, sign_tol: float) -> np.ndarray:
    frame = np.array(frame, dtype=float)
    for j in range(frame.shape[1]):
        col = frame[:, j]
        lead = np.flatnonzero(np.abs(col) > sign_tol)
        if lead.size and col[lead[0]] < 0:
            frame[:, j] = -col
    return frame


@dataclass(frozen=True, eq=False)
class FlagPoint:
    frame: np.ndarray

    def __post_init__(self):
        f = np.array(self.frame, dtype=float)
        f.setflags(write=False)
        object.__setattr__(self, "frame", f)

    @classmethod
    def from_frame(cls, m, tol: Tolerances = DEFAULT_TOL) -> "FlagPoint":
        """The flag spanned by the columns of ``m`` taken in order."""
        k = iwasawa(m).k_factor
        return cls(_canonical_signs(k, tol.sign))

    @classmethod
    def standard(cls, n: int) -> "FlagPoint":
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    def subspace(self, j: int) -> np.ndarray:
        return self.frame[:, :j]

    def is_orthonormal(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return bool(np.max(np.abs(self.frame.T @ self.frame - np.eye(self.n))) <= tol.orth)

    def __repr__(self) -> str:
        return f"FlagPoint(frame={np.array2string(self.frame, precision=4)})"


class CellLabel(NamedTuple):
    w: WeylElement
    degenerate: bool


class FixedResult(NamedTuple):
    is_fixed: bool
    component: WeylElement | None
    distance: float


def act(g, b: FlagPoint, tol: Tolerances = DEFAULT_TOL) -> FlagPoint:
    """Move the flag ``b`` by the matrix ``g``."""
    try:
        return FlagPoint.from_frame(as_matrix(g) @ b.frame, tol)
    except DecompositionError as exc:
        raise DecompositionError(str(exc), "act") from exc


def coordinate_flag(w: WeylElement) -> FlagPoint:
    """Flag spanned by e_{w(1)}, e_{w(2)}, ...; fixed by every diagonal matrix."""
    if any(s != 1 for s in w.signs):
        raise ValueError("coordinate flags are defined for permutations only")
    return FlagPoint(w.matrix())


def flag_distance(b1: FlagPoint, b2: FlagPoint) -> float:
    """Largest principal angle between V_j and V'_j, maximized over j."""
    if b1.n != b2.n:
        raise ValueError("flags of different dimension")
    if np.array_equal(b1.frame, b2.frame):
        return 0.0
    worst = 0.0
    for j in range(1, b1.n):
        q1, q2 = b1.frame[:, :j], b2.frame[:, :j]
        residual = q2 - q1 @ (q1.T @ q2)
        # sine of the largest principal angle; accurate for small angles
        s = np.linalg.norm(residual, 2)
        worst = max(worst, float(np.arcsin(min(1.0, s))))
    return worst


def _rank(m: np.ndarray, tol: float) -> tuple[int, bool]:
    if m.size == 0:
        return 0, False
    s = np.linalg.svd(m, compute_uv=False)
    degenerate = bool(np.any((s > tol / 10) & (s < tol * 10)))
    return int(np.sum(s > tol)), degenerate


def _eliminate(frame: np.ndarray, tol: float) -> list[int]:
    # N^- w B factorization by row reduction with the topmost usable pivot
    f = np.array(frame, dtype=float)
    n = f.shape[0]
    used: list[int] = []
    for j in range(n):
        col = np.abs(f[:, j])
        col[used] = -1.0
        candidates = [i for i in range(n) if col[i] > tol]
        p = candidates[0] if candidates else int(np.argmax(col))
        used.append(p)
        pivot = f[p, j]
        if pivot == 0.0:
            continue
        # row operations downward (N^-), column operations rightward (B)
        for i in range(p + 1, n):
            f[i] -= (f[i, j] / pivot) * f[p]
        f[:, j + 1:] -= np.outer(f[:, j], f[p, j + 1:] / pivot)
    return used


def bruhat_cell(b: FlagPoint, tol: float = DEFAULT_RANK_TOL) -> CellLabel:
    """The permutation w with b in the lower-unipotent orbit N^- w b0.

    Uses the rank pattern d(i, j) = dim(V_j cap span(e_i, ..., e_n)), which
    equals j - rank(frame[:i, :j]) with rows counted from 0. Any singular
    value inside the band (tol/10, 10 tol) marks the label as degenerate.
    """
    f = b.frame
    n = b.n
    d = np.zeros((n + 1, n + 1), dtype=int)
    degenerate = False
    for i in range(n + 1):
        for j in range(n + 1):
            r, deg = _rank(f[:i, :j], tol)
            degenerate |= deg
            d[i, j] = j - r
    perm = []
    for j in range(1, n + 1):
        jumps = [i for i in range(n) if d[i, j] - d[i, j - 1] == 1]
        perm.append(max(jumps) if jumps else -1)
    if sorted(perm) != list(range(n)):
        degenerate = True
        perm = _eliminate(f, tol)
    return CellLabel(WeylElement.from_perm(perm), degenerate)


def fixed_by(h, b: FlagPoint, tol: float = 1e-9, wall_tol: float = 1e-6,
             rank_tol: float = DEFAULT_RANK_TOL) -> FixedResult:
    """Is ``b`` fixed by exp(h), and if so which W_Theta(h)-coset labels its component?

    ``h`` must be weakly decreasing. The component is reported by the first
    element (in enumeration order) of the coset W_Theta(h) w, where w is the
    Bruhat cell of ``b``.
    """
    h = np.asarray(h, dtype=float)
    rs: RootSystem = type_a(h.shape[0])
    theta = theta_of(rs, h, wall_tol)
    moved = act(exp_diag(h), b)
    dist = flag_distance(moved, b)
    if dist > tol:
        return FixedResult(False, None, dist)
    cell = bruhat_cell(b, rank_tol)
    return FixedResult(True, coset_key(rs, theta, cell.w), dist)


def random_flag(rng: np.random.Generator, n: int) -> FlagPoint:
    """A flag drawn from the O(n)-invariant distribution."""
    return FlagPoint.from_frame(rng.standard_normal((n, n)))


def lower_unipotent(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return np.eye(n) + np.tril(scale * rng.standard_normal((n, n)), -1)
