"""Iwasawa, polar and Jordan-hyperbolic decompositions of Sl(n, R) and Gl(n, R).

Cartan vectors (elements of the diagonal Cartan subspace) are plain 1-D numpy
arrays of natural-log coordinates. For Sl(n) they sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DecompositionError",
    "GroupElement",
    "IwasawaTriple",
    "PolarTriple",
    "as_matrix",
    "iwasawa",
    "iwasawa_a",
    "polar",
    "hyperbolic_log",
    "exp_diag",
]

MAX_DIM = 32


@dataclass(frozen=True)
class Tolerances:
    det: float = 1e-9
    orth: float = 1e-9
    rec: float = 1e-9
    sign: float = 1e-12
    cartan_sum: float = 1e-9


DEFAULT_TOL = Tolerances()


class DecompositionError(ValueError):
    """A matrix could not be factored (singular, non-finite, wrong shape).

    ``operation`` names the failing routine and ``step`` is the time step of a
    cocycle run at which it happened, when there is one.
    """

    def __init__(self, message: str, operation: str = "", step: int | None = None):
        self.operation = operation
        self.step = step
        where = operation if step is None else f"{operation} at step {step}"
        super().__init__(f"{where}: {message}" if where else message)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_square(m: np.ndarray, operation: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DecompositionError(f"expected a square matrix, got shape {m.shape}", operation)
    if not 2 <= m.shape[0] <= MAX_DIM:
        raise DecompositionError(f"matrix size {m.shape[0]} outside [2, {MAX_DIM}]", operation)
    if not np.all(np.isfinite(m)):
        raise DecompositionError("non-finite entries", operation)
    return m


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of Sl(n, R), optionally carrying a Gl(n) central log-scale.

    A Gl(n) matrix g is stored as ``exp(central_log) * entries`` with
    ``|det entries| = 1``; a negative determinant is absorbed by negating the
    last column, which is recorded in ``column_flipped``. That sign is an
    element of the diagonal group M and does not change the Cartan cocycle.
    """

    entries: np.ndarray
    central_log: float = 0.0
    column_flipped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def sl(cls, matrix, tol: Tolerances = DEFAULT_TOL) -> "GroupElement":
        m = _check_square(matrix, "GroupElement.sl")
        det = np.linalg.det(m)
        if abs(det - 1.0) > tol.det:
            raise DecompositionError(f"determinant {float(det):.17g} is not 1 within {tol.det}", "GroupElement.sl")
        return cls(m)

    @classmethod
    def gl(cls, matrix) -> "GroupElement":
        m = _check_square(matrix, "GroupElement.gl")
        sign, logdet = np.linalg.slogdet(m)
        if sign == 0 or not np.isfinite(logdet):
            raise DecompositionError("singular matrix", "GroupElement.gl")
        n = m.shape[0]
        central = logdet / n
        g0 = m * np.exp(-central)
        flipped = bool(sign < 0)
        if flipped:
            g0 = g0.copy()
            g0[:, -1] = -g0[:, -1]
        return cls(g0, float(central), flipped)

    @classmethod
    def normalized(cls, matrix) -> "GroupElement":
        """Rescale a matrix with positive determinant into Sl(n)."""
        m = _check_square(matrix, "GroupElement.normalized")
        sign, logdet = np.linalg.slogdet(m)
        if sign <= 0:
            raise DecompositionError("determinant must be positive", "GroupElement.normalized")
        return cls(m * np.exp(-logdet / m.shape[0]))

    def matrix(self) -> np.ndarray:
        """The full Gl(n) matrix this element represents."""
        m = np.array(self.entries) * np.exp(self.central_log)
        if self.column_flipped:
            m[:, -1] = -m[:, -1]
        return m


def as_matrix(g) -> np.ndarray:
    """Semisimple part of ``g`` as a float array (accepts GroupElement or array)."""
    if isinstance(g, GroupElement):
        return np.asarray(g.entries)
    return np.asarray(g, dtype=float)


def exp_diag(h) -> np.ndarray:
    return np.diag(np.exp(np.asarray(h, dtype=float)))


@dataclass(frozen=True, eq=False)
class IwasawaTriple:
    k_factor: np.ndarray
    a_log: np.ndarray
    n_factor: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.k_factor @ exp_diag(self.a_log) @ self.n_factor


@dataclass(frozen=True, eq=False)
class PolarTriple:
    u_factor: np.ndarray
    a_plus_log: np.ndarray
    v_factor: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.u_factor @ exp_diag(self.a_plus_log) @ self.v_factor


def _positive_qr(m: np.ndarray, operation: str) -> tuple[np.ndarray, np.ndarray]:
    q, r = np.linalg.qr(m)
    d = np.diagonal(r)
    scale = np.max(np.abs(r))
    if not np.all(np.isfinite(r)) or np.min(np.abs(d)) <= np.finfo(float).eps * scale * m.shape[0]:
        raise DecompositionError("matrix is singular to working precision", operation)
    s = np.where(d < 0, -1.0, 1.0)
    return q * s, r * s[:, None]


def iwasawa(g) -> IwasawaTriple:
    """Factor ``g = k @ diag(exp(a)) @ n`` with k orthogonal and n unit upper triangular.

    >>> t = iwasawa([[2.0, 0.0], [0.0, 0.5]])
    >>> np.round(t.a_log / np.log(2), 12).tolist()
    [1.0, -1.0]
    """
    m = _check_square(as_matrix(g), "iwasawa")
    k, r = _positive_qr(m, "iwasawa")
    d = np.diagonal(r).copy()
    n = np.triu(r / d[:, None], 1)
    np.fill_diagonal(n, 1.0)
    return IwasawaTriple(k, np.log(d), n)


def iwasawa_a(g) -> np.ndarray:
    return iwasawa(g).a_log


def polar(g, tol: Tolerances = DEFAULT_TOL) -> PolarTriple:
    """Factor ``g = u @ diag(exp(a_plus)) @ v`` with a_plus weakly decreasing.

    Sign convention: every row of ``v`` has its first entry of modulus above
    ``tol.sign`` positive; the matching column of ``u`` absorbs the flip.
    """
    m = _check_square(as_matrix(g), "polar")
    u, s, vt = np.linalg.svd(m)
    if s[-1] <= 0.0:
        raise DecompositionError("matrix is singular", "polar")
    for i in range(vt.shape[0]):
        row = vt[i]
        lead = np.flatnonzero(np.abs(row) > tol.sign)
        if lead.size and row[lead[0]] < 0:
            vt[i] = -row
            u[:, i] = -u[:, i]
    return PolarTriple(u, np.log(s), vt)


def hyperbolic_log(g) -> np.ndarray:
    """Log-moduli of the eigenvalues of ``g``, sorted weakly decreasing.

    This is the hyperbolic part of the Jordan-Schur decomposition. Moduli are
    read off the diagonal blocks of the real Schur form; a 2x2 block carries a
    complex-conjugate pair whose common modulus is sqrt(det(block)).
    """
    m = _check_square(as_matrix(g), "hyperbolic_log")
    t, _ = scipy.linalg.schur(m, output="real")
    n = t.shape[0]
    logs = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            block = t[i:i + 2, i:i + 2]
            det = block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]
            if det <= 0:
                raise DecompositionError("degenerate 2x2 Schur block", "hyperbolic_log")
            logs += [0.5 * np.log(det)] * 2
            i += 2
        else:
            if t[i, i] == 0.0:
                raise DecompositionError("matrix is singular", "hyperbolic_log")
            logs.append(np.log(abs(t[i, i])))
            i += 1
    return np.sort(np.array(logs))[::-1].copy()
