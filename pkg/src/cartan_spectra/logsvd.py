"""One-sided Jacobi SVD for matrices stored as columns times log-scales.

A matrix ``B = C @ diag(exp(ell))`` is kept as unit columns ``C`` and the
vector ``ell``. Column pairs are rotated using only the ratio
``exp(ell_small - ell_big)``, which may underflow to zero harmlessly (the
rotation then degenerates to a Gram-Schmidt projection). Nothing is ever
exponentiated, so arbitrarily graded products of matrices stay representable.
"""

from __future__ import annotations

import numpy as np

__all__ = ["orthogonalize_scaled", "accumulate_log_singular_values"]

_EPS = np.finfo(float).eps


def _normalize(c: np.ndarray, ell: np.ndarray) -> None:
    norms = np.linalg.norm(c, axis=0)
    if np.any(norms == 0.0) or not np.all(np.isfinite(norms)):
        raise FloatingPointError("zero or non-finite column in scaled SVD")
    c /= norms
    ell += np.log(norms)


def orthogonalize_scaled(c, ell, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(u, ell')`` with ``c @ diag(exp(ell)) = u @ diag(exp(ell')) @ w.T``.

    ``u`` has orthonormal columns and ``w`` is an orthogonal matrix that is not
    formed. ``exp(ell')`` are the singular values, in no particular order.
    """
    c = np.array(c, dtype=float)
    ell = np.array(ell, dtype=float)
    n = c.shape[1]
    _normalize(c, ell)
    threshold = n * _EPS
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                gamma = float(c[:, i] @ c[:, j])
                if abs(gamma) <= threshold:
                    continue
                rotated = True
                p, q = (i, j) if ell[i] >= ell[j] else (j, i)
                r = np.exp(ell[q] - ell[p])
                eta = (r * r - 1.0) / (2.0 * gamma)
                # t / r for the Jacobi tangent t, finite even when r == 0
                ratio = np.copysign(1.0, eta) / (abs(eta) + np.sqrt(r * r + eta * eta))
                t = ratio * r
                cos = 1.0 / np.sqrt(1.0 + t * t)
                new_p = cos * (c[:, p] - ratio * r * r * c[:, q])
                new_q = cos * (ratio * c[:, p] + c[:, q])
                c[:, p], c[:, q] = new_p, new_q
                for k in (p, q):
                    norm = np.linalg.norm(c[:, k])
                    c[:, k] /= norm
                    ell[k] += np.log(norm)
        if not rotated:
            break
    return c, ell


def accumulate_log_singular_values(matrices, n: int) -> np.ndarray:
    """Log singular values (descending) of ``matrices[-1] @ ... @ matrices[0]``."""
    u = np.eye(n)
    ell = np.zeros(n)
    for g in matrices:
        u, ell = orthogonalize_scaled(np.asarray(g) @ u, ell)
    return np.sort(ell)[::-1]
