"""Matrix cocycles over finite cyclic driving systems and their Cartan exponents.

The Cartan (Iwasawa) cocycle a(t, x, b) is accumulated one step at a time:
multiply the current orthonormal flag frame by the step matrix, re-factor with
QR, keep the orthogonal factor as the new frame and add log|diag(R)| to the
running sum. This is the standard QR method for Lyapunov exponents; the
product matrix is never formed, so long horizons cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .flag_manifold import FlagPoint
from .lie_core import DEFAULT_TOL, DecompositionError, GroupElement, Tolerances
from .logsvd import orthogonalize_scaled

__all__ = [
    "DrivingSystem",
    "BundlePoint",
    "CocycleTrace",
    "evolve",
    "evolve_frames",
    "finite_time_lyapunov",
    "polar_exponent",
    "norm_cocycle",
    "regularity_diagnostic",
    "product_matrix",
]

KINDS = ("point", "cyclic", "automaton")


def _as_group(g) -> GroupElement:
    if isinstance(g, GroupElement):
        return g
    return GroupElement.sl(g)


@dataclass(frozen=True, eq=False)
class DrivingSystem:
    """A finite deterministic base (a point or a single cycle) with a matrix per state.

    ``labels[x]`` picks the matrix applied when leaving state ``x`` and
    ``transitions[x]`` is the next state. Distinct base states are
    ``base_separation`` apart in the (discrete) base metric.
    """

    kind: str
    matrices: tuple[GroupElement, ...]
    labels: tuple[int, ...]
    transitions: tuple[int, ...]
    base_separation: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown driving kind {self.kind!r}; expected one of {KINDS}")
        if not self.matrices:
            raise ValueError("driving system needs at least one matrix")
        n = self.matrices[0].n
        if any(m.n != n for m in self.matrices):
            raise ValueError("all generator matrices must have the same size")
        states = len(self.transitions)
        if states == 0 or len(self.labels) != states:
            raise ValueError("labels and transitions must cover the same nonempty state set")
        if any(not 0 <= lab < len(self.matrices) for lab in self.labels):
            raise ValueError("label refers to a missing matrix")
        if any(not 0 <= t < states for t in self.transitions):
            raise ValueError("transition leaves the state set")
        # the state graph must be one cycle through every state
        seen, x = set(), 0
        while x not in seen:
            seen.add(x)
            x = self.transitions[x]
        if x != 0 or len(seen) != states:
            raise ValueError("state graph of the driving system is not a single cycle")
        if self.base_separation <= 0:
            raise ValueError("base_separation must be positive")

    @classmethod
    def point(cls, g, base_separation: float = 1.0) -> "DrivingSystem":
        return cls("point", (_as_group(g),), (0,), (0,), base_separation)

    @classmethod
    def cyclic(cls, matrices: Sequence, word: Sequence[int] | None = None,
               base_separation: float = 1.0) -> "DrivingSystem":
        mats = tuple(_as_group(m) for m in matrices)
        word = tuple(range(len(mats))) if word is None else tuple(int(i) for i in word)
        m = len(word)
        return cls("cyclic", mats, word, tuple((i + 1) % m for i in range(m)), base_separation)

    @classmethod
    def automaton(cls, matrices: Sequence, transitions: Sequence[int], labels: Sequence[int] | None = None,
                  base_separation: float = 1.0) -> "DrivingSystem":
        mats = tuple(_as_group(m) for m in matrices)
        labels = tuple(range(len(transitions))) if labels is None else tuple(labels)
        return cls("automaton", mats, labels, tuple(int(t) for t in transitions), base_separation)

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    @property
    def period(self) -> int:
        return self.n_states

    def step(self, state: int) -> int:
        return self.transitions[state]

    def generator(self, state: int) -> GroupElement:
        return self.matrices[self.labels[state]]

    def advance(self, state: int, t: int) -> int:
        for _ in range(t % self.period):
            state = self.transitions[state]
        return state

    def base_distance(self, x: int, y: int) -> float:
        return 0.0 if x == y else self.base_separation

    def period_map(self, state: int = 0) -> tuple[np.ndarray, float]:
        """Product over one period from ``state``, as (matrix scaled to unit norm, log of the scale)."""
        p = np.eye(self.n)
        log_scale = 0.0
        for _ in range(self.period):
            p = np.asarray(self.generator(state).entries) @ p
            s = np.linalg.norm(p)
            p /= s
            log_scale += np.log(s)
            state = self.step(state)
        return p, log_scale


class BundlePoint(NamedTuple):
    state: int
    flag: FlagPoint


@dataclass(frozen=True, eq=False)
class CocycleTrace:
    """Running values of the Cartan cocycle: ``a_partial[t - 1] = a(t, xi)``."""

    horizon: int
    a_partial: np.ndarray
    final_flag: FlagPoint
    final_state: int
    central_partial: np.ndarray

    @property
    def a_final(self) -> np.ndarray:
        return self.a_partial[-1]

    @property
    def end(self) -> BundlePoint:
        return BundlePoint(self.final_state, self.final_flag)

    def full_a(self) -> np.ndarray:
        """Cocycle values with the Gl(n) central part added to every coordinate."""
        return self.a_partial + self.central_partial[:, None]


_geqrf, _orgqr = scipy.linalg.lapack.get_lapack_funcs(("geqrf", "orgqr"), (np.eye(2),))


def _qr_single(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # raw LAPACK: numpy's qr wrapper costs ~10x more than the factorization at n <= 8
    qr, tau, _, _ = _geqrf(m)
    q, _, _ = _orgqr(qr, tau)
    return q, np.diagonal(qr).copy()


def evolve_frames(d: DrivingSystem, state: int, frames: np.ndarray, horizon: int,
                  record: bool = False, operation: str = "evolve"):
    """Advance a batch of flag frames together from the same base state.

    ``frames`` has shape (B, n, n). Returns ``(a, frames, state)`` where ``a``
    has shape (B, n), or (B, horizon, n) when ``record`` is set.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    frames = np.array(frames, dtype=float)
    batch, n = frames.shape[0], frames.shape[1]
    if n != d.n:
        raise ValueError(f"frames of size {n} for a driving system of size {d.n}")
    a = np.zeros((batch, n))
    history = np.empty((batch, horizon, n)) if record else None
    tiny = np.finfo(float).tiny
    mats = [np.asarray(m.entries) for m in d.matrices]
    for t in range(horizon):
        g = mats[d.labels[state]]
        if batch == 1:
            q, diag = _qr_single(g @ frames[0])
            q, diag = q[None], diag[None]
        else:
            q, r = np.linalg.qr(g @ frames)
            diag = np.diagonal(r, axis1=1, axis2=2)
        mod = np.abs(diag)
        if not np.all(np.isfinite(mod)) or np.any(mod <= tiny):
            raise DecompositionError("singular or non-finite QR step", operation, step=t + 1)
        frames = q * np.where(diag < 0, -1.0, 1.0)[:, None, :]
        a += np.log(mod)
        if record:
            history[:, t] = a
        state = d.step(state)
    return (history if record else a), frames, state


def evolve(d: DrivingSystem, xi: BundlePoint, horizon: int, tol: Tolerances = DEFAULT_TOL) -> CocycleTrace:
    """Run the flow from ``xi`` for ``horizon`` steps, recording a(t, xi) for t = 1..horizon."""
    hist, frames, state = evolve_frames(d, xi.state, xi.flag.frame[None], horizon, record=True)
    central = np.cumsum([d.generator(x).central_log for x in _states(d, xi.state, horizon)])
    final = FlagPoint.from_frame(frames[0], tol)
    return CocycleTrace(horizon, hist[0], final, state, central)


def _states(d: DrivingSystem, state: int, horizon: int):
    for _ in range(horizon):
        yield state
        state = d.step(state)


Coboundary = Callable[[BundlePoint], np.ndarray]


def finite_time_lyapunov(d: DrivingSystem, xi: BundlePoint, horizon: int,
                         coboundary: Coboundary | None = None) -> np.ndarray:
    """a(T, xi) / T; with ``coboundary`` h, the cohomologous cocycle a + h(xi) - h(phi_T xi) is used."""
    trace = evolve(d, xi, horizon)
    a = trace.a_final.copy()
    if coboundary is not None:
        a += np.asarray(coboundary(xi)) - np.asarray(coboundary(trace.end))
    return a / horizon


def polar_exponent(d: DrivingSystem, x0: int, horizon: int) -> np.ndarray:
    """Sorted log-singular values of the product over ``horizon`` steps, divided by the horizon.

    The product is carried as (orthonormal U, log sigma) and refreshed each
    step by a log-scaled one-sided Jacobi pass, so no singular value ratio is
    ever exponentiated.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    u = np.eye(d.n)
    ell = np.zeros(d.n)
    state = x0
    for t in range(horizon):
        try:
            u, ell = orthogonalize_scaled(np.asarray(d.generator(state).entries) @ u, ell)
        except FloatingPointError as exc:
            raise DecompositionError(str(exc), "polar_exponent", step=t + 1) from exc
        state = d.step(state)
    return np.sort(ell)[::-1] / horizon


def norm_cocycle(d: DrivingSystem, x0: int, v, horizon: int) -> float:
    """log(|phi_T v| / |v|), renormalizing v after every step."""
    v = np.array(v, dtype=float)
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise ValueError("v must be nonzero")
    v /= norm
    total = 0.0
    state = x0
    for _ in range(horizon):
        g = d.generator(state)
        v = g.matrix() @ v
        norm = np.linalg.norm(v)
        total += np.log(norm)
        v /= norm
        state = d.step(state)
    return float(total)


def regularity_diagnostic(trace: CocycleTrace, window: int) -> tuple[np.ndarray, float]:
    """Estimate a(T)/T and the largest sup-norm deviation of a(t)/t from it over the last ``window`` steps."""
    T = trace.horizon
    if T < 2 * window:
        raise ValueError(f"horizon {T} is shorter than twice the window {window}")
    estimate = trace.a_final / T
    times = np.arange(T - window + 1, T + 1)
    ratios = trace.a_partial[times - 1] / times[:, None]
    gap = float(np.max(np.abs(ratios - estimate)))
    return estimate, gap


def product_matrix(d: DrivingSystem, x0: int, horizon: int) -> np.ndarray:
    """The plain product rho(T, x0); only for short horizons (tests, flag checks)."""
    p = np.eye(d.n)
    state = x0
    for _ in range(horizon):
        p = d.generator(state).matrix() @ p
        state = d.step(state)
    return p
