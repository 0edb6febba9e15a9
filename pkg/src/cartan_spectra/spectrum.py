"""Lyapunov and chain (Morse) exponent clouds, hulls, and the structural checks on them.

Everything reported here is a hull of *sampled* exponents: an inner
approximation of the Morse spectrum of a chain component, never the set itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog

from .cocycle import BundlePoint, DrivingSystem, evolve, evolve_frames
from .flag_manifold import FlagPoint, flag_distance
from .hull import Hull, convex_hull, hausdorff
from .lie_core import hyperbolic_log
from .root_system import (
    RootSystem,
    WeylElement,
    coset_key,
    coset_representatives,
    lambda_k,
    stabilizer_subgroup,
    theta_of,
    type_a,
)

__all__ = [
    "ChainError",
    "ChainSpec",
    "ChainReport",
    "SpectrumCloud",
    "BlockFormEstimate",
    "SymmetryReport",
    "PeriodStructure",
    "period_structure",
    "validate_chain",
    "morse_exponent",
    "sample_lyapunov_cloud",
    "sample_all_components",
    "morse_spectrum_estimate",
    "TrajectoryRecord",
    "RecordedChain",
    "weyl_symmetry_check",
    "block_form_estimate",
    "chamber_localization_check",
    "component_count",
    "grassmann_spectrum",
    "hull_stabilizer",
    "chambers_met",
]


class ChainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ChainSpec:
    segments: tuple[tuple[BundlePoint, int], ...]
    epsilon: float
    t_min: int = 1

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple((BundlePoint(*s), int(t)) for s, t in self.segments))
        if not self.segments:
            raise ChainError("a chain needs at least one segment")
        if self.epsilon < 0:
            raise ChainError("epsilon must be nonnegative")

    @property
    def total_time(self) -> int:
        return sum(t for _, t in self.segments)


class JumpRecord(NamedTuple):
    index: int
    flag_distance: float
    base_distance: float
    ok: bool


@dataclass
class ChainReport:
    ok: bool
    jumps: list[JumpRecord]
    short_segments: list[int]
    segment_values: list[np.ndarray] = field(repr=False, default_factory=list)

    def message(self) -> str:
        bad = [j for j in self.jumps if not j.ok]
        parts = [f"segment {i} shorter than t_min" for i in self.short_segments]
        parts += [f"jump {j.index} -> {j.index + 1}: distance {max(j.flag_distance, j.base_distance):.3g}"
                  for j in bad]
        return "; ".join(parts) or "valid chain"


def _run_chain(c: ChainSpec, d: DrivingSystem) -> ChainReport:
    jumps, values = [], []
    short = [i for i, (_, t) in enumerate(c.segments) if t < c.t_min]
    for i, (start, duration) in enumerate(c.segments):
        trace = evolve(d, start, duration)
        values.append(trace.a_final.copy())
        if i + 1 < len(c.segments):
            nxt = c.segments[i + 1][0]
            fd = flag_distance(trace.final_flag, nxt.flag)
            bd = d.base_distance(trace.final_state, nxt.state)
            # closed comparison at the jump tolerance
            jumps.append(JumpRecord(i, fd, bd, max(fd, bd) <= c.epsilon))
    ok = not short and all(j.ok for j in jumps)
    return ChainReport(ok, jumps, short, values)


def validate_chain(c: ChainSpec, d: DrivingSystem) -> tuple[bool, ChainReport]:
    """Check every segment length against t_min and every jump against epsilon."""
    report = _run_chain(c, d)
    return report.ok, report


def morse_exponent(c: ChainSpec, d: DrivingSystem) -> np.ndarray:
    """Total cocycle along the chain divided by its total time."""
    report = _run_chain(c, d)
    if not report.ok:
        raise ChainError(f"invalid chain: {report.message()}")
    return np.sum(report.segment_values, axis=0) / c.total_time


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Checkpoints of the sampled trajectories of a cloud.

    ``a_values[s, i]`` is a(times[i], xi_s), ``frames[s, i]`` the flag frame
    and ``states[i]`` the base state at that time; ``times[0] = 0``.
    """

    times: np.ndarray
    a_values: np.ndarray
    frames: np.ndarray
    states: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SpectrumCloud:
    points: np.ndarray
    kind: str
    hull: Hull
    component: WeylElement | None = None
    theta: frozenset = frozenset()
    horizon: int | None = None
    starts: tuple[BundlePoint, ...] = ()
    verified: bool = True
    cauchy_gaps: np.ndarray | None = None
    paths: TrajectoryRecord | None = None

    @classmethod
    def from_points(cls, points, kind: str = "morse-chain", **meta) -> "SpectrumCloud":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(pts, kind, convex_hull(pts), **meta)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def vertices(self) -> np.ndarray:
        return self.hull.vertices

    def label(self) -> str:
        return "all" if self.component is None else self.component.cycles()


class PeriodStructure(NamedTuple):
    """Hyperbolic data of the period map: per-step H+, its walls, and an eigen-basis.

    Columns of ``basis`` are grouped by equal eigenvalue modulus (``groups``
    lists column index ranges), ordered by decreasing modulus.
    """

    h_plus: np.ndarray
    theta: frozenset
    basis: np.ndarray
    groups: tuple[tuple[int, ...], ...]
    verified: bool


def _group_basis(phi: np.ndarray, eigvals: np.ndarray, eigvecs: np.ndarray) -> np.ndarray:
    cols = []
    used = np.zeros(len(eigvals), dtype=bool)
    for i, lam in enumerate(eigvals):
        if used[i]:
            continue
        used[i] = True
        v = eigvecs[:, i]
        if abs(lam.imag) > 1e-12 * max(1.0, abs(lam)):
            # pair with the conjugate and keep a real basis of the invariant plane
            j = next(k for k in range(len(eigvals)) if not used[k] and abs(eigvals[k] - lam.conjugate()) < 1e-8 * max(1.0, abs(lam)))
            used[j] = True
            cols += [v.real, v.imag]
        else:
            cols.append(v.real)
    basis = np.array(cols).T
    rank = np.linalg.matrix_rank(basis, tol=1e-8 * np.linalg.norm(basis, 2))
    if rank < len(cols):
        # defective group: null space of the group's factor of the characteristic polynomial
        n = phi.shape[0]
        poly = np.eye(n, dtype=complex)
        for lam in eigvals:
            poly = poly @ (phi - lam * np.eye(n))
        _, _, vt = np.linalg.svd(poly.real)
        basis = vt[-len(eigvals):].T
    q, _ = np.linalg.qr(basis)
    return q


def period_structure(d: DrivingSystem, x0: int = 0, wall_tol: float = 1e-6) -> PeriodStructure:
    """Eigen-structure of the period map from ``x0``, grouped by modulus."""
    phi, log_scale = d.period_map(x0)
    h_plus = (hyperbolic_log(phi) + log_scale) / d.period
    rs = type_a(d.n)
    theta = theta_of(rs, h_plus, wall_tol)
    eigvals, eigvecs = np.linalg.eig(phi)
    logmod = (np.log(np.abs(eigvals)) + log_scale) / d.period
    order = np.argsort(-logmod, kind="stable")
    eigvals, eigvecs, logmod = eigvals[order], eigvecs[:, order], logmod[order]
    groups, cur = [], [0]
    for i in range(1, len(eigvals)):
        if abs(logmod[i] - logmod[cur[-1]]) <= wall_tol:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    blocks, ranges, start = [], [], 0
    for g in groups:
        b = _group_basis(phi, eigvals[g], eigvecs[:, g])
        blocks.append(b)
        ranges.append(tuple(range(start, start + b.shape[1])))
        start += b.shape[1]
    basis = np.hstack(blocks)
    verified = _verify_invariance(phi, blocks) and np.linalg.cond(basis) < 1e10
    return PeriodStructure(h_plus, theta, basis, tuple(ranges), bool(verified))


def _verify_invariance(phi: np.ndarray, blocks: Sequence[np.ndarray], tol: float = 1e-8) -> bool:
    # each modulus group must span a phi-invariant subspace
    scale = max(np.linalg.norm(phi, 2), 1e-300)
    for b in blocks:
        image = phi @ b
        resid = image - b @ np.linalg.lstsq(b, image, rcond=None)[0]
        if np.linalg.norm(resid, 2) > tol * scale:
            return False
    return True


def _random_orthogonal(rng: np.random.Generator, k: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diagonal(r))


def _start_frames(ps: PeriodStructure, w: WeylElement, samples: int, rng: np.random.Generator,
                  perturbation: float) -> np.ndarray:
    n = ps.basis.shape[0]
    frames = np.empty((samples, n, n))
    pw = w.matrix()
    for s in range(samples):
        kb = np.zeros((n, n))
        for g in ps.groups:
            idx = np.array(g)
            kb[np.ix_(idx, idx)] = _random_orthogonal(rng, len(idx))
        lower = np.eye(n) + np.tril(perturbation * rng.standard_normal((n, n)), -1)
        frames[s] = FlagPoint.from_frame(ps.basis @ lower @ kb @ pw).frame
    return frames


def _project_to_stable_set(y: np.ndarray, col_groups: Sequence[int], row_group: np.ndarray) -> tuple[np.ndarray, float]:
    """Snap a frame (in period-map eigen-coordinates) onto the stable set of its component.

    Column j may only have weight on unused rows of its own modulus group or
    of weaker groups; weight on stronger (unstable) groups is roundoff and is
    removed. Returns the projected frame and the relative size of the removal.
    """
    n = y.shape[0]
    cols, pivots = [], []
    used = np.zeros(n, dtype=bool)
    correction = 0.0
    for j in range(n):
        v = y[:, j].copy()
        for pk, ck in zip(pivots, cols):
            v -= v[pk] * ck
        gj = col_groups[j]
        unstable = (~used) & (row_group < gj)
        scale = np.linalg.norm(v)
        correction = max(correction, float(np.linalg.norm(v[unstable]) / scale))
        v[unstable] = 0.0
        cand = np.flatnonzero((~used) & (row_group == gj))
        p = int(cand[np.argmax(np.abs(v[cand]))])
        v /= v[p]
        cols.append(v)
        pivots.append(p)
        used[p] = True
    return np.array(cols).T, correction


ANCHOR_GROWTH = 12.0


def _anchored_run(d: DrivingSystem, x0: int, frames: np.ndarray, horizon: int, ps: PeriodStructure,
                  w: WeylElement, checkpoints: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    # QR cocycle recursion, re-projected onto the component's stable set on returns to x0,
    # spaced so that roundoff grows by at most exp(ANCHOR_GROWTH) between projections
    n, batch = d.n, frames.shape[0]
    row_group = np.empty(n, dtype=int)
    for gi, g in enumerate(ps.groups):
        row_group[list(g)] = gi
    col_groups = [int(row_group[p]) for p in w.perm]
    spread = float(ps.h_plus[0] - ps.h_plus[-1]) * d.period
    anchor = len(ps.groups) > 1
    every = d.period * int(np.clip(ANCHOR_GROWTH // max(spread, 1e-300), 1, 64))
    anchors = set(range(every, horizon, every)) if anchor else set()
    stops = sorted(anchors | set(int(t) for t in checkpoints[1:]))
    saved = np.empty((batch, len(checkpoints), n, n))
    saved[:, 0] = frames
    slot = {int(t): i for i, t in enumerate(checkpoints)}
    history = np.empty((batch, horizon, n))
    offset = np.zeros((batch, n))
    worst = 0.0
    state, t = x0, 0
    for stop in stops:
        hist, frames, state = evolve_frames(d, state, frames, stop - t, record=True,
                                            operation="sample_lyapunov_cloud")
        history[:, t:stop] = hist + offset[:, None, :]
        offset = history[:, stop - 1]
        t = stop
        if stop in anchors:
            for b in range(batch):
                y = np.linalg.solve(ps.basis, frames[b])
                y, corr = _project_to_stable_set(y, col_groups, row_group)
                worst = max(worst, corr)
                frames[b] = FlagPoint.from_frame(ps.basis @ y).frame
        if stop in slot:
            saved[:, slot[stop]] = frames
    return history, saved, worst


def _checkpoint_times(horizon: int, count: int = 256) -> np.ndarray:
    m = min(horizon, count)
    return np.unique(np.round(np.linspace(0, horizon, m + 1)).astype(int))


def sample_lyapunov_cloud(d: DrivingSystem, component_w: WeylElement, samples: int, horizon: int,
                          seed: int = 0, *, x0: int = 0, perturbation: float = 1e-3,
                          wall_tol: float = 1e-6, window: int | None = None,
                          structure: PeriodStructure | None = None,
                          max_correction: float = 1e-6) -> SpectrumCloud:
    """Finite-time exponents from flags started near the component W_Theta w.

    Start flags are eigen-flags of the period map, rotated inside each
    equal-modulus block and pushed by a lower-unipotent perturbation of size
    ``perturbation`` into the stable set of that component. Non-attracting
    components are saddles, so plain forward iteration would drift to the
    attractor on roundoff alone; at every return to ``x0`` the frames are
    re-projected onto the stable set. If a projection ever removes more than
    ``max_correction`` the cloud is marked unverified.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ps = structure or period_structure(d, x0, wall_tol)
    rng = np.random.default_rng([seed, _weyl_index(component_w)])
    frames = _start_frames(ps, component_w, samples, rng, perturbation)
    times = _checkpoint_times(horizon)
    hist, saved, worst = _anchored_run(d, x0, frames, horizon, ps, component_w, times)
    points = hist[:, -1, :] / horizon
    window = window or max(1, horizon // 5)
    gaps = None
    if horizon >= 2 * window:
        tail = np.arange(horizon - window + 1, horizon + 1)
        ratios = hist[:, tail - 1, :] / tail[None, :, None]
        gaps = np.max(np.abs(ratios - points[:, None, :]), axis=(1, 2))
    rs = type_a(d.n)
    starts = tuple(BundlePoint(x0, FlagPoint(f)) for f in frames)
    verified = ps.verified and worst <= max_correction
    a_values = np.concatenate([np.zeros((samples, 1, d.n)), hist[:, times[1:] - 1, :]], axis=1)
    paths = TrajectoryRecord(times, a_values, saved, tuple(d.advance(x0, int(t)) for t in times))
    return SpectrumCloud(points, "lyapunov", convex_hull(points), coset_key(rs, ps.theta, component_w),
                         ps.theta, horizon, starts, verified, gaps, paths)


def _weyl_index(w: WeylElement) -> int:
    # stable integer for seeding: rank of the permutation plus sign bits
    idx = 0
    remaining = list(range(w.n))
    for p in w.perm:
        pos = remaining.index(p)
        idx = idx * len(remaining) + pos
        remaining.pop(pos)
    for s in w.signs:
        idx = 2 * idx + (s < 0)
    return idx


def sample_all_components(d: DrivingSystem, samples: int, horizon: int, seed: int = 0, *,
                          x0: int = 0, perturbation: float = 1e-3,
                          wall_tol: float = 1e-6) -> dict[WeylElement, SpectrumCloud]:
    """One Lyapunov cloud per chain component (coset of the estimated W_Theta)."""
    ps = period_structure(d, x0, wall_tol)
    rs = type_a(d.n)
    return {w: sample_lyapunov_cloud(d, w, samples, horizon, seed, x0=x0, perturbation=perturbation,
                                     wall_tol=wall_tol, structure=ps)
            for w in coset_representatives(rs, ps.theta)}


def _batch_flag_distance(frame: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """flag_distance from one frame to a stack of frames."""
    n = frame.shape[0]
    worst = np.zeros(len(frames))
    for j in range(1, n):
        q1 = frame[:, :j]
        q2 = frames[:, :, :j]
        resid = q2 - q1 @ np.einsum("ij,bik->bjk", q1, q2)
        worst = np.maximum(worst, np.linalg.norm(resid, ord=2, axis=(1, 2)))
    worst = np.arcsin(np.minimum(worst, 1.0))
    same = np.all(frames == frame, axis=(1, 2))
    worst[same] = 0.0
    return worst


class RecordedChain(NamedTuple):
    """A chain built from checkpoints: segments (sample, start index, end index) and its jump sizes."""

    segments: tuple[tuple[int, int, int], ...]
    jumps: tuple[float, ...]
    exponent: np.ndarray


def _base_matrix(rec: TrajectoryRecord, d: DrivingSystem) -> np.ndarray:
    states = np.array(rec.states)
    return np.where(states[:, None] == states[None, :], 0.0, d.base_separation)


def _chain_from_record(rec: TrajectoryRecord, d: DrivingSystem, rng: np.random.Generator, epsilon: float,
                       t_min: int, max_segments: int, base: np.ndarray | None = None) -> RecordedChain | None:
    times, m = rec.times, len(rec.times) - 1
    samples = rec.a_values.shape[0]
    flat = rec.frames[:, :m].reshape(samples * m, *rec.frames.shape[2:])
    base = _base_matrix(rec, d) if base is None else base
    s, i = int(rng.integers(samples)), 0
    segments, jumps = [], []
    parts = int(rng.integers(1, max_segments + 1))
    for j in range(parts):
        ends = np.flatnonzero(times - times[i] >= t_min)
        if not len(ends):
            return None
        end = m if j == parts - 1 else int(rng.choice(ends))
        segments.append((s, i, end))
        if end == m:
            break
        if epsilon == 0.0:
            # distinct samples are distinct points even when their stored frames coincide
            # after convergence, so a zero jump can only split the trajectory
            dist = np.full((samples, m), np.inf)
            dist[s, end] = 0.0
        else:
            dist = np.maximum(_batch_flag_distance(rec.frames[s, end], flat).reshape(samples, m),
                              base[end, :m][None, :])
        # closed comparison; the landing point must leave room for one more segment
        ok = (dist <= epsilon) & ((times[m] - times[:m]) >= t_min)[None, :]
        cands = np.argwhere(ok)
        if not len(cands):
            return None
        s, i = (int(v) for v in cands[int(rng.integers(len(cands)))])
        jumps.append(float(dist[s, i]))
    if segments[-1][2] != m:
        s, i, _ = segments.pop()
        if times[m] - times[i] < t_min:
            return None
        segments.append((s, i, m))
    # a zero jump inside one trajectory is the same arithmetic as one longer segment
    merged = [segments[0]]
    for k, b, e in segments[1:]:
        pk, pb, pe = merged[-1]
        if k == pk and b == pe:
            merged[-1] = (k, pb, e)
        else:
            merged.append((k, b, e))
    segments = merged
    total = sum(times[e] - times[b] for _, b, e in segments)
    value = sum(rec.a_values[k, e] - rec.a_values[k, b] for k, b, e in segments)
    return RecordedChain(tuple(segments), tuple(jumps), value / total)


def morse_spectrum_estimate(lyap: SpectrumCloud, chain_samples: int, epsilon: float, t_min: int,
                            d: DrivingSystem, seed: int = 0, *, max_segments: int = 4) -> SpectrumCloud:
    """Hull of the Lyapunov points together with sampled epsilon-chain exponents.

    Chains are stitched from the cloud's own recorded trajectories: each
    starts at time 0 of a sample, runs for at least ``t_min`` steps, jumps
    (flag and base distance <= ``epsilon``) to a checkpoint of any sample,
    and finishes at the end of the recorded horizon. With epsilon = 0 the
    only admissible jump is to the same point, so every chain telescopes back
    to a Lyapunov point and the hull is unchanged.
    """
    if len(lyap.points) == 0:
        raise ValueError("empty Lyapunov cloud")
    if lyap.paths is None:
        raise ValueError("the Lyapunov cloud carries no recorded trajectories to chain from")
    if epsilon < 0:
        raise ChainError("epsilon must be nonnegative")
    rng = np.random.default_rng([seed, 7919])
    base = _base_matrix(lyap.paths, d)
    extra = []
    for _ in range(chain_samples):
        chain = _chain_from_record(lyap.paths, d, rng, epsilon, t_min, max_segments, base)
        if chain is not None:
            extra.append(chain.exponent)
    points = np.vstack([lyap.points] + ([np.array(extra)] if extra else []))
    return SpectrumCloud(points, "morse-chain", convex_hull(points), lyap.component, lyap.theta,
                         lyap.horizon, lyap.starts, lyap.verified, lyap.cauchy_gaps, lyap.paths)


@dataclass
class SymmetryReport:
    distances: dict[str, float]
    union_distances: dict[str, float]
    tol: float
    passed: bool

    @property
    def max_distance(self) -> float:
        vals = list(self.distances.values()) + list(self.union_distances.values())
        return max(vals) if vals else 0.0


def weyl_symmetry_check(clouds: Mapping[WeylElement, SpectrumCloud], tol: float,
                        theta=None) -> SymmetryReport:
    """Compare cloud(w) with w^{-1} cloud(identity) and test W-invariance of the union.

    The union test runs only when ``clouds`` has one entry per coset of W_Theta.
    """
    if not clouds:
        raise ValueError("no clouds to compare")
    n = next(iter(clouds.values())).n
    rs = type_a(n)
    ident = WeylElement.identity(n)
    if ident not in clouds:
        raise ValueError("the identity component (attractor) is missing")
    base = clouds[ident].points
    theta = clouds[ident].theta if theta is None else frozenset(theta)
    distances = {}
    for w, cloud in clouds.items():
        distances[w.cycles()] = hausdorff(cloud.points, w.inverse().act(base))
    union_distances = {}
    if len(clouds) == len(coset_representatives(rs, theta)):
        union = np.vstack([c.points for c in clouds.values()])
        for u in rs.weyl:
            union_distances[u.cycles()] = hausdorff(u.act(union), union)
    passed = all(v <= tol for v in distances.values()) and all(v <= tol for v in union_distances.values())
    return SymmetryReport(distances, union_distances, tol, passed)


@dataclass(frozen=True)
class BlockFormEstimate:
    theta: frozenset
    h_rep: np.ndarray
    margin: float
    chain_transitive: bool


def _rs_for(cloud: SpectrumCloud, rs: RootSystem | None) -> RootSystem:
    return rs if rs is not None else type_a(cloud.n)


def block_form_estimate(attractor: SpectrumCloud, tol: float = 1e-6, rs: RootSystem | None = None) -> BlockFormEstimate:
    """Parabolic type of the attractor hull and a W_Theta-fixed representative point."""
    if len(attractor.points) == 0:
        raise ValueError("empty attractor cloud")
    rs = _rs_for(attractor, rs)
    v = attractor.vertices
    simple_min = np.min(v @ rs.simple_matrix.T, axis=0)
    theta = frozenset(int(i) + 1 for i in np.flatnonzero(simple_min <= tol))
    centroid = attractor.hull.centroid
    group = stabilizer_subgroup(rs, theta)
    h_rep = np.mean([w.act(centroid) for w in group], axis=0)
    roots = rs.complement_roots(theta)
    margin = float(np.min(v @ roots.T)) if len(roots) else math.inf
    transitive = theta == rs.all_simple() and attractor.hull.contains(np.zeros(rs.dim), tol)
    return BlockFormEstimate(theta, h_rep, margin, bool(transitive))


def chamber_localization_check(attractor: SpectrumCloud, theta, rs: RootSystem | None = None) -> tuple[bool, float]:
    """Do all hull vertices lie in the open cone int(W_Theta cl a+)? Returns (pass, margin)."""
    rs = _rs_for(attractor, rs)
    roots = rs.complement_roots(theta)
    if not len(roots):
        return True, math.inf
    values = attractor.vertices @ roots.T
    margin = float(values.min())
    return bool(np.all(values > 0.0)), margin


def component_count(rs: RootSystem, theta) -> int:
    return rs.order // len(stabilizer_subgroup(rs, theta))


def grassmann_spectrum(cloud: SpectrumCloud, k: int) -> tuple[float, float]:
    """Interval lambda_k(hull), evaluated at the hull vertices."""
    values = lambda_k(cloud.vertices, k)
    values = np.atleast_1d(values)
    return float(values.min()), float(values.max())


def hull_stabilizer(rs: RootSystem, cloud: SpectrumCloud, tol: float = 1e-9) -> list[WeylElement]:
    """Weyl elements mapping the hull vertex set onto itself."""
    v = cloud.vertices
    return [w for w in rs.weyl if hausdorff(w.act(v), v) <= tol]


def chambers_met(rs: RootSystem, cloud: SpectrumCloud, tol: float = 1e-9) -> list[WeylElement]:
    """Chambers w cl(a+) whose closure meets the hull (one LP per chamber)."""
    v = cloud.vertices
    k = len(v)
    out = []
    for w in rs.weyl:
        # need x = V^T lam with alpha_i(w^{-1} x) >= -tol
        m = rs.simple_matrix @ w.inverse().matrix() @ v.T
        res = linprog(np.zeros(k), A_ub=-m, b_ub=np.full(m.shape[0], tol),
                      A_eq=np.ones((1, k)), b_eq=[1.0], bounds=(0, None), method="highs")
        if res.status == 0:
            out.append(w)
    return out
