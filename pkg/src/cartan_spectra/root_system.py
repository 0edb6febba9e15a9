"""Root systems of types A_{n-1} and C_n, their Weyl groups and chambers.

Conventions
-----------
A Weyl element is a signed permutation ``(perm, signs)`` acting on Cartan
vectors by ``(w H)[perm[i]] = signs[i] * H[i]``, i.e. through the matrix whose
i-th column is ``signs[i] * e_{perm[i]}``. Composition is matrix product, so
``(w1 * w2)(H) = w1(w2(H))`` and cycle notation reads right to left.

Simple roots are indexed from 1, matching the usual alpha_1, ..., alpha_r; a
Theta-subset is a frozenset of those indices.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "RootSystem",
    "WeylElement",
    "ThetaSubset",
    "type_a",
    "type_c",
    "enumerate_weyl",
    "weyl_act",
    "longest_element",
    "chamber_locate",
    "in_closed_chamber",
    "theta_of",
    "stabilizer_subgroup",
    "coset_equal",
    "coset_key",
    "coset_representatives",
    "cone_contains",
    "lambda_k",
    "dual_theta",
    "WEYL_LIMIT",
]

WEYL_LIMIT = 10**6
DEFAULT_WALL_TOL = 1e-6

ThetaSubset = frozenset


@dataclass(frozen=True)
class WeylElement:
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def from_perm(cls, perm) -> "WeylElement":
        perm = tuple(int(p) for p in perm)
        return cls(perm, (1,) * len(perm))

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "WeylElement":
        """Parse 1-based cycle notation such as ``"(13)"``, ``"(123)"`` or ``"e"``."""
        perm = list(range(n))
        text = text.strip()
        if text in ("", "e", "1", "id", "()"):
            return cls.identity(n)
        for cycle in re.findall(r"\(([^)]*)\)", text):
            tokens = re.findall(r"\d+", cycle) if re.search(r"[,\s]", cycle) else list(cycle)
            items = [int(c) - 1 for c in tokens if c.isdigit()]
            if not items:
                continue
            if any(not 0 <= i < n for i in items):
                raise ValueError(f"cycle {cycle!r} has entries outside 1..{n}")
            step = list(range(n))
            for a, b in zip(items, items[1:] + items[:1]):
                step[a] = b
            # product of cycles is applied right to left
            perm = [perm[step[i]] for i in range(n)]
        if sorted(perm) != list(range(n)):
            raise ValueError(f"{text!r} is not a permutation")
        return cls.from_perm(perm)

    def __post_init__(self):
        if len(self.perm) != len(self.signs):
            raise ValueError("perm and signs must have equal length")

    @property
    def n(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        m[list(self.perm), range(self.n)] = self.signs
        return m

    def act(self, h) -> np.ndarray:
        h = np.asarray(h, dtype=float)
        if h.shape[-1] != self.n:
            raise ValueError(f"Weyl element of rank {self.n} cannot act on vector of length {h.shape[-1]}")
        out = np.empty_like(h)
        out[..., list(self.perm)] = h * np.asarray(self.signs, dtype=float)
        return out

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if other.n != self.n:
            raise ValueError("rank mismatch")
        perm = tuple(self.perm[p] for p in other.perm)
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.n))
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        perm = [0] * self.n
        signs = [1] * self.n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return WeylElement(tuple(perm), tuple(signs))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.signs)

    def sort_key(self) -> tuple:
        """Position in the enumeration order of :func:`enumerate_weyl`."""
        return self.perm, tuple(0 if s > 0 else 1 for s in self.signs)

    def cycles(self) -> str:
        """1-based cycle notation, followed by ``-i,j`` listing negated coordinates."""
        seen, parts = set(), []
        for start in range(self.n):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.perm[i]
            if len(cyc) > 1:
                parts.append("(" + "".join(str(c + 1) for c in cyc) + ")")
        neg = [str(i + 1) for i, s in enumerate(self.signs) if s < 0]
        label = "".join(parts)
        if neg:
            label += "-" + ",".join(neg)
        return label or "e"

    def __str__(self) -> str:
        return self.cycles()


@dataclass(frozen=True)
class RootSystem:
    family: str
    dim: int
    positive_roots: tuple[tuple[int, ...], ...]
    simple_roots: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @cached_property
    def positive_matrix(self) -> np.ndarray:
        return np.array(self.positive_roots, dtype=float)

    @cached_property
    def simple_matrix(self) -> np.ndarray:
        return np.array(self.simple_roots, dtype=float)

    @cached_property
    def simple_coordinates(self) -> np.ndarray:
        """Coefficients of each positive root in the basis of simple roots (integers)."""
        coef, *_ = np.linalg.lstsq(self.simple_matrix.T, self.positive_matrix.T, rcond=None)
        return np.rint(coef.T).astype(int)

    @cached_property
    def order(self) -> int:
        if self.family == "A":
            return math.factorial(self.dim)
        return 2**self.dim * math.factorial(self.dim)

    @cached_property
    def weyl(self) -> list[WeylElement]:
        return enumerate_weyl(self)

    @cached_property
    def _rho(self) -> np.ndarray:
        # a strictly dominant vector, used to decide root positivity
        return np.arange(self.dim, 0, -1, dtype=float)

    def reflection(self, root) -> WeylElement:
        c = np.asarray(root, dtype=float)
        m = np.eye(self.dim) - 2.0 * np.outer(c, c) / (c @ c)
        return _from_matrix(m)

    def length(self, w: WeylElement) -> int:
        """Number of positive roots sent to negative roots by ``w``."""
        images = self.positive_matrix @ w.matrix().T
        return int(np.sum(images @ self._rho < 0))

    def generated(self, theta) -> list[tuple[int, ...]]:
        """Positive roots lying in the span of the simple roots in ``theta``."""
        theta = set(theta)
        out = []
        for root, coef in zip(self.positive_roots, self.simple_coordinates):
            support = {i + 1 for i, c in enumerate(coef) if c != 0}
            if support <= theta:
                out.append(root)
        return out

    def complement_roots(self, theta) -> np.ndarray:
        """Positive roots outside the span of ``theta``, as rows of a matrix."""
        inside = set(self.generated(theta))
        rows = [r for r in self.positive_roots if r not in inside]
        return np.array(rows, dtype=float).reshape(len(rows), self.dim)

    def all_simple(self) -> frozenset:
        return frozenset(range(1, self.rank + 1))

    def check_vector(self, h) -> np.ndarray:
        h = np.asarray(h, dtype=float)
        if h.shape != (self.dim,):
            raise ValueError(f"{self.name} expects Cartan vectors of length {self.dim}, got shape {h.shape}")
        return h


def _from_matrix(m: np.ndarray) -> WeylElement:
    n = m.shape[0]
    perm, signs = [0] * n, [1] * n
    for i in range(n):
        j = int(np.argmax(np.abs(m[:, i])))
        perm[i] = j
        signs[i] = 1 if m[j, i] > 0 else -1
    return WeylElement(tuple(perm), tuple(signs))


def type_a(n: int) -> RootSystem:
    """Root system A_{n-1} of Sl(n, R), acting on length-n zero-sum vectors."""
    if n < 2:
        raise ValueError("type A needs n >= 2")
    pos = []
    for i, j in itertools.combinations(range(n), 2):
        c = [0] * n
        c[i], c[j] = 1, -1
        pos.append(tuple(c))
    simple = [r for r in pos if _is_adjacent(r)]
    return RootSystem("A", n, tuple(pos), tuple(simple))


def _is_adjacent(root) -> bool:
    i = root.index(1)
    return i + 1 < len(root) and root[i + 1] == -1


def type_c(n: int) -> RootSystem:
    """Root system C_n of Sp(2n, R), acting on (lambda_1, ..., lambda_n)."""
    if n < 1:
        raise ValueError("type C needs n >= 1")
    pos, simple = [], []
    for i, j in itertools.combinations(range(n), 2):
        c = [0] * n
        c[i], c[j] = 1, -1
        pos.append(tuple(c))
        if j == i + 1:
            simple.append(tuple(c))
        d = [0] * n
        d[i], d[j] = 1, 1
        pos.append(tuple(d))
    for i in range(n):
        c = [0] * n
        c[i] = 2
        pos.append(tuple(c))
    last = [0] * n
    last[-1] = 2
    simple.append(tuple(last))
    return RootSystem("C", n, tuple(pos), tuple(simple))


def enumerate_weyl(rs: RootSystem) -> list[WeylElement]:
    """All Weyl group elements in a fixed order, identity first."""
    if rs.order > WEYL_LIMIT:
        raise OverflowError(f"|W| = {rs.order} exceeds the enumeration limit {WEYL_LIMIT}")
    perms = list(itertools.permutations(range(rs.dim)))
    if rs.family == "A":
        return [WeylElement(p, (1,) * rs.dim) for p in perms]
    sign_choices = list(itertools.product((1, -1), repeat=rs.dim))
    return [WeylElement(p, s) for p in perms for s in sign_choices]


def weyl_act(w: WeylElement, h) -> np.ndarray:
    return w.act(h)


def longest_element(rs: RootSystem) -> WeylElement:
    """The element taking the positive chamber to its negative."""
    if rs.family == "A":
        return WeylElement.from_perm(range(rs.dim - 1, -1, -1))
    return WeylElement(tuple(range(rs.dim)), (-1,) * rs.dim)


def in_closed_chamber(rs: RootSystem, h, tol: float = DEFAULT_WALL_TOL) -> bool:
    h = rs.check_vector(h)
    return bool(np.all(rs.simple_matrix @ h >= -tol))


def _sorting_element(rs: RootSystem, h: np.ndarray) -> WeylElement:
    # w with w^{-1} h in the closed positive chamber
    if rs.family == "A":
        order = np.argsort(-h, kind="stable")
        return WeylElement.from_perm(order)
    order = np.argsort(-np.abs(h), kind="stable")
    signs = tuple(-1 if h[i] < 0 else 1 for i in order)
    return WeylElement(tuple(int(i) for i in order), signs)


def chamber_locate(rs: RootSystem, h, tol: float = DEFAULT_WALL_TOL) -> tuple[WeylElement, frozenset]:
    """Find w with w^{-1} h in the closed positive chamber, plus the walls h lies on.

    Among all valid w (several when h is on a wall) the one earliest in the
    enumeration order is returned.
    """
    h = rs.check_vector(h)
    w = _sorting_element(rs, h)
    h_plus = w.inverse().act(h)
    walls = theta_of(rs, h_plus, tol)
    candidates = [w * s for s in stabilizer_subgroup(rs, walls)]
    best = min(candidates, key=WeylElement.sort_key)
    return best, walls


def theta_of(rs: RootSystem, h, tol: float = DEFAULT_WALL_TOL) -> frozenset:
    """Simple roots vanishing on ``h`` (which must lie in the closed positive chamber)."""
    h = rs.check_vector(h)
    values = rs.simple_matrix @ h
    if np.any(values < -tol):
        raise ValueError(f"{h.tolist()} is not in the closed positive chamber of {rs.name}")
    return frozenset(int(i) + 1 for i in np.flatnonzero(np.abs(values) <= tol))


def stabilizer_subgroup(rs: RootSystem, theta) -> list[WeylElement]:
    """The subgroup W_Theta generated by reflections in the simple roots of ``theta``.

    Elements are returned in enumeration order.
    """
    theta = frozenset(theta)
    if not theta <= rs.all_simple():
        raise ValueError(f"Theta {sorted(theta)} is not a subset of 1..{rs.rank}")
    gens = [rs.reflection(rs.simple_roots[i - 1]) for i in sorted(theta)]
    identity = WeylElement.identity(rs.dim)
    group = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = s * g
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(group, key=WeylElement.sort_key)


def coset_equal(rs: RootSystem, theta, w1: WeylElement, w2: WeylElement) -> bool:
    """True iff W_Theta w1 = W_Theta w2."""
    return (w1 * w2.inverse()) in set(stabilizer_subgroup(rs, theta))


def coset_key(rs: RootSystem, theta, w: WeylElement) -> WeylElement:
    """Canonical representative of W_Theta w: its first element in enumeration order."""
    return min((s * w for s in stabilizer_subgroup(rs, theta)), key=WeylElement.sort_key)


def coset_representatives(rs: RootSystem, theta) -> list[WeylElement]:
    """One representative per coset W_Theta w, in enumeration order."""
    reps = {coset_key(rs, theta, w) for w in rs.weyl}
    return sorted(reps, key=WeylElement.sort_key)


def cone_contains(rs: RootSystem, theta, h, strict_margin: float = 0.0) -> bool:
    """Is ``h`` in the open cone int(W_Theta cl a+), shrunk by ``strict_margin``?"""
    h = rs.check_vector(h)
    roots = rs.complement_roots(theta)
    return bool(np.all(roots @ h > strict_margin))


def lambda_k(h, k: int) -> float:
    """Sum of the first k coordinates of ``h``."""
    h = np.asarray(h, dtype=float)
    if not 1 <= k <= h.shape[-1]:
        raise ValueError(f"k={k} outside 1..{h.shape[-1]}")
    return float(np.sum(h[..., :k], axis=-1)) if h.ndim == 1 else np.sum(h[..., :k], axis=-1)


def dual_theta(rs: RootSystem, theta) -> frozenset:
    """Image of ``theta`` under -w0 acting on simple roots."""
    m = longest_element(rs).matrix()
    simple = {r: i + 1 for i, r in enumerate(rs.simple_roots)}
    out = set()
    for i in theta:
        image = tuple(int(v) for v in np.rint(-m @ np.array(rs.simple_roots[i - 1], dtype=float)))
        out.add(simple[image])
    return frozenset(out)
