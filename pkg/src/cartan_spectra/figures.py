"""Planar chamber pictures: root walls, chamber labels and spectrum hulls.

Rank-two root systems only (A2 drawn in the trace-zero plane of R^3, C2 in
R^2). Output is plain data plus a flat SVG (lines, polygons, text).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .root_system import RootSystem

__all__ = ["PlaneFigure", "plane_basis", "chamber_figure", "to_svg"]

# orthonormal basis of the trace-zero plane in R^3
_A2_BASIS = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]) / np.array([[np.sqrt(2.0)], [np.sqrt(6.0)]])


@dataclass
class PlaneFigure:
    walls: list[dict]
    chambers: list[dict]
    hulls: list[dict]
    radius: float

    def as_dict(self) -> dict:
        return {"walls": self.walls, "chambers": self.chambers, "hulls": self.hulls, "radius": self.radius}


def plane_basis(rs: RootSystem) -> np.ndarray:
    """Rows map a Cartan vector to planar coordinates."""
    if rs.family == "A" and rs.dim == 3:
        return _A2_BASIS
    if rs.family == "C" and rs.dim == 2:
        return np.eye(2)
    raise ValueError(f"no planar picture for {rs.name}")


def _label_seed(rs: RootSystem) -> np.ndarray:
    # a point inside the positive chamber
    return np.array([1.0, 0.0, -1.0]) if rs.family == "A" else np.array([2.0, 1.0])


def _order_polygon(p: np.ndarray) -> np.ndarray:
    if len(p) < 3:
        return p
    c = p.mean(axis=0)
    angle = np.arctan2(p[:, 1] - c[1], p[:, 0] - c[0])
    return p[np.argsort(angle, kind="stable")]


def chamber_figure(rs: RootSystem, hulls: dict[str, np.ndarray] | None = None,
                   radius: float | None = None) -> PlaneFigure:
    """Walls (root kernels), one label per chamber, and projected hull polygons.

    ``hulls`` maps a component label to hull vertices in Cartan coordinates.
    """
    basis = plane_basis(rs)
    hulls = hulls or {}
    planar = {k: np.atleast_2d(v) @ basis.T for k, v in hulls.items()}
    extent = max([float(np.max(np.abs(v))) for v in planar.values()] + [1.0])
    radius = radius or 1.25 * extent
    walls = []
    for root in rs.positive_roots:
        r = np.asarray(root, dtype=float) @ basis.T
        d = np.array([-r[1], r[0]]) / np.linalg.norm(r)
        a, b = -radius * d, radius * d
        walls.append({"root": list(root), "from": a.tolist(), "to": b.tolist()})
    chambers = []
    seed = _label_seed(rs)
    for w in rs.weyl:
        p = w.act(seed) @ basis.T
        p = 0.85 * radius * p / np.linalg.norm(p)
        chambers.append({"w": w.cycles(), "at": p.tolist()})
    polys = [{"component": k, "vertices": _order_polygon(v).tolist()} for k, v in planar.items()]
    return PlaneFigure(walls, chambers, polys, float(radius))


def _f(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def to_svg(fig: PlaneFigure, size: int = 480) -> str:
    scale = size / (2.2 * fig.radius)
    half = size / 2

    def xy(p) -> tuple[str, str]:
        return _f(half + scale * p[0]), _f(half - scale * p[1])

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for wall in fig.walls:
        (x1, y1), (x2, y2) = xy(wall["from"]), xy(wall["to"])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black"/>')
    for hull in fig.hulls:
        pts = [xy(v) for v in hull["vertices"]]
        if len(pts) == 1:
            out.append(f'<circle cx="{pts[0][0]}" cy="{pts[0][1]}" r="3" fill="gray"/>')
        else:
            joined = " ".join(f"{x},{y}" for x, y in pts)
            out.append(f'<polygon points="{joined}" fill="gray" stroke="gray"/>')
        x, y = pts[0]
        out.append(f'<text x="{x}" y="{y}" font-size="11">{hull["component"]}</text>')
    for ch in fig.chambers:
        x, y = xy(ch["at"])
        out.append(f'<text x="{x}" y="{y}" font-size="13" text-anchor="middle">{ch["w"]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
