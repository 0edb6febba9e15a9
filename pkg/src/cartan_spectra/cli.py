"""Command-line driver: read a JSON config, run one experiment, write its files.

Exit status: 0 on success, 2 for configuration errors, 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from .cocycle import BundlePoint, evolve, finite_time_lyapunov, norm_cocycle, polar_exponent, regularity_diagnostic
from .config import ConfigError, ExperimentConfig, load_config
from .figures import chamber_figure, to_svg
from .flag_manifold import FlagPoint, random_flag
from .lie_core import DecompositionError, GroupElement, Tolerances, hyperbolic_log, iwasawa, polar
from .root_system import RootSystem, WeylElement, type_a, type_c
from .spectrum import (
    ChainError,
    SpectrumCloud,
    block_form_estimate,
    chamber_localization_check,
    chambers_met,
    component_count,
    hull_stabilizer,
    morse_spectrum_estimate,
    period_structure,
    sample_all_components,
    sample_lyapunov_cloud,
    weyl_symmetry_check,
)

__all__ = ["main", "run", "SUBCOMMANDS"]

SUBCOMMANDS = ("decompose", "exponents", "spectrum", "symmetry", "blockform", "chambers", "plotdata")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class NumericFailure(RuntimeError):
    pass


def _theta_list(theta) -> list[int]:
    return sorted(int(i) for i in theta)


def _finite_or_none(x: float) -> float | None:
    # an infinite margin means "no root outside Theta"; it is reported as null
    return None if math.isinf(x) else float(x)


def _root_system(cfg: ExperimentConfig) -> RootSystem:
    return type_a(cfg.n) if cfg.root_system == "A" else type_c(cfg.n)


def _need_driving(cfg: ExperimentConfig, sub: str):
    if cfg.root_system != "A":
        raise ConfigError("root_system", f"'{sub}' needs type A; type C is supported for chamber geometry only")
    if cfg.driving is None:
        raise ConfigError("driving", f"required by '{sub}'")
    return cfg.driving


def component_file_label(w: WeylElement) -> str:
    label = w.cycles()
    return re.sub(r"_+", "_", re.sub(r"[^0-9A-Za-z]+", "_", label)).strip("_") or "e"


def _clouds(cfg: ExperimentConfig, seed: int) -> dict[WeylElement, SpectrumCloud]:
    d = cfg.driving
    clouds = sample_all_components(d, cfg.samples, cfg.horizon, seed, wall_tol=cfg.tolerances.wall)
    if cfg.chain_samples > 0:
        clouds = {w: morse_spectrum_estimate(c, cfg.chain_samples, cfg.tolerances.epsilon, cfg.tolerances.t_min,
                                             d, seed)
                  for w, c in clouds.items()}
    return clouds


def _cloud_summary(c: SpectrumCloud) -> dict:
    gaps = c.cauchy_gaps
    return {
        "component": c.label(),
        "kind": c.kind,
        "points": int(len(c.points)),
        "hull_vertices": c.vertices.tolist(),
        "hull_exact": bool(c.hull.exact),
        "verified": bool(c.verified),
        "status": "hull of sampled exponents" if c.verified else "unverified component",
        "max_cauchy_gap": None if gaps is None else float(np.max(gaps)),
    }


def _cloud_csv(c: SpectrumCloud) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if not np.all(np.isfinite(c.points)):
        raise NumericFailure(f"cloud {c.label()}: non-finite exponent")
    writer.writerow([f"a{i + 1}" for i in range(c.n)] + ["kind", "component", "T"])
    for p in c.points:
        writer.writerow([f"{x:.17g}" for x in p] + [c.kind, c.label(), c.horizon])
    return buf.getvalue()


def _decompose(cfg: ExperimentConfig) -> dict:
    if cfg.matrix is not None:
        mats = [cfg.matrix]
    elif cfg.driving is not None:
        mats = [g.matrix() for g in cfg.driving.matrices]
    else:
        raise ConfigError("matrix", "decompose needs 'matrix' or 'driving'")
    out = []
    for m in mats:
        g = GroupElement.gl(m) if cfg.group == "gl" else GroupElement.sl(m, Tolerances(det=cfg.tolerances.det))
        it = iwasawa(g.entries)
        pt = polar(g.entries)
        out.append({
            "central_log": g.central_log,
            "column_flipped": g.column_flipped,
            "k": it.k_factor.tolist(),
            "a_log": it.a_log.tolist(),
            "n": it.n_factor.tolist(),
            "u": pt.u_factor.tolist(),
            "a_plus_log": pt.a_plus_log.tolist(),
            "v": pt.v_factor.tolist(),
            "hyperbolic_log": hyperbolic_log(g.entries).tolist(),
        })
    return {"decompositions": out}


def _exponents(cfg: ExperimentConfig, seed: int) -> dict:
    d = _need_driving(cfg, "exponents")
    T = cfg.horizon
    rng = np.random.default_rng(seed)
    ps = period_structure(d, 0, cfg.tolerances.wall)
    flags = [FlagPoint.standard(d.n)] + [random_flag(rng, d.n) for _ in range(cfg.samples)]
    runs = []
    window = max(1, T // 5)
    for b in flags:
        xi = BundlePoint(0, b)
        trace = evolve(d, xi, T)
        entry = {"lyapunov": (trace.a_final / T).tolist(),
                 "norm_growth_first_vector": norm_cocycle(d, 0, b.frame[:, 0], T) / T}
        if T >= 2 * window:
            _, gap = regularity_diagnostic(trace, window)
            entry["cauchy_gap"] = gap
        runs.append(entry)
    return {
        "polar_exponent": polar_exponent(d, 0, T).tolist(),
        "period_h_plus": ps.h_plus.tolist(),
        "theta": _theta_list(ps.theta),
        "standard_flag": runs[0],
        "random_flags": runs[1:],
        "finite_time_lyapunov_standard": finite_time_lyapunov(d, BundlePoint(0, flags[0]), T).tolist(),
    }


def _spectrum(cfg: ExperimentConfig, seed: int, files: dict) -> tuple[dict, dict]:
    _need_driving(cfg, "spectrum")
    clouds = _clouds(cfg, seed)
    ps = period_structure(cfg.driving, 0, cfg.tolerances.wall)
    if "csv" in cfg.outputs:
        for w, c in clouds.items():
            files[f"cloud_{component_file_label(w)}.csv"] = _cloud_csv(c)
    summary = {
        "theta": _theta_list(ps.theta),
        "period_h_plus": ps.h_plus.tolist(),
        "component_count": len(clouds),
        "components": [_cloud_summary(c) for c in clouds.values()],
    }
    return summary, clouds


def _symmetry(cfg: ExperimentConfig, seed: int, files: dict) -> dict:
    summary, clouds = _spectrum(cfg, seed, files)
    report = weyl_symmetry_check(clouds, cfg.tolerances.symmetry)
    summary["symmetry"] = {
        "tol": report.tol,
        "passed": report.passed,
        "max_distance": report.max_distance,
        "distances": report.distances,
        "union_distances": report.union_distances,
    }
    return summary


def _blockform(cfg: ExperimentConfig, seed: int, files: dict) -> dict:
    d = _need_driving(cfg, "blockform")
    rs = type_a(d.n)
    cloud = sample_lyapunov_cloud(d, WeylElement.identity(d.n), cfg.samples, cfg.horizon, seed,
                                  wall_tol=cfg.tolerances.wall)
    cloud = morse_spectrum_estimate(cloud, cfg.chain_samples, cfg.tolerances.epsilon, cfg.tolerances.t_min, d, seed)
    if "csv" in cfg.outputs:
        files[f"cloud_{component_file_label(cloud.component)}.csv"] = _cloud_csv(cloud)
    est = block_form_estimate(cloud, cfg.tolerances.wall, rs)
    ok, margin = chamber_localization_check(cloud, est.theta, rs)
    return {
        "attractor": _cloud_summary(cloud),
        "theta": _theta_list(est.theta),
        "h_rep": est.h_rep.tolist(),
        "margin": _finite_or_none(est.margin),
        "chain_transitive": est.chain_transitive,
        "component_count": component_count(rs, est.theta),
        "chamber_localization": {"passed": ok, "margin": _finite_or_none(margin)},
    }


def _chambers(cfg: ExperimentConfig, seed: int, files: dict) -> dict:
    rs = _root_system(cfg)
    summary = {"root_system": rs.name, "weyl_order": rs.order,
               "chambers": [w.cycles() for w in rs.weyl]}
    if cfg.root_system == "C" or cfg.driving is None:
        return summary
    spec, clouds = _spectrum(cfg, seed, files)
    summary.update(spec)
    summary["chambers_met"] = {c.label(): [w.cycles() for w in chambers_met(rs, c)] for c in clouds.values()}
    summary["hull_stabilizers"] = {c.label(): [w.cycles() for w in hull_stabilizer(rs, c, cfg.tolerances.symmetry)]
                                   for c in clouds.values()}
    return summary


def _plotdata(cfg: ExperimentConfig, seed: int, files: dict) -> dict:
    if not ((cfg.root_system == "A" and cfg.n == 3) or (cfg.root_system == "C" and cfg.n == 2)):
        raise ConfigError("n", "plotdata draws A2 (n = 3) or C2 (n = 2) only")
    rs = _root_system(cfg)
    hulls, summary = {}, {}
    if cfg.root_system == "A" and cfg.driving is not None:
        summary, clouds = _spectrum(cfg, seed, files)
        hulls = {c.label(): c.vertices for c in clouds.values()}
    fig = chamber_figure(rs, hulls)
    if "svg" in cfg.outputs:
        files["figure.svg"] = to_svg(fig)
    summary["plot"] = fig.as_dict()
    return summary


def run(cfg: ExperimentConfig, subcommand: str, seed: int | None = None) -> tuple[dict, dict[str, str]]:
    """Run one subcommand; returns the JSON summary and the other files (name -> text)."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError("subcommand", f"expected one of {list(SUBCOMMANDS)}")
    seed = cfg.seed if seed is None else seed
    files: dict[str, str] = {}
    if subcommand == "decompose":
        body = _decompose(cfg)
    elif subcommand == "exponents":
        body = _exponents(cfg, seed)
    elif subcommand == "spectrum":
        body = _spectrum(cfg, seed, files)[0]
    elif subcommand == "symmetry":
        body = _symmetry(cfg, seed, files)
    elif subcommand == "blockform":
        body = _blockform(cfg, seed, files)
    elif subcommand == "chambers":
        body = _chambers(cfg, seed, files)
    else:
        body = _plotdata(cfg, seed, files)
    summary = {"subcommand": subcommand, "seed": seed, "n": cfg.n, "group": cfg.group,
               "root_system": cfg.root_system, "horizon": cfg.horizon, **body}
    return summary, files


def dump_summary(summary: dict) -> str:
    try:
        return json.dumps(summary, sort_keys=True, indent=2, allow_nan=False) + "\n"
    except ValueError as exc:
        raise NumericFailure(f"summary: non-finite value ({exc})") from exc


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cartan-spectra", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="JSON experiment configuration")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.add_argument("--subcommand", required=True, choices=SUBCOMMANDS)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("config error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        summary, files = run(cfg, args.subcommand, args.seed)
        text = dump_summary(summary)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DecompositionError, ChainError, NumericFailure, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(text, encoding="utf-8")
    for name, body in sorted(files.items()):
        (out / name).write_text(body, encoding="utf-8")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
