"""Command-line surface: stats, generate, sweep, analyze.

Every run that writes to an output directory also writes a ``manifest.json``
recording the fully-resolved parameters, tool version and input digests, so
any result can be reproduced exactly. Outputs are byte-stable: rerunning a
command with the same inputs and seed rewrites identical files regardless of
the thread count.
"""

from __future__ import annotations

import hashlib
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, analysis, stats as statsmod, sweep as sweepmod
from .errors import ArgumentError, PopnetError
from .graph import load_edge_list, write_edge_list
from .meta import load_node_meta, write_node_meta
from .sgc import SGCConfig, generate_sgc

log = logging.getLogger(__name__)

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib


def _load_config(path):
    """Read a TOML (or JSON) config file into a dict of command sections."""
    if path is None:
        return {}
    raw = Path(path).read_bytes()
    if str(path).endswith(".json") or raw.lstrip()[:1] == b"{":
        return json.loads(raw.decode("utf-8"))
    return tomllib.loads(raw.decode("utf-8"))


def _resolve(flag_value, section: dict, key: str, default):
    """Flag beats config file beats built-in default."""
    if flag_value is not None:
        return flag_value
    if key in section:
        return section[key]
    return default


def parse_grid(spec: str) -> list:
    """Parse "lo..hi:step" (step optional, default 1) into thresholds."""
    try:
        if ":" in spec:
            range_part, step_s = spec.split(":", 1)
            step = int(step_s)
        else:
            range_part, step = spec, 1
        lo_s, hi_s = range_part.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise ArgumentError(f"bad grid spec {spec!r}; expected 'lo..hi:step'") from None
    if step < 1:
        raise ArgumentError("grid step must be at least 1")
    return list(range(lo, hi + 1, step))


def parse_band(spec: str) -> tuple:
    try:
        lo_s, hi_s = spec.split("..", 1)
        return float(lo_s), float(hi_s)
    except ValueError:
        raise ArgumentError(f"bad band spec {spec!r}; expected 'lo..hi'") from None


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, command: str, parameters: dict,
                    inputs: dict, outputs: list):
    manifest = {
        "tool": "popnet",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "inputs": {name: {"path": str(p), "sha256": _sha256(p)}
                   for name, p in inputs.items()},
        "outputs": sorted(outputs),
    }
    path = out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def _ensure_out(out) -> Path:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def _load_inputs(edges_path, meta_path):
    with open(edges_path, "r", encoding="utf-8") as f:
        g = load_edge_list(f)
    with open(meta_path, "r", encoding="utf-8", newline="") as f:
        meta = load_node_meta(f)
    return g, meta


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """Popularity-thresholded network analysis toolkit."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@cli.command()
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--meta", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="Also write stats.json and a manifest here.")
def stats(edges, meta, out):
    """Descriptive statistics of a graph + metadata pair."""
    g, table = _load_inputs(edges, meta)
    report = _stats_report(g, table)
    click.echo(_stats_text(report))
    if out is not None:
        out_dir = _ensure_out(out)
        with open(out_dir / "stats.json", "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2, sort_keys=True)
            f.write("\n")
        _write_manifest(out_dir, "stats", {"edges": str(edges), "meta": str(meta)},
                        {"edges": edges, "meta": meta}, ["stats.json"])


def _stats_report(g, table) -> dict:
    deg = g.degrees()
    report = {
        "n_nodes": g.node_count,
        "n_edges": g.edge_count,
        "degree": {
            "min": int(deg.min()) if deg.size else 0,
            "max": int(deg.max()) if deg.size else 0,
            "mean": float(deg.mean()) if deg.size else 0.0,
            "median": float(np.median(deg)) if deg.size else 0.0,
        },
    }
    for name, fn in [
        ("degree_assortativity", lambda: statsmod.degree_assortativity(g)),
        ("popularity_homophily", lambda: statsmod.popularity_homophily(g, table)),
        ("degree_popularity_correlation",
         lambda: statsmod.degree_popularity_correlation(g, table)),
    ]:
        try:
            report[name] = fn()
        except PopnetError as e:
            report[name] = None
            report[name + "_reason"] = str(e)
    try:
        overlap = statsmod.genre_edge_overlap(g, table)
        report["genre_edge_overlap"] = overlap.fraction
        report["genre_edge_overlap_eligible_edges"] = overlap.eligible_edges
    except PopnetError as e:
        report["genre_edge_overlap"] = None
        report["genre_edge_overlap_reason"] = str(e)
    return report


def _stats_text(report: dict) -> str:
    lines = [
        f"nodes: {report['n_nodes']}",
        f"edges: {report['n_edges']}",
        "degree: min {min} / median {median:g} / mean {mean:.4f} / max {max}".format(
            **report["degree"]),
    ]
    for key in ("degree_assortativity", "popularity_homophily",
                "degree_popularity_correlation", "genre_edge_overlap"):
        value = report[key]
        if value is None:
            lines.append(f"{key.replace('_', ' ')}: undefined ({report[key + '_reason']})")
        else:
            lines.append(f"{key.replace('_', ' ')}: {value:.6f}")
    return "\n".join(lines)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None)
@click.option("--masses", type=int, default=None, help="Size of the masses group.")
@click.option("--ba-m", type=int, default=None, help="Edges per arriving mass node.")
@click.option("--k", type=float, default=None, help="Popularity split point.")
@click.option("--p-leader", type=float, default=None)
@click.option("--p-celeb", type=float, default=None)
@click.option("--n-leaders", type=int, default=None)
@click.option("--n-celebrities", type=int, default=None)
@click.option("--popularity-mean", type=float, default=None)
@click.option("--leader-target", type=click.Choice(["uniform_below_k", "beta"]),
              default=None)
@click.option("--beta-alpha", type=float, default=None)
@click.option("--beta-beta", type=float, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def generate(config_path, seed, masses, ba_m, k, p_leader, p_celeb, n_leaders,
             n_celebrities, popularity_mean, leader_target, beta_alpha,
             beta_beta, out):
    """Generate a Social Group Centrality graph and write it as files."""
    section = _load_config(config_path).get("generate", {})
    cfg_dict = dict(section)
    for key, value in [
        ("seed", seed), ("masses_count", masses), ("ba_m", ba_m), ("k", k),
        ("p_leader", p_leader), ("p_celeb", p_celeb), ("n_leaders", n_leaders),
        ("n_celebrities", n_celebrities), ("popularity_mean", popularity_mean),
        ("leader_target", leader_target), ("beta_alpha", beta_alpha),
        ("beta_beta", beta_beta),
    ]:
        if value is not None:
            cfg_dict[key] = value
    cfg = SGCConfig.from_dict(cfg_dict)
    model = generate_sgc(cfg)

    out_dir = _ensure_out(out)
    with open(out_dir / "edges.tsv", "w", encoding="utf-8") as f:
        write_edge_list(model.graph, f)
    with open(out_dir / "meta.csv", "w", encoding="utf-8", newline="") as f:
        write_node_meta(model.meta, f)
    _write_manifest(out_dir, "generate", cfg.to_dict(), {},
                    ["edges.tsv", "meta.csv"])
    click.echo(f"wrote {model.graph.node_count} nodes / {model.graph.edge_count} edges "
               f"to {out_dir}")


@cli.command("sweep")
@click.option("--edges", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--meta", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--grid", "grid_spec", type=str, default=None,
              help="Threshold grid 'lo..hi:step' (default 0..100:1).")
@click.option("--measures", "measures_spec", type=str, default=None,
              help="Comma list out of eigenvector,pagerank,degree.")
@click.option("--k-eigs", type=int, default=None)
@click.option("--groups", "groups_spec", type=str, default=None,
              help="Comma list of group labels (default: all labels in the metadata).")
@click.option("--remove-band", "band_spec", type=str, default=None,
              help="Remove popularity band 'lo..hi' before sweeping.")
@click.option("--threads", type=int, default=None)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def sweep_cmd(edges, meta, config_path, grid_spec, measures_spec, k_eigs,
              groups_spec, band_spec, threads, out):
    """Threshold sweep over a graph + metadata pair."""
    section = _load_config(config_path).get("sweep", {})
    grid_spec = _resolve(grid_spec, section, "grid", "0..100:1")
    measures_spec = _resolve(measures_spec, section, "measures", "eigenvector")
    k_eigs = int(_resolve(k_eigs, section, "k_eigs", 3))
    groups_spec = _resolve(groups_spec, section, "groups", None)
    band_spec = _resolve(band_spec, section, "remove_band", None)
    threads = int(_resolve(threads, section, "threads", 1))

    grid = parse_grid(grid_spec)
    measures = [m.strip() for m in measures_spec.split(",") if m.strip()]
    g, table = _load_inputs(edges, meta)
    if groups_spec:
        groups = [x.strip() for x in groups_spec.split(",") if x.strip()]
    else:
        groups = table.align(g).group_labels()
        if not groups:
            raise ArgumentError("metadata carries no group labels; pass --groups")

    if band_spec is not None:
        band = parse_band(band_spec)
        result = sweepmod.removal_band_sweep(g, table, groups, band, grid=grid,
                                             measures=measures, k_eigs=k_eigs,
                                             threads=threads)
    else:
        result = sweepmod.threshold_sweep(g, table, groups, grid=grid,
                                          measures=measures, k_eigs=k_eigs,
                                          threads=threads)

    out_dir = _ensure_out(out)
    with open(out_dir / "sweep.json", "w", encoding="utf-8") as f:
        sweepmod.write_json(result, f)
    with open(out_dir / "sweep.csv", "w", encoding="utf-8", newline="") as f:
        sweepmod.write_csv(result, f)
    parameters = {
        "edges": str(edges), "meta": str(meta), "grid": grid_spec,
        "measures": measures, "k_eigs": k_eigs, "groups": groups,
        "remove_band": band_spec,
    }
    _write_manifest(out_dir, "sweep", parameters,
                    {"edges": edges, "meta": meta}, ["sweep.json", "sweep.csv"])
    click.echo(f"swept {len(grid)} thresholds -> {out_dir}")


@cli.group()
def analyze():
    """Analyses over sweep results or batch experiments."""


@analyze.command("transition")
@click.option("--sweep", "sweep_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--group-a", default="leader", show_default=True,
              help="Group that leads at low thresholds.")
@click.option("--group-b", default="celebrity", show_default=True,
              help="Group expected to overtake.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def analyze_transition(sweep_path, group_a, group_b, out):
    """Transition report (threshold, gap, changeover, curvature) for a sweep."""
    with open(sweep_path, "r", encoding="utf-8") as f:
        result = sweepmod.read_json(f)
    report = analysis.transition_report(result, group_a, group_b)
    out_dir = _ensure_out(out)
    with open(out_dir / "transition.json", "w", encoding="utf-8") as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    _write_manifest(out_dir, "analyze transition",
                    {"sweep": str(sweep_path), "group_a": group_a, "group_b": group_b},
                    {"sweep": sweep_path}, ["transition.json"])
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))


def _base_cfg_from(config_path, seed, masses) -> SGCConfig:
    section = _load_config(config_path).get("generate", {})
    cfg_dict = dict(section)
    if seed is not None:
        cfg_dict["seed"] = seed
    if masses is not None:
        cfg_dict["masses_count"] = masses
    return SGCConfig.from_dict(cfg_dict)


@analyze.command("beta-grid")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--alphas", required=True, type=str, help="Comma list of alpha values.")
@click.option("--betas", required=True, type=str, help="Comma list of beta values.")
@click.option("--reps", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--masses", type=int, default=None)
@click.option("--threads", type=int, default=1)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def analyze_beta_grid(config_path, alphas, betas, reps, seed, masses, threads, out):
    """Curvature surface over a Beta(alpha, beta) leader-targeting grid."""
    base = _base_cfg_from(config_path, seed, masses)
    alpha_grid = [float(x) for x in alphas.split(",") if x.strip()]
    beta_grid = [float(x) for x in betas.split(",") if x.strip()]
    result = analysis.beta_grid_experiment(base, alpha_grid, beta_grid, reps,
                                           threads=threads)
    out_dir = _ensure_out(out)
    with open(out_dir / "beta_grid.csv", "w", encoding="utf-8", newline="") as f:
        f.write("alpha,beta,rep,curvature\n")
        for cell in result.cells:
            for rep, curv in enumerate(cell.curvatures):
                f.write(f"{cell.alpha:g},{cell.beta:g},{rep},{curv!r}\n")
    summary = {
        "alphas": result.alphas,
        "betas": result.betas,
        "mean_curvature": {
            f"{c.alpha:g},{c.beta:g}": c.mean_curvature for c in result.cells
        },
    }
    with open(out_dir / "beta_grid_summary.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    _write_manifest(out_dir, "analyze beta-grid",
                    {"base": base.to_dict(), "alphas": alpha_grid,
                     "betas": beta_grid, "reps": reps}, {},
                    ["beta_grid.csv", "beta_grid_summary.json"])
    click.echo(f"beta grid of {len(result.cells)} cells -> {out_dir}")


@analyze.command("degree-ratio")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--ratios", required=True, type=str, help="Comma list of degree ratios.")
@click.option("--reps", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--masses", type=int, default=None)
@click.option("--threads", type=int, default=1)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def analyze_degree_ratio(config_path, ratios, reps, seed, masses, threads, out):
    """Degree-changeover vs transition thresholds across degree ratios."""
    base = _base_cfg_from(config_path, seed, masses)
    ratio_grid = [float(x) for x in ratios.split(",") if x.strip()]
    cells = analysis.degree_ratio_experiment(base, ratio_grid, reps, threads=threads)
    out_dir = _ensure_out(out)
    with open(out_dir / "degree_ratio.csv", "w", encoding="utf-8", newline="") as f:
        f.write("ratio,p_leader,rep,seed,changeover_threshold,transition_threshold\n")
        for cell in cells:
            if cell.skipped:
                continue
            for rep, (s, c, t) in enumerate(zip(cell.seeds,
                                                cell.changeover_thresholds,
                                                cell.transition_thresholds)):
                c_s = "" if c is None else c
                t_s = "" if t is None else t
                f.write(f"{cell.ratio:g},{cell.p_leader!r},{rep},{s},{c_s},{t_s}\n")
    summary = {
        "cells": [
            {
                "ratio": c.ratio, "p_leader": c.p_leader, "skipped": c.skipped,
                "changeover_thresholds": c.changeover_thresholds,
                "transition_thresholds": c.transition_thresholds,
            }
            for c in cells
        ],
    }
    try:
        summary["spearman_rho"] = analysis.changeover_transition_correlation(cells)
    except PopnetError as e:
        summary["spearman_rho"] = None
        summary["spearman_rho_reason"] = str(e)
    with open(out_dir / "degree_ratio_summary.json", "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    _write_manifest(out_dir, "analyze degree-ratio",
                    {"base": base.to_dict(), "ratios": ratio_grid, "reps": reps},
                    {}, ["degree_ratio.csv", "degree_ratio_summary.json"])
    click.echo(f"degree-ratio experiment of {len(cells)} cells -> {out_dir}")


def main(argv=None):
    """Entry point with the documented exit codes.

    0 success, 1 usage, 2 data/validation, 3 internal.
    """
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except click.UsageError as e:
        e.show()
        sys.exit(1)
    except click.ClickException as e:
        e.show()
        sys.exit(1)
    except PopnetError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    except Exception as e:  # noqa: BLE001 - last-resort boundary
        click.echo(f"internal error: {e.__class__.__name__}: {e}", err=True)
        sys.exit(3)
    sys.exit(0)
