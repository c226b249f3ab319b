"""Popularity-threshold sweep engine.

For every threshold: induce the subgraph of nodes at or above it, extract the
largest connected component, compute the requested centralities and the top-k
adjacency spectrum there, and record per-group aggregates. Thresholds are
independent jobs; records are assembled in grid order so results never depend
on scheduling.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .centrality import DEFAULT_DAMPING, pagerank
from .errors import ArgumentError, SchemaError
from .graph import Graph, largest_connected_component, remove_popularity_band, subgraph
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, power_iteration, top_k_spectrum

SCHEMA_NAME = "popnet.sweep"
SCHEMA_MAJOR = 1
SCHEMA_MINOR = 0

OPTIONAL_MEASURES = frozenset({"pagerank", "degree"})
KNOWN_MEASURES = OPTIONAL_MEASURES | {"eigenvector"}


@dataclass
class GroupStats:
    """Aggregates for one group at one threshold.

    Means run over the group's surviving nodes; survivors outside the largest
    component contribute zero.
    """

    size: int
    mean_eigencentrality: float
    max_eigencentrality: float
    mean_degree: float
    mean_pagerank: float | None = None
    mean_degree_centrality: float | None = None


@dataclass
class ThresholdRecord:
    threshold: int
    n_nodes: int
    n_edges: int
    lcc_nodes: int
    lcc_edges: int
    empty: bool
    eigenvalues: list
    eigenvalues_normalized: list
    spectrum_converged: list
    eig_converged: bool
    pagerank_converged: bool | None
    groups: dict
    diagnostic: str | None = None


@dataclass
class SweepResult:
    thresholds: list
    groups: list
    measures: list
    k_eigs: int
    records: list = field(default_factory=list)

    def record_at(self, threshold: int) -> ThresholdRecord:
        for r in self.records:
            if r.threshold == threshold:
                return r
        raise ArgumentError(f"threshold {threshold} not in sweep grid")


def _empty_record(t: int, groups, measures) -> ThresholdRecord:
    stats = GroupStats(
        0, 0.0, 0.0, 0.0,
        mean_pagerank=0.0 if "pagerank" in measures else None,
        mean_degree_centrality=0.0 if "degree" in measures else None,
    )
    return ThresholdRecord(
        threshold=int(t), n_nodes=0, n_edges=0, lcc_nodes=0, lcc_edges=0,
        empty=True, eigenvalues=[], eigenvalues_normalized=[],
        spectrum_converged=[], eig_converged=True, pagerank_converged=None,
        groups={g: stats for g in groups},
        diagnostic="no nodes survive this threshold",
    )


def _sweep_one(t, g, pop, group_masks, measures, k_eigs, tol, max_iter, damping):
    keep = pop >= t
    if not keep.any():
        return _empty_record(t, group_masks, measures)
    sub, sub_map = subgraph(g, keep, keep_ids=False)
    lcc, lcc_map = largest_connected_component(sub, keep_ids=False)
    full_map = sub_map.compose(lcc_map)  # lcc index -> original index

    # the Perron pair is both the eigencentrality and the spectrum's shift
    eig = power_iteration(lcc, tol=tol, max_iter=max_iter)
    k = min(k_eigs, lcc.node_count)
    spectrum = top_k_spectrum(lcc, k, tol=tol, max_iter=max_iter,
                              perron_hint=eig.value)
    values = [p.value for p in spectrum.pairs]
    lam1 = values[0] if values else 0.0
    normalized = [v / lam1 for v in values] if lam1 > 0 else []

    pr = None
    if "pagerank" in measures:
        pr = pagerank(lcc, d=damping, max_iter=max_iter)

    # scatter LCC scores back onto original node indices
    n0 = g.node_count
    eig_full = np.zeros(n0)
    eig_full[full_map.new_to_old] = eig.vector
    deg_full = np.zeros(n0)
    deg_full[full_map.new_to_old] = lcc.degrees()
    pr_full = None
    if pr is not None:
        pr_full = np.zeros(n0)
        pr_full[full_map.new_to_old] = pr.scores

    groups = {}
    for label, mask in group_masks.items():
        surv = mask & keep
        size = int(surv.sum())
        if size == 0:
            groups[label] = GroupStats(0, 0.0, 0.0, 0.0,
                                       0.0 if pr is not None else None,
                                       0.0 if "degree" in measures else None)
            continue
        ev = eig_full[surv]
        dv = deg_full[surv]
        groups[label] = GroupStats(
            size=size,
            mean_eigencentrality=float(ev.mean()),
            max_eigencentrality=float(ev.max()),
            mean_degree=float(dv.mean()),
            mean_pagerank=float(pr_full[surv].mean()) if pr_full is not None else None,
            mean_degree_centrality=float(dv.mean()) if "degree" in measures else None,
        )

    return ThresholdRecord(
        threshold=int(t),
        n_nodes=sub.node_count,
        n_edges=sub.edge_count,
        lcc_nodes=lcc.node_count,
        lcc_edges=lcc.edge_count,
        empty=False,
        eigenvalues=values,
        eigenvalues_normalized=normalized,
        spectrum_converged=[p.converged for p in spectrum.pairs],
        eig_converged=eig.converged,
        pagerank_converged=pr.converged if pr is not None else None,
        groups=groups,
        diagnostic=spectrum.diagnostic,
    )


def threshold_sweep(g: Graph, meta, groups, grid=None, measures=(), k_eigs: int = 3,
                    tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                    damping: float = DEFAULT_DAMPING, threads: int = 1) -> SweepResult:
    """Run the per-threshold pipeline over ``grid`` (default integers 0..100).

    ``groups`` are the labels to aggregate; ``measures`` may add "pagerank"
    and "degree" on top of the always-on eigenvector family. The thread count
    only affects wall-clock time, never results.
    """
    if grid is None:
        grid = list(range(0, 101))
    grid = [int(t) for t in grid]
    if any(t1 >= t2 for t1, t2 in zip(grid, grid[1:])):
        raise ArgumentError("threshold grid must be strictly ascending")
    if grid and (grid[0] < 0 or grid[-1] > 100):
        raise ArgumentError("thresholds must lie within [0, 100]")
    if not grid:
        raise ArgumentError("empty threshold grid")
    if k_eigs < 1:
        raise ArgumentError("k_eigs must be at least 1")
    measures = set(measures)
    unknown = measures - KNOWN_MEASURES
    if unknown:
        raise ArgumentError(f"unknown measures: {sorted(unknown)}")
    measures -= {"eigenvector"}  # always computed

    aligned = meta.align(g)
    pop = aligned.popularity
    known_labels = {lab for lab in meta.group if lab is not None}
    group_masks = {}
    for label in groups:
        if label not in known_labels:
            raise ArgumentError(f"group {label!r} does not appear in the metadata")
        # a label can legitimately have zero members in this graph (e.g. after
        # band removal); aggregates then stay zero
        group_masks[label] = aligned.group_mask(label)

    def work(t):
        return _sweep_one(t, g, pop, group_masks, measures, k_eigs, tol,
                          max_iter, damping)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(work, grid))
    else:
        records = [work(t) for t in grid]

    result_measures = sorted({"eigenvector"} | measures)
    return SweepResult(thresholds=grid, groups=sorted(group_masks),
                       measures=result_measures, k_eigs=k_eigs, records=records)


def removal_band_sweep(g: Graph, meta, groups, band, grid=None, measures=(),
                       k_eigs: int = 3, tol: float = DEFAULT_TOL,
                       max_iter: int = DEFAULT_MAX_ITER,
                       damping: float = DEFAULT_DAMPING, threads: int = 1) -> SweepResult:
    """Remove the closed popularity band entirely, then sweep the remainder."""
    lo, hi = band
    trimmed, _ = remove_popularity_band(g, meta, lo, hi)
    return threshold_sweep(trimmed, meta, groups, grid=grid, measures=measures,
                           k_eigs=k_eigs, tol=tol, max_iter=max_iter,
                           damping=damping, threads=threads)


_GROUP_FIELDS = ("size", "mean_eigencentrality", "max_eigencentrality",
                 "mean_degree", "mean_pagerank", "mean_degree_centrality")


def group_series(result: SweepResult, group: str, field_name: str):
    """One plottable (thresholds, values) series for a group field."""
    if group not in result.groups:
        raise ArgumentError(f"unknown group {group!r}")
    if field_name not in _GROUP_FIELDS:
        raise ArgumentError(f"unknown group field {field_name!r}")
    values = []
    for r in result.records:
        v = getattr(r.groups[group], field_name)
        if v is None:
            raise ArgumentError(f"field {field_name!r} was not computed in this sweep")
        values.append(float(v))
    return np.array(result.thresholds), np.array(values)


def valid_mask(result: SweepResult) -> np.ndarray:
    """True where the thresholded graph was nonempty."""
    return np.array([not r.empty for r in result.records])


# ---------------------------------------------------------------------------
# serialization

def to_json_dict(result: SweepResult) -> dict:
    return {
        "schema": {"name": SCHEMA_NAME, "major": SCHEMA_MAJOR, "minor": SCHEMA_MINOR},
        "thresholds": result.thresholds,
        "groups": result.groups,
        "measures": result.measures,
        "k_eigs": result.k_eigs,
        "records": [
            {
                "threshold": r.threshold,
                "n_nodes": r.n_nodes,
                "n_edges": r.n_edges,
                "lcc_nodes": r.lcc_nodes,
                "lcc_edges": r.lcc_edges,
                "empty": r.empty,
                "eigenvalues": r.eigenvalues,
                "eigenvalues_normalized": r.eigenvalues_normalized,
                "spectrum_converged": r.spectrum_converged,
                "eig_converged": r.eig_converged,
                "pagerank_converged": r.pagerank_converged,
                "diagnostic": r.diagnostic,
                "groups": {
                    label: {
                        "size": s.size,
                        "mean_eigencentrality": s.mean_eigencentrality,
                        "max_eigencentrality": s.max_eigencentrality,
                        "mean_degree": s.mean_degree,
                        "mean_pagerank": s.mean_pagerank,
                        "mean_degree_centrality": s.mean_degree_centrality,
                    }
                    for label, s in r.groups.items()
                },
            }
            for r in result.records
        ],
    }


def from_json_dict(doc: dict) -> SweepResult:
    schema = doc.get("schema", {})
    if schema.get("name") != SCHEMA_NAME:
        raise SchemaError(f"not a sweep document (schema {schema.get('name')!r})")
    if schema.get("major") != SCHEMA_MAJOR:
        raise SchemaError(
            f"unsupported sweep schema major version {schema.get('major')} "
            f"(reader supports {SCHEMA_MAJOR})"
        )
    records = []
    for r in doc["records"]:
        records.append(ThresholdRecord(
            threshold=r["threshold"], n_nodes=r["n_nodes"], n_edges=r["n_edges"],
            lcc_nodes=r["lcc_nodes"], lcc_edges=r["lcc_edges"], empty=r["empty"],
            eigenvalues=r["eigenvalues"],
            eigenvalues_normalized=r["eigenvalues_normalized"],
            spectrum_converged=r["spectrum_converged"],
            eig_converged=r["eig_converged"],
            pagerank_converged=r["pagerank_converged"],
            diagnostic=r.get("diagnostic"),
            groups={
                label: GroupStats(**stats) for label, stats in r["groups"].items()
            },
        ))
    return SweepResult(
        thresholds=doc["thresholds"], groups=doc["groups"],
        measures=doc["measures"], k_eigs=doc["k_eigs"], records=records,
    )


def write_json(result: SweepResult, stream):
    json.dump(to_json_dict(result), stream, indent=2, sort_keys=True)
    stream.write("\n")


def read_json(stream) -> SweepResult:
    return from_json_dict(json.load(stream))


def write_csv(result: SweepResult, stream):
    """Long-form CSV: threshold, group, field, value (graph rows have an
    empty group column). Schema is carried in a leading comment line."""
    stream.write(f"# {SCHEMA_NAME}-csv {SCHEMA_MAJOR}.{SCHEMA_MINOR}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["threshold", "group", "field", "value"])
    for r in result.records:
        rows = [
            ("n_nodes", r.n_nodes), ("n_edges", r.n_edges),
            ("lcc_nodes", r.lcc_nodes), ("lcc_edges", r.lcc_edges),
            ("empty", int(r.empty)), ("eig_converged", int(r.eig_converged)),
        ]
        for i, v in enumerate(r.eigenvalues, start=1):
            rows.append((f"lambda_{i}", repr(v)))
        for i, v in enumerate(r.eigenvalues_normalized, start=1):
            rows.append((f"lambda_norm_{i}", repr(v)))
        for i, v in enumerate(r.spectrum_converged, start=1):
            rows.append((f"spectrum_converged_{i}", int(v)))
        if r.pagerank_converged is not None:
            rows.append(("pagerank_converged", int(r.pagerank_converged)))
        for name, value in rows:
            writer.writerow([r.threshold, "", name, value])
        for label in result.groups:
            s = r.groups[label]
            gr = [("size", s.size),
                  ("mean_eigencentrality", repr(s.mean_eigencentrality)),
                  ("max_eigencentrality", repr(s.max_eigencentrality)),
                  ("mean_degree", repr(s.mean_degree))]
            if s.mean_pagerank is not None:
                gr.append(("mean_pagerank", repr(s.mean_pagerank)))
            if s.mean_degree_centrality is not None:
                gr.append(("mean_degree_centrality", repr(s.mean_degree_centrality)))
            for name, value in gr:
                writer.writerow([r.threshold, label, name, value])
