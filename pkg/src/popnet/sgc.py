"""Social Group Centrality model: preferential-attachment masses with
popularity marks, plus community-leader and celebrity cliques wired to the
masses by popularity-targeted attachment.

Generation is fully deterministic given the config seed: one RNG stream,
fixed call order (masses growth, popularity draws, leaders, celebrities).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ValidationError
from .graph import Graph
from .meta import NodeMetaTable

log = logging.getLogger(__name__)

GROUP_MASSES = "masses"
GROUP_LEADER = "leader"
GROUP_CELEBRITY = "celebrity"

GROUP_POPULARITY = 100.0

LEADER_TARGET_UNIFORM = "uniform_below_k"
LEADER_TARGET_BETA = "beta"


@dataclass(frozen=True)
class SGCConfig:
    """Full parameter set of the generator.

    ``popularity_mean`` is the mean of the exponential popularity draw for
    the masses (clamped at ``popularity_cap``). Leaders attach to masses
    below the split point ``k``, celebrities above it, each pair
    independently with its group's probability.
    """

    masses_count: int = 10_000
    ba_m: int = 2
    popularity_mean: float = 20.0
    popularity_cap: float = 100.0
    k: float = 50.0
    n_leaders: int = 10
    n_celebrities: int = 10
    p_leader: float = 0.1
    p_celeb: float = 0.01
    leader_target: str = LEADER_TARGET_UNIFORM
    beta_alpha: float | None = None
    beta_beta: float | None = None
    beta_expected_degree: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.ba_m < 1 or self.masses_count <= self.ba_m:
            raise ValidationError("need masses_count > ba_m >= 1")
        if not 0 < self.p_celeb <= self.p_leader < 1:
            raise ValidationError("need 0 < p_celeb <= p_leader < 1")
        if not 0 < self.k < 100:
            raise ValidationError("need 0 < k < 100")
        if self.n_leaders < 1 or self.n_celebrities < 1:
            raise ValidationError("need at least one leader and one celebrity")
        if self.popularity_mean <= 0:
            raise ValidationError("popularity_mean must be positive")
        if self.leader_target not in (LEADER_TARGET_UNIFORM, LEADER_TARGET_BETA):
            raise ValidationError(f"unknown leader_target {self.leader_target!r}")
        if self.leader_target == LEADER_TARGET_BETA:
            if not (self.beta_alpha and self.beta_alpha > 0
                    and self.beta_beta and self.beta_beta > 0):
                raise ValidationError("beta mode needs beta_alpha > 0 and beta_beta > 0")
        if self.beta_expected_degree is not None and self.beta_expected_degree < 1:
            raise ValidationError("beta_expected_degree must be >= 1")

    def to_dict(self) -> dict:
        d = {
            "masses_count": self.masses_count,
            "ba_m": self.ba_m,
            "popularity_mean": self.popularity_mean,
            "popularity_cap": self.popularity_cap,
            "k": self.k,
            "n_leaders": self.n_leaders,
            "n_celebrities": self.n_celebrities,
            "p_leader": self.p_leader,
            "p_celeb": self.p_celeb,
            "leader_target": self.leader_target,
            "seed": self.seed,
        }
        if self.leader_target == LEADER_TARGET_BETA:
            d["beta_alpha"] = self.beta_alpha
            d["beta_beta"] = self.beta_beta
            if self.beta_expected_degree is not None:
                d["beta_expected_degree"] = self.beta_expected_degree
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SGCConfig:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown SGC config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class Fragment:
    """Mutable build state: edge blocks, per-node popularity and group."""

    edge_blocks: list = field(default_factory=list)
    popularity: list = field(default_factory=list)
    group: list = field(default_factory=list)
    ids: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def node_count(self) -> int:
        return len(self.popularity)

    def add_nodes(self, count, popularity, group, prefix):
        start = self.node_count
        self.popularity.extend(popularity)
        self.group.extend([group] * count)
        self.ids.extend(f"{prefix}{start + i}" for i in range(count))
        return np.arange(start, start + count, dtype=np.int64)

    def add_edges(self, pairs: np.ndarray):
        if len(pairs):
            self.edge_blocks.append(np.asarray(pairs, dtype=np.int64).reshape(-1, 2))

    def mass_popularity(self) -> np.ndarray:
        mask = [i for i, lab in enumerate(self.group) if lab == GROUP_MASSES]
        return np.asarray(self.popularity, dtype=np.float64)[mask], np.asarray(mask, dtype=np.int64)


@dataclass
class SGCGraph:
    graph: Graph
    meta: NodeMetaTable
    config: SGCConfig
    warnings: list


def _ba_edges(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Preferential-attachment edge list on n nodes, m edges per arrival.

    Seed core is a complete graph on m+1 nodes; targets are drawn uniformly
    from the degree-repeated endpoint list, resampling duplicates.
    """
    m0 = m + 1
    core = [(i, j) for i in range(m0) for j in range(i + 1, m0)]
    n_edges = len(core) + m * (n - m0)
    edges = np.empty((n_edges, 2), dtype=np.int64)
    rep = np.empty(2 * n_edges, dtype=np.int64)
    pos = 0
    for i, (u, v) in enumerate(core):
        edges[i] = (u, v)
        rep[pos] = u
        rep[pos + 1] = v
        pos += 2
    e = len(core)
    for node in range(m0, n):
        targets: set = set()
        while len(targets) < m:
            draw = rng.integers(0, pos, size=m - len(targets))
            targets.update(int(rep[d]) for d in draw)
        for t in sorted(targets):
            edges[e] = (node, t)
            e += 1
            rep[pos] = node
            rep[pos + 1] = t
            pos += 2
    return edges


def generate_masses(cfg: SGCConfig, rng: np.random.Generator) -> Fragment:
    """Grow the preferential-attachment masses and draw their popularity."""
    frag = Fragment()
    n = cfg.masses_count
    edges = _ba_edges(n, cfg.ba_m, rng)
    pop = np.minimum(rng.exponential(cfg.popularity_mean, size=n), cfg.popularity_cap)
    frag.add_nodes(n, pop.tolist(), GROUP_MASSES, "m")
    frag.add_edges(edges)
    return frag


def attach_group(frag: Fragment, group: str, size: int, eligible,
                 p: float, rng: np.random.Generator, prefix: str) -> np.ndarray:
    """Add a clique of ``size`` popularity-100 nodes, wiring each new node to
    every eligible mass node independently with probability ``p``.

    ``eligible`` is a predicate over the mass popularity array. When nothing
    is eligible the clique still lands, with a warning recorded.
    """
    if size < 1:
        raise ArgumentError("group size must be at least 1")
    if not 0 < p < 1:
        raise ArgumentError("attachment probability must be in (0, 1)")
    mass_pop, mass_idx = frag.mass_popularity()
    pool = mass_idx[eligible(mass_pop)]
    nodes = frag.add_nodes(size, [GROUP_POPULARITY] * size, group, prefix)
    clique = [(int(nodes[i]), int(nodes[j]))
              for i in range(size) for j in range(i + 1, size)]
    frag.add_edges(np.array(clique, dtype=np.int64).reshape(-1, 2))
    if pool.size == 0:
        frag.warnings.append(f"no eligible mass nodes for group {group!r}; attachment skipped")
        return nodes
    for v in nodes:
        hits = pool[rng.random(pool.size) < p]
        if hits.size:
            frag.add_edges(np.stack([np.full(hits.size, v, dtype=np.int64), hits], axis=1))
    return nodes


def beta_target_attachment(frag: Fragment, group: str, size: int, alpha: float,
                           beta: float, expected_degree: int,
                           rng: np.random.Generator, prefix: str) -> np.ndarray:
    """Clique plus popularity-targeted attachment: each new node draws
    ``expected_degree`` target popularities from 100*Beta(alpha, beta) and
    attaches to a uniform mass node in the width-1 bucket nearest each draw
    (nearest nonempty bucket on misses; duplicate targets deduplicated).
    """
    if alpha <= 0 or beta <= 0:
        raise ArgumentError("beta parameters must be positive")
    if expected_degree < 1:
        raise ArgumentError("expected_degree must be at least 1")
    mass_pop, mass_idx = frag.mass_popularity()
    if mass_idx.size == 0:
        raise ArgumentError("cannot target attachment: no mass nodes")
    # 100 width-1 buckets covering [0, 100]; the top one is closed so nodes
    # clamped at exactly 100 stay reachable
    buckets = np.clip(np.floor(mass_pop).astype(np.int64), 0, 99)
    members = [mass_idx[buckets == b] for b in range(100)]
    nonempty = [b for b in range(100) if members[b].size]

    def nearest_bucket(b: int) -> int:
        if members[b].size:
            return b
        # walk outward, preferring the lower bucket on distance ties
        for off in range(1, 100):
            if b - off >= 0 and members[b - off].size:
                return b - off
            if b + off <= 99 and members[b + off].size:
                return b + off
        raise AssertionError("unreachable: some bucket is nonempty")

    if not nonempty:
        raise ArgumentError("cannot target attachment: no mass nodes")
    nodes = frag.add_nodes(size, [GROUP_POPULARITY] * size, group, prefix)
    clique = [(int(nodes[i]), int(nodes[j]))
              for i in range(size) for j in range(i + 1, size)]
    frag.add_edges(np.array(clique, dtype=np.int64).reshape(-1, 2))
    for v in nodes:
        draws = 100.0 * rng.beta(alpha, beta, size=expected_degree)
        chosen: set = set()
        for p_star in draws:
            b = nearest_bucket(min(int(p_star), 99))
            pool = members[b]
            chosen.add(int(pool[rng.integers(0, pool.size)]))
        targets = np.fromiter(sorted(chosen), dtype=np.int64)
        frag.add_edges(np.stack([np.full(targets.size, v, dtype=np.int64), targets], axis=1))
    return nodes


def uniform_leader_degree(cfg: SGCConfig, mass_pop: np.ndarray) -> int:
    """Expected per-leader mass attachment count in uniform mode; used as the
    beta-mode default so the two modes are degree-comparable."""
    return max(1, round(cfg.p_leader * int((mass_pop < cfg.k).sum())))


def generate_sgc(cfg: SGCConfig) -> SGCGraph:
    """Generate the full model: masses, then leaders, then celebrities."""
    rng = np.random.default_rng(cfg.seed)
    frag = generate_masses(cfg, rng)
    mass_pop = np.asarray(frag.popularity, dtype=np.float64)

    if cfg.leader_target == LEADER_TARGET_BETA:
        expected = cfg.beta_expected_degree
        if expected is None:
            expected = uniform_leader_degree(cfg, mass_pop)
        beta_target_attachment(frag, GROUP_LEADER, cfg.n_leaders,
                               cfg.beta_alpha, cfg.beta_beta, expected, rng, "L")
    else:
        attach_group(frag, GROUP_LEADER, cfg.n_leaders,
                     lambda pop: pop < cfg.k, cfg.p_leader, rng, "L")
    attach_group(frag, GROUP_CELEBRITY, cfg.n_celebrities,
                 lambda pop: pop > cfg.k, cfg.p_celeb, rng, "C")

    for w in frag.warnings:
        log.warning("%s", w)

    edges = np.concatenate(frag.edge_blocks, axis=0) if frag.edge_blocks \
        else np.empty((0, 2), dtype=np.int64)
    graph = Graph.from_edges(edges, frag.node_count, ids=frag.ids)
    meta = NodeMetaTable(
        ids=frag.ids,
        names=frag.ids,
        popularity=frag.popularity,
        genres=[frozenset()] * frag.node_count,
        group=frag.group,
    )
    return SGCGraph(graph=graph, meta=meta, config=cfg, warnings=list(frag.warnings))


def scaled_leader_rate(cfg: SGCConfig, degree_ratio: float) -> float:
    """p_leader giving an expected initial leader/celebrity mean-degree ratio.

    Expected counts come from the exponential popularity law; returns the
    required rate, which the caller must check for feasibility.
    """
    if degree_ratio <= 1:
        raise ArgumentError("degree ratio must exceed 1")
    f_low = 1.0 - np.exp(-cfg.k / cfg.popularity_mean)
    n_low = cfg.masses_count * f_low
    n_high = cfg.masses_count * (1.0 - f_low)
    celeb_mean = (cfg.n_celebrities - 1) + cfg.p_celeb * n_high
    return (degree_ratio * celeb_mean - (cfg.n_leaders - 1)) / n_low
