"""Hashtag co-occurrence graph with significance-filtered edges.

Each pair of hashtags appearing together in a tweet gets a p-value: the
one-sided hypergeometric tail probability of seeing at least the observed
number of joint tweets if the two tags were placed independently among the
N tweets. Edges with p below the threshold p0 survive and carry the weight
s = log(p0 / p). All p-value work happens in log space so that margins in
the millions and p-values far below float underflow stay finite.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .records import CorpusWindow


@dataclass
class HashtagStats:
    occurrences: dict[str, int]
    total_tweets: int

    def count(self, tag: str) -> int:
        return self.occurrences.get(tag, 0)


def count_hashtags(corpus: CorpusWindow) -> HashtagStats:
    """Count, per tag, the number of tweets containing it at least once."""
    occ: dict[str, int] = {}
    n = 0
    for rec in corpus.all_records():
        n += 1
        for tag in set(rec.hashtags):
            occ[tag] = occ.get(tag, 0) + 1
    return HashtagStats(occurrences=occ, total_tweets=n)


def _lbinom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log_pmf(x: int, c_i: int, c_j: int, n: int) -> float:
    return _lbinom(c_i, x) + _lbinom(n - c_i, c_j - x) - _lbinom(n, c_j)


def _log_range_sum(a: int, b: int, c_i: int, c_j: int, n: int) -> float:
    """log sum_{x=a..b} pmf(x), built from the pmf ratio
    pmf(x+1)/pmf(x) = (c_i-x)(c_j-x) / ((x+1)(n-c_i-c_j+x+1))."""
    lp_a = _log_pmf(a, c_i, c_j, n)
    if a == b:
        return lp_a
    xs = np.arange(a, b, dtype=np.float64)
    log_ratios = (
        np.log(c_i - xs)
        + np.log(c_j - xs)
        - np.log(xs + 1.0)
        - np.log(n - c_i - c_j + xs + 1.0)
    )
    log_pmf = lp_a + np.concatenate(([0.0], np.cumsum(log_ratios)))
    m = float(np.max(log_pmf))
    return m + math.log(float(np.sum(np.exp(log_pmf - m))))


def log_hypergeom_sf(k: int, c_i: int, c_j: int, n: int) -> float:
    """log P(X >= k) for X hypergeometric with margins (c_i, c_j) out of n.

    X counts tweets containing both tags when c_i and c_j tweets carry each
    tag independently of each other. Below the mode the complement tail is
    summed instead, so results stay accurate and monotone in k all the way
    to p = 1; margins up to at least 10^7 stay finite.
    """
    if not (0 <= k <= min(c_i, c_j) <= n and max(c_i, c_j) <= n):
        raise ValueError(f"invalid margins k={k} c_i={c_i} c_j={c_j} n={n}")
    low = max(0, c_i + c_j - n)
    high = min(c_i, c_j)
    if k <= low:
        return 0.0
    mode = ((c_i + 1) * (c_j + 1)) // (n + 2)
    if k <= mode:
        # p = 1 - P(X <= k-1); the lower tail is the small quantity here
        log_lower = _log_range_sum(low, k - 1, c_i, c_j, n)
        if log_lower >= 0.0:
            return min(log_lower, 0.0) - 1e-300  # degenerate full-mass guard
        if log_lower < -40.0:
            return 0.0  # complement indistinguishable from 1 in floats
        return math.log1p(-math.exp(log_lower))
    return min(_log_range_sum(k, high, c_i, c_j, n), 0.0)


def edge_significance(k: int, c_i: int, c_j: int, n: int) -> float:
    """One-sided co-occurrence p-value (may underflow to 0.0 for extreme
    inputs; use log_hypergeom_sf where the magnitude matters)."""
    return math.exp(log_hypergeom_sf(k, c_i, c_j, n))


def keep_edge(log_p: float, log_p0: float) -> bool:
    """Significance filter: strictly below the threshold survives; an edge
    sitting exactly at p0 is removed (it would carry weight s = 0)."""
    return log_p < log_p0


@dataclass(frozen=True)
class EdgeInfo:
    k: int
    log_p: float
    s: float

    @property
    def p(self) -> float:
        return math.exp(self.log_p)


@dataclass
class SignificantGraph:
    p0: float
    vertices: dict[str, int]  # tag -> occurrence count in the counted view
    edges: dict[tuple[str, str], EdgeInfo]  # key is the sorted tag pair
    raw_vertex_count: int = 0
    raw_edge_count: int = 0
    adjacency: dict[str, dict[str, float]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.adjacency:
            adj: dict[str, dict[str, float]] = {t: {} for t in self.vertices}
            for (a, b), info in self.edges.items():
                adj[a][b] = info.s
                adj[b][a] = info.s
            self.adjacency = adj

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, tag: str) -> dict[str, float]:
        return self.adjacency.get(tag, {})

    def write_edges_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tag_a", "tag_b", "k", "p", "s"])
            for (a, b) in sorted(self.edges):
                e = self.edges[(a, b)]
                w.writerow([a, b, e.k, repr(e.p), repr(e.s)])

    def write_vertices_csv(self, path, communities: dict[str, int] | None = None) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tag", "count", "community"])
            for tag in sorted(self.vertices):
                comm = "" if communities is None else communities.get(tag, "")
                w.writerow([tag, self.vertices[tag], comm])

    def to_node_link(
        self,
        communities: dict[str, int] | None = None,
        assignment: dict[str, str] | None = None,
    ) -> dict:
        nodes = []
        for tag in sorted(self.vertices):
            node = {"id": tag, "count": self.vertices[tag]}
            if communities is not None and tag in communities:
                node["community"] = communities[tag]
            if assignment is not None and tag in assignment:
                node["class"] = assignment[tag]
            nodes.append(node)
        links = [
            {"source": a, "target": b, "s": self.edges[(a, b)].s, "k": self.edges[(a, b)].k}
            for (a, b) in sorted(self.edges)
        ]
        return {"nodes": nodes, "links": links}

    def save_node_link(self, path, **kwargs) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_node_link(**kwargs), fh, sort_keys=True, separators=(",", ":"))


def _largest_cc(vertices, adjacency) -> set[str]:
    seen: set[str] = set()
    best: set[str] = set()
    best_key = None
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            for v in adjacency.get(u, ()):
                if v not in comp:
                    comp.add(v)
                    frontier.append(v)
        seen |= comp
        key = (-len(comp), min(comp))
        if best_key is None or key < best_key:
            best, best_key = comp, key
    return best


def build_significant_graph(
    corpus: CorpusWindow,
    p0: float = 1e-6,
    max_tags_per_tweet: int = 20,
) -> SignificantGraph:
    """Count within-tweet tag pairs, keep edges with p < p0, and restrict the
    result to its largest connected component.

    Tweets carrying more than ``max_tags_per_tweet`` distinct tags are
    treated as spam and excluded from the counting universe (occurrence
    counts, pair counts and N alike, so the null model stays coherent).
    """
    if not (0.0 < p0 < 1.0):
        raise ValueError("p0 must be in (0, 1)")
    occ: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    n = 0
    for rec in corpus.all_records():
        tags = sorted(set(rec.hashtags))
        if len(tags) > max_tags_per_tweet:
            continue
        n += 1
        for tag in tags:
            occ[tag] = occ.get(tag, 0) + 1
        for pair in combinations(tags, 2):
            pair_counts[pair] = pair_counts.get(pair, 0) + 1

    log_p0 = math.log(p0)
    kept: dict[tuple[str, str], EdgeInfo] = {}
    for (a, b), k in pair_counts.items():
        log_p = log_hypergeom_sf(k, occ[a], occ[b], n)
        if keep_edge(log_p, log_p0):
            kept[(a, b)] = EdgeInfo(k=k, log_p=log_p, s=log_p0 - log_p)

    adj: dict[str, set[str]] = {}
    for a, b in kept:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    lcc = _largest_cc(adj.keys(), adj)
    vertices = {t: occ[t] for t in sorted(lcc)}
    edges = {pair: info for pair, info in kept.items() if pair[0] in lcc and pair[1] in lcc}
    return SignificantGraph(
        p0=p0,
        vertices=vertices,
        edges=edges,
        raw_vertex_count=len(occ),
        raw_edge_count=len(pair_counts),
    )


def save_stats_json(stats: HashtagStats, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {"total_tweets": stats.total_tweets, "occurrences": stats.occurrences},
            fh, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
        )


def load_stats_json(path) -> HashtagStats:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return HashtagStats(occurrences=obj["occurrences"], total_tweets=obj["total_tweets"])


def load_graph_csv(edges_path, vertices_path, p0: float) -> SignificantGraph:
    """Rebuild a SignificantGraph from its edge/vertex CSV artifacts."""
    vertices: dict[str, int] = {}
    with open(vertices_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if row:
                vertices[row[0]] = int(row[1])
    edges: dict[tuple[str, str], EdgeInfo] = {}
    log_p0 = math.log(p0)
    with open(edges_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if not row:
                continue
            a, b, k, p, s = row[0], row[1], int(row[2]), float(row[3]), float(row[4])
            edges[(a, b)] = EdgeInfo(k=k, log_p=log_p0 - float(s), s=float(s))
    return SignificantGraph(p0=p0, vertices=vertices, edges=edges)


@dataclass
class CommunityPartition:
    membership: dict[str, int]
    modularity: float
    n_communities: int


def detect_communities(
    graph: SignificantGraph, seed: int, method: str = "modularity"
) -> CommunityPartition:
    """Community structure of the s-weighted graph, for validating that the
    propagated classes line up with the modularity partition.

    ``method`` is "modularity" (greedy multi-level maximization) or
    "labelprop" (asynchronous label propagation cross-check).
    """
    import networkx as nx

    if graph.vertex_count == 0:
        raise ValueError("cannot detect communities of an empty graph")
    g = nx.Graph()
    g.add_nodes_from(sorted(graph.vertices))
    for (a, b), info in sorted(graph.edges.items()):
        g.add_edge(a, b, weight=info.s)
    if method == "modularity":
        comms = nx.community.louvain_communities(g, weight="weight", resolution=1.0, seed=seed)
    elif method == "labelprop":
        comms = list(nx.community.asyn_lpa_communities(g, weight="weight", seed=seed))
    else:
        raise ValueError(f"unknown community method {method!r}")
    comms = sorted((sorted(c) for c in comms), key=lambda c: (-len(c), c[0]))
    membership = {tag: idx for idx, comm in enumerate(comms) for tag in comm}
    mod = nx.community.modularity(g, [set(c) for c in comms], weight="weight")
    return CommunityPartition(membership=membership, modularity=mod, n_communities=len(comms))
