"""Girth-constrained bipartite templates and coin-flip metric spaces.

A template is a bipartite graph on sides L, R of size n.  Doubling each
left vertex into a plus and a minus copy and routing every template edge
to exactly one of the two copies (a coin flip per edge) yields a graph
on 3n vertices whose truncated shortest-path metric

    d(x, y) = min(s * hops(x, y), T)

is always a metric.  The key structural fact: a plus/minus pair at graph
distance g' forces a cycle of length at most g' in the template, so a
girth-g template keeps every pair lambda+/lambda- at distance at least
min(s*g, T).  Together with the coarse modulus exponent from
:mod:`mdrlab.moduli` these metrics witness coarse dimension lower bounds.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import IndexMismatch
from .metric import FiniteMetric, build_metric
from .moduli import ModulusPair, beta_modulus  # noqa: F401  (re-exported entry points)
from .moduli import coarse_dim_exponent  # noqa: F401


@dataclass(frozen=True)
class TemplateGraph:
    """Bipartite template: edges join left side {0..n-1} to right side {0..n-1}."""

    n: int
    edges: tuple  # sorted (left, right) pairs
    girth: float  # computed at build time; inf for forests

    @staticmethod
    def build(n: int, edges) -> "TemplateGraph":
        es = sorted({(int(i), int(j)) for i, j in edges})
        for i, j in es:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) outside side size {n}")
        g = _bipartite_girth(n, es)
        return TemplateGraph(n, tuple(es), g)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def density_ratio(self) -> float:
        """|E| / n^(1 + 1/g); reported only, no floor is asserted."""
        if not math.isfinite(self.girth):
            return 0.0
        return self.edge_count / self.n ** (1.0 + 1.0 / self.girth)

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "n": self.n,
                "partition": {"L": list(range(self.n)), "R": list(range(self.n))},
                "edges": [list(e) for e in self.edges],
            }
        )

    @staticmethod
    def from_json(text: str) -> "TemplateGraph":
        import json

        obj = json.loads(text)
        return TemplateGraph.build(int(obj["n"]), obj["edges"])


@dataclass(frozen=True)
class SignAssignment:
    """+1/-1 coin flip for every template edge."""

    signs: dict

    def __post_init__(self):
        for v in self.signs.values():
            if v not in (-1, 1):
                raise ValueError("signs must be +1 or -1")

    def of(self, edge) -> int:
        return self.signs[tuple(edge)]


@dataclass(frozen=True)
class SignedMetricParams:
    """Scale s and truncation T of the metric min(s*hops, T); needs T >= s."""

    s: float
    T: float

    def __post_init__(self):
        if self.s <= 0 or self.T <= 0:
            raise ValueError("s and T must be positive")
        if self.T < self.s:
            raise ValueError("need T >= s")


def _adjacency_lists(vertices: int, pairs) -> list:
    adj = [[] for _ in range(vertices)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def girth(vertices: int, pairs) -> float:
    """Shortest cycle length of a simple undirected graph; inf for forests.

    BFS from every vertex; a scanned non-tree edge at depths a and b closes
    a cycle of length at most a + b + 1 through the lowest common ancestor,
    and the bound is tight for sources lying on a shortest cycle.
    """
    adj = _adjacency_lists(vertices, pairs)
    best = math.inf
    for src in range(vertices):
        depth = {src: 0}
        parent = {src: -1}
        queue = deque([src])
        while queue:
            v = queue.popleft()
            if 2 * depth[v] >= best:
                break
            for u in adj[v]:
                if u not in depth:
                    depth[u] = depth[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif u != parent[v]:
                    best = min(best, depth[v] + depth[u] + 1)
    return best


def _template_girth_or_short_cycle_edge(n: int, edge_set: set, g: int):
    """Either None (girth >= g) or one edge lying on a cycle shorter than g.

    BFS to depth g/2 in the bipartite graph on 2n vertices (left 0..n-1,
    right n..2n-1); the first non-tree edge closing a cycle of length < g is
    returned.  That edge always lies on the short cycle through the lowest
    common ancestor, so deleting it is a valid (and deterministic) pruning
    rule.
    """
    adj = [[] for _ in range(2 * n)]
    for i, j in sorted(edge_set):
        adj[i].append(n + j)
        adj[n + j].append(i)
    for src in range(2 * n):
        depth = {src: 0}
        parent = {src: -1}
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in depth:
                    if depth[v] < g // 2:
                        depth[u] = depth[v] + 1
                        parent[u] = v
                        queue.append(u)
                elif u != parent[v] and depth[v] + depth[u] + 1 < g:
                    left, right = (v, u - n) if v < n else (u, v - n)
                    return (left, right)
    return None


def _bipartite_girth(n: int, edges) -> float:
    pairs = [(i, n + j) for i, j in edges]
    return girth(2 * n, pairs)


def gen_template(n: int, g: int, seed) -> TemplateGraph:
    """Random template with girth at least g.

    Edges appear independently with probability n^(-1 + 2/g); any cycle
    shorter than g is then destroyed by deleting one of its edges until none
    remain.  The surviving edge count is reported via ``density_ratio``
    rather than asserted (the achievable density exponent is an open
    combinatorial question).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if g < 4 or g % 2 != 0:
        raise ValueError("g must be an even integer >= 4 (bipartite cycles are even)")
    rng = np.random.default_rng(seed)
    p = n ** (-1.0 + 2.0 / g)
    mask = rng.random((n, n)) < p
    edge_set = {(int(i), int(j)) for i, j in zip(*np.nonzero(mask))}
    while True:
        bad = _template_girth_or_short_cycle_edge(n, edge_set, g)
        if bad is None:
            break
        edge_set.discard(bad)
    return TemplateGraph.build(n, edge_set)


def random_signs(template: TemplateGraph, seed) -> SignAssignment:
    rng = np.random.default_rng(seed)
    flips = rng.integers(0, 2, size=template.edge_count) * 2 - 1
    return SignAssignment({e: int(f) for e, f in zip(template.edges, flips)})


def plus_vertex(i: int) -> int:
    return i


def minus_vertex(i: int, n: int) -> int:
    return n + i


def right_vertex(j: int, n: int) -> int:
    return 2 * n + j


def signed_metric(
    template: TemplateGraph, signs: SignAssignment, params: SignedMetricParams
) -> FiniteMetric:
    """Truncated shortest-path metric of the coin-flip graph on 3n points.

    Vertex layout: plus copies 0..n-1, minus copies n..2n-1, right side
    2n..3n-1.  Distances between different components hit the truncation T.
    """
    n = template.n
    if set(signs.signs.keys()) != set(template.edges):
        raise IndexMismatch("sign assignment must cover exactly the template edges")
    pairs = []
    for (i, j) in template.edges:
        left = plus_vertex(i) if signs.of((i, j)) > 0 else minus_vertex(i, n)
        pairs.append((left, right_vertex(j, n)))
    v = 3 * n
    adj = _adjacency_lists(v, pairs)
    dist = np.full((v, v), np.inf)
    for src in range(v):
        dist[src, src] = 0.0
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for u in adj[x]:
                if dist[src, u] == np.inf:
                    dist[src, u] = dist[src, x] + 1
                    queue.append(u)
    d = np.minimum(params.s * dist, params.T)
    np.fill_diagonal(d, 0.0)
    return build_metric(d)


def min_fork_distance(metric: FiniteMetric, n: int) -> float:
    """min over left vertices of d(lambda+, lambda-) in a signed metric."""
    return float(min(metric.dist[plus_vertex(i), minus_vertex(i, n)] for i in range(n)))


def experiment_harness(
    n: int, g: int, s: float, T: float, trials: int, seed, alpha: float = 1.0
) -> list:
    """Sampled-metric survey rows: geometry plus dimension lower bounds.

    Requires the shape condition g <= T/s so the plus/minus separation
    min(s*g, T) = s*g is in force.  Each row records the template edge
    count and girth, the worst plus/minus distance, and the packing and
    simplex dimension lower bounds of the sampled metric at ``alpha``.
    """
    from .metric import doubling_dim_lower_bound, volumetric_lower_bound

    if g > T / s:
        raise ValueError("need g <= T/s")
    params = SignedMetricParams(s, T)
    rng = np.random.default_rng(seed)
    rows = []
    for trial in range(trials):
        t_seed, s_seed = rng.integers(0, 2**63 - 1, size=2)
        template = gen_template(n, g, t_seed)
        signs = random_signs(template, s_seed)
        metric = signed_metric(template, signs, params)
        rows.append(
            {
                "trial": trial,
                "n": n,
                "g": g,
                "s": s,
                "T": T,
                "edges": template.edge_count,
                "girth": template.girth,
                "min_fork_dist": min_fork_distance(metric, n),
                "doubling_lb": doubling_dim_lower_bound(metric, alpha),
                "volumetric_lb": volumetric_lower_bound(3 * n, alpha),
            }
        )
    return rows
