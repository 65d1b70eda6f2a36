"""Finite metric spaces, point clouds, distortion, and classical embeddings.

The two carrier types are :class:`FiniteMetric` (a validated distance
matrix) and :class:`PointCloud` (points in a finite-dimensional normed
space).  On top of them sit distortion measurement, the isometric
coordinate embedding into l-infinity, the randomized log-squared
Euclidean embedding, snowflaking, doubling constants, and the packing /
volumetric dimension lower bounds.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    ConfigTooLarge,
    DegenerateSource,
    IndexMismatch,
    NonInjectiveMap,
    NonzeroDiagonal,
    SymmetryViolation,
    ThetaOutOfRange,
    TooLargeForExact,
    TriangleViolation,
)

# Relative floating-point slack for triangle-inequality validation.  Entrywise
# powers and l-infinity images of valid metrics must re-validate in doubles.
TRIANGLE_RTOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FiniteMetric:
    """An n-point metric space given by its distance matrix.

    Instances are produced by :func:`build_metric`, which enforces symmetry,
    a zero diagonal, positive off-diagonal entries, and the triangle
    inequality up to ``TRIANGLE_RTOL`` times the largest entry.
    """

    dist: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "dist": self.dist.tolist()})

    @staticmethod
    def from_json(text: str) -> "FiniteMetric":
        obj = json.loads(text)
        return build_metric(np.asarray(obj["dist"], dtype=float))


NORM_TAGS = ("l2", "l1", "linf", "lp")


@dataclass(frozen=True)
class PointCloud:
    """n points in a k-dimensional normed space.

    ``norm`` is one of ``"l2"``, ``"l1"``, ``"linf"`` or ``"lp"``; the
    latter requires the exponent ``p >= 1``.
    """

    coords: np.ndarray
    norm: str = "l2"
    p: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", _frozen(np.atleast_2d(self.coords)))
        if self.norm not in NORM_TAGS:
            raise ValueError(f"unknown norm tag {self.norm!r}")
        if self.norm == "lp":
            if self.p is None or self.p < 1:
                raise ValueError("lp norm requires exponent p >= 1")

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def pairwise(self) -> np.ndarray:
        """Pairwise distance matrix under the cloud's norm."""
        x = self.coords
        if self.norm == "l2":
            d = cdist(x, x, "euclidean")
        elif self.norm == "l1":
            d = cdist(x, x, "cityblock")
        elif self.norm == "linf":
            d = cdist(x, x, "chebyshev")
        else:
            d = cdist(x, x, "minkowski", p=self.p)
        d = (d + d.T) / 2
        np.fill_diagonal(d, 0.0)
        return d

    def to_metric(self) -> FiniteMetric:
        """Induced finite metric; raises if two points coincide."""
        return build_metric(self.pairwise())

    def norm_of(self, v: np.ndarray) -> float:
        """The cloud's norm applied to a single vector."""
        if self.norm == "l2":
            return float(np.linalg.norm(v))
        if self.norm == "l1":
            return float(np.abs(v).sum())
        if self.norm == "linf":
            return float(np.abs(v).max())
        return float((np.abs(v) ** self.p).sum() ** (1.0 / self.p))

    def to_json(self) -> str:
        norm = {"lp": self.p} if self.norm == "lp" else self.norm
        return json.dumps(
            {"n": self.n, "dim": self.dim, "norm": norm, "coords": self.coords.tolist()}
        )

    @staticmethod
    def from_json(text: str) -> "PointCloud":
        obj = json.loads(text)
        norm = obj["norm"]
        if isinstance(norm, dict):
            return PointCloud(np.asarray(obj["coords"], float), "lp", p=float(norm["lp"]))
        return PointCloud(np.asarray(obj["coords"], float), norm)


@dataclass(frozen=True)
class EmbeddingReport:
    """Distortion report for an index map between two finite metrics.

    ``distortion = expansion / contraction`` is the bi-Lipschitz constant
    after optimal rescaling; ``scale`` is the contraction (the valid scaling
    factor); ``avg_ratio`` is the ratio of summed pairwise distances.
    """

    distortion: float
    scale: float
    expansion: float
    contraction: float
    avg_ratio: float


def build_metric(dist: np.ndarray) -> FiniteMetric:
    """Validate a square distance matrix and wrap it as a FiniteMetric."""
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("distance matrix has non-finite entries")
    n = d.shape[0]
    asym = np.abs(d - d.T).max() if n else 0.0
    if asym > 0:
        raise SymmetryViolation(f"matrix asymmetric by {asym:.3e}")
    if np.abs(np.diag(d)).max(initial=0.0) != 0.0:
        raise NonzeroDiagonal("diagonal entries must be exactly zero")
    if n > 1:
        off = d[~np.eye(n, dtype=bool)]
        if off.min() <= 0.0:
            raise ValueError("off-diagonal distances must be strictly positive")
    tol = TRIANGLE_RTOL * d.max(initial=0.0)
    # d[i,k] <= d[i,j] + d[j,k] for every ordered triple, checked per pivot j.
    for j in range(n):
        slack = d - (d[:, j][:, None] + d[j, :][None, :])
        i, k = np.unravel_index(np.argmax(slack), slack.shape)
        if slack[i, k] > tol:
            raise TriangleViolation((i, j, k), slack[i, k])
    return FiniteMetric(_frozen(d))


def random_metric(n: int, seed, style: str = "shortest_path") -> FiniteMetric:
    """Random valid n-point metric for tests and property suites.

    ``style="box"`` draws entries uniformly from [1, 2] (any such matrix is a
    metric); ``style="shortest_path"`` takes the shortest-path closure of
    uniform random weights, which produces much less homogeneous spaces.
    """
    rng = np.random.default_rng(seed)
    if style == "box":
        w = rng.uniform(1.0, 2.0, (n, n))
        d = (w + w.T) / 2
        np.fill_diagonal(d, 0.0)
        return build_metric(d)
    if style == "shortest_path":
        w = rng.uniform(0.1, 1.0, (n, n))
        d = (w + w.T) / 2
        np.fill_diagonal(d, 0.0)
        for k in range(n):
            d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
        return build_metric(d)
    raise ValueError(f"unknown style {style!r}")


def distortion(source: FiniteMetric, target: FiniteMetric, mapping) -> EmbeddingReport:
    """Bi-Lipschitz distortion of the index map i -> mapping[i].

    The report contains the max/min of the distance ratios
    d_target(f i, f j) / d_source(i, j) over pairs, their quotient (the
    distortion), and the average-distance ratio.
    """
    idx = np.asarray(mapping, dtype=int)
    if source.n < 2:
        raise DegenerateSource("need at least two source points")
    if idx.shape != (source.n,):
        raise NonInjectiveMap(f"map must assign all {source.n} source indices")
    if len(np.unique(idx)) != source.n:
        raise NonInjectiveMap("map is not injective")
    if idx.min() < 0 or idx.max() >= target.n:
        raise NonInjectiveMap("map leaves the target index range")
    iu = np.triu_indices(source.n, 1)
    ds = source.dist[iu]
    dt = target.dist[idx, :][:, idx][iu]
    ratios = dt / ds
    contraction = float(ratios.min())
    expansion = float(ratios.max())
    return EmbeddingReport(
        distortion=expansion / contraction,
        scale=contraction,
        expansion=expansion,
        contraction=contraction,
        avg_ratio=float(dt.sum() / ds.sum()),
    )


def frechet_embed(m: FiniteMetric) -> PointCloud:
    """Isometric coordinate embedding x -> (d(x, x_1), ..., d(x, x_n)) into l-infinity."""
    return PointCloud(m.dist.copy(), "linf")


def bourgain_embed(m: FiniteMetric, seed) -> PointCloud:
    """Randomized Euclidean embedding from distances to random subsets.

    Coordinates are d(x, S) for subsets S sampled with density 2^-j at scales
    j = 1..ceil(log2 n), ceil(24 log2 n) subsets per scale, normalized by the
    square root of the number of coordinates so the map is 1-Lipschitz.  The
    measured distortion is O(log n) with overwhelming probability.
    """
    n = m.n
    if n < 2:
        raise DegenerateSource("need at least two points")
    rng = np.random.default_rng(seed)
    scales = int(math.ceil(math.log2(n)))
    per_scale = max(1, int(math.ceil(24 * math.log2(n))))
    cols = []
    for j in range(1, scales + 1):
        density = 2.0 ** (-j)
        for _ in range(per_scale):
            mask = rng.random(n) < density
            if mask.any():
                cols.append(m.dist[:, mask].min(axis=1))
            else:
                cols.append(np.zeros(n))
    coords = np.stack(cols, axis=1) / math.sqrt(len(cols))
    return PointCloud(coords, "l2")


def snowflake(m: FiniteMetric, theta: float) -> FiniteMetric:
    """Entrywise power d^theta; a metric again for every theta in (0, 1]."""
    if not 0.0 < theta <= 1.0:
        raise ThetaOutOfRange(f"theta must lie in (0, 1], got {theta}")
    return build_metric(m.dist ** theta)


def _min_cover(target_mask: int, ball_masks: list[int], n: int) -> int:
    """Exact minimum number of ball_masks whose union covers target_mask."""
    useful = [b & target_mask for b in ball_masks]
    useful = [b for b in set(useful) if b]
    # drop sets contained in others
    useful.sort(key=lambda b: -bin(b).count("1"))
    kept: list[int] = []
    for b in useful:
        if not any(b & ~c == 0 for c in kept):
            kept.append(b)
    best = {0: 0}
    frontier = {0}
    count = 0
    while frontier:
        count += 1
        nxt = set()
        for mask in frontier:
            for b in kept:
                new = mask | b
                if new == target_mask:
                    return count
                if new not in best:
                    best[new] = count
                    nxt.add(new)
        frontier = nxt
        if count > n:
            break
    return len(kept) if target_mask else 0


def doubling_constant(m: FiniteMetric, mode: str = "exact") -> int:
    """Least K such that every ball is covered by K balls of half its radius.

    Only radii equal to pairwise distances matter: within each interval
    between consecutive distances from the center the target ball is constant
    while the half-radius balls only grow, so the left endpoint is the worst
    case.  ``mode="exact"`` solves each set cover exactly (n <= 16);
    ``mode="greedy"`` returns the greedy upper bound.
    """
    n = m.n
    if n == 1:
        return 1
    if mode == "exact" and n > 16:
        raise TooLargeForExact("exact set cover restricted to n <= 16")
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    d = m.dist
    K = 1
    for x in range(n):
        for r in sorted(set(d[x])):
            if r <= 0:
                continue
            target = np.flatnonzero(d[x] <= r)
            halves = [np.flatnonzero(d[y] <= r / 2) for y in range(n)]
            if mode == "exact":
                tmask = 0
                for i in target:
                    tmask |= 1 << int(i)
                masks = []
                for h in halves:
                    hm = 0
                    for i in h:
                        hm |= 1 << int(i)
                    masks.append(hm)
                K = max(K, _min_cover(tmask, masks, n))
            else:
                uncovered = set(target.tolist())
                used = 0
                sets = [set(h.tolist()) for h in halves]
                while uncovered:
                    gain, pick = max(
                        ((len(uncovered & s), idx) for idx, s in enumerate(sets)),
                        key=lambda t: (t[0], -t[1]),
                    )
                    if gain == 0:
                        raise RuntimeError("cover stalled; metric invariants violated")
                    uncovered -= sets[pick]
                    used += 1
                K = max(K, used)
    return K


def doubling_dim_lower_bound(m: FiniteMetric, alpha: float) -> float:
    """Packing-based dimension lower bound for distortion-alpha embeddings.

    Any N points inside a ball of radius 2r at pairwise distances >= r map,
    under a distortion-alpha embedding into a k-dimensional normed space, to
    a configuration that forces N <= (4 alpha + 1)^k.  Inverting gives
    k >= log N / log(4 alpha + 1); the best bound over all centers and radii
    is returned (greedy maximal packings are valid witnesses).
    """
    if m.n < 2:
        raise DegenerateSource("need at least two points")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    d = m.dist
    n = m.n
    radii = sorted({v for v in d.flat if v > 0} | {v / 2 for v in d.flat if v > 0})
    denom = math.log(4 * alpha + 1)
    best = 0.0
    for x in range(n):
        for r in radii:
            ball = np.flatnonzero(d[x] <= 2 * r)
            chosen: list[int] = []
            for y in ball:
                if all(d[y, z] >= r for z in chosen):
                    chosen.append(int(y))
            if len(chosen) > 1:
                best = max(best, math.log(len(chosen)) / denom)
    return best


def volumetric_lower_bound(n: int, alpha: float) -> float:
    """Simplex-packing bound: any distortion-alpha realization of n equidistant
    points in a k-dimensional normed space needs k >= log(n)/log(alpha + 1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    return math.log(n) / math.log(alpha + 1.0)


def metric_cotype_ratio(m: FiniteMetric, assignment: np.ndarray, q: float, mm: int, n: int):
    """Both sides of the discrete-torus quadratic inequality, as raw numbers.

    ``assignment`` has shape (2m,)*n and holds point indices of ``m``; the
    left side sums d(x_{w + m e_i}, x_w)^2 / m^2 over axes i and torus points
    w, the right side averages d(x_{w + eps}, x_w)^2 over the 3^n sign
    perturbations with the n^(1 - 2/q) prefactor.  The hidden constant of the
    inequality is not materialized, so this is a reporter, not a verdict.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    side = 2 * mm
    if side ** n > 4096:
        raise ConfigTooLarge(f"(2m)^n = {side ** n} exceeds the enumeration cap")
    a = np.asarray(assignment, dtype=int)
    if a.shape != (side,) * n:
        raise IndexMismatch(f"assignment shape {a.shape} != {(side,) * n}")
    if a.min() < 0 or a.max() >= m.n:
        raise IndexMismatch("assignment indexes outside the metric")
    d2 = m.dist ** 2
    lhs = 0.0
    for i in range(n):
        shifted = np.roll(a, -mm, axis=i)
        lhs += (d2[shifted, a]).sum() / mm ** 2
    rhs = 0.0
    for eps in itertools.product((-1, 0, 1), repeat=n):
        shifted = a
        for axis, e in enumerate(eps):
            if e:
                shifted = np.roll(shifted, -e, axis=axis)
        rhs += (d2[shifted, a]).sum()
    rhs *= n ** (1.0 - 2.0 / q) / 3.0 ** n
    return float(lhs), float(rhs)
