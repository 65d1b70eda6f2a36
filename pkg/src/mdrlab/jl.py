"""Johnson-Lindenstrauss engine: exact success probabilities and transforms.

For target distortion alpha > 1 and n points, the per-pair success
probability of the rescaled random-rotation transform is

    psi(sigma) = C(n,k) * integral_{max(1, sigma/alpha)}^{max(1, sigma)}
                 (s^2 - 1)^((n-k-3)/2) / s^(n-2) ds,

    C(n,k) = 2 Gamma((n-1)/2) / (Gamma(k/2) Gamma((n-1-k)/2)),

which equals the probability that a Haar-random rotation followed by
projection to the first k coordinates and scaling by sigma maps a unit
vector to length in [1, alpha].  The global maximizer of psi is

    sigma_max(n,k,alpha)
        = sqrt((alpha^((2n-6)/(n-k-3)) - 1) / (alpha^(2k/(n-k-3)) - 1)).

The module computes psi by adaptive quadrature (absolute error 1e-10),
its complement from the Beta law of the radial variable (relatively
accurate down to the 1e-18 failure rates that a billion-point union bound
requires), the optimally rescaled Gaussian alternative, the minimal
dimensions certified by either route, and retrying transforms for
Euclidean point clouds.

Note the normalizing constant C(n,k): the radial density of the projected
point integrates to exactly 1 with it (a Beta integral), and Monte Carlo
agrees; see the ledger for the discrepancy with a commonly printed
prefactor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln
from scipy.stats import beta as beta_dist
from scipy.stats import chi2

from .errors import (
    NoFeasibleK,
    ParameterDomain,
    QuadratureNonConvergence,
    ZeroDistancePair,
)
from .metric import PointCloud

QUAD_ABS_TOL = 1e-12
MODES = ("haar_projection", "scaled_gaussian")


@dataclass(frozen=True)
class ProbabilityEstimate:
    """A probability with its standard error and provenance."""

    value: float
    std_error: float
    method: str

    def __post_init__(self):
        if not (self.value - 3 * self.std_error <= 1 and self.value + 3 * self.std_error >= 0):
            raise ValueError(f"implausible probability estimate {self.value} +- {self.std_error}")


@dataclass(frozen=True)
class JlPlan:
    """A dimension-reduction instance with its success certificate.

    ``success_prob`` is the per-pair probability that one unit direction
    lands in [1, alpha]; ``union_bound`` = 1 - C(n,2)(1 - success_prob)
    lower-bounds the probability that a single draw works for all pairs.
    ``ambient`` is the dimension the rotation acts on: n - 1 whenever the
    requested k permits, padded up to k + 3 otherwise (zero-padding is an
    isometry, so the certificate stays exact).
    """

    n: int
    alpha: float
    k: int
    sigma: float
    mode: str
    success_prob: float
    union_bound: float
    ambient: int

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "n": self.n,
                "alpha": self.alpha,
                "k": self.k,
                "sigma": self.sigma,
                "mode": self.mode,
                "success_prob": self.success_prob,
                "union_bound": self.union_bound,
                "ambient": self.ambient,
            }
        )


@dataclass(frozen=True)
class JlResult:
    """Outcome of a retrying transform."""

    cloud: PointCloud
    plan: JlPlan
    attempts: int
    success: bool
    measured_distortion: float


def sample_haar_orthogonal(m: int, seed) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR with the R-sign correction."""
    if m < 1:
        raise ParameterDomain("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, m))
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def _check_psi_domain(n: int, k: int, alpha: float):
    # psi's integrand stays integrable up to k = n - 3 (exponent 0); only
    # sigma_max needs the stricter k <= n - 4
    if n < 4 or not float(n).is_integer():
        raise ParameterDomain("need integer n >= 4")
    if not 1 <= k <= n - 3:
        raise ParameterDomain(f"need 1 <= k <= n - 3, got k={k}, n={n}")
    if alpha <= 1:
        raise ParameterDomain("alpha must exceed 1")


def _check_sigma_domain(n: int, k: int, alpha: float):
    _check_psi_domain(n, k, alpha)
    if k > n - 4:
        raise ParameterDomain(f"sigma_max needs k <= n - 4, got k={k}, n={n}")


def _psi_log_constant(n: int, k: int) -> float:
    """log of the normalizing constant C(n,k) of the radial success density."""
    return math.log(2.0) + gammaln((n - 1) / 2) - gammaln(k / 2) - gammaln((n - 1 - k) / 2)


def _radial_peak(n: int, k: int) -> float:
    """Stationary point of the integrand (s^2-1)^e s^-(n-2); mass concentrates here."""
    return math.sqrt((n - 2) / (k + 1))


def psi(n: int, k: int, alpha: float, sigma: float) -> ProbabilityEstimate:
    """Per-pair success probability of the sigma-scaled rotation-projection.

    Vanishes for sigma <= 1, increases on [1, alpha], and decays to zero as
    sigma grows; the integrand is evaluated in log space and the quadrature
    is split at the interior stationary point so sharply peaked large-n
    instances converge.
    """
    _check_psi_domain(n, k, alpha)
    if sigma < 0:
        raise ParameterDomain("sigma must be nonnegative")
    lo = max(1.0, sigma / alpha)
    hi = max(1.0, sigma)
    if hi <= lo:
        return ProbabilityEstimate(0.0, 0.0, "quadrature")
    e = (n - k - 3) / 2
    log_c = _psi_log_constant(n, k)

    def integrand(s):
        if s <= 1.0:
            return 0.0
        lead = e * math.log(s * s - 1.0) if e else 0.0
        return math.exp(log_c + lead - (n - 2) * math.log(s))

    points = [p for p in (_radial_peak(n, k),) if lo < p < hi]
    value, err = integrate.quad(
        integrand, lo, hi, points=points or None, epsabs=QUAD_ABS_TOL, epsrel=1e-11, limit=400
    )
    if err > 1e-10:
        raise QuadratureNonConvergence(f"psi quadrature error estimate {err:.2e}")
    return ProbabilityEstimate(min(max(value, 0.0), 1.0), 0.0, "quadrature")


def psi_failure(n: int, k: int, alpha: float, sigma: float) -> float:
    """1 - psi with relative accuracy, as the two tails of the radial law.

    In the radial variable r = 1/s the success event is 1/sigma <= r <=
    alpha/sigma, and r^2 follows a Beta(k/2, (n-1-k)/2) law (the same fact
    that fixes the normalizing constant of psi).  Both tails are therefore
    Beta CDF values, which stay relatively accurate down to the 1e-18 scale
    needed to certify union bounds for a billion points; tests reconcile
    this route against the psi quadrature and Monte Carlo.
    """
    _check_psi_domain(n, k, alpha)
    if sigma <= 1.0:
        return 1.0
    law = beta_dist(k / 2.0, (n - 1 - k) / 2.0)
    r_lo = min(1.0, 1.0 / sigma)
    r_hi = min(1.0, alpha / sigma)
    low = float(law.cdf(r_lo * r_lo))
    high = float(law.sf(r_hi * r_hi)) if r_hi < 1.0 else 0.0
    return min(1.0, low + high)


def psi_monte_carlo(
    n: int, k: int, alpha: float, sigma: float, samples: int, seed, sampler: str = "sphere"
) -> ProbabilityEstimate:
    """Empirical frequency of 1 <= sigma * ||proj_k(O z)|| <= alpha.

    ``sampler="sphere"`` draws the image of the fixed unit vector directly as
    a uniform point on the sphere (the exact distribution of O z), which is
    what makes 1e6-sample runs cheap; ``sampler="haar"`` multiplies out
    explicit Haar matrices and is used to cross-check the shortcut.
    """
    _check_psi_domain(n, k, alpha)
    rng = np.random.default_rng(seed)
    if sampler == "sphere":
        hits = 0
        remaining = samples
        while remaining > 0:
            chunk = min(remaining, 200_000)
            w = rng.standard_normal((chunk, n - 1))
            r = np.linalg.norm(w[:, :k], axis=1) / np.linalg.norm(w, axis=1)
            hits += int(((sigma * r >= 1.0) & (sigma * r <= alpha)).sum())
            remaining -= chunk
    elif sampler == "haar":
        z = np.zeros(n - 1)
        z[0] = 1.0
        hits = 0
        for _ in range(samples):
            o = sample_haar_orthogonal(n - 1, rng)
            r = sigma * np.linalg.norm((o @ z)[:k])
            hits += bool(1.0 <= r <= alpha)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    p = hits / samples
    se = math.sqrt(max(p * (1 - p), 1.0 / samples) / samples)
    return ProbabilityEstimate(p, se, f"monte_carlo({samples})")


def _log_expm1(x: float) -> float:
    if x > 300:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def sigma_max(n: int, k: int, alpha: float) -> float:
    """Maximizer of psi over the scaling factor, in log space.

    Equals sqrt((alpha^((2n-6)/(n-k-3)) - 1) / (alpha^(2k/(n-k-3)) - 1)); an
    OverflowError is raised (never a silent saturation) if the value exceeds
    double range.  The maximizer diverges at k = n - 3, so that boundary is
    outside the domain.
    """
    _check_sigma_domain(n, k, alpha)
    la = math.log(alpha)
    a = (2 * n - 6) / (n - k - 3) * la
    b = 2 * k / (n - k - 3) * la
    log_sigma = (_log_expm1(a) - _log_expm1(b)) / 2
    if log_sigma > math.log(np.finfo(float).max):
        raise OverflowError(f"sigma_max exponent {log_sigma:.3e} exceeds double range")
    return math.exp(log_sigma)


def union_threshold(n: int) -> float:
    """Per-pair failure budget 2/(n(n-1)) of the pairwise union bound."""
    return 2.0 / (n * (n - 1.0))


def jl_min_dim_projection(n: int, alpha: float) -> int:
    """Smallest k whose rotation-projection certificate beats the union bound.

    psi(sigma_max) improves rapidly in k at the low end but degrades again
    as k approaches n - 3 (sigma_max collapses onto alpha there), so the
    search first doubles k until a certified dimension appears, bisects the
    bracket, and finally re-scans the boundary downward so a locally
    non-monotone pair cannot produce a non-minimal answer.  If no doubling
    step certifies, a bounded linear scan is attempted; failing that the
    trivial k = n - 1 is returned under a NoFeasibleK warning.
    """
    if n < 5:
        raise ParameterDomain("need n >= 5")
    if alpha <= 1:
        raise ParameterDomain("alpha must exceed 1")
    budget = union_threshold(n)

    def feasible(k: int) -> bool:
        return psi_failure(n, k, alpha, sigma_max(n, k, alpha)) < budget

    k_max = n - 4
    hi = None
    probe = 1
    while probe < k_max:
        if feasible(probe):
            hi = probe
            break
        probe *= 2
    if hi is None and feasible(k_max):
        hi = k_max
    if hi is None:
        if k_max <= 4096:  # small instances: the window may evade doubling
            for k in range(1, k_max + 1):
                if feasible(k):
                    hi = k
                    break
        if hi is None:
            warnings.warn(
                f"no k <= {k_max} is certified; returning the trivial n - 1", NoFeasibleK
            )
            return n - 1
    lo = hi // 2  # last infeasible doubling probe (0 acts as a sentinel)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    # monotonicity guard: walk down past any locally non-monotone pair
    while hi > 1 and feasible(hi - 1):
        hi -= 1
    return hi


def gaussian_sigma(k: int, alpha: float) -> float:
    """Optimal scaling of an i.i.d. Gaussian matrix: sqrt((alpha^2-1)/(2k log alpha))."""
    if k < 1:
        raise ParameterDomain("k must be >= 1")
    if alpha <= 1:
        raise ParameterDomain("alpha must exceed 1")
    return math.sqrt((alpha**2 - 1.0) / (2.0 * k * math.log(alpha)))


def _gaussian_failure_quad(k: int, alpha: float) -> float:
    log_pref = math.log(2.0) + (k / 2) * math.log(k) - gammaln(k / 2)

    def integrand(b):
        lem = _log_expm1(2.0 * b)
        t = b * math.exp(-lem)
        return math.exp(log_pref + (k / 2) * (math.log(b) - lem) - k * t)

    val, err = integrate.quad(
        integrand, math.log(alpha), np.inf, epsabs=1e-13, epsrel=1e-11, limit=400
    )
    if err > 1e-10 * max(val, 1e-30) and err > 1e-12:
        raise QuadratureNonConvergence(f"gaussian tail quadrature error {err:.2e}")
    return val


def _gaussian_failure_chi2(k: int, alpha: float) -> float:
    la = math.log(alpha)
    lo = 2.0 * k * la / (alpha**2 - 1.0)
    return float(chi2.cdf(lo, k) + chi2.sf(alpha**2 * lo, k))


def gaussian_failure(k: int, alpha: float) -> float:
    """Failure probability of the rescaled Gaussian, quadrature cross-checked
    against the chi-square CDF form (the two must agree to 1e-9)."""
    if k < 1:
        raise ParameterDomain("k must be >= 1")
    if alpha <= 1:
        raise ParameterDomain("alpha must exceed 1")
    fail = _gaussian_failure_quad(k, alpha)
    cdf = _gaussian_failure_chi2(k, alpha)
    if abs(fail - cdf) > 1e-9:
        raise QuadratureNonConvergence(
            f"quadrature/chi-square disagreement {abs(fail - cdf):.2e} at k={k}, alpha={alpha}"
        )
    return fail


def gaussian_success_prob(k: int, alpha: float) -> ProbabilityEstimate:
    """P(1 <= ||G_k^alpha z|| <= alpha) for the optimally rescaled Gaussian.

    Evaluated as 1 minus the single-integral form of the failure probability;
    the squared image length is a multiple of a chi-square with k degrees of
    freedom, and the equivalent CDF difference must agree to 1e-9 or the
    quadrature is rejected.
    """
    fail = gaussian_failure(k, alpha)
    return ProbabilityEstimate(min(1.0, max(0.0, 1.0 - fail)), 0.0, "quadrature")


def gaussian_success_monte_carlo(k: int, alpha: float, samples: int, seed) -> ProbabilityEstimate:
    """Empirical frequency of 1 <= ||G_k^alpha z|| <= alpha over Gaussian draws."""
    rng = np.random.default_rng(seed)
    s = gaussian_sigma(k, alpha)
    hits = 0
    remaining = samples
    while remaining > 0:
        chunk = min(remaining, 500_000)
        g = rng.standard_normal((chunk, k))
        r = s * np.linalg.norm(g, axis=1)
        hits += int(((r >= 1.0) & (r <= alpha)).sum())
        remaining -= chunk
    p = hits / samples
    se = math.sqrt(max(p * (1 - p), 1.0 / samples) / samples)
    return ProbabilityEstimate(p, se, f"monte_carlo({samples})")


def jl_min_dim_gaussian(n: int, alpha: float, k_cap: int = 10**6) -> int:
    """Smallest k certified by the closed-form Gaussian tail estimate.

    The condition, entirely in log space so n up to 1e12 is routine, is

        Gamma(k/2)/k^(k/2-1) * ((alpha^2-1)/log(alpha) * alpha^(2/(alpha^2-1)))^(k/2)
            >= 2 n^2 (alpha^2-1)^2 log(alpha) / D(alpha),

    with D(alpha) = 2a^4 log a + 2a^2 - a^4 - 4a^2 (log a)^2 - 2 log a - 1
    evaluated at a = alpha.  D must be positive for the estimate to apply;
    callers hitting the error should fall back to gaussian_success_prob with
    the union bound.
    """
    if n < 2:
        raise ParameterDomain("need n >= 2")
    if alpha <= 1:
        raise ParameterDomain("alpha must exceed 1")
    a = float(alpha)
    la = math.log(a)
    denom = 2 * a**4 * la + 2 * a**2 - a**4 - 4 * a**2 * la**2 - 2 * la - 1
    if denom <= 0:
        raise ParameterDomain(
            f"tail-estimate denominator nonpositive at alpha={alpha}; use the quadrature route"
        )
    log_rhs = math.log(2.0) + 2 * math.log(n) + 2 * math.log(a**2 - 1) + math.log(la) - math.log(denom)
    log_ratio = math.log((a**2 - 1) / la) + 2 * la / (a**2 - 1)
    for k in range(1, k_cap + 1):
        log_lhs = gammaln(k / 2) - (k / 2 - 1) * math.log(k) + (k / 2) * log_ratio
        if log_lhs >= log_rhs:
            return k
    raise ParameterDomain(f"no feasible k below the cap {k_cap}")


def make_plan(n: int, alpha: float, mode: str, k: int | None = None) -> JlPlan:
    """Assemble the (k, sigma, certificate) tuple for either transform mode.

    In haar mode the rotation acts on dimension n - 1 when k <= n - 4;
    otherwise the points are zero-padded into dimension k + 3 so the success
    probability stays well-defined (padding is isometric, and enlarging the
    ambient dimension only weakens the certificate, never the verification).
    """
    if mode not in MODES:
        raise ParameterDomain(f"mode must be one of {MODES}")
    if mode == "haar_projection":
        if k is None:
            k = jl_min_dim_projection(n, alpha)
            if k > n - 4:  # trivial-dimension fallback; certificate degenerates
                k = n - 1
        ambient = max(n - 1, k + 3)
        sig = sigma_max(ambient + 1, k, alpha)
        failure = psi_failure(ambient + 1, k, alpha, sig)
    else:
        if k is None:
            k = jl_min_dim_gaussian(n, alpha)
        ambient = n - 1
        sig = gaussian_sigma(k, alpha)
        failure = gaussian_failure(k, alpha)
    pairs = n * (n - 1) / 2.0
    return JlPlan(
        n=n,
        alpha=float(alpha),
        k=int(k),
        sigma=float(sig),
        mode=mode,
        success_prob=1.0 - failure,
        union_bound=1.0 - pairs * failure,
        ambient=int(ambient),
    )


def _isometrize(coords: np.ndarray, ambient: int) -> np.ndarray:
    """Isometric copy of the points inside R^ambient (differences preserved)."""
    n = coords.shape[0]
    x = coords - coords[0]
    if x.shape[1] > n - 1:
        # express the differences from point 0 in an orthonormal basis of
        # their span; the R factor carries exactly the pairwise geometry
        _, r = np.linalg.qr(x[1:].T, mode="reduced")  # x[1:].T is dim x (n-1)
        x = np.vstack([np.zeros((1, r.shape[0])), r.T])
    if x.shape[1] < ambient:
        x = np.hstack([x, np.zeros((n, ambient - x.shape[1]))])
    elif x.shape[1] > ambient:
        raise ParameterDomain(f"cannot isometrize rank {x.shape[1]} points into R^{ambient}")
    return x


def jl_transform(
    cloud: PointCloud,
    alpha: float,
    mode: str = "haar_projection",
    seed=0,
    max_retries: int = 64,
    k: int | None = None,
) -> JlResult:
    """Random dimension reduction with verification and redraws.

    Applies y_i = sigma_max * proj_k(O x_i) (haar mode) or the rescaled
    Gaussian matrix, checks 1 <= ||y_i - y_j|| / ||x_i - x_j|| <= alpha for
    all pairs, and redraws on failure.  When retries run out the best
    attempt (smallest max/min ratio) is returned with ``success=False``.
    """
    if cloud.norm != "l2":
        raise ParameterDomain("transform requires an l2 point cloud")
    n = cloud.n
    if n < 2:
        raise ParameterDomain("need at least two points")
    iu = np.triu_indices(n, 1)
    src = cloud.pairwise()[iu]
    if src.min() <= 0.0:
        raise ZeroDistancePair("coincident points cannot satisfy the lower distortion bound")
    plan = make_plan(n, alpha, mode, k)
    x = _isometrize(cloud.coords, plan.ambient)
    rng = np.random.default_rng(seed)
    best_y = None
    best_alpha = np.inf
    for attempt in range(1, max_retries + 1):
        if mode == "haar_projection":
            o = sample_haar_orthogonal(plan.ambient, rng)
            y = plan.sigma * (x @ o.T)[:, : plan.k]
        else:
            g = rng.standard_normal((plan.k, plan.ambient))
            y = plan.sigma * (x @ g.T)
        img = np.sqrt(((y[iu[0]] - y[iu[1]]) ** 2).sum(axis=1))
        ratios = img / src
        if ratios.min() >= 1.0 and ratios.max() <= alpha:
            return JlResult(
                cloud=PointCloud(y, "l2"),
                plan=plan,
                attempts=attempt,
                success=True,
                measured_distortion=float(ratios.max() / ratios.min()),
            )
        measured = float(ratios.max() / ratios.min())
        if measured < best_alpha:
            best_alpha = measured
            best_y = y
    return JlResult(
        cloud=PointCloud(best_y, "l2"),
        plan=plan,
        attempts=max_retries,
        success=False,
        measured_distortion=best_alpha,
    )
