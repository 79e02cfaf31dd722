"""Uniform sampling of principal minors and the Monte Carlo mean estimators.

The estimators are the q-sample means

    S_Y = (1/q) sum_i log det A_i,     S_h = (1/q) sum_i h(A_i),

with each ``A_i`` a uniformly random principal k-by-k submatrix. Since the
Gaussian entropy is affine in the log-determinant, ``S_h`` is computed from
``S_Y`` rather than averaged separately.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator, Literal, Optional

import numpy as np
from numpy.typing import NDArray

from . import bounds as _bounds
from . import rng as _rng
from .errors import (
    BadArguments,
    EmptyDistribution,
    KappaHatTooSmall,
    KTooLarge,
    NegativeR,
    UsageError,
)
from .linalg import IndexSet, SpdMatrix, entropy_from_logdet, log_det_batch, principal_submatrices

__all__ = [
    "SamplePlan",
    "LogMinorDistribution",
    "EstimateReport",
    "Histogram",
    "sample_index_set",
    "sample_index_array",
    "sample_logminors",
    "estimate_mean_entropy",
    "resolve_kappa_hat",
    "empirical_tail",
    "histogram",
]

# relative slack when comparing a caller's kappa_hat to the computed kappa
KAPPA_HAT_RTOL = 1e-9
# Upper limit on floats held by one chunk's submatrix stack.
_CHUNK_FLOATS = 1 << 22


@dataclass(frozen=True)
class SamplePlan:
    k: int
    q: int
    seed: int = _rng.DEFAULT_SEED
    with_replacement: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise UsageError(f"k must be at least 1, got {self.k}")
        if self.q < 1:
            raise UsageError(f"q must be at least 1, got {self.q}")

    def check(self, n: int) -> None:
        if self.k > n:
            raise KTooLarge(f"k={self.k} exceeds n={n}")


@dataclass
class LogMinorDistribution:
    """Empirical or exact distribution of the log-minor of size k."""

    values: NDArray[np.float64]
    weights: NDArray[np.float64]
    kind: Literal["empirical", "exact"]
    k: int
    n: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.values.shape != self.weights.shape:
            raise BadArguments("values and weights differ in length")
        if not np.all(np.isfinite(self.values)):
            raise BadArguments("log-minor values must be finite")

    @classmethod
    def uniform(cls, values, kind, k, n) -> "LogMinorDistribution":
        values = np.asarray(values, dtype=float)
        size = len(values)
        return cls(values, np.full(size, 1.0 / size) if size else np.empty(0), kind, k, n)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_uniform(self) -> bool:
        return len(self) > 0 and bool(np.all(self.weights == self.weights[0]))

    @property
    def mean(self) -> float:
        if len(self) == 0:
            raise EmptyDistribution("distribution has no values")
        if self.is_uniform:
            return math.fsum(self.values) / len(self)
        return math.fsum(self.values * self.weights) / math.fsum(self.weights)

    @property
    def variance(self) -> float:
        """Population variance (two-pass, compensated sums)."""
        mu = self.mean
        dev2 = (self.values - mu) ** 2
        if self.is_uniform:
            return math.fsum(dev2) / len(self)
        return math.fsum(dev2 * self.weights) / math.fsum(self.weights)

    @property
    def min(self) -> float:
        return float(np.min(self.values))

    @property
    def max(self) -> float:
        return float(np.max(self.values))


@dataclass
class EstimateReport:
    n: int
    k: int
    q: int
    seed: int
    mean_logminor: float
    mean_entropy: float
    sample_std: float
    kappa: float
    kappa_hat: float
    kappa_hat_source: str
    ell: float
    diagonal: bool
    se_bounds: dict = field(default_factory=dict)
    cv_bounds: Optional[dict] = None
    spectrum_straddles_one: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def sample_index_set(n: int, k: int, gen: np.random.Generator) -> IndexSet:
    """One uniformly random k-subset of ``range(n)`` by partial Fisher-Yates."""
    if not 1 <= k <= n:
        raise KTooLarge(f"need 1 <= k <= n, got k={k}, n={n}")
    perm = list(range(n))
    for j in range(k):
        r = int(gen.integers(j, n))
        perm[j], perm[r] = perm[r], perm[j]
    return IndexSet.of(perm[:k])


def sample_index_array(n: int, k: int, size: int, gen: np.random.Generator) -> NDArray[np.intp]:
    """``size`` independent uniform k-subsets as rows of a sorted ``(size, k)`` array.

    Vectorized partial Fisher-Yates: step j swaps position j with a uniform
    position in ``[j, n)`` in every row at once.
    """
    if not 1 <= k <= n:
        raise KTooLarge(f"need 1 <= k <= n, got k={k}, n={n}")
    perm = np.tile(np.arange(n, dtype=np.intp), (size, 1))
    rows = np.arange(size)
    for j in range(min(k, n - 1)):
        r = gen.integers(j, n, size=size)
        pj = perm[rows, j].copy()
        perm[rows, j] = perm[rows, r]
        perm[rows, r] = pj
    return np.sort(perm[:, :k], axis=1)


def _chunk_size(k: int) -> int:
    return max(1, min(8192, _CHUNK_FLOATS // (k * k)))


def _sample_chunk(m: SpdMatrix, k: int, size: int, seed: int, index: int) -> NDArray[np.float64]:
    gen = _rng.stream(seed, "sample", index)
    idx = sample_index_array(m.n, k, size, gen)
    return log_det_batch(principal_submatrices(m, idx))


def _distinct_index_sets(n: int, k: int, q: int, seed: int) -> NDArray[np.intp]:
    if q > math.comb(n, k):
        raise BadArguments(f"cannot draw {q} distinct subsets out of C({n},{k})")
    gen = _rng.stream(seed, "sample-distinct")
    seen: set[tuple[int, ...]] = set()
    out = []
    while len(out) < q:
        s = sample_index_set(n, k, gen).indices
        if s not in seen:
            seen.add(s)
            out.append(s)
    return np.array(out, dtype=np.intp)


def sample_logminors(m: SpdMatrix, plan: SamplePlan, *, workers: int = 1) -> LogMinorDistribution:
    """Draw ``plan.q`` log-minors of size ``plan.k`` uniformly at random.

    Draws are split into fixed-size chunks, each with its own derived random
    stream, so the result does not depend on ``workers``.
    """
    plan.check(m.n)
    k, q = plan.k, plan.q
    if not plan.with_replacement:
        idx = _distinct_index_sets(m.n, k, q, plan.seed)
        values = np.concatenate(
            [log_det_batch(principal_submatrices(m, idx[i : i + _chunk_size(k)]))
             for i in range(0, q, _chunk_size(k))]
        )
        return LogMinorDistribution.uniform(values, "empirical", k, m.n)

    size = _chunk_size(k)
    jobs = [(min(size, q - start), i) for i, start in enumerate(range(0, q, size))]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _sample_chunk(m, k, job[0], plan.seed, job[1]), jobs))
    else:
        parts = [_sample_chunk(m, k, s, plan.seed, i) for s, i in jobs]
    return LogMinorDistribution.uniform(np.concatenate(parts), "empirical", k, m.n)


def resolve_kappa_hat(m: SpdMatrix, kappa_hat: Optional[float]) -> tuple[float, str]:
    """Return ``(kappa_hat, source)``; source is "given" or "computed"."""
    kappa = m.condition_number
    if kappa_hat is None:
        return kappa, "computed"
    if kappa_hat < kappa * (1.0 - KAPPA_HAT_RTOL):
        raise KappaHatTooSmall(
            f"kappa_hat={kappa_hat} is below the condition number {kappa:.12g}; "
            "the bounds would not hold"
        )
    return float(kappa_hat), "given"


def estimate_mean_entropy(
    m: SpdMatrix,
    plan: SamplePlan,
    kappa_hat: Optional[float] = None,
    *,
    workers: int = 1,
) -> EstimateReport:
    """Estimate the mean log-minor and mean subsystem entropy with error bounds attached."""
    kappa_hat, source = resolve_kappa_hat(m, kappa_hat)
    dist = sample_logminors(m, plan, workers=workers)
    s_y = dist.mean
    spectrum = m.spectrum
    ctx = _bounds.BoundContext(
        n=m.n, k=plan.k, kappa_hat=kappa_hat, diagonal=m.is_diagonal, ell_of_m=spectrum.ell, q=plan.q
    )
    se = _bounds.se_bounds(ctx)
    cv = _bounds.cv_bounds(ctx).as_dict() if spectrum.ell > 0 else None
    return EstimateReport(
        n=m.n,
        k=plan.k,
        q=plan.q,
        seed=plan.seed,
        mean_logminor=s_y,
        mean_entropy=entropy_from_logdet(s_y, plan.k),
        sample_std=math.sqrt(dist.variance),
        kappa=spectrum.condition_number,
        kappa_hat=kappa_hat,
        kappa_hat_source=source,
        ell=spectrum.ell,
        diagonal=m.is_diagonal,
        se_bounds=se.as_dict(),
        cv_bounds=cv,
        spectrum_straddles_one=spectrum.straddles_one,
    )


def empirical_tail(dist: LogMinorDistribution, r: float, mean: Optional[float] = None) -> float:
    """Probability mass with ``|value - mean| >= r``.

    ``mean`` defaults to the distribution's own weighted mean.
    """
    if r < 0:
        raise NegativeR(f"r must be non-negative, got {r}")
    if len(dist) == 0:
        raise EmptyDistribution("distribution has no values")
    mu = dist.mean if mean is None else mean
    hit = np.abs(dist.values - mu) >= r
    if dist.is_uniform:
        return np.count_nonzero(hit) / len(dist)
    return math.fsum(dist.weights[hit]) / math.fsum(dist.weights)


@dataclass
class Histogram:
    centers: NDArray[np.float64]
    densities: NDArray[np.float64]
    width: float

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(zip(self.centers.tolist(), self.densities.tolist()))

    def __len__(self) -> int:
        return len(self.centers)


def histogram(dist: LogMinorDistribution, bins: int = 60) -> Histogram:
    """Equal-width density histogram over ``[min, max]`` of the values.

    A degenerate range is widened to ``1e-9`` centred on the single value.
    """
    if bins < 1:
        raise UsageError(f"bins must be positive, got {bins}")
    if len(dist) == 0:
        raise EmptyDistribution("distribution has no values")
    lo, hi = dist.min, dist.max
    if hi - lo <= 0.0:
        lo, hi = lo - 0.5e-9, hi + 0.5e-9
    width = (hi - lo) / bins
    pos = np.clip(((dist.values - lo) / width).astype(np.intp), 0, bins - 1)
    mass = np.bincount(pos, weights=dist.weights, minlength=bins)
    mass = mass / mass.sum()
    centers = lo + (np.arange(bins) + 0.5) * width
    return Histogram(centers, mass / width, width)
