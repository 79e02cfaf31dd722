"""Exhaustive enumeration of principal minors, the two-level closed form, and
a randomized search for matrices that out-vary the best diagonal one.

Enumeration costs C(n, k) Cholesky factorizations; it is the reference
against which every bound and every sampled estimate in the package is
checked.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np

from . import rng as _rng
from .errors import BadArguments, TooManySubsets
from .generators import gen_haar_orthogonal, uniform_pinned_spectrum
from .linalg import SpdMatrix, log_det_batch, make_spd, principal_submatrices
from .sampling import LogMinorDistribution

__all__ = [
    "DEFAULT_CAP",
    "ExactSummary",
    "ConjectureResult",
    "enumerate_exact",
    "iter_index_chunks",
    "two_level_moments",
    "diagonal_variance_max",
    "conjecture_search",
]

DEFAULT_CAP = 10**7
CHUNK = 1 << 14


@dataclass
class ExactSummary:
    n: int
    k: int
    count: int
    mean: float
    variance: float
    min: float
    max: float
    distribution: LogMinorDistribution = field(repr=False)

    @property
    def support_width(self) -> float:
        return self.max - self.min

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "count": self.count,
            "mean": self.mean,
            "variance": self.variance,
            "min": self.min,
            "max": self.max,
        }


def iter_index_chunks(n: int, k: int, chunk: int = CHUNK):
    """Yield ``(size, k)`` arrays of k-subsets of ``range(n)`` in lexicographic order."""
    combos = itertools.combinations(range(n), k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def enumerate_exact(
    m: SpdMatrix,
    k: int,
    cap: int = DEFAULT_CAP,
    progress: Optional[Callable[[int, int], None]] = None,
) -> ExactSummary:
    """Log-determinants of all C(n, k) principal submatrices of ``m``.

    ``progress(done, total)`` is called after every chunk when given.

    Raises
    ------
    TooManySubsets
        If C(n, k) exceeds ``cap``.
    """
    n = m.n
    if not 1 <= k <= n:
        raise BadArguments(f"need 1 <= k <= n, got k={k}, n={n}")
    total = math.comb(n, k)
    if total > cap:
        raise TooManySubsets(f"C({n},{k}) = {total} exceeds the cap of {cap}")
    parts = []
    done = 0
    for idx in iter_index_chunks(n, k):
        parts.append(log_det_batch(principal_submatrices(m, idx)))
        done += len(idx)
        if progress is not None:
            progress(done, total)
    dist = LogMinorDistribution.uniform(np.concatenate(parts), "exact", k, n)
    return ExactSummary(
        n=n,
        k=k,
        count=total,
        mean=dist.mean,
        variance=dist.variance,
        min=dist.min,
        max=dist.max,
        distribution=dist,
    )


def two_level_moments(n: int, k: int, ell_split: int, kappa: float) -> tuple[float, float]:
    """Mean and variance of the size-k log-minor of ``diag(kappa x ell_split, 1 x (n - ell_split))``.

    The log-minor is ``log kappa`` times a hypergeometric count (draws k from
    a population of n with ``ell_split`` successes).
    """
    if not 1 <= ell_split <= n - 1 or not 1 <= k <= n or not kappa >= 1:
        raise BadArguments(f"invalid arguments n={n}, k={k}, ell_split={ell_split}, kappa={kappa}")
    lk = math.log(kappa)
    mean = k * ell_split / n * lk
    var = k * (n - k) / (n * n * (n - 1)) * (n - ell_split) * ell_split * lk * lk
    return mean, var


def diagonal_variance_max(n: int, k: int, kappa: float) -> tuple[float, int]:
    """Largest two-level diagonal variance over all splits, with the maximizing split."""
    best = max(range(1, n), key=lambda ell: (two_level_moments(n, k, ell, kappa)[1], -ell))
    return two_level_moments(n, k, best, kappa)[1], best


@dataclass
class ConjectureResult:
    n: int
    k: int
    kappa: float
    trials: int
    seed: int
    best_variance: float
    witness: SpdMatrix = field(repr=False)
    witness_trial: int
    diagonal_max: float
    diagonal_argmax_ell: int
    counterexample: bool
    variances: np.ndarray = field(repr=False)

    @property
    def margin(self) -> float:
        """``diagonal_max - best_variance``; negative means the search won."""
        return self.diagonal_max - self.best_variance

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "kappa": self.kappa,
            "trials": self.trials,
            "seed": self.seed,
            "best_variance": self.best_variance,
            "witness_trial": self.witness_trial,
            "diagonal_max": self.diagonal_max,
            "diagonal_argmax_ell": self.diagonal_argmax_ell,
            "margin": self.margin,
            "counterexample": self.counterexample,
        }


def _trial_matrix(n, kappa, gen, spectrum, conjugate) -> SpdMatrix:
    if spectrum == "uniform":
        d = uniform_pinned_spectrum(n, kappa, gen)
    else:
        # interior eigenvalues at the hypercube vertices {1, kappa}
        inner = np.where(gen.random(n - 2) < 0.5, kappa, 1.0)
        d = np.concatenate(([kappa], np.sort(inner)[::-1], [1.0]))
    a = np.diag(d)
    if conjugate:
        q = gen_haar_orthogonal(n, 0, gen=gen)
        a = q.T @ a @ q
        a = (a + a.T) / 2.0
    return make_spd(a)


def conjecture_search(
    n: int,
    k: int,
    kappa: float,
    trials: int,
    seed: int = _rng.DEFAULT_SEED,
    *,
    spectrum: Literal["uniform", "vertex"] = "uniform",
    conjugate: bool = True,
    tol: float = 1e-9,
    cap: int = DEFAULT_CAP,
) -> ConjectureResult:
    """Look for a matrix whose log-minor variance beats every diagonal one.

    Each trial draws a spectrum with extremes pinned at ``kappa`` and 1
    (interior uniform on ``[1, kappa]``, or at the vertices {1, kappa} with
    ``spectrum="vertex"``), optionally conjugates it by a Haar orthogonal
    matrix, and enumerates its size-k log-minors exactly. The reference is
    the two-level diagonal maximum over all splits; a trial exceeding it by
    more than ``tol`` is flagged as a counterexample.
    """
    if trials < 1:
        raise BadArguments("trials must be at least 1")
    if n < 2 or not 1 <= k <= n:
        raise BadArguments(f"invalid n={n}, k={k}")
    if math.comb(n, k) > cap:
        raise TooManySubsets(f"C({n},{k}) exceeds the cap of {cap}")
    if spectrum not in ("uniform", "vertex"):
        raise BadArguments(f"unknown spectrum model {spectrum!r}")
    dmax, dell = diagonal_variance_max(n, k, kappa)
    variances = np.empty(trials)
    best_i, best_m = 0, None
    for i in range(trials):
        gen = _rng.stream(seed, "conjecture", i)
        m = _trial_matrix(n, kappa, gen, spectrum, conjugate)
        variances[i] = enumerate_exact(m, k, cap).variance
        if best_m is None or variances[i] > variances[best_i]:
            best_i, best_m = i, m
    best = float(variances[best_i])
    return ConjectureResult(
        n=n,
        k=k,
        kappa=kappa,
        trials=trials,
        seed=seed,
        best_variance=best,
        witness=best_m,
        witness_trial=best_i,
        diagonal_max=dmax,
        diagonal_argmax_ell=dell,
        counterexample=best > dmax + tol,
        variances=variances,
    )
