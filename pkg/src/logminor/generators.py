"""Test-matrix ensembles.

``E1``..``E4`` are the four n-by-n examples with fixed condition number:
the two-level diagonal matrix that maximizes log-minor variance, a diagonal
matrix with a random spectrum in ``[1, kappa]``, and Haar-random orthogonal
conjugations of each. Wishart sample covariances and a few diagonal helpers
round out the set. Every generator is a pure function of its arguments and
seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from . import rng as _rng
from .errors import (
    BadSplit,
    DegreesOfFreedomTooSmall,
    KappaNotAboveOne,
    OddDimension,
    UsageError,
)
from .linalg import SpdMatrix, make_spd

__all__ = [
    "KINDS",
    "GeneratorSpec",
    "generate",
    "gen_e1",
    "gen_e2",
    "gen_e3",
    "gen_e4",
    "gen_haar_orthogonal",
    "gen_wishart",
    "gen_two_level_diagonal",
    "gen_uniform_spectrum",
    "uniform_pinned_spectrum",
    "conjugate",
]

KINDS = ("E1", "E2", "E3", "E4", "TwoLevelDiagonal", "UniformSpectrum", "Wishart", "Custom")


def _check_kappa(kappa: float) -> None:
    if not kappa >= 1.0:
        raise UsageError(f"kappa must be >= 1, got {kappa}")


def gen_two_level_diagonal(n: int, kappa: float, ell_split: int) -> SpdMatrix:
    """Diagonal matrix with ``ell_split`` entries equal to ``kappa`` followed by ones."""
    _check_kappa(kappa)
    if not 1 <= ell_split <= n - 1:
        raise BadSplit(f"ell_split must lie in [1, {n - 1}], got {ell_split}")
    d = np.ones(n)
    d[:ell_split] = kappa
    return make_spd(np.diag(d))


def gen_e1(n: int, kappa: float) -> SpdMatrix:
    """Half the eigenvalues at ``kappa``, half at 1. Needs even ``n``."""
    if n % 2:
        raise OddDimension(f"E1 needs an even dimension, got n={n}")
    if n < 2:
        raise UsageError("n must be at least 2")
    return gen_two_level_diagonal(n, kappa, n // 2)


def uniform_pinned_spectrum(n: int, kappa: float, gen: np.random.Generator) -> NDArray[np.float64]:
    """``kappa``, then n-2 uniform draws on ``[1, kappa]`` sorted descending, then 1."""
    inner = np.sort(gen.uniform(1.0, kappa, size=n - 2))[::-1]
    return np.concatenate(([kappa], inner, [1.0]))


def gen_e2(n: int, kappa: float, seed: int) -> SpdMatrix:
    if n < 2:
        raise UsageError("n must be at least 2")
    if not kappa > 1.0:
        raise KappaNotAboveOne(f"E2 needs kappa > 1, got {kappa}")
    d = uniform_pinned_spectrum(n, kappa, _rng.stream(seed, "e2-spectrum"))
    return make_spd(np.diag(d))


def gen_haar_orthogonal(n: int, seed: int, *, gen: Optional[np.random.Generator] = None) -> NDArray[np.float64]:
    """Haar-distributed orthogonal matrix.

    Draws an n-by-n standard Gaussian matrix, takes its QR factorization, and
    flips each column of Q by the sign of the matching diagonal entry of R so
    that the factorization is unique and Q is Haar distributed.
    """
    if n < 1:
        raise UsageError("n must be at least 1")
    if gen is None:
        gen = _rng.stream(seed, "haar")
    z = gen.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diagonal(r))
    signs[signs == 0] = 1.0
    return q * signs[None, :]


def conjugate(d: SpdMatrix | NDArray[np.float64], q: NDArray[np.float64]) -> SpdMatrix:
    """``Q^T D Q``, symmetrized."""
    a = np.asarray(d, dtype=float)
    out = q.T @ a @ q
    return make_spd((out + out.T) / 2.0)


def gen_e3(n: int, kappa: float, seed: int) -> SpdMatrix:
    return conjugate(gen_e1(n, kappa), gen_haar_orthogonal(n, seed))


def gen_e4(n: int, kappa: float, seed: int) -> SpdMatrix:
    return conjugate(gen_e2(n, kappa, seed), gen_haar_orthogonal(n, seed))


def gen_uniform_spectrum(n: int, kappa: float, seed: int) -> SpdMatrix:
    """Haar conjugation of a diagonal with all n eigenvalues uniform on ``[1, kappa]``.

    Unlike E4 the extremes are not pinned, so the condition number is at most
    ``kappa``.
    """
    _check_kappa(kappa)
    d = np.sort(_rng.stream(seed, "uniform-spectrum").uniform(1.0, kappa, size=n))[::-1]
    return conjugate(np.diag(d), gen_haar_orthogonal(n, seed))


def gen_wishart(
    n: int,
    n_f: int,
    scale: SpdMatrix | NDArray[np.float64] | None = None,
    seed: int = _rng.DEFAULT_SEED,
) -> SpdMatrix:
    """Wishart sample covariance ``(1/n_f) sum_i x_i x_i^T`` with ``x_i ~ N(0, V)``."""
    if n_f < n:
        raise DegreesOfFreedomTooSmall(
            f"need at least n={n} degrees of freedom for a nonsingular sample, got {n_f}"
        )
    v = np.eye(n) if scale is None else np.asarray(scale, dtype=float)
    if v.shape != (n, n):
        raise UsageError(f"scale matrix has shape {v.shape}, expected ({n}, {n})")
    chol = np.linalg.cholesky(v)
    x = _rng.stream(seed, "wishart").standard_normal((n_f, n)) @ chol.T
    return make_spd(x.T @ x / n_f)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    kappa: float = 3.0
    ell_split: Optional[int] = None
    degrees_of_freedom: Optional[int] = None
    seed: int = _rng.DEFAULT_SEED
    spectrum: Optional[Sequence[float]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown generator kind {self.kind!r}; choose from {KINDS}")
        if self.n < 2:
            raise UsageError(f"n must be at least 2, got {self.n}")
        _check_kappa(self.kappa)


def generate(spec: GeneratorSpec) -> SpdMatrix:
    kind, n, kappa, seed = spec.kind, spec.n, spec.kappa, spec.seed
    if kind == "E1":
        return gen_e1(n, kappa)
    if kind == "E2":
        return gen_e2(n, kappa, seed)
    if kind == "E3":
        return gen_e3(n, kappa, seed)
    if kind == "E4":
        return gen_e4(n, kappa, seed)
    if kind == "TwoLevelDiagonal":
        if spec.ell_split is None:
            raise BadSplit("TwoLevelDiagonal needs ell_split")
        return gen_two_level_diagonal(n, kappa, spec.ell_split)
    if kind == "UniformSpectrum":
        return gen_uniform_spectrum(n, kappa, seed)
    if kind == "Wishart":
        dof = spec.degrees_of_freedom if spec.degrees_of_freedom is not None else 2 * n
        return gen_wishart(n, dof, seed=seed)
    # Custom: diagonal matrix with the given spectrum
    if spec.spectrum is None or len(spec.spectrum) != n:
        raise UsageError("Custom needs a spectrum of length n")
    return make_spd(np.diag(np.asarray(spec.spectrum, dtype=float)))
