"""Dense symmetric positive-definite matrices and the factorizations used on them.

Everything here works in natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import (
    CholeskyBreakdown,
    IndexOutOfRange,
    NoConvergence,
    NotFinite,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    UsageError,
)

__all__ = [
    "PD_TOLERANCE",
    "JACOBI_MAX_N",
    "Spectrum",
    "IndexSet",
    "SpdMatrix",
    "make_spd",
    "principal_submatrix",
    "principal_submatrices",
    "log_det",
    "log_det_batch",
    "eigenvalues_sym",
    "jacobi_eigenvalues",
    "entropy_from_logdet",
    "differential_entropy",
]

PD_TOLERANCE = 1e-12
SYMMETRY_TOLERANCE = 1e-10
# Above this size "auto" hands the spectrum to LAPACK; Jacobi is O(n^3) per sweep
# with a large constant in numpy.
JACOBI_MAX_N = 128
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-12

# 1 + log(2 pi): per-variable constant in the Gaussian differential entropy.
ENTROPY_CONSTANT = 1.0 + math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of an SPD matrix, sorted descending."""

    eigenvalues: NDArray[np.float64]

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=float)
        ev = np.sort(ev)[::-1].copy()
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def smallest(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def condition_number(self) -> float:
        return self.largest / self.smallest

    @property
    def ell(self) -> float:
        """min(|log lambda_1|, |log lambda_n|)."""
        return min(abs(math.log(self.largest)), abs(math.log(self.smallest)))

    @property
    def straddles_one(self) -> bool:
        """True when lambda_n < 1 < lambda_1."""
        return self.smallest < 1.0 < self.largest

    def __len__(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class IndexSet:
    """A strictly increasing tuple of row/column indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise UsageError("an index set needs at least one index")
        if idx[0] < 0:
            raise IndexOutOfRange(f"negative index {idx[0]}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise UsageError(f"indices must be strictly increasing: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Sequence[int]) -> "IndexSet":
        """Build from any iterable of distinct indices, sorting them first."""
        return cls(tuple(sorted(int(i) for i in indices)))

    @property
    def k(self) -> int:
        return len(self.indices)

    def check(self, n: int) -> None:
        if self.indices[-1] >= n:
            raise IndexOutOfRange(f"index {self.indices[-1]} out of range for n={n}")

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)


class SpdMatrix:
    """Immutable dense symmetric positive-definite matrix.

    Use :func:`make_spd` to build one from untrusted input; the constructor
    itself does no validation beyond copying and freezing the array.
    """

    def __init__(self, entries: ArrayLike, *, eig_method: str = "auto"):
        a = np.array(entries, dtype=float)
        a.setflags(write=False)
        self._entries = a
        self._eig_method = eig_method

    @property
    def entries(self) -> NDArray[np.float64]:
        return self._entries

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    @cached_property
    def is_diagonal(self) -> bool:
        a = self._entries
        return not np.any(a[~np.eye(self.n, dtype=bool)])

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigenvalues_sym(self, method=self._eig_method)

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return self.spectrum.eigenvalues

    @property
    def condition_number(self) -> float:
        return self.spectrum.condition_number

    @property
    def ell(self) -> float:
        return self.spectrum.ell

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries.copy()
        return self._entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SpdMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    __hash__ = None

    def __repr__(self) -> str:
        return f"SpdMatrix(n={self.n}, diagonal={self.is_diagonal})"


MatrixLike = Union[SpdMatrix, ArrayLike]


def _as_array(m: MatrixLike) -> NDArray[np.float64]:
    if isinstance(m, SpdMatrix):
        return m.entries
    return np.asarray(m, dtype=float)


def make_spd(
    entries: ArrayLike,
    *,
    strict: bool = False,
    pd_tolerance: float = PD_TOLERANCE,
    eig_method: str = "auto",
) -> SpdMatrix:
    """Validate ``entries`` and wrap them as an :class:`SpdMatrix`.

    The input is symmetrized as ``(A + A.T) / 2``. With ``strict=True`` an
    asymmetry larger than ``1e-10`` relative to the largest entry is rejected
    instead.

    Raises
    ------
    NotSquare, NotFinite, NotSymmetric
        Malformed input.
    NotPositiveDefinite
        If ``lambda_n <= pd_tolerance * lambda_1``.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotFinite("matrix has non-finite entries")
    if strict:
        scale = np.max(np.abs(a))
        if np.max(np.abs(a - a.T)) > SYMMETRY_TOLERANCE * max(scale, 1.0):
            raise NotSymmetric("matrix is not symmetric")
    a = (a + a.T) / 2.0
    m = SpdMatrix(a, eig_method=eig_method)
    ev = m.eigenvalues
    if not (ev[-1] > pd_tolerance * ev[0]) or ev[0] <= 0:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {ev[-1]:.3g} is not above {pd_tolerance:g} x "
            f"largest eigenvalue {ev[0]:.3g}"
        )
    return m


def principal_submatrix(m: SpdMatrix, idx: IndexSet | Sequence[int]) -> SpdMatrix:
    """Return ``m[idx][:, idx]`` as a new :class:`SpdMatrix`.

    No definiteness check is made: a principal submatrix of a PD matrix is PD.
    """
    if not isinstance(idx, IndexSet):
        idx = IndexSet(tuple(idx))
    idx.check(m.n)
    sel = np.asarray(idx.indices)
    return SpdMatrix(m.entries[np.ix_(sel, sel)], eig_method=m._eig_method)


def principal_submatrices(a: MatrixLike, index_sets: NDArray[np.integer]) -> NDArray[np.float64]:
    """Stack the principal submatrices for each row of a ``(B, k)`` index array."""
    arr = _as_array(a)
    idx = np.asarray(index_sets, dtype=np.intp)
    return arr[idx[:, :, None], idx[:, None, :]]


def log_det(m: MatrixLike) -> float:
    """Natural log-determinant via Cholesky: ``2 * sum(log(diag(L)))``.

    Raises
    ------
    CholeskyBreakdown
        If a non-positive pivot shows up.
    """
    a = _as_array(m)
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise CholeskyBreakdown(str(exc)) from None
    return 2.0 * float(np.sum(np.log(np.diagonal(chol))))


def log_det_batch(stack: NDArray[np.float64]) -> NDArray[np.float64]:
    """Log-determinants of a ``(B, k, k)`` stack of SPD matrices."""
    try:
        chol = np.linalg.cholesky(stack)
    except np.linalg.LinAlgError as exc:
        raise CholeskyBreakdown(str(exc)) from None
    return 2.0 * np.sum(np.log(np.diagonal(chol, axis1=-2, axis2=-1)), axis=-1)


def _round_robin(n: int) -> list[tuple[NDArray[np.intp], NDArray[np.intp]]]:
    # Circle-method schedule: n-1 rounds (n even) of disjoint pairs covering
    # every (p, q) exactly once per sweep.
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(
    a: ArrayLike,
    *,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> NDArray[np.float64]:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the ``n/2`` rotations of a round touch disjoint rows and can be
    applied together. Iteration stops once the off-diagonal Frobenius norm
    falls below ``tol`` times the Frobenius norm of the input.

    Returns the eigenvalues unsorted (the final diagonal).
    """
    A = np.array(a, dtype=float)
    n = A.shape[0]
    if n == 1:
        return A.diagonal().copy()
    fro = np.linalg.norm(A)
    if fro == 0.0:
        return np.zeros(n)
    offmask = ~np.eye(n, dtype=bool)
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        if np.linalg.norm(A[offmask]) < tol * fro:
            return A.diagonal().copy()
        for P, Q in rounds:
            apq = A[P, Q]
            active = apq != 0.0
            if not np.any(active):
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            app, aqq = A[P, P], A[Q, Q]
            theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(1.0 + theta * theta))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # A <- J^T A J with J = [[c, s], [-s, c]] in the (p, q) plane
            rp, rq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * rp - s[:, None] * rq
            A[Q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = cp * c - cq * s
            A[:, Q] = cp * s + cq * c
            A[P, Q] = 0.0
            A[Q, P] = 0.0
    if np.linalg.norm(A[offmask]) < tol * fro:
        return A.diagonal().copy()
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def eigenvalues_sym(m: MatrixLike, method: str = "auto") -> Spectrum:
    """Spectrum of a symmetric matrix, sorted descending.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_N``, LAPACK above).
    """
    a = _as_array(m)
    n = a.shape[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        ev = jacobi_eigenvalues(a)
    elif method == "lapack":
        ev = np.linalg.eigvalsh(a)
    else:
        raise UsageError(f"unknown eigensolver {method!r}")
    return Spectrum(ev)


def entropy_from_logdet(logdet, k: int):
    """Differential entropy of a k-variate Gaussian given ``log det`` of its covariance."""
    return 0.5 * logdet + 0.5 * k * ENTROPY_CONSTANT


def differential_entropy(m: MatrixLike) -> float:
    a = _as_array(m)
    return entropy_from_logdet(log_det(a), a.shape[0])
