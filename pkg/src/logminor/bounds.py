"""Closed-form bounds on the log-minor distribution and on the sample-mean estimators.

All bounds depend on the matrix only through ``kappa_hat``, an upper bound on
its condition number, and (for the coefficient-of-variation bounds) through
``ell = min(|log lambda_1|, |log lambda_n|)``. Three families, labelled
thm1 to thm3 throughout the package and the CLI:

* thm1 -- large-deviation tail ``3 exp(-(r / log kh) sqrt(n / (k (n-k))))``
  and variance ``6 k (n-k) / n (log kh)^2``.
* thm2 -- support width ``wedge log kh`` (``wedge = min(k, n-k)``) and the
  Popoviciu variance bound. Applied to the support width this gives
  ``(wedge log kh)^2 / 4``; the standard-error and CV bounds are built on the
  smaller ``wedge (log kh)^2 / 4`` instead. Both are provided:
  ``variant="as_stated"`` and ``variant="table"``.
* thm3 -- diagonal matrices only: ``(k/4) (n-k)/(n-1) (log kh)^2``.

Standard errors (se1, se2, se3) are the square roots of the thm1, thm2-table,
thm3 variance bounds divided by q; the entropy-side values are exactly half.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from .errors import (
    EllZero,
    KEqualsN,
    LengthMismatch,
    NonpositiveR,
    NotDiagonal,
    UnattainableTarget,
    UsageError,
)

__all__ = [
    "LOG_2E_PI",
    "BoundContext",
    "SEBounds",
    "CVBounds",
    "BoundSet",
    "TailValue",
    "var_bound_thm1",
    "tail_bound_thm1",
    "var_bound_thm2",
    "support_width_bound",
    "var_bound_thm3",
    "tail_chebyshev",
    "se_bounds",
    "cv_bounds",
    "concentration_sequence",
    "metric_bound",
    "plan_sample_size",
    "bound_set",
]

LOG_2E_PI = math.log(2.0 * math.e * math.pi)

Thm2Variant = Literal["as_stated", "table"]
Metric = Literal["se_logminor", "se_entropy", "cv_logminor", "cv_entropy"]
BoundChoice = Literal["thm1", "thm2", "thm3"]

METRICS = ("se_logminor", "se_entropy", "cv_logminor", "cv_entropy")
BOUND_CHOICES = ("thm1", "thm2", "thm3")


@dataclass(frozen=True)
class BoundContext:
    n: int
    k: int
    kappa_hat: float
    diagonal: bool = False
    ell_of_m: Optional[float] = None
    q: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise UsageError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not self.kappa_hat >= 1.0:
            raise UsageError(f"kappa_hat must be >= 1, got {self.kappa_hat}")
        if self.q is not None and self.q < 1:
            raise UsageError(f"q must be at least 1, got {self.q}")
        if self.ell_of_m is not None and self.ell_of_m < 0:
            raise UsageError(f"ell must be non-negative, got {self.ell_of_m}")

    @property
    def wedge(self) -> int:
        return min(self.k, self.n - self.k)

    @property
    def log_kappa(self) -> float:
        return math.log(self.kappa_hat)

    def with_q(self, q: int) -> "BoundContext":
        return BoundContext(self.n, self.k, self.kappa_hat, self.diagonal, self.ell_of_m, q)

    def _need_q(self) -> int:
        if self.q is None:
            raise UsageError("this bound needs a sample count q")
        return self.q

    def _need_ell(self) -> float:
        if self.ell_of_m is None or self.ell_of_m == 0.0:
            raise EllZero(
                "coefficient-of-variation bounds need ell(M) > 0; ell is zero when "
                "the largest or smallest eigenvalue equals 1"
            )
        return self.ell_of_m


@dataclass(frozen=True)
class TailValue:
    """A tail-probability bound: ``raw`` as computed, ``value`` clamped to [0, 1]."""

    raw: float

    @property
    def value(self) -> float:
        return min(1.0, max(0.0, self.raw))

    def __float__(self) -> float:
        return self.value


def var_bound_thm1(ctx: BoundContext) -> float:
    return 6.0 * (ctx.k * (ctx.n - ctx.k) / ctx.n) * ctx.log_kappa**2


def tail_bound_thm1(ctx: BoundContext, r: float) -> TailValue:
    """Large-deviation bound on ``P(|Y - E Y| >= r)``.

    Raises
    ------
    KEqualsN
        For ``k == n`` the log-minor is a constant and the exponent is
        undefined; the tail is 0 for every ``r > 0``.
    """
    if r < 0:
        raise NonpositiveR(f"r must be non-negative, got {r}")
    if ctx.k == ctx.n:
        raise KEqualsN("k == n: a single minor, tail is 0 for r > 0")
    if ctx.log_kappa == 0.0:
        return TailValue(1.0 if r == 0 else 0.0)
    rate = math.sqrt(ctx.n / (ctx.k * (ctx.n - ctx.k))) / ctx.log_kappa
    return TailValue(3.0 * math.exp(-r * rate))


def var_bound_thm2(ctx: BoundContext, variant: Thm2Variant = "as_stated") -> float:
    if variant == "as_stated":
        return 0.25 * (ctx.wedge * ctx.log_kappa) ** 2
    if variant == "table":
        return 0.25 * ctx.wedge * ctx.log_kappa**2
    raise UsageError(f"unknown variant {variant!r}")


def support_width_bound(ctx: BoundContext) -> float:
    return ctx.wedge * ctx.log_kappa


def var_bound_thm3(ctx: BoundContext) -> float:
    if not ctx.diagonal:
        raise NotDiagonal("the diagonal variance bound only holds for diagonal matrices")
    if ctx.k == ctx.n:
        return 0.0
    return 0.25 * ctx.k * ((ctx.n - ctx.k) / (ctx.n - 1)) * ctx.log_kappa**2


def tail_chebyshev(var_bound: float, r: float) -> TailValue:
    if r <= 0:
        raise NonpositiveR(f"Chebyshev needs r > 0, got {r}")
    return TailValue(var_bound / (r * r))


@dataclass(frozen=True)
class SEBounds:
    """Standard-error bounds for ``S_Y``. Entropy-side values are derived, never stored."""

    se1: float
    se2: float
    se3: Optional[float] = None

    @property
    def entropy(self) -> dict:
        return {name: (None if v is None else v / 2.0) for name, v in self._items()}

    def _items(self):
        return (("se1", self.se1), ("se2", self.se2), ("se3", self.se3))

    def as_dict(self) -> dict:
        logminor = {name: v for name, v in self._items() if v is not None}
        return {
            "logminor": logminor,
            "entropy": {name: v / 2.0 for name, v in logminor.items()},
        }


def se_bounds(ctx: BoundContext) -> SEBounds:
    q = ctx._need_q()
    n, k, lk = ctx.n, ctx.k, ctx.log_kappa
    se1 = math.sqrt(6.0 * k * (n - k) / (q * n)) * lk
    se2 = 0.5 * math.sqrt(ctx.wedge / q) * lk
    se3 = None
    if ctx.diagonal:
        se3 = 0.0 if k == n else 0.5 * math.sqrt(k * (n - k) / (q * (n - 1))) * lk
    return SEBounds(se1, se2, se3)


@dataclass(frozen=True)
class CVBounds:
    cvy1: float
    cvy2: float
    cvh1: float
    cvh2: float

    def as_dict(self) -> dict:
        return {"cvy1": self.cvy1, "cvy2": self.cvy2, "cvh1": self.cvh1, "cvh2": self.cvh2}


def cv_bounds(ctx: BoundContext) -> CVBounds:
    """Coefficient-of-variation bounds for ``S_Y`` (cvy*) and ``S_h`` (cvh*).

    The log-minor versions use ``|E Y| >= k ell``, which is only guaranteed
    when ``log lambda_1`` and ``log lambda_n`` have the same sign.
    """
    q = ctx._need_q()
    ell = ctx._need_ell()
    n, k, lk = ctx.n, ctx.k, ctx.log_kappa
    root1 = math.sqrt(6.0 * (n - k) / (q * k * n))
    root2 = math.sqrt(ctx.wedge / (q * k * k))
    return CVBounds(
        cvy1=lk / ell * root1,
        cvy2=lk / (2.0 * ell) * root2,
        cvh1=2.0 * lk / (ell + LOG_2E_PI) * root1,
        cvh2=lk / (ell + LOG_2E_PI) * root2,
    )


def concentration_sequence(ks: Sequence[int], ells: Sequence[float]) -> tuple[list[float], bool]:
    """``a_i = sqrt(k_i) ell_i`` and whether the sequence is nondecreasing.

    The relative error of ``S_Y`` concentrates along a matrix sequence when
    ``a_i`` is nondecreasing and unbounded; only the first property can be
    checked on a finite prefix.
    """
    if len(ks) != len(ells):
        raise LengthMismatch(f"{len(ks)} values of k but {len(ells)} values of ell")
    a = [math.sqrt(k) * ell for k, ell in zip(ks, ells)]
    return a, all(x <= y for x, y in zip(a, a[1:]))


def metric_bound(ctx: BoundContext, metric: Metric, bound_choice: BoundChoice = "thm2") -> float:
    """Value of the chosen standard-error or CV bound at ``ctx.q``."""
    if metric not in METRICS:
        raise UsageError(f"unknown metric {metric!r}; choose from {METRICS}")
    if bound_choice not in BOUND_CHOICES:
        raise UsageError(f"unknown bound {bound_choice!r}; choose from {BOUND_CHOICES}")
    if metric.startswith("se"):
        if bound_choice == "thm3" and not ctx.diagonal:
            raise NotDiagonal("se3 only applies to diagonal matrices")
        se = se_bounds(ctx)
        value = {"thm1": se.se1, "thm2": se.se2, "thm3": se.se3}[bound_choice]
        return value / 2.0 if metric == "se_entropy" else value
    if bound_choice == "thm3":
        raise UsageError("there is no thm3 coefficient-of-variation bound")
    cv = cv_bounds(ctx)
    if metric == "cv_logminor":
        return cv.cvy1 if bound_choice == "thm1" else cv.cvy2
    return cv.cvh1 if bound_choice == "thm1" else cv.cvh2


def plan_sample_size(
    ctx: BoundContext,
    target: float,
    metric: Metric = "se_logminor",
    bound_choice: BoundChoice = "thm2",
) -> int:
    """Smallest ``q >= 1`` whose bound is at most ``target``.

    Every bound has the form ``c / sqrt(q)``, so ``q = ceil((c / target)^2)``;
    the result is then nudged by re-evaluation to absorb rounding.
    """
    if not target > 0:
        raise UnattainableTarget(f"target must be positive, got {target}")
    c = metric_bound(ctx.with_q(1), metric, bound_choice)
    if c <= target:
        return 1
    q = max(1, math.ceil((c / target) ** 2))

    def bound(qq: int) -> float:
        return metric_bound(ctx.with_q(qq), metric, bound_choice)

    while bound(q) > target:
        q += 1
    while q > 1 and bound(q - 1) <= target:
        q -= 1
    return q


@dataclass(frozen=True)
class BoundSet:
    """Every bound applicable to a context. Missing entries are ``None``."""

    context: BoundContext
    var_thm1: float
    var_thm2_quadratic: float
    var_thm2_table_variant: float
    var_thm3: Optional[float]
    support_width: float
    se: Optional[SEBounds]
    cv: Optional[CVBounds]

    def tail_thm1(self, r: float) -> Optional[TailValue]:
        if self.context.k == self.context.n:
            return None
        return tail_bound_thm1(self.context, r)

    def tail_chebyshev_thm2(self, r: float, variant: Thm2Variant = "table") -> TailValue:
        v = self.var_thm2_table_variant if variant == "table" else self.var_thm2_quadratic
        return tail_chebyshev(v, r)

    def tail_chebyshev_thm3(self, r: float) -> Optional[TailValue]:
        return None if self.var_thm3 is None else tail_chebyshev(self.var_thm3, r)

    def tails(self, r: float) -> dict:
        """Clamped tail bounds at ``r > 0``, ``None`` where not applicable."""
        t1 = self.tail_thm1(r)
        t3 = self.tail_chebyshev_thm3(r)
        return {
            "tail_thm1": None if t1 is None else t1.value,
            "tail_chebyshev_thm2_quadratic": self.tail_chebyshev_thm2(r, "as_stated").value,
            "tail_chebyshev_thm2_table": self.tail_chebyshev_thm2(r, "table").value,
            "tail_chebyshev_thm3": None if t3 is None else t3.value,
        }

    def as_dict(self) -> dict:
        c = self.context
        out = {
            "n": c.n,
            "k": c.k,
            "kappa_hat": c.kappa_hat,
            "wedge": c.wedge,
            "diagonal": c.diagonal,
            "ell": c.ell_of_m,
            "q": c.q,
            "var_thm1": self.var_thm1,
            "var_thm2": self.var_thm2_quadratic,
            "var_thm2_quadratic": self.var_thm2_quadratic,
            "var_thm2_table_variant": self.var_thm2_table_variant,
            "var_thm3": self.var_thm3,
            "support_width": self.support_width,
            "se": None if self.se is None else self.se.as_dict(),
            "cv": None if self.cv is None else self.cv.as_dict(),
            "notes": [
                "var_thm2 is the quadratic form (wedge*log kappa_hat)^2/4; "
                "var_thm2_table_variant is wedge*(log kappa_hat)^2/4, the form the "
                "se2/cv2 bounds are built on"
            ],
        }
        return out


def bound_set(ctx: BoundContext) -> BoundSet:
    se = se_bounds(ctx) if ctx.q is not None else None
    cv = cv_bounds(ctx) if ctx.q is not None and ctx.ell_of_m else None
    return BoundSet(
        context=ctx,
        var_thm1=var_bound_thm1(ctx),
        var_thm2_quadratic=var_bound_thm2(ctx, "as_stated"),
        var_thm2_table_variant=var_bound_thm2(ctx, "table"),
        var_thm3=var_bound_thm3(ctx) if ctx.diagonal else None,
        support_width=support_width_bound(ctx),
        se=se,
        cv=cv,
    )

