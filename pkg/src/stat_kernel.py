#!/usr/bin/env python3

"""Distribution functions and elementary tests shared by every analysis stage."""

from typing import NamedTuple, Sequence, Union
import numpy as np
from scipy import special, stats

from errors import DomainError, DegenerateInputError, TooFewPairsError

ArrayLike = Union[float, Sequence[float], np.ndarray]

class Sides:
    """Tail selection for directional tests"""
    TWO = "two"
    LEFT = "left"
    RIGHT = "right"

    ALL = (TWO, LEFT, RIGHT)
    SCIPY_ALTERNATIVE = {TWO: "two-sided", LEFT: "less", RIGHT: "greater"}

    @classmethod
    def to_scipy(cls, sides: str) -> str:
        if sides not in cls.SCIPY_ALTERNATIVE:
            raise DomainError(f"sides must be one of {cls.ALL}, got {sides!r}")
        return cls.SCIPY_ALTERNATIVE[sides]

class KSResult(NamedTuple):
    statistic: float
    pvalue: float

class SignedRankResult(NamedTuple):
    statistic: float
    pvalue: float
    n_pairs: int
    no_nonzero_pairs: bool = False

def _scalar_or_array(values: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(values)
    return values

def _require_probability(x: np.ndarray, name: str, open_interval: bool = False) -> None:
    if np.any(np.isnan(x)):
        raise DomainError(f"{name} contains NaN")
    if open_interval:
        if np.any((x <= 0) | (x >= 1)):
            raise DomainError(f"{name} must lie strictly between 0 and 1")
    elif np.any((x < 0) | (x > 1)):
        raise DomainError(f"{name} must lie in [0, 1]")

def beta_cdf(x: ArrayLike, a: float, b: float):
    """Regularized incomplete beta function I_x(a, b)"""
    values = np.asarray(x, dtype=float)
    _require_probability(values, "x")
    if a <= 0 or b <= 0:
        raise DomainError(f"beta shapes must be positive, got a={a}, b={b}")
    return _scalar_or_array(special.betainc(a, b, values), x)

def chisq_sf(x: ArrayLike, df: float):
    """Survival function P(X > x) of the chi-squared distribution"""
    values = np.asarray(x, dtype=float)
    if np.any(values < 0) or np.any(np.isnan(values)):
        raise DomainError("chi-squared statistic must be nonnegative")
    if df <= 0:
        raise DomainError(f"degrees of freedom must be positive, got {df}")
    return _scalar_or_array(stats.chi2.sf(values, df), x)

def std_normal_quantile(p: ArrayLike):
    values = np.asarray(p, dtype=float)
    _require_probability(values, "p", open_interval=True)
    return _scalar_or_array(stats.norm.ppf(values), p)

def std_normal_isf(p: ArrayLike):
    """Upper-tail quantile Phi^-1(1 - p), accurate for tiny p"""
    values = np.asarray(p, dtype=float)
    _require_probability(values, "p", open_interval=True)
    return _scalar_or_array(stats.norm.isf(values), p)

def std_normal_sf(z: ArrayLike):
    values = np.asarray(z, dtype=float)
    return _scalar_or_array(stats.norm.sf(values), z)

def binom_at_least(k: ArrayLike, n: int, p: float):
    """P(BIN(n, p) >= k); equals 1 for k <= 0"""
    if n < 0 or not 0 <= p <= 1:
        raise DomainError(f"invalid binomial parameters n={n}, p={p}")
    counts = np.asarray(k, dtype=float)
    return _scalar_or_array(stats.binom.sf(counts - 1, n, p), k)

def welch_t_test(group_a: Sequence[float], group_b: Sequence[float], sides: str = Sides.TWO) -> float:
    """
    Welch (unequal variance) two-sample t-test

    Args:
      group_a: Observations of the first group (cases).
      group_b: Observations of the second group (controls).
      sides: "two", "left" (mean_a < mean_b) or "right" (mean_a > mean_b).

    Returns:
      float: p-value for the requested tail
    """
    a = np.asarray(group_a, dtype=float)
    b = np.asarray(group_b, dtype=float)
    alternative = Sides.to_scipy(sides)
    if a.size < 2 or b.size < 2:
        raise DegenerateInputError("each group needs at least 2 observations")
    if np.var(a) == 0 or np.var(b) == 0:
        raise DegenerateInputError("a group has zero variance")
    result = stats.ttest_ind(a, b, equal_var=False, alternative=alternative)
    return float(np.clip(result.pvalue, 0.0, 1.0))

def welch_t_rows(values_a: np.ndarray, values_b: np.ndarray, sides: str = Sides.TWO) -> np.ndarray:
    """Row-wise Welch t-test on two genes x samples blocks; degenerate rows yield NaN"""
    alternative = Sides.to_scipy(sides)
    if values_a.shape[1] < 2 or values_b.shape[1] < 2:
        raise DegenerateInputError("each group needs at least 2 samples")
    with np.errstate(divide="ignore", invalid="ignore"):
        result = stats.ttest_ind(values_a, values_b, axis=1, equal_var=False, alternative=alternative)
    return np.clip(np.asarray(result.pvalue, dtype=float), 0.0, 1.0)

def ks_statistic(sample_a: np.ndarray, sample_b: np.ndarray) -> float:
    a = np.sort(np.asarray(sample_a, dtype=float))
    b = np.sort(np.asarray(sample_b, dtype=float))
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))

def ks_two_sample(sample_a: Sequence[float], sample_b: Sequence[float]) -> KSResult:
    """Two-sample Kolmogorov-Smirnov test, asymptotic distribution with effective sample size correction"""
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise DegenerateInputError("KS test needs two nonempty samples")
    d = ks_statistic(a, b)
    en = np.sqrt(a.size * b.size / (a.size + b.size))
    lam = (en + 0.12 + 0.11 / en) * d
    pvalue = float(np.clip(special.kolmogorov(lam), 0.0, 1.0))
    return KSResult(statistic=d, pvalue=pvalue)

def wilcoxon_signed_rank(paired_a: Sequence[float], paired_b: Sequence[float],
                         sides: str = Sides.TWO, min_pairs: int = 5) -> SignedRankResult:
    """
    Wilcoxon signed-rank test on paired samples

    Zero differences are dropped before ranking. The p-value uses the normal
    approximation with tie and continuity corrections.

    Args:
      paired_a: First member of each pair.
      paired_b: Second member of each pair.
      sides: "right" tests paired_a > paired_b, "left" tests paired_a < paired_b.
      min_pairs: Minimum number of nonzero differences.

    Returns:
      SignedRankResult: p = 1 with no_nonzero_pairs set when every difference is zero
    """
    a = np.asarray(paired_a, dtype=float)
    b = np.asarray(paired_b, dtype=float)
    if a.shape != b.shape:
        raise DomainError(f"paired samples differ in length ({a.size} vs {b.size})")
    alternative = Sides.to_scipy(sides)
    diffs = a - b
    diffs = diffs[diffs != 0]
    if diffs.size == 0:
        return SignedRankResult(statistic=0.0, pvalue=1.0, n_pairs=0, no_nonzero_pairs=True)
    if diffs.size < min_pairs:
        raise TooFewPairsError(f"need at least {min_pairs} nonzero pairs, got {diffs.size}")
    result = stats.wilcoxon(diffs, zero_method="wilcox", correction=True,
                            alternative=alternative, method="approx")
    return SignedRankResult(statistic=float(result.statistic),
                            pvalue=float(np.clip(result.pvalue, 0.0, 1.0)),
                            n_pairs=int(diffs.size))

class DistributionQuery:
    """A (family, params, point) triple evaluated through the kernel CDFs"""

    FAMILIES = ("Beta", "ChiSquare", "StdNormal", "Binomial")

    def __init__(self, family: str, params: Sequence[float], point: float):
        if family not in self.FAMILIES:
            raise DomainError(f"unknown family {family!r}")
        self.family = family
        self.params = tuple(params)
        self.point = point

    def cdf(self) -> float:
        if self.family == "Beta":
            a, b = self.params
            return beta_cdf(min(max(self.point, 0.0), 1.0), a, b)
        if self.family == "ChiSquare":
            (df,) = self.params
            return 1.0 - chisq_sf(max(self.point, 0.0), df)
        if self.family == "StdNormal":
            return 1.0 - std_normal_sf(self.point)
        n, p = self.params
        if n < 0 or not 0 <= p <= 1:
            raise DomainError(f"invalid binomial parameters n={n}, p={p}")
        return float(stats.binom.cdf(self.point, int(n), p))

    def __repr__(self) -> str:
        return f"DistributionQuery(family='{self.family}', params={self.params}, point={self.point})"
