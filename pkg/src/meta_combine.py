#!/usr/bin/env python3

"""Per-gene p-value combination: rOP, one-sided rOP, Fisher, Stouffer, minP, maxP and vote counting."""

from typing import Optional, Sequence, Tuple
import numpy as np

from errors import DomainError, GeneRowError, RopError, ValidationError
from logger import get_logger
from models import MetaMethodSpec, MetaMethods, MetaResult, PValueMatrix, VoteNull
from stat_kernel import beta_cdf, binom_at_least, chisq_sf, std_normal_isf, std_normal_sf

_logger = get_logger("meta_combine")

# log/quantile transforms cannot take 0 or 1; clamping keeps the ordering
P_FLOOR = 1e-300
P_CEIL = 1.0 - 1e-16

def _as_pvalues(pvals: Sequence[float]) -> np.ndarray:
    values = np.asarray(pvals, dtype=float)
    if values.ndim != 1 or values.size < 1:
        raise DomainError("expected a nonempty vector of p-values")
    if np.any(np.isnan(values)) or np.any((values < 0) | (values > 1)):
        raise DomainError("p-values must lie in [0, 1]")
    return values

def _check_r(r: int, K: int) -> None:
    if r is None:
        raise ValidationError("r has not been set; give r or select it from the data first")
    if not 1 <= r <= K:
        raise DomainError(f"r must lie in [1, {K}], got {r}")

def _clamp(values: np.ndarray, upper: bool = False) -> np.ndarray:
    zeros = int(np.sum(values < P_FLOOR))
    if zeros:
        _logger.warning("%d p-values below %g raised to the floor", zeros, P_FLOOR)
    clamped = np.maximum(values, P_FLOOR)
    if upper:
        ones = int(np.sum(clamped > P_CEIL))
        if ones:
            _logger.debug("%d p-values lowered to %r", ones, P_CEIL)
        clamped = np.minimum(clamped, P_CEIL)
    return clamped

# Row-wise kernels on G x K arrays. Each returns (statistic, meta_p) vectors.

def rop_rows(values: np.ndarray, r: int) -> Tuple[np.ndarray, np.ndarray]:
    K = values.shape[1]
    _check_r(r, K)
    statistic = np.partition(values, r - 1, axis=1)[:, r - 1]
    return statistic, beta_cdf(statistic, r, K - r + 1)

def rop_one_sided_rows(left: np.ndarray, right: np.ndarray, r: int) -> Tuple[np.ndarray, np.ndarray]:
    K = left.shape[1]
    _check_r(r, K)
    statistic = np.minimum(np.partition(left, r - 1, axis=1)[:, r - 1],
                           np.partition(right, r - 1, axis=1)[:, r - 1])
    # two-fold bound on the minimum of the two dependent order statistics
    meta_p = np.minimum(1.0, 2.0 * beta_cdf(statistic, r, K - r + 1))
    return statistic, meta_p

def fisher_rows(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    statistic = -2.0 * np.sum(np.log(_clamp(values)), axis=1)
    return statistic, chisq_sf(statistic, 2 * values.shape[1])

def stouffer_rows(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    z = std_normal_isf(_clamp(values, upper=True))
    statistic = np.sum(z, axis=1) / np.sqrt(values.shape[1])
    return statistic, std_normal_sf(statistic)

def minp_rows(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    statistic = values.min(axis=1)
    return statistic, beta_cdf(statistic, 1, values.shape[1])

def maxp_rows(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    statistic = values.max(axis=1)
    return statistic, beta_cdf(statistic, values.shape[1], 1)

def vote_count_rows(values: np.ndarray, alpha_vc: float, pi0: float = 0.5,
                    vote_null: str = VoteNull.ALPHA) -> Tuple[np.ndarray, np.ndarray]:
    if not 0 < alpha_vc < 1:
        raise DomainError(f"alpha_vc must lie in (0, 1), got {alpha_vc}")
    K = values.shape[1]
    count = np.sum(values < alpha_vc, axis=1)
    success = alpha_vc if vote_null == VoteNull.ALPHA else pi0
    return count.astype(float), binom_at_least(count, K, success)

def rop_mask_rows(values: np.ndarray, r: int) -> np.ndarray:
    """r smallest p-values per row; ties go to the lowest study index"""
    order = np.argsort(values, axis=1, kind="stable")[:, :r]
    mask = np.zeros(values.shape, dtype=bool)
    np.put_along_axis(mask, order, True, axis=1)
    return mask

def combine_rows(spec: MetaMethodSpec, values: np.ndarray,
                 opposite: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Dispatch a method spec onto a G x K block (left tail in `values` for one-sided rOP)"""
    method = spec.method
    if method == MetaMethods.ROP:
        return rop_rows(values, spec.r)
    if method == MetaMethods.ROP_ONE_SIDED:
        if opposite is None:
            raise ValidationError("one-sided rOP needs paired one-sided p-values")
        return rop_one_sided_rows(values, opposite, spec.r)
    if method == MetaMethods.FISHER:
        return fisher_rows(values)
    if method == MetaMethods.STOUFFER:
        return stouffer_rows(values)
    if method == MetaMethods.MINP:
        return minp_rows(values)
    if method == MetaMethods.MAXP:
        return maxp_rows(values)
    return vote_count_rows(values, spec.alpha_vc, spec.pi0, spec.vote_null)

# Per-gene operations

def _single(rows_result: Tuple[np.ndarray, np.ndarray]) -> Tuple[float, float]:
    statistic, meta_p = rows_result
    return float(statistic[0]), float(meta_p[0])

def combine_rop(pvals: Sequence[float], r: int) -> Tuple[float, float]:
    """
    r-th ordered p-value

    Args:
      pvals: K per-study p-values.
      r: Order of the statistic, 1 <= r <= K.

    Returns:
      Tuple[float, float]: (p_(r), Beta(r, K - r + 1) CDF at p_(r))
    """
    values = _as_pvalues(pvals)
    return _single(rop_rows(values[None, :], r))

def combine_fisher(pvals: Sequence[float]) -> Tuple[float, float]:
    return _single(fisher_rows(_as_pvalues(pvals)[None, :]))

def combine_stouffer(pvals: Sequence[float]) -> Tuple[float, float]:
    return _single(stouffer_rows(_as_pvalues(pvals)[None, :]))

def combine_minp(pvals: Sequence[float]) -> Tuple[float, float]:
    return _single(minp_rows(_as_pvalues(pvals)[None, :]))

def combine_maxp(pvals: Sequence[float]) -> Tuple[float, float]:
    return _single(maxp_rows(_as_pvalues(pvals)[None, :]))

def combine_rop_one_sided(p_left: Sequence[float], p_right: Sequence[float], r: int,
                          tolerance: float = 1e-9) -> Tuple[float, float]:
    """
    One-sided corrected rOP: the smaller of the two tails' r-th ordered p-values

    Genes whose studies disagree on the direction of change get a large
    statistic in both tails and are not called significant.
    """
    left = _as_pvalues(p_left)
    right = _as_pvalues(p_right)
    if left.shape != right.shape:
        raise ValidationError("left and right tail vectors differ in length")
    if np.any(np.abs(left + right - 1.0) > tolerance):
        raise ValidationError("one-sided p-values are not paired (left + right != 1)")
    return _single(rop_one_sided_rows(left[None, :], right[None, :], r))

def vote_count(pvals: Sequence[float], alpha_vc: float = 0.05, pi0: float = 0.5,
               vote_null: str = VoteNull.ALPHA) -> Tuple[int, float]:
    """
    Count studies with p < alpha_vc and test the count

    With vote_null="alpha" the count is referred to BIN(K, alpha_vc); with
    vote_null="pi0" to BIN(K, pi0), i.e. H0: pi = pi0 against pi > pi0.

    Returns:
      Tuple[int, float]: (count, one-sided exceedance p-value)
    """
    count, meta_p = vote_count_rows(_as_pvalues(pvals)[None, :], alpha_vc, pi0, vote_null)
    return int(count[0]), float(meta_p[0])

def effective_mask(pvals: Sequence[float], r: int) -> np.ndarray:
    values = _as_pvalues(pvals)
    _check_r(r, values.size)
    return rop_mask_rows(values[None, :], r)[0]

def _one_sided_mask(left: np.ndarray, right: np.ndarray, r: int) -> np.ndarray:
    left_stat = np.partition(left, r - 1, axis=1)[:, r - 1]
    right_stat = np.partition(right, r - 1, axis=1)[:, r - 1]
    use_left = left_stat <= right_stat
    return np.where(use_left[:, None], rop_mask_rows(left, r), rop_mask_rows(right, r))

def combine_matrix(matrix: PValueMatrix, spec: MetaMethodSpec) -> MetaResult:
    """
    Apply a combination method to every gene of a p-value matrix

    q-values are left unset; the significance stage fills them in.
    """
    if spec.is_rop_family():
        _check_r(spec.r, matrix.n_studies)
    if spec.method == MetaMethods.ROP_ONE_SIDED and not matrix.is_one_sided():
        raise ValidationError("one-sided rOP needs a one_sided_pair p-value matrix")

    if spec.method == MetaMethods.ROP_ONE_SIDED:
        values, opposite = matrix.values, matrix.opposite
    else:
        values, opposite = matrix.two_sided_values(), None

    try:
        statistic, meta_p = combine_rows(spec, values, opposite)
    except RopError:
        _raise_for_row(spec, values, opposite, matrix.genes)
        raise

    mask = None
    if spec.method == MetaMethods.ROP:
        mask = rop_mask_rows(values, spec.r)
    elif spec.method == MetaMethods.ROP_ONE_SIDED:
        mask = _one_sided_mask(values, opposite, spec.r)

    _logger.info("combined %d genes x %d studies with %s", matrix.n_genes, matrix.n_studies, spec.label())
    return MetaResult(matrix.genes, matrix.studies, spec, statistic, np.clip(meta_p, 0.0, 1.0),
                      effective_mask=mask)

def _raise_for_row(spec: MetaMethodSpec, values: np.ndarray, opposite: Optional[np.ndarray], genes):
    """Re-run row by row to name the gene behind a vectorized failure"""
    for i, gene in enumerate(genes):
        try:
            combine_rows(spec, values[i:i + 1], None if opposite is None else opposite[i:i + 1])
        except RopError as error:
            raise GeneRowError(gene, error) from error
