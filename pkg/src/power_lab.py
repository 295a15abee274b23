#!/usr/bin/env python3

"""Exact power of rOP, its unequal-effects generalization, and vote counting for comparison."""

from typing import Optional, Sequence
import math
import numpy as np
import pandas as pd
from scipy import special, stats

from errors import ConvergenceError, DomainError, ValidationError
from logger import get_logger
from models import PowerSpec
from stat_kernel import Sides, binom_at_least

_logger = get_logger("power_lab")

class VoteFraming:
  PI0 = "pi0"
  ALPHA = "alpha"

  ALL = (PI0, ALPHA)

def beta_quantile(p: float, a: float, b: float) -> float:
  """
  Inverse of the regularized incomplete beta function

  Args:
    p: Probability in (0, 1).
    a: First shape parameter.
    b: Second shape parameter.

  Returns:
    float: x with I_x(a, b) = p
  """
  if not 0 < p < 1:
    raise DomainError(f"p must lie strictly between 0 and 1, got {p}")
  if a <= 0 or b <= 0:
    raise DomainError(f"beta shapes must be positive, got a={a}, b={b}")
  x = float(special.betaincinv(a, b, p))
  if math.isnan(x):
    raise ConvergenceError(f"beta quantile did not converge for p={p}, a={a}, b={b}")
  return x

def rop_power_equal(spec: PowerSpec) -> float:
  """Pr(p_(r) <= beta) when r0 studies reject with probability beta_prime and the rest with beta"""
  if spec.beta_prime is None:
    raise ValidationError("equal-effects power needs beta_prime and r0")
  K, r, r0 = spec.K, spec.r, spec.r0
  beta, beta_prime = spec.beta, spec.beta_prime
  total = 0.0
  for i in range(r, K + 1):
    for j in range(max(0, i - K + r0), min(i, r0) + 1):
      total += stats.binom.pmf(j, r0, beta_prime) * stats.binom.pmf(i - j, K - r0, beta)
  return float(min(max(total, 0.0), 1.0))

def poisson_binomial_pmf(success_probs: Sequence[float]) -> np.ndarray:
  """Distribution of the number of successes among independent Bernoulli trials, O(K^2)"""
  probs = np.asarray(success_probs, dtype=float)
  pmf = np.zeros(probs.size + 1)
  pmf[0] = 1.0
  for p in probs:
    pmf[1:] = pmf[1:] * (1 - p) + pmf[:-1] * p
    pmf[0] *= (1 - p)
  return pmf

def rop_power_poisson_binomial(spec: PowerSpec) -> float:
  """P(#successes >= r) for heterogeneous per-study success probabilities"""
  if spec.success_probs is None:
    raise ValidationError("unequal-effects power needs success_probs")
  pmf = poisson_binomial_pmf(spec.success_probs)
  return float(min(max(pmf[spec.r:].sum(), 0.0), 1.0))

def power_curve(K: int, vary: str, values: Sequence[int], alpha: float = 0.05, beta_prime: float = 1.0,
                r: Optional[int] = None, r0: Optional[int] = None, theta: Optional[float] = None,
                n_per_group: Optional[int] = None) -> pd.DataFrame:
  """
  Tabulate rop_power_equal while sweeping r (fixed r0) or r0 (fixed r)

  Args:
    K: Number of studies.
    vary: "r" or "r0".
    values: Values taken by the swept parameter.
    alpha: Level of the rOP test.
    beta_prime: Per-study rejection probability of the affected studies.
    r: Fixed r when sweeping r0.
    r0: Fixed r0 when sweeping r.
    theta: Standardized effect size; together with n_per_group it replaces beta_prime
      by the t-test power at each row's threshold beta.
    n_per_group: Samples per class in every study.

  Returns:
    pd.DataFrame: columns K, r, r0, alpha, beta, beta_prime, power
  """
  if vary not in ("r", "r0"):
    raise ValidationError(f"vary must be 'r' or 'r0', got {vary!r}")
  fixed = r0 if vary == "r" else r
  if fixed is None:
    raise ValidationError(f"sweeping {vary} needs the other parameter fixed")
  if (theta is None) != (n_per_group is None):
    raise ValidationError("theta and n_per_group must be given together")
  rows = []
  for value in values:
    row_r = value if vary == "r" else fixed
    row_r0 = value if vary == "r0" else fixed
    row_beta_prime = beta_prime
    if theta is not None:
      if not 1 <= row_r <= K:
        raise ValidationError(f"r must lie in [1, {K}], got {row_r}")
      row_beta_prime = per_study_power(theta, n_per_group, beta_quantile(alpha, row_r, K - row_r + 1))
    spec = PowerSpec(K=K, r=row_r, r0=row_r0, alpha=alpha, beta_prime=row_beta_prime)
    rows.append({'K': K, 'r': spec.r, 'r0': spec.r0, 'alpha': alpha, 'beta': spec.beta,
                 'beta_prime': row_beta_prime, 'power': rop_power_equal(spec)})
  _logger.debug("power curve over %s with %d points", vary, len(rows))
  return pd.DataFrame(rows)

def vote_critical_value(K: int, null_prob: float, level: float) -> int:
  """Smallest count c with P(BIN(K, null_prob) >= c) <= level; K + 1 when none exists"""
  counts = np.arange(K + 2)
  tails = binom_at_least(counts, K, null_prob)
  return int(counts[np.argmax(tails <= level)])

def vote_counting_power(K: int, alpha_vc: float, single_study_power: float, pi0: float = 0.5,
                        level: float = 0.05, framing: str = VoteFraming.PI0) -> float:
  """
  Power of the vote-counting test when each study rejects with probability single_study_power

  The critical count comes from BIN(K, pi0) in the pi0 framing and from
  BIN(K, alpha_vc) in the alpha framing, at the given test level.
  """
  if K < 1:
    raise DomainError(f"K must be positive, got {K}")
  for name, value in (('alpha_vc', alpha_vc), ('single_study_power', single_study_power),
                      ('pi0', pi0), ('level', level)):
    if not 0 <= value <= 1:
      raise DomainError(f"{name} must lie in [0, 1], got {value}")
  if framing not in VoteFraming.ALL:
    raise DomainError(f"framing must be one of {VoteFraming.ALL}, got {framing!r}")
  null_prob = pi0 if framing == VoteFraming.PI0 else alpha_vc
  critical = vote_critical_value(K, null_prob, level)
  if critical > K:
    return 0.0
  return float(binom_at_least(critical, K, single_study_power))

def count_power(K: int, fraction: float, success_prob: float) -> float:
  """P(BIN(K, success_prob) >= ceil(fraction * K)), the rOP-style count requirement"""
  if not 0 < fraction <= 1:
    raise DomainError(f"fraction must lie in (0, 1], got {fraction}")
  r = max(1, math.ceil(fraction * K - 1e-12))
  return float(binom_at_least(r, K, success_prob))

def _nct_upper(cut: float, df: int, noncentrality: float) -> float:
  # lower tails go through the mirrored upper tail; nct.cdf underflows to NaN far from the center
  tail = float(stats.nct.sf(cut, df, noncentrality))
  if np.isnan(tail):
    return 1.0 if noncentrality > cut else 0.0
  return tail

def per_study_power(theta: float, n_per_group: int, threshold: float, sides: str = Sides.TWO) -> float:
  """
  Probability that a two-sample t-test with n per group rejects at `threshold`
  when the standardized mean difference is theta; maps an effect size to beta_prime.
  """
  if n_per_group < 2:
    raise DomainError("each group needs at least 2 samples")
  if not 0 < threshold < 1:
    raise DomainError(f"threshold must lie strictly between 0 and 1, got {threshold}")
  df = 2 * n_per_group - 2
  noncentrality = theta * math.sqrt(n_per_group / 2.0)
  if sides == Sides.TWO:
    cut = stats.t.isf(threshold / 2, df)
    power = _nct_upper(cut, df, noncentrality) + _nct_upper(cut, df, -noncentrality)
  elif sides == Sides.RIGHT:
    power = _nct_upper(stats.t.isf(threshold, df), df, noncentrality)
  elif sides == Sides.LEFT:
    power = _nct_upper(stats.t.isf(threshold, df), df, -noncentrality)
  else:
    raise DomainError(f"sides must be one of {Sides.ALL}, got {sides!r}")
  return float(min(max(power, 0.0), 1.0))
