#!/usr/bin/env python3

from typing import Dict, Any, Optional, Sequence
import numpy as np

from errors import ValidationError

class PowerSpec:
  """One power scenario: K studies, rOP parameter r, r0 truly affected studies, level alpha.

  Either `beta_prime` (equal effects: every affected study rejects at the rOP
  threshold with probability beta_prime) or `success_probs` (one probability
  per study) must be given.
  """

  def __init__(self, K: int, r: int, alpha: float, r0: Optional[int] = None,
               beta_prime: Optional[float] = None, success_probs: Optional[Sequence[float]] = None):
    self.K = int(K)
    self.r = int(r)
    self.r0 = None if r0 is None else int(r0)
    self.alpha = float(alpha)
    self.beta_prime = beta_prime
    self.success_probs = None if success_probs is None else np.asarray(success_probs, dtype=float)
    self._validate()

  def _validate(self):
    if self.K < 1:
      raise ValidationError(f"K must be at least 1, got {self.K}")
    if not 1 <= self.r <= self.K:
      raise ValidationError(f"r must lie in [1, {self.K}], got {self.r}")
    if not 0 < self.alpha < 1:
      raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
    if self.beta_prime is None and self.success_probs is None:
      raise ValidationError("give beta_prime (equal effects) or success_probs (unequal effects)")
    if self.beta_prime is not None:
      if self.r0 is None or not 0 <= self.r0 <= self.K:
        raise ValidationError(f"r0 must lie in [0, {self.K}] for the equal-effects case")
      if not 0 <= self.beta_prime <= 1:
        raise ValidationError(f"beta_prime must lie in [0, 1], got {self.beta_prime}")
    if self.success_probs is not None:
      if self.success_probs.shape != (self.K,):
        raise ValidationError(f"success_probs needs {self.K} entries, got {self.success_probs.size}")
      if np.any((self.success_probs < 0) | (self.success_probs > 1)):
        raise ValidationError("success_probs entries must lie in [0, 1]")

  @property
  def beta(self) -> float:
    """Rejection threshold of the rOP statistic: alpha-quantile of Beta(r, K - r + 1)"""
    from power_lab import beta_quantile
    return beta_quantile(self.alpha, self.r, self.K - self.r + 1)

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> 'PowerSpec':
    return cls(
      K=data['K'],
      r=data['r'],
      alpha=data.get('alpha', 0.05),
      r0=data.get('r0'),
      beta_prime=data.get('beta_prime'),
      success_probs=data.get('success_probs')
    )

  def to_dict(self) -> Dict[str, Any]:
    result = {'K': self.K, 'r': self.r, 'alpha': self.alpha}
    if self.r0 is not None:
      result['r0'] = self.r0
    if self.beta_prime is not None:
      result['beta_prime'] = self.beta_prime
    if self.success_probs is not None:
      result['success_probs'] = self.success_probs.tolist()
    return result

  def __repr__(self) -> str:
    return f"PowerSpec({self.to_dict()})"
