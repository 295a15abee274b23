#!/usr/bin/env python3

from typing import Dict, Any
import numpy as np

from errors import ValidationError
from .method_spec import Orientation

class PermutationScope:
  CLASS_LABELS = "class_labels_within_study"
  PVALUES = "pvalues_across_genes_within_study"

class PermutationPlan:
  """How many permutations to run, from which seed, and what gets permuted"""

  LABEL_DEFAULT_B = 500
  PVALUE_DEFAULT_B = 100

  def __init__(self, B: int, seed: int = 0, scope: str = PermutationScope.CLASS_LABELS):
    if int(B) < 1:
      raise ValidationError(f"number of permutations must be positive, got {B}")
    if scope not in (PermutationScope.CLASS_LABELS, PermutationScope.PVALUES):
      raise ValidationError(f"unknown permutation scope {scope!r}")
    self.B = int(B)
    self.seed = int(seed)
    self.scope = scope

  @classmethod
  def for_labels(cls, seed: int = 0, B: int = LABEL_DEFAULT_B) -> 'PermutationPlan':
    return cls(B, seed, PermutationScope.CLASS_LABELS)

  @classmethod
  def for_pvalues(cls, seed: int = 0, B: int = PVALUE_DEFAULT_B) -> 'PermutationPlan':
    return cls(B, seed, PermutationScope.PVALUES)

  def require_scope(self, scope: str):
    if self.scope != scope:
      raise ValidationError(f"permutation plan has scope {self.scope}, this operation needs {scope}")

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> 'PermutationPlan':
    return cls(data.get('B', cls.LABEL_DEFAULT_B), data.get('seed', 0),
               data.get('scope', PermutationScope.CLASS_LABELS))

  def to_dict(self) -> Dict[str, Any]:
    return {'B': self.B, 'seed': self.seed, 'scope': self.scope}

  def __repr__(self) -> str:
    return f"PermutationPlan(B={self.B}, seed={self.seed}, scope='{self.scope}')"

class NullPool:
  """Null combined statistics: one G-vector per permutation (B x G values)"""

  def __init__(self, values: np.ndarray, orientation: str):
    self.values = np.asarray(values, dtype=float)
    if self.values.ndim != 2:
      raise ValidationError("null pool must be a B x G array")
    if orientation not in (Orientation.SMALL_IS_SIGNIFICANT, Orientation.LARGE_IS_SIGNIFICANT):
      raise ValidationError(f"unknown orientation {orientation!r}")
    self.orientation = orientation

  @property
  def B(self) -> int:
    return self.values.shape[0]

  @property
  def n_genes(self) -> int:
    return self.values.shape[1]

  @property
  def size(self) -> int:
    return self.values.size

  def __repr__(self) -> str:
    return f"NullPool(B={self.B}, n_genes={self.n_genes}, orientation='{self.orientation}')"
