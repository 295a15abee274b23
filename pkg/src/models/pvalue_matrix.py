#!/usr/bin/env python3

from typing import List, Optional, Sequence
import numpy as np
import pandas as pd

from errors import ValidationError

class Sidedness:
  TWO_SIDED = "two_sided"
  ONE_SIDED_PAIR = "one_sided_pair"

class PValueMatrix:
  """G genes x K studies of per-study differential expression p-values.

  In one_sided_pair mode `values` holds the left-tail (down-regulation)
  p-values and `opposite` the right-tail ones.
  """

  PAIR_TOLERANCE = 1e-9

  def __init__(self, genes: Sequence[str], studies: Sequence[str], values: np.ndarray,
               sidedness: str = Sidedness.TWO_SIDED, opposite: Optional[np.ndarray] = None):
    self.genes = [str(g) for g in genes]
    self.studies = [str(s) for s in studies]
    self.values = np.asarray(values, dtype=float)
    self.sidedness = sidedness
    self.opposite = None if opposite is None else np.asarray(opposite, dtype=float)
    self._validate()

  def _validate(self):
    if self.values.ndim != 2:
      raise ValidationError("p-value matrix must be two-dimensional")
    if self.values.shape != (len(self.genes), len(self.studies)):
      raise ValidationError(f"matrix shape {self.values.shape} does not match "
                            f"{len(self.genes)} genes x {len(self.studies)} studies")
    if len(self.genes) < 1:
      raise ValidationError("p-value matrix needs at least one gene")
    if len(self.studies) < 2:
      raise ValidationError("p-value matrix needs at least two studies")
    if len(set(self.genes)) != len(self.genes):
      raise ValidationError("gene identifiers must be unique")
    self._check_range(self.values, "p-values")
    if self.sidedness == Sidedness.ONE_SIDED_PAIR:
      if self.opposite is None:
        raise ValidationError("one_sided_pair mode needs the opposite-tail matrix")
      if self.opposite.shape != self.values.shape:
        raise ValidationError("opposite-tail matrix has a different shape")
      self._check_range(self.opposite, "opposite-tail p-values")
      gap = np.abs(self.values + self.opposite - 1.0)
      if np.any(gap > self.PAIR_TOLERANCE):
        gene = self.genes[int(np.argmax(np.max(gap, axis=1)))]
        raise ValidationError(f"paired one-sided p-values of gene {gene} do not sum to 1")
    elif self.sidedness != Sidedness.TWO_SIDED:
      raise ValidationError(f"unknown sidedness {self.sidedness!r}")

  @staticmethod
  def _check_range(values: np.ndarray, name: str):
    if np.any(np.isnan(values)):
      raise ValidationError(f"{name} contain missing values")
    if np.any((values < 0) | (values > 1)):
      raise ValidationError(f"{name} must lie in [0, 1]")

  @classmethod
  def one_sided(cls, genes: Sequence[str], studies: Sequence[str], left: np.ndarray,
                right: Optional[np.ndarray] = None) -> 'PValueMatrix':
    """Build a one_sided_pair matrix; the right tail defaults to 1 - left"""
    left = np.asarray(left, dtype=float)
    if right is None:
      right = 1.0 - left
    return cls(genes, studies, left, Sidedness.ONE_SIDED_PAIR, right)

  @classmethod
  def from_frame(cls, frame: pd.DataFrame, opposite: Optional[pd.DataFrame] = None) -> 'PValueMatrix':
    """Create a matrix from a genes x studies DataFrame (index = gene ids)"""
    if opposite is None:
      return cls(frame.index, frame.columns, frame.to_numpy(dtype=float))
    opposite = opposite.loc[frame.index, frame.columns]
    return cls(frame.index, frame.columns, frame.to_numpy(dtype=float),
               Sidedness.ONE_SIDED_PAIR, opposite.to_numpy(dtype=float))

  def to_frame(self) -> pd.DataFrame:
    return pd.DataFrame(self.values, index=pd.Index(self.genes, name="gene"), columns=self.studies)

  @property
  def n_genes(self) -> int:
    return len(self.genes)

  @property
  def n_studies(self) -> int:
    return len(self.studies)

  def is_one_sided(self) -> bool:
    return self.sidedness == Sidedness.ONE_SIDED_PAIR

  def two_sided_values(self) -> np.ndarray:
    """Two-sided p-values; for one-sided pairs this is 2 * min(left, right) capped at 1"""
    if self.is_one_sided():
      return np.minimum(1.0, 2.0 * np.minimum(self.values, self.opposite))
    return self.values

  def display_short(self) -> str:
    return f"{self.n_genes} genes x {self.n_studies} studies ({self.sidedness})"

  def display_verbose(self) -> str:
    lines = [
      "P-value Matrix:",
      f"  Genes: {self.n_genes}",
      f"  Studies: {', '.join(self.studies)}",
      f"  Sidedness: {self.sidedness}",
      f"  Smallest p-value: {self.values.min():.3g}",
    ]
    return "\n".join(lines)

  def __repr__(self) -> str:
    return f"PValueMatrix(n_genes={self.n_genes}, n_studies={self.n_studies}, sidedness='{self.sidedness}')"
