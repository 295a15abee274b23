#!/usr/bin/env python3

from typing import Iterator, List, Optional, Sequence
import numpy as np
import pandas as pd

from .method_spec import MetaMethodSpec

def mask_to_string(mask: np.ndarray) -> str:
  return "".join("1" if bit else "0" for bit in mask)

class GeneRecord:
  """One gene's row of a MetaResult"""

  def __init__(self, gene: str, statistic: float, meta_p: float, q_value: float,
               effective_mask: Optional[np.ndarray] = None, studies: Optional[Sequence[str]] = None):
    self.gene = gene
    self.statistic = statistic
    self.meta_p = meta_p
    self.q_value = q_value
    self.effective_mask = effective_mask
    self.studies = list(studies) if studies is not None else None

  def effective_studies(self) -> List[str]:
    if self.effective_mask is None or self.studies is None:
      return []
    return [s for s, bit in zip(self.studies, self.effective_mask) if bit]

  def display_short(self) -> str:
    mask = f" [{mask_to_string(self.effective_mask)}]" if self.effective_mask is not None else ""
    return f"{self.gene}: p={self.meta_p:.3g} q={self.q_value:.3g}{mask}"

  def display_verbose(self) -> str:
    lines = [
      "Gene Details:",
      f"  Gene: {self.gene}",
      f"  Statistic: {self.statistic:.6g}",
      f"  Meta p-value: {self.meta_p:.6g}",
      f"  q-value: {self.q_value:.6g}",
    ]
    if self.effective_mask is not None:
      lines.append(f"  Effective mask: {mask_to_string(self.effective_mask)}")
      lines.append(f"  Effective studies: {', '.join(self.effective_studies())}")
    return "\n".join(lines)

  def __repr__(self) -> str:
    return f"GeneRecord(gene='{self.gene}', meta_p={self.meta_p}, q_value={self.q_value})"

class MetaResult:
  """Per-gene combined statistics, meta p-values, q-values and effective-study masks"""

  def __init__(self, genes: Sequence[str], studies: Sequence[str], spec: MetaMethodSpec,
               statistic: np.ndarray, meta_p: np.ndarray, q_value: Optional[np.ndarray] = None,
               effective_mask: Optional[np.ndarray] = None, inference: str = "parametric"):
    self.genes = list(genes)
    self.studies = list(studies)
    self.spec = spec
    self.statistic = np.asarray(statistic, dtype=float)
    self.meta_p = np.asarray(meta_p, dtype=float)
    # q-values are filled in by the significance stage
    self.q_value = np.full(len(self.genes), np.nan) if q_value is None else np.asarray(q_value, dtype=float)
    self.effective_mask = None if effective_mask is None else np.asarray(effective_mask, dtype=bool)
    self.inference = inference

  def __len__(self) -> int:
    return len(self.genes)

  def record(self, index: int) -> GeneRecord:
    mask = None if self.effective_mask is None else self.effective_mask[index]
    return GeneRecord(self.genes[index], float(self.statistic[index]), float(self.meta_p[index]),
                      float(self.q_value[index]), mask, self.studies)

  def records(self) -> Iterator[GeneRecord]:
    for i in range(len(self.genes)):
      yield self.record(i)

  def ranked_order(self) -> np.ndarray:
    """Gene indices sorted by meta p-value, then q-value, then input order"""
    return np.lexsort((np.arange(len(self.genes)), self.q_value, self.meta_p))

  def ranked_records(self) -> List[GeneRecord]:
    return [self.record(int(i)) for i in self.ranked_order()]

  def detected(self, fdr: float) -> np.ndarray:
    """Boolean vector of genes with q <= fdr"""
    return np.nan_to_num(self.q_value, nan=1.0) <= fdr

  def n_detected(self, fdr: float) -> int:
    return int(np.sum(self.detected(fdr)))

  def detected_genes(self, fdr: float) -> List[str]:
    return [g for g, hit in zip(self.genes, self.detected(fdr)) if hit]

  def to_frame(self, ranked: bool = True) -> pd.DataFrame:
    """Gene table: gene, statistic, meta_p, q, effective_mask (0/1 string, empty when absent)"""
    order = self.ranked_order() if ranked else np.arange(len(self.genes))
    if self.effective_mask is None:
      masks = [""] * len(order)
    else:
      masks = [mask_to_string(self.effective_mask[i]) for i in order]
    return pd.DataFrame({
      'gene': [self.genes[i] for i in order],
      'statistic': self.statistic[order],
      'meta_p': self.meta_p[order],
      'q': self.q_value[order],
      'effective_mask': masks,
    })

  def display_short(self) -> str:
    return f"{self.spec.label()} on {len(self.genes)} genes ({self.inference})"

  def __repr__(self) -> str:
    return f"MetaResult(spec={self.spec.label()!r}, n_genes={len(self.genes)}, inference='{self.inference}')"
