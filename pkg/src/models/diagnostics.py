#!/usr/bin/env python3

from typing import Dict, List, Optional
import numpy as np
import pandas as pd

class RDiagnostics:
  """Detected-gene counts per r, their permutation baseline, and the detrended counts"""

  def __init__(self, r_values: List[int], n_detected: np.ndarray, baseline: np.ndarray,
               fdr_threshold: float, selected_r: int):
    self.r_values = list(r_values)
    self.n_detected = np.asarray(n_detected, dtype=int)
    # B x len(r_values) detected counts under within-study p-value shuffles
    self.baseline = np.asarray(baseline, dtype=float)
    self.fdr_threshold = fdr_threshold
    self.selected_r_counts = selected_r

  @property
  def baseline_mean(self) -> np.ndarray:
    return self.baseline.mean(axis=0)

  @property
  def baseline_sd(self) -> np.ndarray:
    if self.baseline.shape[0] < 2:
      return np.zeros(len(self.r_values))
    return self.baseline.std(axis=0, ddof=1)

  @property
  def n_prime(self) -> np.ndarray:
    return self.n_detected - self.baseline_mean

  def to_frame(self) -> pd.DataFrame:
    return pd.DataFrame({
      'r': self.r_values,
      'N_r': self.n_detected,
      'baseline_mean': self.baseline_mean,
      'baseline_sd': self.baseline_sd,
      'N_prime': self.n_prime,
    })

  def display_verbose(self) -> str:
    lines = [f"Adjusted DE counts (FDR <= {self.fdr_threshold:g}):"]
    for r, n, base, adjusted in zip(self.r_values, self.n_detected, self.baseline_mean, self.n_prime):
      marker = "  <- selected" if r == self.selected_r_counts else ""
      lines.append(f"  r={r:>2}  N_r={n:>6}  baseline={base:9.2f}  N'_r={adjusted:9.2f}{marker}")
    return "\n".join(lines)

class PathwayCommittee:
  """Audit trail of the pathway-association criterion for choosing r"""

  def __init__(self, r_values: List[int], pathway_names: List[str], enrichment_p: np.ndarray,
               ranks: np.ndarray, rank_sums: np.ndarray, top_pathways: List[int],
               sequential_p: Dict[int, float], selected_r: int, sides: str):
    self.r_values = list(r_values)
    self.pathway_names = list(pathway_names)
    # len(r_values) x P enrichment p-values p_{r,m} and their within-r ranks
    self.enrichment_p = np.asarray(enrichment_p, dtype=float)
    self.ranks = np.asarray(ranks, dtype=float)
    self.rank_sums = np.asarray(rank_sums, dtype=float)
    self.top_pathways = list(top_pathways)
    # r' -> p-value of the test between r' and r' - 1
    self.sequential_p = dict(sequential_p)
    self.selected_r_pathways = selected_r
    self.sides = sides

  @property
  def U(self) -> int:
    return len(self.top_pathways)

  def top_enrichment(self) -> np.ndarray:
    """len(r_values) x U enrichment p-values restricted to the committee set M"""
    return self.enrichment_p[:, self.top_pathways]

  def to_frame(self) -> pd.DataFrame:
    """Long table of p_{r,m}, R_{r,m} and S_m with committee membership"""
    in_committee = np.zeros(len(self.pathway_names), dtype=bool)
    in_committee[self.top_pathways] = True
    rows = []
    for i, r in enumerate(self.r_values):
      for m, name in enumerate(self.pathway_names):
        rows.append({'r': r, 'pathway': name, 'enrichment_p': self.enrichment_p[i, m],
                     'rank': self.ranks[i, m], 'rank_sum': self.rank_sums[m],
                     'in_committee': bool(in_committee[m])})
    return pd.DataFrame(rows)

  def display_verbose(self) -> str:
    lines = [f"Pathway committee: {len(self.pathway_names)} pathways, top U={self.U}"]
    for r_prime in sorted(self.sequential_p, reverse=True):
      lines.append(f"  r'={r_prime:>2} vs {r_prime - 1:>2}: p={self.sequential_p[r_prime]:.3g}")
    lines.append(f"  selected r = {self.selected_r_pathways}")
    return "\n".join(lines)

class DiagnosticsBundle:
  """Tabular plot data for the two r-selection diagnostics"""

  def __init__(self, counts: pd.DataFrame, enrichment: Optional[pd.DataFrame] = None):
    self.counts = counts
    self.enrichment = enrichment

  def tables(self) -> Dict[str, pd.DataFrame]:
    result = {'r_counts': self.counts}
    if self.enrichment is not None:
      result['r_enrichment'] = self.enrichment
    return result
