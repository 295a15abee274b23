#!/usr/bin/env python3

from typing import Dict, Any, List, Optional
import numpy as np
import pandas as pd

from errors import ValidationError
from .method_spec import MetaMethodSpec

class InferenceRoute:
  BH = "parametric-BH"
  BY = "parametric-BY"
  PERMUTATION = "permutation"

  ALL = (BH, BY, PERMUTATION)

class SimConfig:
  """Parameters of the correlated-gene simulation and of the benchmark around it"""

  def __init__(self, n_genes: int = 10000, n_clusters: int = 200, cluster_size: int = 20,
               n_studies: int = 10, n_cases: int = 50, n_controls: int = 50,
               n_de_genes: int = 1000, effect_min: float = 0.5, effect_max: float = 1.0,
               consistent_sign: bool = False, wishart_df: float = 60, wishart_rho: float = 0.5,
               correlated: bool = True, fdr_level: float = 0.05, r_target: int = 6,
               n_replicates: int = 100, n_permutations: int = 500, seed: int = 0):
    self.n_genes = int(n_genes)
    self.n_clusters = int(n_clusters)
    self.cluster_size = int(cluster_size)
    self.n_studies = int(n_studies)
    self.n_cases = int(n_cases)
    self.n_controls = int(n_controls)
    self.n_de_genes = int(n_de_genes)
    self.effect_min = float(effect_min)
    self.effect_max = float(effect_max)
    self.consistent_sign = bool(consistent_sign)
    self.wishart_df = float(wishart_df)
    # scale matrix is (1 - rho) I + rho J
    self.wishart_rho = float(wishart_rho)
    self.correlated = bool(correlated)
    self.fdr_level = float(fdr_level)
    self.r_target = int(r_target)
    self.n_replicates = int(n_replicates)
    self.n_permutations = int(n_permutations)
    self.seed = int(seed)
    self._validate()

  def _validate(self):
    positive = {
      'n_genes': self.n_genes, 'n_studies': self.n_studies, 'n_cases': self.n_cases,
      'n_controls': self.n_controls, 'n_replicates': self.n_replicates,
      'n_permutations': self.n_permutations, 'cluster_size': self.cluster_size,
    }
    for name, value in positive.items():
      if value < 1:
        raise ValidationError(f"{name} must be positive, got {value}")
    if self.n_clusters < 0 or self.n_de_genes < 0:
      raise ValidationError("n_clusters and n_de_genes must be nonnegative")
    if self.n_clusters * self.cluster_size > self.n_genes:
      raise ValidationError(f"{self.n_clusters} clusters of {self.cluster_size} genes exceed {self.n_genes} genes")
    if self.n_de_genes > self.n_genes:
      raise ValidationError("n_de_genes cannot exceed n_genes")
    if self.wishart_df <= self.cluster_size - 1:
      raise ValidationError(f"wishart_df must exceed cluster_size - 1 = {self.cluster_size - 1}")
    if not 0 <= self.wishart_rho < 1:
      raise ValidationError("wishart_rho must lie in [0, 1)")
    if not 0 < self.effect_min <= self.effect_max:
      raise ValidationError("effect range must satisfy 0 < effect_min <= effect_max")
    if self.n_cases < 2 or self.n_controls < 2:
      raise ValidationError("each class needs at least 2 samples")
    if not 1 <= self.r_target <= self.n_studies:
      raise ValidationError(f"r_target must lie in [1, {self.n_studies}]")
    if not 0 < self.fdr_level < 1:
      raise ValidationError("fdr_level must lie in (0, 1)")

  @classmethod
  def desk_scale(cls, **overrides) -> 'SimConfig':
    values = dict(n_genes=2000, n_clusters=20, cluster_size=20, n_de_genes=200,
                  n_replicates=20, n_permutations=100)
    values.update(overrides)
    return cls(**values)

  @classmethod
  def full_scale(cls, **overrides) -> 'SimConfig':
    return cls(**overrides)

  @property
  def n_samples(self) -> int:
    return self.n_cases + self.n_controls

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> 'SimConfig':
    known = cls().to_dict()
    unknown = set(data) - set(known)
    if unknown:
      raise ValidationError(f"unknown simulation settings: {', '.join(sorted(unknown))}")
    return cls(**data)

  def to_dict(self) -> Dict[str, Any]:
    return {
      'n_genes': self.n_genes, 'n_clusters': self.n_clusters, 'cluster_size': self.cluster_size,
      'n_studies': self.n_studies, 'n_cases': self.n_cases, 'n_controls': self.n_controls,
      'n_de_genes': self.n_de_genes, 'effect_min': self.effect_min, 'effect_max': self.effect_max,
      'consistent_sign': self.consistent_sign, 'wishart_df': self.wishart_df,
      'wishart_rho': self.wishart_rho, 'correlated': self.correlated, 'fdr_level': self.fdr_level,
      'r_target': self.r_target, 'n_replicates': self.n_replicates,
      'n_permutations': self.n_permutations, 'seed': self.seed,
    }

  def __repr__(self) -> str:
    return f"SimConfig({self.to_dict()})"

class SimTruth:
  """Ground truth of one simulated dataset"""

  def __init__(self, t_g: np.ndarray, delta: np.ndarray, mu: np.ndarray, cluster: np.ndarray):
    self.t_g = np.asarray(t_g, dtype=int)
    # genes x studies DE indicators and effect sizes (mu is 0 where delta is 0)
    self.delta = np.asarray(delta, dtype=bool)
    self.mu = np.asarray(mu, dtype=float)
    # 0 = unclustered, 1..n_clusters otherwise
    self.cluster = np.asarray(cluster, dtype=int)

  @property
  def n_genes(self) -> int:
    return self.t_g.size

  def count_by_tg(self, n_studies: int) -> np.ndarray:
    return np.bincount(self.t_g, minlength=n_studies + 1)

class BenchMethod:
  """A combination method paired with the route used to control the FDR"""

  def __init__(self, spec: MetaMethodSpec, route: str = InferenceRoute.BH, label: Optional[str] = None):
    if route not in InferenceRoute.ALL:
      raise ValidationError(f"unknown inference route {route!r}")
    self.spec = spec
    self.route = route
    self.label = label or self._default_label()

  def _default_label(self) -> str:
    suffix = {InferenceRoute.BH: "BH", InferenceRoute.BY: "BY", InferenceRoute.PERMUTATION: "PA"}[self.route]
    return f"{self.spec.label()} [{suffix}]"

  def __repr__(self) -> str:
    return f"BenchMethod(label='{self.label}')"

class BenchReport:
  """Per-replicate FDR_1, FDR_2, detection counts and per-t_g detections for each method"""

  def __init__(self, labels: List[str], n_studies: int, r_target: int, fdr1: np.ndarray, fdr2: np.ndarray,
               n_detected: np.ndarray, detected_by_tg: np.ndarray, truth_by_tg: np.ndarray):
    self.labels = list(labels)
    self.n_studies = n_studies
    self.r_target = r_target
    # replicates x methods
    self.fdr1 = np.asarray(fdr1, dtype=float)
    self.fdr2 = np.asarray(fdr2, dtype=float)
    self.n_detected = np.asarray(n_detected, dtype=int)
    # replicates x methods x (K + 1)
    self.detected_by_tg = np.asarray(detected_by_tg, dtype=int)
    # replicates x (K + 1)
    self.truth_by_tg = np.asarray(truth_by_tg, dtype=int)

  @property
  def n_replicates(self) -> int:
    return self.fdr1.shape[0]

  def column(self, label: str) -> int:
    return self.labels.index(label)

  def summary_frame(self) -> pd.DataFrame:
    ddof = 1 if self.n_replicates > 1 else 0
    return pd.DataFrame({
      'method': self.labels,
      'fdr1_mean': self.fdr1.mean(axis=0),
      'fdr1_sd': self.fdr1.std(axis=0, ddof=ddof),
      'fdr2_mean': self.fdr2.mean(axis=0),
      'fdr2_sd': self.fdr2.std(axis=0, ddof=ddof),
      'detected_mean': self.n_detected.mean(axis=0),
    })

  def replicate_frame(self) -> pd.DataFrame:
    rows = []
    for b in range(self.n_replicates):
      for m, label in enumerate(self.labels):
        rows.append({'replicate': b, 'method': label, 'fdr1': self.fdr1[b, m],
                     'fdr2': self.fdr2[b, m], 'detected': self.n_detected[b, m]})
    return pd.DataFrame(rows)

  def to_dict(self) -> Dict[str, Any]:
    summary = self.summary_frame()
    return {
      'n_replicates': self.n_replicates,
      'r_target': self.r_target,
      'methods': summary.to_dict(orient='records'),
    }
