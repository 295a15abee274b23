#!/usr/bin/env python3

from typing import Dict, Any, List, Optional

from errors import ValidationError
from .method_spec import MetaMethodSpec
from .simulation import InferenceRoute

class RunConfig:
  """Everything `run_pipeline` needs: inputs, method, r mode, FDR, inference route, seed, outputs"""

  def __init__(self, output_dir: str, method: MetaMethodSpec, pvalue_path: Optional[str] = None,
               opposite_pvalue_path: Optional[str] = None,
               expression_paths: Optional[List[str]] = None, label_paths: Optional[List[str]] = None,
               one_sided: bool = False, auto_select_r: bool = False, fdr: float = 0.05,
               route: str = InferenceRoute.BH, n_permutations: int = 500,
               n_baseline_permutations: int = 100, seed: int = 0, gene_set_path: Optional[str] = None,
               min_set_size: int = 5, max_set_size: int = 500, top_u: int = 100,
               wilcoxon_sides: str = "right", processes: int = 1):
    self.output_dir = output_dir
    self.method = method
    self.pvalue_path = pvalue_path
    self.opposite_pvalue_path = opposite_pvalue_path
    self.expression_paths = list(expression_paths or [])
    self.label_paths = list(label_paths or [])
    self.one_sided = bool(one_sided)
    self.auto_select_r = bool(auto_select_r)
    self.fdr = float(fdr)
    self.route = route
    self.n_permutations = int(n_permutations)
    self.n_baseline_permutations = int(n_baseline_permutations)
    self.seed = int(seed)
    self.gene_set_path = gene_set_path
    self.min_set_size = int(min_set_size)
    self.max_set_size = int(max_set_size)
    self.top_u = int(top_u)
    self.wilcoxon_sides = wilcoxon_sides
    self.processes = int(processes)
    self._validate()

  def _validate(self):
    if self.route not in InferenceRoute.ALL:
      raise ValidationError(f"inference route must be one of {', '.join(InferenceRoute.ALL)}")
    has_pvalues = self.pvalue_path is not None
    has_studies = bool(self.expression_paths)
    if has_pvalues == has_studies:
      raise ValidationError("give either a p-value table or expression studies, not both or neither")
    if has_studies and len(self.expression_paths) != len(self.label_paths):
      raise ValidationError("every expression file needs a matching labels file")
    if self.route == InferenceRoute.PERMUTATION and not has_studies:
      raise ValidationError("label permutation needs expression studies, not precomputed p-values")
    if self.method.is_rop_family() and self.method.r is None and not self.auto_select_r:
      raise ValidationError("r is required unless automatic selection is requested")
    if self.auto_select_r and not self.method.is_rop_family():
      raise ValidationError("automatic r selection only applies to the rOP family")
    if self.wilcoxon_sides not in ("right", "two"):
      raise ValidationError(f"wilcoxon_sides must be 'right' or 'two', got {self.wilcoxon_sides!r}")
    if not 0 < self.fdr < 1:
      raise ValidationError(f"FDR level must lie in (0, 1), got {self.fdr}")

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
    values = dict(data)
    values['method'] = MetaMethodSpec.from_dict(values.get('method', {}))
    return cls(**values)

  def to_dict(self) -> Dict[str, Any]:
    return {
      'output_dir': self.output_dir,
      'method': self.method.to_dict(),
      'pvalue_path': self.pvalue_path,
      'opposite_pvalue_path': self.opposite_pvalue_path,
      'expression_paths': self.expression_paths,
      'label_paths': self.label_paths,
      'one_sided': self.one_sided,
      'auto_select_r': self.auto_select_r,
      'fdr': self.fdr,
      'route': self.route,
      'n_permutations': self.n_permutations,
      'n_baseline_permutations': self.n_baseline_permutations,
      'seed': self.seed,
      'gene_set_path': self.gene_set_path,
      'min_set_size': self.min_set_size,
      'max_set_size': self.max_set_size,
      'top_u': self.top_u,
      'wilcoxon_sides': self.wilcoxon_sides,
      'processes': self.processes,
    }

  def __repr__(self) -> str:
    return f"RunConfig(method={self.method.label()!r}, route='{self.route}', seed={self.seed})"
