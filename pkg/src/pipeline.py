#!/usr/bin/env python3

"""End-to-end runs behind the CLI commands: load, select r, combine, control the FDR, write outputs."""

import json
import os
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from logger import get_logger, log_init
from meta_combine import combine_matrix
from models import (GeneSetCollection, MetaMethodSpec, MetaResult, PermutationPlan, PValueMatrix,
                    RunConfig, SimConfig, StudySet)
from models.simulation import InferenceRoute
from power_lab import power_curve
from r_advisor import diagnostics_report, select_r_by_count, select_r_by_pathway
from sim_bench import per_tg_power, r_stability, run_benchmark
from significance import apply_parametric, apply_permutation, de_test_all, permute_labels
from stat_kernel import Sides
from study_io import load_gmt, load_pvalue_matrix, load_studies, write_manifest, write_table

_logger = get_logger("pipeline")

class OutputFiles:
  """Paths written by one run; removed again when the run fails"""

  def __init__(self, output_dir: str):
    self.output_dir = output_dir
    self.paths: List[str] = []

  def path(self, name: str) -> str:
    full = os.path.join(self.output_dir, name)
    self.paths.append(full)
    return full

  def remove_all(self):
    for path in self.paths:
      if os.path.exists(path):
        os.remove(path)
        _logger.debug("removed partial output %s", path)

@contextmanager
def tracked_outputs(output_dir: str, command: str) -> Iterator[OutputFiles]:
  os.makedirs(output_dir, exist_ok=True)
  log_init(os.path.join(output_dir, f"rop.{command}.log"))
  outputs = OutputFiles(output_dir)
  try:
    yield outputs
  except Exception:
    _logger.error("%s failed; removing %d partial outputs", command, len(outputs.paths))
    outputs.remove_all()
    raise

def load_inputs(config: RunConfig) -> Tuple[PValueMatrix, Optional[StudySet], List[str]]:
  """The p-value matrix of a run, the studies it came from (expression mode) and the input files"""
  if config.pvalue_path:
    matrix = load_pvalue_matrix(config.pvalue_path, config.opposite_pvalue_path)
    inputs = [config.pvalue_path] + ([config.opposite_pvalue_path] if config.opposite_pvalue_path else [])
    return matrix, None, inputs
  studies = load_studies(config.expression_paths, config.label_paths)
  matrix = de_test_all(studies, one_sided_pair=config.one_sided)
  return matrix, studies, config.expression_paths + config.label_paths

def _committee_sides(config: RunConfig) -> str:
  return Sides.RIGHT if config.wilcoxon_sides == "right" else Sides.TWO

def write_r_diagnostics(matrix: PValueMatrix, config: RunConfig, outputs: OutputFiles,
                        gene_sets: Optional[GeneSetCollection] = None):
  """Run both r criteria (the pathway one only with gene sets) and write their tables"""
  plan = PermutationPlan.for_pvalues(seed=config.seed, B=config.n_baseline_permutations)
  counts = select_r_by_count(matrix, plan, config.fdr)
  committee = None
  if gene_sets is not None:
    committee = select_r_by_pathway(matrix, gene_sets, config.top_u, _committee_sides(config),
                                    min_size=config.min_set_size, max_size=config.max_set_size)
    write_table(committee.to_frame(), outputs.path("r_committee.tsv"))
  for name, table in diagnostics_report(counts, committee).tables().items():
    write_table(table, outputs.path(f"{name}.tsv"))
  return counts, committee

def infer(result: MetaResult, config: RunConfig, studies: Optional[StudySet]) -> MetaResult:
  if config.route != InferenceRoute.PERMUTATION:
    return apply_parametric(result, config.route)
  plan = PermutationPlan.for_labels(seed=config.seed, B=config.n_permutations)
  pool = permute_labels(studies, plan, result.spec, processes=config.processes)
  return apply_permutation(result, pool)

def run_pipeline(config: RunConfig, command: str = "combine") -> Dict[str, str]:
  """
  Full analysis: optional r selection, combination, FDR control and writers

  Args:
    config: Run settings.
    command: Name used for the log file.

  Returns:
    Dict[str, str]: output kind -> path
  """
  with tracked_outputs(config.output_dir, command) as outputs:
    matrix, studies, inputs = load_inputs(config)
    spec = config.method
    gene_sets = load_gmt(config.gene_set_path) if config.gene_set_path else None
    if config.auto_select_r or gene_sets is not None:
      counts, committee = write_r_diagnostics(matrix, config, outputs, gene_sets)
      if committee is not None:
        _logger.info("r suggested by counts: %d, by pathways: %d",
                     counts.selected_r_counts, committee.selected_r_pathways)
      if config.auto_select_r:
        spec = spec.with_r(counts.selected_r_counts)
        _logger.info("using r=%d from the count criterion", spec.r)

    result = infer(combine_matrix(matrix, spec), config, studies)
    gene_table = outputs.path("gene_table.tsv")
    write_table(result.to_frame(), gene_table)
    _logger.info("%d genes detected at FDR %g with %s (%s)", result.n_detected(config.fdr), config.fdr,
                 spec.label(), result.inference)

    manifest = outputs.path("manifest.json")
    settings = config.to_dict()
    settings['method'] = spec.to_dict()
    write_manifest(manifest, command, settings, config.seed, inputs, outputs.paths)
    return {'gene_table': gene_table, 'manifest': manifest}

def run_select_r(config: RunConfig) -> Dict[str, str]:
  """r diagnostics only; nothing is combined"""
  with tracked_outputs(config.output_dir, "select-r") as outputs:
    matrix, _, inputs = load_inputs(config)
    gene_sets = load_gmt(config.gene_set_path) if config.gene_set_path else None
    counts, committee = write_r_diagnostics(matrix, config, outputs, gene_sets)
    print(counts.display_verbose())
    if committee is not None:
      print(committee.display_verbose())
    manifest = outputs.path("manifest.json")
    write_manifest(manifest, "select-r", config.to_dict(), config.seed, inputs, outputs.paths)
    return {os.path.splitext(os.path.basename(p))[0]: p for p in outputs.paths}

def run_vote_count(pvalue_path: str, output_dir: str, spec: MetaMethodSpec, fdr: float = 0.05) -> Dict[str, str]:
  """Vote counting per gene with BH q-values"""
  with tracked_outputs(output_dir, "vote-count") as outputs:
    matrix = load_pvalue_matrix(pvalue_path)
    result = apply_parametric(combine_matrix(matrix, spec))
    frame = result.to_frame().drop(columns=['effective_mask']).rename(columns={'statistic': 'votes'})
    frame['votes'] = frame['votes'].astype(int)
    table = outputs.path("vote_count.tsv")
    write_table(frame, table)
    _logger.info("%d genes detected at FDR %g by %s", result.n_detected(fdr), fdr, spec.label())
    manifest = outputs.path("manifest.json")
    write_manifest(manifest, "vote-count", {'method': spec.to_dict(), 'fdr': fdr}, 0, [pvalue_path], outputs.paths)
    return {'vote_count': table, 'manifest': manifest}

def run_power(output_dir: str, K: int, vary: str, values: Sequence[int], alpha: float, beta_prime: float,
              r: Optional[int] = None, r0: Optional[int] = None, theta: Optional[float] = None,
              n_per_group: Optional[int] = None) -> Dict[str, str]:
  with tracked_outputs(output_dir, "power") as outputs:
    table = outputs.path("power_curve.tsv")
    curve = power_curve(K, vary, values, alpha, beta_prime, r=r, r0=r0, theta=theta, n_per_group=n_per_group)
    write_table(curve, table)
    return {'power_curve': table}

def run_simulation(config: SimConfig, output_dir: str, processes: int = 1,
                   stability_r: Sequence[int] = (5, 6, 7)) -> Dict[str, str]:
  """Benchmark run: summary, per-replicate and per-t_g tables, r overlap and a JSON summary"""
  with tracked_outputs(output_dir, "simulate") as outputs:
    report = run_benchmark(config, processes=processes)
    write_table(report.summary_frame(), outputs.path("bench_summary.tsv"))
    write_table(report.replicate_frame(), outputs.path("bench_replicates.tsv"))
    write_table(per_tg_power(report), outputs.path("power_by_tg.tsv"))
    stability_r = [r for r in stability_r if 1 <= r <= config.n_studies]
    if stability_r:
      overlap = r_stability(config, stability_r, processes=processes)
      write_table(overlap, outputs.path("r_stability.tsv"), index=True)
    summary = outputs.path("bench_report.json")
    with open(summary, "w", encoding="utf-8") as handle:
      json.dump(report.to_dict(), handle, indent=2)
      handle.write("\n")
    manifest = outputs.path("manifest.json")
    write_manifest(manifest, "simulate", config.to_dict(), config.seed, [], outputs.paths)
    return {os.path.splitext(os.path.basename(p))[0]: p for p in outputs.paths}
