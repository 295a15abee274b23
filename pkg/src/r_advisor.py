#!/usr/bin/env python3

"""Data-driven choice of r: detrended DE counts and the pathway-association committee."""

from typing import List, Optional
import numpy as np
import pandas as pd
from scipy.stats import rankdata

from errors import CommitteeTooSmallError, TooFewPairsError, ValidationError
from logger import get_logger
from models import (DiagnosticsBundle, GeneSetCollection, PathwayCommittee, PermutationPlan,
                    PermutationScope, PValueMatrix, RDiagnostics)
from rng import SeededStreams
from significance import bh_adjust
from stat_kernel import Sides, beta_cdf, ks_two_sample, wilcoxon_signed_rank

_logger = get_logger("r_advisor")

NEAR_MAX_FRACTION = 0.05
MIN_COMMITTEE = 5
SEQUENTIAL_LEVEL = 0.05

def rop_pvalues_by_r(values: np.ndarray, r_values: List[int]) -> np.ndarray:
    """len(r_values) x G parametric rOP p-values, sorting each gene once"""
    K = values.shape[1]
    ordered = np.sort(values, axis=1)
    return np.vstack([beta_cdf(ordered[:, r - 1], r, K - r + 1) for r in r_values])

def detected_counts(values: np.ndarray, r_values: List[int], fdr: float) -> np.ndarray:
    """Number of genes with BH q <= fdr under rOP(r), for each r"""
    meta = rop_pvalues_by_r(values, r_values)
    return np.array([int(np.sum(bh_adjust(row) <= fdr)) for row in meta])

def select_largest_near_max(scores: np.ndarray, r_values: List[int],
                            fraction: float = NEAR_MAX_FRACTION) -> int:
    """Largest r whose score is within `fraction` of the maximum score"""
    best = float(np.max(scores))
    cutoff = best - fraction * abs(best)
    candidates = [r for r, score in zip(r_values, scores) if score >= cutoff]
    return max(candidates)

def select_r_by_count(matrix: PValueMatrix, plan: Optional[PermutationPlan] = None,
                      fdr: float = 0.05) -> RDiagnostics:
    """
    Choose r by maximizing the detrended number of detected genes

    The baseline comes from B matrices in which each study's p-values are
    shuffled across genes independently, which keeps every study's marginal
    distribution but destroys agreement between studies.

    Args:
      matrix: Per-study p-values.
      plan: Permutation plan with scope pvalues_across_genes_within_study (default B = 100, seed 0).
      fdr: FDR level used to count detections.

    Returns:
      RDiagnostics: N_r, baseline counts and N'_r for r = 1..K with the selected r
    """
    if plan is None:
        plan = PermutationPlan.for_pvalues()
    plan.require_scope(PermutationScope.PVALUES)
    if not 0 < fdr < 1:
        raise ValidationError(f"FDR level must lie in (0, 1), got {fdr}")
    values = matrix.two_sided_values()
    r_values = list(range(1, matrix.n_studies + 1))

    observed = detected_counts(values, r_values, fdr)
    streams = SeededStreams(plan.seed)
    baseline = np.empty((plan.B, len(r_values)))
    for b in range(plan.B):
        shuffled = streams.generator(b).permuted(values, axis=0)
        baseline[b] = detected_counts(shuffled, r_values, fdr)
        _logger.debug("baseline permutation %d/%d done", b + 1, plan.B)

    n_prime = observed - baseline.mean(axis=0)
    selected = select_largest_near_max(n_prime, r_values)
    _logger.info("count criterion selected r=%d (N'_r max %.1f)", selected, float(np.max(n_prime)))
    return RDiagnostics(r_values, observed, baseline, fdr, selected)

def committee_range(K: int) -> List[int]:
    return list(range(K // 2 + 1, K + 1))

def enrichment_pvalues(gene_pvalues: np.ndarray, memberships: List[np.ndarray]) -> np.ndarray:
    """KS p-value per gene set comparing in-set against out-of-set gene p-values"""
    result = np.ones(len(memberships))
    for m, inside in enumerate(memberships):
        outside = ~inside
        if inside.any() and outside.any():
            result[m] = ks_two_sample(gene_pvalues[inside], gene_pvalues[outside]).pvalue
    return result

def select_r_by_pathway(matrix: PValueMatrix, gene_sets: GeneSetCollection, U: int = 100,
                        sides: str = Sides.RIGHT, level: float = SEQUENTIAL_LEVEL,
                        min_size: int = GeneSetCollection.DEFAULT_MIN_SIZE,
                        max_size: int = GeneSetCollection.DEFAULT_MAX_SIZE) -> PathwayCommittee:
    """
    Choose r from pathway enrichment

    Step I ranks every pathway's KS enrichment p-value within each committee
    r in [K//2 + 1, K], sums the ranks and keeps the U pathways with the
    smallest sums. Step II starts at r' = K and moves to r' - 1 while a
    signed-rank test on the committee pathways finds the enrichment at
    r' - 1 significantly stronger than at r'.

    Args:
      matrix: Per-study p-values (K >= 3).
      gene_sets: Gene sets; they are intersected with the matrix genes here.
      U: Committee size.
      sides: "right" tests p_{r'} > p_{r'-1} (improvement when lowering r), "two" ignores direction.
      level: Rejection level of each sequential test, uncorrected.

    Returns:
      PathwayCommittee: enrichment p-values, ranks, rank sums, committee, sequential p-values and r'
    """
    K = matrix.n_studies
    if K < 3:
        raise ValidationError("the pathway criterion needs at least 3 studies")
    if U < 1:
        raise ValidationError(f"U must be positive, got {U}")
    usable = gene_sets.intersect(matrix.genes, min_size, max_size)
    if len(usable) < MIN_COMMITTEE:
        raise CommitteeTooSmallError(f"only {len(usable)} usable gene sets, need at least {MIN_COMMITTEE}")

    r_values = committee_range(K)
    memberships = usable.membership(matrix.genes)
    gene_p = rop_pvalues_by_r(matrix.two_sided_values(), r_values)
    enrichment = np.vstack([enrichment_pvalues(row, memberships) for row in gene_p])
    ranks = np.vstack([rankdata(row, method="average") for row in enrichment])
    rank_sums = ranks.sum(axis=0)
    top = [int(m) for m in np.argsort(rank_sums, kind="stable")[:min(U, len(usable))]]

    position = {r: i for i, r in enumerate(r_values)}
    sequential = {}
    selected = K
    while selected - 1 >= r_values[0]:
        current = enrichment[position[selected], top]
        lowered = enrichment[position[selected - 1], top]
        try:
            p = wilcoxon_signed_rank(current, lowered, sides=sides).pvalue
        except TooFewPairsError as error:
            _logger.warning("sequential test at r'=%d skipped: %s", selected, error)
            p = 1.0
        sequential[selected] = p
        if p >= level:
            break
        selected -= 1

    _logger.info("pathway criterion selected r=%d from %d committee pathways", selected, len(top))
    return PathwayCommittee(r_values, usable.names, enrichment, ranks, rank_sums, top,
                            sequential, selected, sides)

def _five_numbers(values: np.ndarray) -> dict:
    q = np.percentile(values, [0, 25, 50, 75, 100])
    return {'min': q[0], 'q1': q[1], 'median': q[2], 'q3': q[3], 'max': q[4]}

def diagnostics_report(counts: RDiagnostics, committee: Optional[PathwayCommittee] = None) -> DiagnosticsBundle:
    """Plot-ready tables: r vs N_r / baseline / N'_r, and committee -log10 enrichment summaries"""
    enrichment = None
    if committee is not None:
        if max(committee.r_values) != max(counts.r_values):
            raise ValidationError("the two diagnostics were computed on different matrices")
        rows = []
        top = committee.top_enrichment()
        for i, r in enumerate(committee.r_values):
            scores = -np.log10(np.maximum(top[i], np.finfo(float).tiny))
            row = {'r': r}
            row.update(_five_numbers(scores))
            row['sequential_p'] = committee.sequential_p.get(r, np.nan)
            row['selected'] = r == committee.selected_r_pathways
            rows.append(row)
        enrichment = pd.DataFrame(rows)
    table = counts.to_frame()
    table['selected'] = table['r'] == counts.selected_r_counts
    return DiagnosticsBundle(table, enrichment)
