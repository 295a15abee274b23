#!/usr/bin/env python3

"""Multiple-testing control: BH and BY step-up procedures and the pooled label-permutation null."""

from multiprocessing import Pool
from typing import Dict, List, Sequence, Tuple
import numpy as np

from errors import DegenerateInputError, GeneRowError, ValidationError
from logger import get_logger
from meta_combine import combine_rows
from models import (MetaMethodSpec, MetaMethods, MetaResult, NullPool, Orientation,
                    PermutationPlan, PermutationScope, PValueMatrix, StudySet)
from models.simulation import InferenceRoute
from rng import SeededStreams
from stat_kernel import Sides, welch_t_rows

_logger = get_logger("significance")

def _step_up(pvals: Sequence[float], inflation: float) -> np.ndarray:
    values = np.asarray(pvals, dtype=float)
    if values.ndim != 1:
        raise ValidationError("expected a vector of p-values")
    if np.any(np.isnan(values)) or np.any((values < 0) | (values > 1)):
        raise ValidationError("p-values must lie in [0, 1]")
    n = values.size
    if n == 0:
        return values.copy()
    order = np.argsort(values, kind="stable")
    ranked = values[order] * n * inflation / np.arange(1, n + 1)
    # q_(i) = min over j >= i
    ranked = np.minimum.accumulate(ranked[::-1])[::-1]
    q_values = np.empty(n)
    q_values[order] = np.minimum(ranked, 1.0)
    return q_values

def bh_adjust(pvals: Sequence[float]) -> np.ndarray:
    """Benjamini-Hochberg q-values"""
    return _step_up(pvals, 1.0)

def by_adjust(pvals: Sequence[float]) -> np.ndarray:
    """Benjamini-Yekutieli q-values: BH inflated by sum_{i<=G} 1/i"""
    n = len(pvals)
    harmonic = float(np.sum(1.0 / np.arange(1, n + 1))) if n else 1.0
    return _step_up(pvals, harmonic)

def apply_parametric(result: MetaResult, route: str = InferenceRoute.BH) -> MetaResult:
    """Fill q-values of a combined result from its parametric meta p-values"""
    if route == InferenceRoute.BH:
        result.q_value = bh_adjust(result.meta_p)
    elif route == InferenceRoute.BY:
        result.q_value = by_adjust(result.meta_p)
    else:
        raise ValidationError(f"{route} is not a parametric route")
    result.inference = route
    return result

# Label permutation

_WORKER_STATE: Dict[str, object] = {}

def _init_worker(expressions: List[np.ndarray], labels: List[np.ndarray], spec: dict,
                 seed: int, sides: str):
    _WORKER_STATE.update(expressions=expressions, labels=labels, spec=MetaMethodSpec.from_dict(spec),
                         streams=SeededStreams(seed), sides=sides)

def study_pvalues(expression: np.ndarray, labels: np.ndarray, sides: str) -> np.ndarray:
    """Per-gene Welch p-values of one study; cases (label 1) against controls (label 0)"""
    cases = expression[:, labels == 1]
    controls = expression[:, labels == 0]
    return welch_t_rows(cases, controls, sides)

def de_test_all(studies: StudySet, sides: str = Sides.TWO, one_sided_pair: bool = False) -> PValueMatrix:
    """
    Welch tests for every gene of every study

    Args:
      studies: Studies sharing one gene universe.
      sides: Tail of the per-study test when not building a one-sided pair.
      one_sided_pair: Return left-tail p-values with their right-tail complements.

    Returns:
      PValueMatrix: genes x studies
    """
    tail = Sides.LEFT if one_sided_pair else sides
    columns = [study_pvalues(s.expression, s.labels, tail) for s in studies]
    values = np.column_stack(columns)
    degenerate = np.isnan(values)
    if degenerate.any():
        row, column = np.argwhere(degenerate)[0]
        cause = DegenerateInputError(f"zero variance in a class of study {studies.study_ids[column]}")
        raise GeneRowError(studies.genes[row], cause)
    if one_sided_pair:
        return PValueMatrix.one_sided(studies.genes, studies.study_ids, values)
    return PValueMatrix(studies.genes, studies.study_ids, values)

def _permutation_worker(b: int) -> np.ndarray:
    state = _WORKER_STATE
    rng = state['streams'].generator(b)
    columns = []
    for expression, labels in zip(state['expressions'], state['labels']):
        columns.append(study_pvalues(expression, rng.permutation(labels), state['sides']))
    values = np.column_stack(columns)
    degenerate = np.isnan(values)
    if degenerate.any():
        _logger.warning("permutation %d: %d degenerate tests set to p = 1", b, int(degenerate.sum()))
        values[degenerate] = 1.0
    spec = state['spec']
    opposite = 1.0 - values if spec.method == MetaMethods.ROP_ONE_SIDED else None
    statistic, _ = combine_rows(spec, values, opposite)
    return statistic

def permute_labels(studies: StudySet, plan: PermutationPlan, combiner: MetaMethodSpec,
                   sides: str = Sides.TWO, processes: int = 1) -> NullPool:
    """
    Null combined statistics from within-study class-label permutations

    Permutation b draws from its own seeded stream, so the pool is identical
    for any number of worker processes.

    Args:
      studies: Studies with expression values and binary labels.
      plan: Permutation plan with scope class_labels_within_study.
      combiner: Method whose statistic is recomputed on every permutation.
      sides: Per-study test tail; one-sided rOP always uses the left/right pair.
      processes: Worker processes; 1 runs in the calling process.

    Returns:
      NullPool: B x G null statistics oriented like `combiner`
    """
    plan.require_scope(PermutationScope.CLASS_LABELS)
    for study in studies:
        controls, cases = study.class_sizes()
        if controls < 2 or cases < 2:
            raise ValidationError(f"study {study.study_id} needs at least 2 samples per class")
    if combiner.method == MetaMethods.ROP_ONE_SIDED:
        sides = Sides.LEFT
    init_args = ([s.expression for s in studies], [s.labels for s in studies],
                 combiner.to_dict(), plan.seed, sides)
    _logger.info("running %d label permutations of %d studies (%s)", plan.B, len(studies), combiner.label())

    if processes > 1:
        with Pool(processes, initializer=_init_worker, initargs=init_args) as pool:
            rows = pool.map(_permutation_worker, range(plan.B))
    else:
        _init_worker(*init_args)
        try:
            rows = [_permutation_worker(b) for b in range(plan.B)]
        finally:
            _WORKER_STATE.clear()
    return NullPool(np.vstack(rows), combiner.orientation)

def pool_pvalues(observed: Sequence[float], pool: NullPool) -> Tuple[np.ndarray, np.ndarray]:
    """
    p-values and q-values of observed statistics against a pooled null

    meta_p_g = (1 + #{null values at least as extreme}) / (1 + G * B)
    q_g      = ((1 + null count at least as extreme) / (1 + B)) / #{observed at least as extreme},
               made monotone in significance order and capped at 1.
    """
    if pool.size == 0:
        raise ValidationError("null pool is empty")
    observed = np.asarray(observed, dtype=float)
    null = pool.values.ravel()
    if pool.orientation == Orientation.LARGE_IS_SIGNIFICANT:
        # negate so that small is always extreme
        observed, null = -observed, -null
    null_sorted = np.sort(null)
    observed_sorted = np.sort(observed)

    null_extreme = np.searchsorted(null_sorted, observed, side="right")
    meta_p = (1.0 + null_extreme) / (1.0 + null.size)

    observed_extreme = np.searchsorted(observed_sorted, observed, side="right")
    fdr = ((1.0 + null_extreme) / (1.0 + pool.B)) / observed_extreme
    order = np.argsort(observed, kind="stable")
    monotone = np.minimum.accumulate(fdr[order][::-1])[::-1]
    q_values = np.empty_like(fdr)
    q_values[order] = np.minimum(monotone, 1.0)
    return np.clip(meta_p, 0.0, 1.0), q_values

def apply_permutation(result: MetaResult, pool: NullPool) -> MetaResult:
    if pool.orientation != result.spec.orientation:
        raise ValidationError("null pool orientation does not match the combination method")
    result.meta_p, result.q_value = pool_pvalues(result.statistic, pool)
    result.inference = InferenceRoute.PERMUTATION
    return result
