#!/usr/bin/env python3

import numpy as np
from pytest import mark, raises

from errors import CommitteeTooSmallError, ValidationError
from meta_combine import combine_matrix
from models import GeneSet, GeneSetCollection, MetaMethodSpec, PermutationPlan, PValueMatrix
from r_advisor import (committee_range, detected_counts, diagnostics_report, enrichment_pvalues,
                       select_largest_near_max, select_r_by_count, select_r_by_pathway)
from significance import apply_parametric


def as_matrix(values):
    genes = [f'g{i:05d}' for i in range(values.shape[0])]
    studies = [f'S{k + 1}' for k in range(values.shape[1])]
    return PValueMatrix(genes, studies, values)


def planted_count_matrix(seed, n_genes=5000, n_signal=500, K=10, n_de=6):
    rng = np.random.default_rng(seed)
    values = rng.uniform(size=(n_genes, K))
    for g in range(n_signal):
        studies = rng.choice(K, size=n_de, replace=False)
        values[g, studies] = rng.beta(0.05 / 0.95, 1, size=n_de)
    return as_matrix(values)


def pathway_data(seed, K=9, n_de=7, n_sets=60, set_size=25, n_signal_sets=20):
    """Disjoint gene sets; the genes of the first n_signal_sets sets are DE in n_de random studies"""
    rng = np.random.default_rng(seed)
    n_genes = n_sets * set_size + 500
    values = rng.uniform(size=(n_genes, K))
    for g in range(n_signal_sets * set_size):
        values[g, rng.choice(K, size=n_de, replace=False)] = rng.uniform(size=n_de) * 1e-8
    matrix = as_matrix(values)
    sets = [GeneSet(f'set{m:02d}', 'na', matrix.genes[m * set_size:(m + 1) * set_size]) for m in range(n_sets)]
    return matrix, GeneSetCollection(sets)


def random_sets(matrix, rng, n_sets=40, size=30):
    return GeneSetCollection([GeneSet(f'rand{m}', 'na', list(rng.choice(matrix.genes, size=size, replace=False)))
                              for m in range(n_sets)])


def test_largest_r_near_the_maximum_wins():
    assert select_largest_near_max(np.array([10.0, 100.0, 97.0, 60.0]), [1, 2, 3, 4]) == 3
    assert select_largest_near_max(np.array([10.0, 100.0, 90.0]), [1, 2, 3]) == 2
    assert select_largest_near_max(np.array([-5.0, -4.9, -8.0]), [1, 2, 3]) == 2


def test_count_criterion_identity_and_range(rng):
    matrix = as_matrix(rng.uniform(size=(300, 2)))
    diagnostics = select_r_by_count(matrix, PermutationPlan.for_pvalues(seed=1, B=5))
    assert diagnostics.r_values == [1, 2]
    np.testing.assert_allclose(diagnostics.n_prime + diagnostics.baseline_mean, diagnostics.n_detected, atol=1e-9)
    assert diagnostics.baseline.shape == (5, 2)


def test_count_criterion_on_null_data(rng):
    matrix = as_matrix(rng.uniform(size=(2000, 5)))
    diagnostics = select_r_by_count(matrix, PermutationPlan.for_pvalues(seed=2, B=20))
    assert np.all(np.abs(diagnostics.n_prime) <= 3 * diagnostics.baseline_sd + 2)


def test_count_criterion_reproduces_pipeline_counts():
    matrix = planted_count_matrix(0, n_genes=1000, n_signal=100)
    diagnostics = select_r_by_count(matrix, PermutationPlan.for_pvalues(seed=4, B=3))
    r = diagnostics.selected_r_counts
    result = apply_parametric(combine_matrix(matrix, MetaMethodSpec.rop(r)))
    assert result.n_detected(0.05) == diagnostics.n_detected[r - 1]
    np.testing.assert_array_equal(detected_counts(matrix.values, [r], 0.05), [diagnostics.n_detected[r - 1]])


def test_count_criterion_is_seeded(rng):
    matrix = as_matrix(rng.uniform(size=(200, 4)) ** 2)
    first = select_r_by_count(matrix, PermutationPlan.for_pvalues(seed=9, B=4))
    second = select_r_by_count(matrix, PermutationPlan.for_pvalues(seed=9, B=4))
    np.testing.assert_array_equal(first.baseline, second.baseline)


def test_count_criterion_checks_its_inputs(rng):
    matrix = as_matrix(rng.uniform(size=(20, 3)))
    with raises(ValidationError):
        select_r_by_count(matrix, PermutationPlan.for_labels(B=2))
    with raises(ValidationError):
        select_r_by_count(matrix, PermutationPlan.for_pvalues(B=2), fdr=1.0)


@mark.slow
def test_count_criterion_recovers_planted_r():
    hits = 0
    for seed in range(50):
        diagnostics = select_r_by_count(planted_count_matrix(seed), PermutationPlan.for_pvalues(seed=seed, B=20))
        hits += diagnostics.selected_r_counts in (5, 6, 7)
    assert hits >= 45


def test_committee_range():
    assert committee_range(7) == [4, 5, 6, 7]
    assert committee_range(10) == [6, 7, 8, 9, 10]
    assert committee_range(3) == [2, 3]


def test_enrichment_handles_empty_sides():
    gene_p = np.array([0.01, 0.02, 0.5, 0.7, 0.9])
    everything = np.ones(5, dtype=bool)
    low = np.array([True, True, False, False, False])
    result = enrichment_pvalues(gene_p, [everything, low])
    assert result[0] == 1.0
    assert result[1] < 1.0


def test_pathway_criterion_rank_integrity_and_floor():
    matrix, gene_sets = pathway_data(0)
    committee = select_r_by_pathway(matrix, gene_sets, U=20)
    P = len(gene_sets)
    np.testing.assert_allclose(committee.ranks.sum(axis=1), P * (P + 1) / 2)
    np.testing.assert_allclose(committee.rank_sums, committee.ranks.sum(axis=0))
    assert committee.r_values == [5, 6, 7, 8, 9]
    assert committee.U == 20
    assert committee.selected_r_pathways >= 5
    assert set(committee.top_pathways) == set(range(20))


def test_pathway_criterion_finds_planted_r():
    selected = [select_r_by_pathway(*pathway_data(seed), U=20).selected_r_pathways for seed in range(5)]
    assert sum(r in (6, 7, 8) for r in selected) >= 3


@mark.slow
def test_pathway_criterion_stops_at_k_on_random_sets():
    stops = 0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        matrix = as_matrix(rng.uniform(size=(2000, 6)))
        committee = select_r_by_pathway(matrix, random_sets(matrix, rng), U=20)
        stops += committee.selected_r_pathways == 6
    assert stops >= 16


def test_pathway_criterion_preconditions(rng):
    small = as_matrix(rng.uniform(size=(200, 2)))
    with raises(ValidationError):
        select_r_by_pathway(small, random_sets(small, rng))
    matrix = as_matrix(rng.uniform(size=(200, 4)))
    with raises(CommitteeTooSmallError):
        select_r_by_pathway(matrix, random_sets(matrix, rng, n_sets=4))
    tiny_sets = random_sets(matrix, rng, n_sets=10, size=3)
    with raises(CommitteeTooSmallError):
        select_r_by_pathway(matrix, tiny_sets)
    with raises(ValidationError):
        select_r_by_pathway(matrix, random_sets(matrix, rng), U=0)


def test_diagnostics_report_tables():
    matrix, gene_sets = pathway_data(1)
    counts = select_r_by_count(matrix, PermutationPlan.for_pvalues(seed=0, B=3))
    committee = select_r_by_pathway(matrix, gene_sets, U=20)
    bundle = diagnostics_report(counts, committee)
    tables = bundle.tables()
    assert list(tables['r_counts'].columns) == ['r', 'N_r', 'baseline_mean', 'baseline_sd', 'N_prime', 'selected']
    assert tables['r_counts']['selected'].sum() == 1
    enrichment = tables['r_enrichment']
    assert enrichment['r'].tolist() == committee.r_values
    assert np.all(enrichment['min'] <= enrichment['median'])
    assert np.all(enrichment['median'] <= enrichment['max'])
    # the lowest committee r is only ever the lower side of a test
    assert np.isnan(enrichment.loc[enrichment['r'] == 5, 'sequential_p']).all()
    assert enrichment['selected'].sum() == 1

    only_counts = diagnostics_report(counts).tables()
    assert set(only_counts) == {'r_counts'}

    other = as_matrix(np.random.default_rng(2).uniform(size=(100, 5)))
    with raises(ValidationError):
        diagnostics_report(select_r_by_count(other, PermutationPlan.for_pvalues(B=2)), committee)
