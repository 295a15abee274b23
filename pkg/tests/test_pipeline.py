#!/usr/bin/env python3

import json
import os

import numpy as np
import pandas as pd
from pytest import raises

import pipeline
from errors import ComputeError, ValidationError
from models import InferenceRoute, MetaMethodSpec, MetaMethods, RunConfig, SimConfig, VoteNull
from study_io import read_gene_table


def uniform_pvalues(rng, n_genes=300, K=4, n_signal=30):
    values = rng.uniform(size=(n_genes, K))
    values[:n_signal] = rng.uniform(size=(n_signal, K)) * 1e-4
    return {f'g{i:04d}': row for i, row in enumerate(values)}


def test_combine_writes_gene_table_and_manifest(tmp_path, write_pvalues, table1_genes):
    path = write_pvalues(table1_genes)
    config = RunConfig(str(tmp_path / 'out'), MetaMethodSpec.rop(4), pvalue_path=path)
    outputs = pipeline.run_pipeline(config)
    table = read_gene_table(outputs['gene_table'])
    assert table.columns.tolist() == ['gene', 'statistic', 'meta_p', 'q', 'effective_mask']
    assert table['gene'].tolist() == ['A', 'D', 'C', 'B']
    assert np.all(np.diff(table['meta_p']) >= 0)
    assert table['effective_mask'].tolist()[0] == '11110'
    with open(outputs['manifest']) as handle:
        manifest = json.load(handle)
    assert manifest['command'] == 'combine'
    assert manifest['config']['method'] == {'method': 'rOP', 'r': 4}
    assert list(manifest['inputs']) == [path]
    assert 'gene_table.tsv' in manifest['outputs']
    assert os.path.exists(tmp_path / 'out' / 'rop.combine.log')


def test_combine_with_automatic_r(tmp_path, rng, write_pvalues):
    path = write_pvalues(uniform_pvalues(rng))
    config = RunConfig(str(tmp_path), MetaMethodSpec(MetaMethods.ROP), pvalue_path=path, auto_select_r=True,
                       n_baseline_permutations=5, seed=11)
    outputs = pipeline.run_pipeline(config)
    counts = pd.read_csv(tmp_path / 'r_counts.tsv', sep='\t')
    selected = int(counts.loc[counts['selected'], 'r'].iloc[0])
    with open(outputs['manifest']) as handle:
        manifest = json.load(handle)
    assert manifest['config']['method']['r'] == selected
    assert 'r_counts.tsv' in manifest['outputs']


def test_failed_run_removes_partial_outputs(tmp_path, rng, write_pvalues, monkeypatch):
    def broken(matrix, spec):
        raise ComputeError('numerical failure')
    monkeypatch.setattr(pipeline, 'combine_matrix', broken)
    path = write_pvalues(uniform_pvalues(rng))
    config = RunConfig(str(tmp_path), MetaMethodSpec(MetaMethods.ROP), pvalue_path=path, auto_select_r=True,
                       n_baseline_permutations=3)
    with raises(ComputeError):
        pipeline.run_pipeline(config)
    assert not os.path.exists(tmp_path / 'r_counts.tsv')
    assert not os.path.exists(tmp_path / 'gene_table.tsv')


def test_expression_studies_with_permutation(tmp_path, rng, write_study):
    genes = [f'g{i}' for i in range(40)]
    labels = [0] * 5 + [1] * 5
    expression_paths, label_paths = [], []
    for k in range(3):
        expression = rng.normal(size=(40, 10))
        expression[:4, 5:] += 4.0
        expression_path, labels_path = write_study(f'S{k + 1}', genes, expression, labels)
        expression_paths.append(expression_path)
        label_paths.append(labels_path)
    config = RunConfig(str(tmp_path / 'out'), MetaMethodSpec.rop(2), expression_paths=expression_paths,
                       label_paths=label_paths, route=InferenceRoute.PERMUTATION, n_permutations=20, seed=5)
    table = read_gene_table(pipeline.run_pipeline(config)['gene_table'])
    assert len(table) == 40
    assert set(table['gene'].head(4)) == {'g0', 'g1', 'g2', 'g3'}
    assert table['meta_p'].min() >= 1 / (1 + 20 * 40)
    assert table['q'].between(0, 1).all()


def test_one_sided_expression_run(tmp_path, rng, write_study):
    genes = [f'g{i}' for i in range(20)]
    labels = [0] * 4 + [1] * 4
    paths = [write_study(f'T{k}', genes, rng.normal(size=(20, 8)), labels) for k in range(3)]
    config = RunConfig(str(tmp_path), MetaMethodSpec(MetaMethods.ROP_ONE_SIDED, r=2), one_sided=True,
                       expression_paths=[p[0] for p in paths], label_paths=[p[1] for p in paths])
    table = read_gene_table(pipeline.run_pipeline(config)['gene_table'])
    assert table['effective_mask'].str.count('1').eq(2).all()


def test_run_config_rules(tmp_path):
    with raises(ValidationError):
        RunConfig(str(tmp_path), MetaMethodSpec.rop(2))
    with raises(ValidationError):
        RunConfig(str(tmp_path), MetaMethodSpec(MetaMethods.ROP), pvalue_path='p.tsv')
    with raises(ValidationError):
        RunConfig(str(tmp_path), MetaMethodSpec.rop(2), pvalue_path='p.tsv', route=InferenceRoute.PERMUTATION)
    with raises(ValidationError):
        RunConfig(str(tmp_path), MetaMethodSpec(MetaMethods.FISHER), pvalue_path='p.tsv', auto_select_r=True)
    config = RunConfig.from_dict({'output_dir': 'x', 'pvalue_path': 'p.tsv', 'method': {'method': 'rOP', 'r': 3}})
    assert config.method.r == 3
    assert RunConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()


def test_vote_count_table(tmp_path, write_pvalues):
    path = write_pvalues({'g1': [0.01, 0.02, 0.5, 0.6, 0.7], 'g2': [0.3, 0.4, 0.5, 0.6, 0.7]})
    spec = MetaMethodSpec(MetaMethods.VOTE_COUNT, alpha_vc=0.05)
    outputs = pipeline.run_vote_count(path, str(tmp_path), spec)
    table = pd.read_csv(outputs['vote_count'], sep='\t')
    assert table.columns.tolist() == ['gene', 'votes', 'meta_p', 'q']
    assert table['votes'].tolist() == [2, 0]
    assert abs(table['meta_p'].iloc[0] - 0.02259) < 1e-5

    pi0 = MetaMethodSpec(MetaMethods.VOTE_COUNT, alpha_vc=0.05, pi0=0.5, vote_null=VoteNull.PI0)
    table = pd.read_csv(pipeline.run_vote_count(path, str(tmp_path), pi0)['vote_count'], sep='\t')
    assert abs(table['meta_p'].iloc[0] - 26 / 32) < 1e-12


def test_power_table(tmp_path):
    outputs = pipeline.run_power(str(tmp_path), 10, 'r', list(range(1, 11)), 0.05, 0.9, r0=6)
    table = pd.read_csv(outputs['power_curve'], sep='\t')
    assert table['r'].tolist() == list(range(1, 11))
    assert table['power'].between(0, 1).all()


def test_select_r_outputs(tmp_path, rng, write_pvalues, write_text):
    rows = uniform_pvalues(rng, n_genes=400, K=4, n_signal=100)
    path = write_pvalues(rows)
    genes = list(rows)
    gmt = '\n'.join(f'set{m}\tna\t' + '\t'.join(genes[m * 20:(m + 1) * 20]) for m in range(15)) + '\n'
    config = RunConfig(str(tmp_path / 'diag'), MetaMethodSpec(MetaMethods.ROP), pvalue_path=path,
                       auto_select_r=True, n_baseline_permutations=3, gene_set_path=write_text('sets.gmt', gmt),
                       top_u=5)
    outputs = pipeline.run_select_r(config)
    assert set(outputs) == {'r_committee', 'r_counts', 'r_enrichment', 'manifest'}
    counts = pd.read_csv(outputs['r_counts'], sep='\t')
    assert counts['r'].tolist() == [1, 2, 3, 4]
    enrichment = pd.read_csv(outputs['r_enrichment'], sep='\t')
    assert enrichment['r'].tolist() == [3, 4]
    assert not os.path.exists(tmp_path / 'diag' / 'gene_table.tsv')


def test_simulation_outputs(tmp_path):
    config = SimConfig(n_genes=150, n_clusters=3, cluster_size=10, n_studies=4, n_cases=5, n_controls=5,
                       n_de_genes=30, r_target=3, n_replicates=2, n_permutations=5, seed=1)
    outputs = pipeline.run_simulation(config, str(tmp_path), stability_r=(2, 3, 9))
    assert set(outputs) == {'bench_summary', 'bench_replicates', 'power_by_tg', 'r_stability',
                            'bench_report', 'manifest'}
    summary = pd.read_csv(outputs['bench_summary'], sep='\t')
    assert len(summary) == 8
    overlap = pd.read_csv(outputs['r_stability'], sep='\t', index_col=0)
    assert overlap.columns.tolist() == ['r=2', 'r=3']
    with open(outputs['bench_report']) as handle:
        assert json.load(handle)['n_replicates'] == 2


def test_rerun_from_manifest_reproduces_the_gene_table(tmp_path, rng, write_study):
    genes = [f'g{i}' for i in range(30)]
    labels = [0] * 4 + [1] * 4
    expression_paths, label_paths = [], []
    for k in range(3):
        expression = rng.normal(size=(30, 8))
        expression[:3, 4:] += 3.0
        expression_path, labels_path = write_study(f'R{k + 1}', genes, expression, labels)
        expression_paths.append(expression_path)
        label_paths.append(labels_path)
    config = RunConfig(str(tmp_path / 'first'), MetaMethodSpec.rop(2), expression_paths=expression_paths,
                       label_paths=label_paths, route=InferenceRoute.PERMUTATION, n_permutations=15, seed=21)
    first = pipeline.run_pipeline(config)
    with open(first['manifest']) as handle:
        settings = json.load(handle)['config']
    settings['output_dir'] = str(tmp_path / 'second')
    settings['processes'] = 2
    second = pipeline.run_pipeline(RunConfig.from_dict(settings))
    with open(first['gene_table'], 'rb') as a, open(second['gene_table'], 'rb') as b:
        assert a.read() == b.read()
