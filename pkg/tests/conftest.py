#!/usr/bin/env python3

import logging

import numpy as np
import pytest

from logger import LOGGER_NAME


@pytest.fixture
def rng():
    return np.random.default_rng(20121212)


@pytest.fixture(autouse=True)
def reset_rop_logger():
    yield
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture
def write_text(tmp_path):
    """Write `text` to tmp_path / name and return the path as a string"""
    def write(name, text):
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8', newline='')
        return str(path)
    return write


@pytest.fixture
def write_pvalues(write_text):
    """Genes x studies p-value TSV from a dict gene -> list of p-values"""
    def write(rows, studies=None, name='pvalues.tsv'):
        width = len(next(iter(rows.values())))
        studies = studies or [f'S{k + 1}' for k in range(width)]
        lines = ['gene\t' + '\t'.join(studies)]
        for gene, values in rows.items():
            lines.append(gene + '\t' + '\t'.join(repr(float(v)) for v in values))
        return write_text(name, '\n'.join(lines) + '\n')
    return write


@pytest.fixture
def write_study(write_text):
    """Expression TSV plus labels file for one study; returns (expression_path, labels_path)"""
    def write(study_id, genes, expression, labels):
        samples = [f'{study_id}_s{i + 1}' for i in range(len(labels))]
        lines = ['gene\t' + '\t'.join(samples)]
        for gene, row in zip(genes, expression):
            lines.append(gene + '\t' + '\t'.join(repr(float(v)) for v in row))
        expression_path = write_text(f'{study_id}.tsv', '\n'.join(lines) + '\n')
        label_lines = ['sample\tlabel'] + [f'{s}\t{int(l)}' for s, l in zip(samples, labels)]
        labels_path = write_text(f'{study_id}.labels.tsv', '\n'.join(label_lines) + '\n')
        return expression_path, labels_path
    return write


@pytest.fixture
def table1_genes():
    return {
        'A': [0.1] * 5,
        'B': [1e-20, 0.9, 0.9, 0.9, 0.9],
        'C': [0.25] * 5,
        'D': [0.15, 0.15, 0.15, 0.15, 0.9],
    }
