#!/usr/bin/env python3

from .pvalue_matrix import PValueMatrix, Sidedness
from .method_spec import MetaMethodSpec, MetaMethods, Orientation, VoteNull
from .meta_result import MetaResult, GeneRecord, mask_to_string
from .study import Study, StudySet
from .gene_sets import GeneSet, GeneSetCollection
from .permutation import PermutationPlan, PermutationScope, NullPool
from .diagnostics import RDiagnostics, PathwayCommittee, DiagnosticsBundle
from .power_spec import PowerSpec
from .simulation import SimConfig, SimTruth, BenchMethod, BenchReport, InferenceRoute
from .run_config import RunConfig

__all__ = ['PValueMatrix', 'Sidedness', 'MetaMethodSpec', 'MetaMethods', 'Orientation', 'VoteNull',
           'MetaResult', 'GeneRecord', 'mask_to_string', 'Study', 'StudySet',
           'GeneSet', 'GeneSetCollection', 'PermutationPlan', 'PermutationScope', 'NullPool',
           'RDiagnostics', 'PathwayCommittee', 'DiagnosticsBundle', 'PowerSpec', 'SimConfig',
           'SimTruth', 'BenchMethod', 'BenchReport', 'InferenceRoute', 'RunConfig']
