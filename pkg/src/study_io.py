#!/usr/bin/env python3

"""Reading studies, p-value tables and GMT files; writing TSV outputs and run manifests."""

import hashlib
import json
import os
import platform
from typing import Any, Dict, List, Optional, Sequence
import numpy as np
import pandas as pd
import scipy

from errors import ParseError, ValidationError
from logger import get_logger
from models import GeneSet, GeneSetCollection, PValueMatrix, Study, StudySet

_logger = get_logger("study_io")

FLOAT_FORMAT = "%.17g"
NA_TEXT = "NaN"

def _read_raw_table(path: str) -> pd.DataFrame:
  """Read a TSV as strings; line numbers follow the file (header = line 1)"""
  try:
    frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False, index_col=False)
  except FileNotFoundError:
    raise ParseError("file not found", path)
  except pd.errors.EmptyDataError:
    raise ParseError("file is empty", path)
  except pd.errors.ParserError as error:
    raise ParseError(str(error).strip(), path)
  if frame.shape[1] < 2:
    raise ParseError("expected a gene id column followed by at least one data column", path, 1)
  return frame

def _numeric_body(frame: pd.DataFrame, path: str) -> np.ndarray:
  """Convert every cell after the first column to float, reporting the first bad cell"""
  body = frame.iloc[:, 1:]
  values = body.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
  bad = np.isnan(values) & ~body.isin([NA_TEXT, "nan", "NA"]).to_numpy()
  if bad.any():
    row, column = np.argwhere(bad)[0]
    cell = body.iat[row, column]
    raise ParseError(f"non-numeric value {cell!r}", path, line=int(row) + 2, column=int(column) + 2)
  return values

def _gene_ids(frame: pd.DataFrame, path: str) -> List[str]:
  genes = [str(g) for g in frame.iloc[:, 0]]
  first_line = {}
  for i, gene in enumerate(genes):
    line = i + 2
    if gene == "":
      raise ParseError("empty gene identifier", path, line=line, column=1)
    if gene in first_line:
      raise ParseError(f"duplicate gene id {gene!r} (also on line {first_line[gene]})", path, line=line)
    first_line[gene] = line
  return genes

def load_labels(path: str) -> Dict[str, int]:
  """
  Read a sample -> class label file

  Two tab-separated columns per line: sample id and 0 (control) or 1 (case).
  A header line is allowed when its second field is not a label.
  """
  labels = {}
  try:
    with open(path, encoding="utf-8") as handle:
      lines = [line.rstrip("\r\n") for line in handle]
  except FileNotFoundError:
    raise ParseError("file not found", path)
  for number, line in enumerate(lines, start=1):
    if not line.strip():
      continue
    fields = line.split("\t")
    if len(fields) != 2:
      raise ParseError(f"expected 2 tab-separated fields, got {len(fields)}", path, line=number)
    sample, label = fields[0].strip(), fields[1].strip()
    if label not in ("0", "1"):
      if number == 1:
        continue
      raise ParseError(f"label must be 0 or 1, got {label!r}", path, line=number, column=2)
    if sample in labels:
      raise ParseError(f"duplicate sample id {sample!r}", path, line=number)
    labels[sample] = int(label)
  return labels

def load_study(expression_path: str, labels_path: str, study_id: Optional[str] = None) -> Study:
  """
  Load one study from an expression TSV and a labels file

  Args:
    expression_path: Header row of sample ids, first column gene ids, numeric body.
    labels_path: Sample id -> {0, 1} mapping.
    study_id: Defaults to the expression file name without extension.

  Returns:
    Study: the parsed study
  """
  frame = _read_raw_table(expression_path)
  genes = _gene_ids(frame, expression_path)
  values = _numeric_body(frame, expression_path)
  samples = [str(s) for s in frame.columns[1:]]
  labels = load_labels(labels_path)

  missing = [s for s in samples if s not in labels]
  if missing:
    raise ValidationError(f"{labels_path}: no label for samples {', '.join(missing)}")
  extra = [s for s in labels if s not in set(samples)]
  if extra:
    _logger.warning("%s: %d labelled samples not in the expression file", labels_path, len(extra))
  if np.isnan(values).any():
    raise ValidationError(f"{expression_path}: expression values must not be missing")

  study_id = study_id or os.path.splitext(os.path.basename(expression_path))[0]
  study = Study(study_id, genes, samples, values, [labels[s] for s in samples])
  _logger.info("loaded %s", study.display_short())
  return study

def load_studies(expression_paths: Sequence[str], label_paths: Sequence[str]) -> StudySet:
  if len(expression_paths) != len(label_paths):
    raise ValidationError(f"{len(expression_paths)} expression files but {len(label_paths)} label files")
  return StudySet([load_study(e, l) for e, l in zip(expression_paths, label_paths)])

def _pvalue_frame(path: str) -> pd.DataFrame:
  frame = _read_raw_table(path)
  genes = _gene_ids(frame, path)
  values = _numeric_body(frame, path)
  return pd.DataFrame(values, index=pd.Index(genes, name="gene"), columns=[str(c) for c in frame.columns[1:]])

def load_pvalue_matrix(path: str, opposite_path: Optional[str] = None) -> PValueMatrix:
  """Genes x studies p-value TSV; with opposite_path the pair is read as left/right one-sided p-values"""
  frame = _pvalue_frame(path)
  opposite = None
  if opposite_path:
    opposite = _pvalue_frame(opposite_path)
    if set(opposite.index) != set(frame.index) or set(opposite.columns) != set(frame.columns):
      raise ValidationError(f"{opposite_path} does not have the same genes and studies as {path}")
  matrix = PValueMatrix.from_frame(frame, opposite)
  _logger.info("loaded p-values: %s", matrix.display_short())
  return matrix

def load_gmt(path: str) -> GeneSetCollection:
  """Parse `name <TAB> description <TAB> gene1 <TAB> gene2 ...` lines"""
  gene_sets = []
  seen = set()
  try:
    with open(path, encoding="utf-8") as handle:
      for number, line in enumerate(handle, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
          continue
        fields = line.split("\t")
        if len(fields) < 3:
          raise ParseError("expected name, description and at least one gene", path, line=number)
        name = fields[0].strip()
        if not name:
          raise ParseError("empty gene set name", path, line=number, column=1)
        if name in seen:
          raise ParseError(f"duplicate gene set {name!r}", path, line=number)
        seen.add(name)
        genes = [g.strip() for g in fields[2:] if g.strip()]
        gene_sets.append(GeneSet(name, fields[1], genes))
  except FileNotFoundError:
    raise ParseError("file not found", path)
  _logger.info("%04d gene sets read from %s", len(gene_sets), path)
  return GeneSetCollection(gene_sets)

def write_table(frame: pd.DataFrame, path: str, index: bool = False):
  """TSV with 17 significant digits so that values read back identically"""
  frame.to_csv(path, sep="\t", index=index, float_format=FLOAT_FORMAT, na_rep=NA_TEXT, lineterminator="\n")

def read_gene_table(path: str) -> pd.DataFrame:
  """Read a ranked gene table written by write_table"""
  try:
    return pd.read_csv(path, sep="\t", dtype={'gene': str, 'effective_mask': str},
                       keep_default_na=False, na_values=[NA_TEXT], float_precision="round_trip")
  except FileNotFoundError:
    raise ParseError("file not found", path)
  except pd.errors.ParserError as error:
    raise ParseError(str(error).strip(), path)

def file_digest(path: str) -> str:
  sha = hashlib.sha256()
  with open(path, "rb") as handle:
    for chunk in iter(lambda: handle.read(1 << 20), b""):
      sha.update(chunk)
  return sha.hexdigest()

def write_manifest(path: str, command: str, config: Dict[str, Any], seed: int,
                   inputs: Sequence[str], outputs: Sequence[str] = ()):
  """Record what produced a set of outputs: config, seed, library versions and input digests"""
  manifest = {
    'command': command,
    'config': config,
    'seed': seed,
    'versions': {
      'python': platform.python_version(),
      'numpy': np.__version__,
      'scipy': scipy.__version__,
      'pandas': pd.__version__,
    },
    'inputs': {p: file_digest(p) for p in inputs},
    'outputs': [os.path.basename(p) for p in outputs],
  }
  with open(path, "w", encoding="utf-8") as handle:
    json.dump(manifest, handle, indent=2, sort_keys=True)
    handle.write("\n")
