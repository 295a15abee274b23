#!/usr/bin/env python3

from typing import List, Optional, Sequence
import numpy as np

from errors import ValidationError
from logger import get_logger

_logger = get_logger("study")

class Study:
  """One study: genes x samples expression matrix with binary class labels (1 = case, 0 = control)"""

  def __init__(self, study_id: str, genes: Sequence[str], samples: Sequence[str],
               expression: np.ndarray, labels: Sequence[int]):
    self.study_id = study_id
    self.genes = [str(g) for g in genes]
    self.samples = [str(s) for s in samples]
    self.expression = np.asarray(expression, dtype=float)
    self.labels = np.asarray(labels, dtype=int)
    self._validate()

  def _validate(self):
    if self.expression.shape != (len(self.genes), len(self.samples)):
      raise ValidationError(f"study {self.study_id}: expression shape {self.expression.shape} does not "
                            f"match {len(self.genes)} genes x {len(self.samples)} samples")
    if self.labels.shape != (len(self.samples),):
      raise ValidationError(f"study {self.study_id}: {self.labels.size} labels for {len(self.samples)} samples")
    classes = set(np.unique(self.labels).tolist())
    if classes != {0, 1}:
      raise ValidationError(f"study {self.study_id}: labels must contain exactly the classes 0 and 1, "
                            f"got {sorted(classes)}")

  @property
  def n_genes(self) -> int:
    return len(self.genes)

  @property
  def n_samples(self) -> int:
    return len(self.samples)

  def class_sizes(self):
    return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))

  def restrict(self, genes: Sequence[str]) -> 'Study':
    index = {g: i for i, g in enumerate(self.genes)}
    rows = [index[g] for g in genes]
    return Study(self.study_id, genes, self.samples, self.expression[rows], self.labels)

  def display_short(self) -> str:
    controls, cases = self.class_sizes()
    return f"{self.study_id}: {self.n_genes} genes, {cases} cases / {controls} controls"

  def __repr__(self) -> str:
    return f"Study(study_id='{self.study_id}', n_genes={self.n_genes}, n_samples={self.n_samples})"

class StudySet:
  """Studies sharing one ordered gene universe (the intersection, in first-study order)"""

  def __init__(self, studies: List[Study]):
    if len(studies) < 1:
      raise ValidationError("a study set needs at least one study")
    ids = [s.study_id for s in studies]
    if len(set(ids)) != len(ids):
      raise ValidationError(f"duplicate study identifiers: {ids}")
    self.genes = self.intersect_genes(studies)
    if not self.genes:
      raise ValidationError("the studies share no gene identifiers")
    self.studies = [s if s.genes == self.genes else s.restrict(self.genes) for s in studies]

  @staticmethod
  def intersect_genes(studies: List[Study]) -> List[str]:
    shared = set(studies[0].genes)
    for study in studies[1:]:
      shared &= set(study.genes)
    universe = [g for g in studies[0].genes if g in shared]
    dropped = len(set().union(*[set(s.genes) for s in studies])) - len(universe)
    if dropped:
      _logger.info("dropped %d genes absent from at least one study", dropped)
    return universe

  @property
  def study_ids(self) -> List[str]:
    return [s.study_id for s in self.studies]

  @property
  def n_genes(self) -> int:
    return len(self.genes)

  def __len__(self) -> int:
    return len(self.studies)

  def __iter__(self):
    return iter(self.studies)

  def study(self, study_id: str) -> Optional[Study]:
    for s in self.studies:
      if s.study_id == study_id:
        return s
    return None

  def display_short(self) -> str:
    return f"{len(self.studies)} studies on {self.n_genes} shared genes"

  def __repr__(self) -> str:
    return f"StudySet(n_studies={len(self.studies)}, n_genes={self.n_genes})"
