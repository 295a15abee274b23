#!/usr/bin/env python3

from typing import Dict, List, Optional, Sequence
import numpy as np

from logger import get_logger

_logger = get_logger("gene_sets")

class GeneSet:
  """A named set of gene identifiers (one GMT line)"""

  def __init__(self, name: str, description: str, genes: Sequence[str],
               original_size: Optional[int] = None):
    self.name = name
    self.description = description
    # duplicates within one line collapse, order kept
    self.genes = list(dict.fromkeys(genes))
    self.original_size = len(self.genes) if original_size is None else original_size

  @property
  def size(self) -> int:
    return len(self.genes)

  def display_short(self) -> str:
    return f"{self.name} ({self.size}/{self.original_size} genes)"

  def __repr__(self) -> str:
    return f"GeneSet(name='{self.name}', size={self.size}, original_size={self.original_size})"

class GeneSetCollection:
  """Named gene sets, optionally intersected with an analysis gene universe"""

  DEFAULT_MIN_SIZE = 5
  DEFAULT_MAX_SIZE = 500

  def __init__(self, gene_sets: List[GeneSet]):
    self.gene_sets = list(gene_sets)

  def __len__(self) -> int:
    return len(self.gene_sets)

  def __iter__(self):
    return iter(self.gene_sets)

  @property
  def names(self) -> List[str]:
    return [s.name for s in self.gene_sets]

  def intersect(self, universe: Sequence[str], min_size: int = DEFAULT_MIN_SIZE,
                max_size: int = DEFAULT_MAX_SIZE) -> 'GeneSetCollection':
    """Restrict every set to the universe and drop sets outside [min_size, max_size]"""
    members = set(universe)
    kept = []
    for gene_set in self.gene_sets:
      genes = [g for g in gene_set.genes if g in members]
      if genes and min_size <= len(genes) <= max_size:
        kept.append(GeneSet(gene_set.name, gene_set.description, genes, gene_set.original_size))
    filtered = len(self.gene_sets) - len(kept)
    if filtered:
      _logger.info("%04d gene sets filtered out with min_size=%d and max_size=%d",
                   filtered, min_size, max_size)
    return GeneSetCollection(kept)

  def membership(self, universe: Sequence[str]) -> List[np.ndarray]:
    """Per set, a boolean mask over the universe"""
    index = {g: i for i, g in enumerate(universe)}
    masks = []
    for gene_set in self.gene_sets:
      mask = np.zeros(len(universe), dtype=bool)
      mask[[index[g] for g in gene_set.genes if g in index]] = True
      masks.append(mask)
    return masks

  def sizes(self) -> Dict[str, int]:
    return {s.name: s.size for s in self.gene_sets}

  def display_short(self) -> str:
    return f"{len(self.gene_sets)} gene sets"
