#!/usr/bin/env python3

"""Seeded random streams for reproducible permutation and simulation runs."""

import numpy as np

class SeededStreams:
    """Derives independent numpy generators from a single integer seed.

    Child stream i depends only on (seed, i), never on how many streams were
    drawn before it, so permutation b or replicate b yields the same numbers
    whether tasks run in order, out of order or in separate processes.
    """

    def __init__(self, seed: int):
        self._seed = int(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def generator(self, index: int) -> np.random.Generator:
        """Generator for task `index`"""
        child = np.random.SeedSequence(self._seed, spawn_key=(int(index),))
        return np.random.default_rng(child)

    def fork(self, index: int) -> "SeededStreams":
        """Create a child SeededStreams for a sub-task (e.g. permutations inside replicate `index`)"""
        # spawned child of task `index`, disjoint from the stream generator(index) draws from
        parent = np.random.SeedSequence(self._seed, spawn_key=(int(index),))
        child_seed = int(parent.spawn(1)[0].generate_state(1)[0] % (2**31 - 1))
        return SeededStreams(child_seed)
