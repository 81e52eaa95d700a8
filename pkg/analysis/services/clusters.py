"""
Cluster Service - partitions of the spins into weakly entangled clusters.
"""
import logging
from itertools import combinations
from typing import Iterator, Optional

from django.conf import settings

from analysis.dto import ClusterPartition
from analysis.services.entropy import EntropyService
from dipolarvqe.exceptions import InvalidParameterError
from engine.dto import QuantumState

logger = logging.getLogger(__name__)

MAX_CLUSTER_SPINS = 12

Block = tuple[int, ...]


class _BoundaryEntropies:
    """Memoized entropy of a block against the rest; the full set has none."""

    def __init__(self, state: QuantumState):
        self.state = state
        self.cache: dict[Block, float] = {}

    def __call__(self, block: Block) -> float:
        if block not in self.cache:
            if len(block) == self.state.n_spins:
                self.cache[block] = 0.0
            else:
                self.cache[block] = EntropyService.von_neumann_entropy(self.state, block)
        return self.cache[block]


class ClusterService:
    """Service for entanglement-cluster segmentation."""

    @staticmethod
    def cluster_partition(state: QuantumState, threshold: Optional[float] = None) -> ClusterPartition:
        """
        Smallest clusters whose entropy with the rest stays below a threshold.

        Levels of maximal block size s = 1, 2, ... are searched in turn; the
        first level with a feasible partition wins. Within a level the
        partition with the smallest descending block-size sequence is kept,
        then the one whose blocks come first in index order.

        Args:
            state: N-spin state, N <= 12
            threshold: Entropy bound per block in bits (default 0.4)

        Returns:
            ClusterPartition: Blocks ordered by their smallest spin

        Raises:
            InvalidParameterError: More than 12 spins or threshold <= 0
        """
        threshold = settings.SIMULATION['CLUSTER_THRESHOLD'] if threshold is None else threshold
        n = state.n_spins
        if n > MAX_CLUSTER_SPINS:
            raise InvalidParameterError('state', f'cluster search supports at most {MAX_CLUSTER_SPINS} spins')
        if threshold <= 0:
            raise InvalidParameterError('threshold', f'must be positive, got {threshold}')

        boundary = _BoundaryEntropies(state)
        for max_size in range(1, n + 1):
            best = None
            best_key = None
            for blocks in ClusterService._partitions(tuple(range(n)), max_size, boundary, threshold):
                key = (tuple(sorted((len(b) for b in blocks), reverse=True)), blocks)
                if best_key is None or key < best_key:
                    best, best_key = blocks, key
            if best is not None:
                logger.debug(f'Cluster search settled at block size {max_size}: {best}')
                return ClusterPartition(
                    blocks=best,
                    entropies=tuple(boundary(block) for block in best),
                    threshold=threshold,
                )
        # unreachable: the single block is always feasible
        raise AssertionError('no feasible partition')

    @staticmethod
    def _partitions(
        remaining: Block,
        max_size: int,
        boundary: _BoundaryEntropies,
        threshold: float,
    ) -> Iterator[tuple[Block, ...]]:
        """Feasible partitions of `remaining`, each block built around its smallest spin."""
        if not remaining:
            yield ()
            return
        first, others = remaining[0], remaining[1:]
        for size in range(min(max_size, len(remaining)), 0, -1):
            for companions in combinations(others, size - 1):
                block = (first,) + companions
                if boundary(block) > threshold:
                    continue
                rest = tuple(i for i in others if i not in companions)
                for tail in ClusterService._partitions(rest, max_size, boundary, threshold):
                    yield (block,) + tail
