"""Hidden-bipartite-graph oracles and failure-probability amplification.

A hidden graph G = (U, V, E) is exposed only through two predicates:

* an independence query: does a given vertex subset contain no edge?
  (stands in for running a decision solver on a sub-instance), and
* an adjacency query: is a specific (left, right) pair an edge?
  (stands in for verifying one candidate witness).

``BipartiteOracles`` bundles the two predicates with per-object query
counters, plus vectorized row/block adjacency entry points (each probed pair
still counts as one adjacency query; the batching is purely an evaluation
detail).  Vertex subsets are passed as sorted index arrays per side; the
contract is on set contents, not order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "Side",
    "VertexId",
    "BipartiteOracles",
    "matrix_oracles",
    "edge_set_oracles",
    "AmplifiedDecider",
    "amplify",
    "repetitions_for",
    "amplified_independence",
    "AMPLIFY_CONSTANT",
]


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class VertexId:
    """One endpoint of the hidden graph: a side and an index within it."""

    side: Side
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"vertex index must be nonnegative, got {self.index}")


def _as_index_array(indices) -> np.ndarray:
    arr = np.asarray(indices, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("vertex subsets must be one-dimensional index sequences")
    return arr


class BipartiteOracles:
    """Query access to a hidden bipartite graph, with call counters.

    ``independence`` receives two sorted int arrays (left indices, right
    indices) and must return True iff no edge of the hidden graph joins
    them.  ``adjacency`` receives a single (u, v) index pair.  Optional
    ``adjacency_row`` / ``adjacency_block`` callables vectorize adjacency
    probing; generic fallbacks loop over ``adjacency``.

    Counters are plain attributes mutated under the GIL; concurrent trials
    should each own their oracle object (counters are deliberately not
    global).
    """

    def __init__(
        self,
        left_size: int,
        right_size: int,
        independence: Callable[[np.ndarray, np.ndarray], bool],
        adjacency: Callable[[int, int], bool],
        *,
        adjacency_row: Optional[Callable[[int, np.ndarray], np.ndarray]] = None,
        adjacency_block: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    ) -> None:
        if left_size < 0 or right_size < 0:
            raise ValueError("side sizes must be nonnegative")
        self.left_size = int(left_size)
        self.right_size = int(right_size)
        self._independence = independence
        self._adjacency = adjacency
        self._adjacency_row = adjacency_row
        self._adjacency_block = adjacency_block
        self.independence_calls = 0
        self.adjacency_calls = 0

    @property
    def total_vertices(self) -> int:
        return self.left_size + self.right_size

    def _check_bounds(self, left: np.ndarray, right: np.ndarray) -> None:
        if left.size and (left.min() < 0 or left.max() >= self.left_size):
            raise IndexError("left index out of range")
        if right.size and (right.min() < 0 or right.max() >= self.right_size):
            raise IndexError("right index out of range")

    def independence_query(self, left, right) -> bool:
        """True iff the subset (left ∪ right) spans no edge. Counts as one query.

        The underlying callable always receives sorted index arrays (the
        query is about set contents; sorting is the canonical form, and
        decision backends may rely on it).
        """
        left = np.sort(_as_index_array(left))
        right = np.sort(_as_index_array(right))
        self._check_bounds(left, right)
        self.independence_calls += 1
        return bool(self._independence(left, right))

    def adjacency_query(self, u: int, v: int) -> bool:
        """True iff (u, v) is an edge. Counts as one query."""
        self.adjacency_calls += 1
        return bool(self._adjacency(int(u), int(v)))

    def adjacency_row(self, u: int, right) -> np.ndarray:
        """Adjacency of left vertex ``u`` against each of ``right``.

        Counts as ``len(right)`` adjacency queries.
        """
        right = _as_index_array(right)
        self.adjacency_calls += int(right.size)
        if self._adjacency_row is not None:
            return np.asarray(self._adjacency_row(int(u), right), dtype=bool)
        return np.fromiter(
            (self._adjacency(int(u), int(v)) for v in right), dtype=bool, count=right.size
        )

    def adjacency_block(self, left, right) -> np.ndarray:
        """Adjacency matrix of ``left`` x ``right``; len(left)*len(right) queries."""
        left = _as_index_array(left)
        right = _as_index_array(right)
        self.adjacency_calls += int(left.size) * int(right.size)
        if self._adjacency_block is not None:
            return np.asarray(self._adjacency_block(left, right), dtype=bool)
        out = np.empty((left.size, right.size), dtype=bool)
        for i, u in enumerate(left):
            if self._adjacency_row is not None:
                out[i] = np.asarray(self._adjacency_row(int(u), right), dtype=bool)
            else:
                for j, v in enumerate(right):
                    out[i, j] = self._adjacency(int(u), int(v))
        return out

    def count_edges_incident(self, left, right) -> int:
        """Exact number of edges between the two index sets (block sum)."""
        left = _as_index_array(left)
        right = _as_index_array(right)
        if left.size == 0 or right.size == 0:
            return 0
        return int(self.adjacency_block(left, right).sum())


def _pack_rows(matrix: np.ndarray) -> np.ndarray:
    """Pack a boolean matrix row-wise into uint64 words (zero padded)."""
    n_rows, n_cols = matrix.shape
    words = max(1, (n_cols + 63) // 64)
    padded = np.zeros((n_rows, words * 64), dtype=bool)
    padded[:, :n_cols] = matrix
    packed_bytes = np.packbits(padded, axis=1, bitorder="little")
    return packed_bytes.view(np.uint64).reshape(n_rows, words)


def matrix_oracles(adjacency: np.ndarray) -> BipartiteOracles:
    """Oracle pair backed by an explicit |U| x |V| boolean matrix.

    Used for synthetic graphs and as the ground-truth oracle in tests.
    Independence queries scan left rows in blocks with early exit; a packed
    bit representation keeps each probe cheap even for wide right sides.
    """
    adj = np.ascontiguousarray(np.asarray(adjacency, dtype=bool))
    if adj.ndim != 2:
        raise ValueError("adjacency must be a 2-D boolean matrix")
    left_size, right_size = adj.shape
    packed = _pack_rows(adj) if left_size else np.zeros((0, 1), dtype=np.uint64)
    words = packed.shape[1]

    def right_mask(right: np.ndarray) -> np.ndarray:
        mask = np.zeros(words * 64, dtype=bool)
        mask[right] = True
        return np.packbits(mask, bitorder="little").view(np.uint64)

    def independence(left: np.ndarray, right: np.ndarray) -> bool:
        if left.size == 0 or right.size == 0:
            return True
        rmask = right_mask(right)
        for start in range(0, left.size, 256):
            chunk = packed[left[start : start + 256]]
            if (chunk & rmask).any():
                return False
        return True

    def adjacency_fn(u: int, v: int) -> bool:
        return bool(adj[u, v])

    def adjacency_row(u: int, right: np.ndarray) -> np.ndarray:
        return adj[u, right]

    def adjacency_block(left: np.ndarray, right: np.ndarray) -> np.ndarray:
        return adj[np.ix_(left, right)]

    return BipartiteOracles(
        left_size,
        right_size,
        independence,
        adjacency_fn,
        adjacency_row=adjacency_row,
        adjacency_block=adjacency_block,
    )


def edge_set_oracles(
    left_size: int, right_size: int, edges: Sequence[tuple[int, int]]
) -> BipartiteOracles:
    """Oracle pair from an explicit edge list (convenience for small graphs)."""
    adj = np.zeros((left_size, right_size), dtype=bool)
    for u, v in edges:
        adj[u, v] = True
    return matrix_oracles(adj)


# --------------------------------------------------------------------------
# Majority amplification for randomized boolean deciders.
# --------------------------------------------------------------------------

# Majority over r repetitions of a decider that errs with probability <= 1/3
# fails with probability at most exp(-r * KL(1/2 || 1/3)) < exp(-r/18), so
# r >= 18 ln(2/target) forces the failure rate below target.
AMPLIFY_CONSTANT = 18.0


def repetitions_for(target_failure: float, constant: float = AMPLIFY_CONSTANT) -> int:
    """Smallest odd repetition count bringing failure <= 1/3 down to target."""
    if not 0.0 < target_failure < 1.0:
        raise ValueError(f"target_failure must be in (0,1), got {target_failure}")
    if target_failure >= 1.0 / 3.0:
        return 1
    r = math.ceil(constant * math.log(2.0 / target_failure))
    if r % 2 == 0:
        r += 1
    return max(r, 1)


@dataclass
class AmplifiedDecider:
    """Majority vote over repeated calls of a randomized boolean procedure.

    ``repetitions`` is odd so that the majority is well defined.  For a
    deterministic base the vote trivially reproduces the base's answer.
    """

    base: Callable[..., bool]
    repetitions: int
    target_failure: float
    calls: int = field(default=0)

    def __post_init__(self) -> None:
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise ValueError("repetitions must be a positive odd integer")

    def __call__(self, *args, **kwargs) -> bool:
        self.calls += 1
        trues = sum(1 for _ in range(self.repetitions) if self.base(*args, **kwargs))
        return trues > self.repetitions // 2


def amplify(
    base: Callable[..., bool],
    target_failure: float,
    *,
    constant: float = AMPLIFY_CONSTANT,
) -> AmplifiedDecider:
    """Wrap a decider failing with probability <= 1/3 to fail <= target_failure."""
    r = repetitions_for(target_failure, constant)
    return AmplifiedDecider(base=base, repetitions=r, target_failure=target_failure)


class _AmplifiedOracles:
    """Oracle view with a majority-amplified independence predicate.

    Adjacency queries pass straight through to the inner object; independence
    queries fan out into an odd number of inner queries.  Counters are read
    from the inner object, so the recorded independence count is the number
    of raw decider invocations.
    """

    def __init__(self, inner: BipartiteOracles, decider: AmplifiedDecider) -> None:
        self.inner = inner
        self.decider = decider

    @property
    def left_size(self) -> int:
        return self.inner.left_size

    @property
    def right_size(self) -> int:
        return self.inner.right_size

    @property
    def total_vertices(self) -> int:
        return self.inner.total_vertices

    @property
    def independence_calls(self) -> int:
        return self.inner.independence_calls

    @property
    def adjacency_calls(self) -> int:
        return self.inner.adjacency_calls

    def independence_query(self, left, right) -> bool:
        return self.decider(left, right)

    def adjacency_query(self, u: int, v: int) -> bool:
        return self.inner.adjacency_query(u, v)

    def adjacency_row(self, u: int, right) -> np.ndarray:
        return self.inner.adjacency_row(u, right)

    def adjacency_block(self, left, right) -> np.ndarray:
        return self.inner.adjacency_block(left, right)

    def count_edges_incident(self, left, right) -> int:
        return self.inner.count_edges_incident(left, right)


def amplified_independence(
    oracles: BipartiteOracles, target_failure: float, *, constant: float = AMPLIFY_CONSTANT
) -> _AmplifiedOracles:
    """View of ``oracles`` whose independence answers are majority-amplified."""
    decider = amplify(
        lambda left, right: oracles.independence_query(left, right),
        target_failure,
        constant=constant,
    )
    return _AmplifiedOracles(oracles, decider)
