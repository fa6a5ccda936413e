"""State-space machinery shared by the solvers and the orbit analysis.

Two representations are used:

* :class:`LayerEngine` works on whole BFS layers at once. States are rows of
  per-cell codes (``2*(id-1) + orientation``) packed into sorted ``int64``
  keys, or raw bytes for arrays too large to pack. Because every move is an
  involution the move graph is undirected, so the next layer is simply the
  neighbours of the current layer minus the current and previous layers.
* :class:`TupleSpace` gives single states as tuples and moves as
  ``operator.itemgetter`` objects, for the depth-first and bidirectional
  searches. Signed states use a doubled layout where slot ``2p`` holds the
  code at position ``p`` and slot ``2p+1`` the same code flipped; a signed
  move is then a plain position permutation.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from operator import itemgetter
from typing import Iterator, Optional

import numpy as np

from .model import Mode, MultiArray, legal_moves, slab_map, standard


class BudgetExhausted(Exception):
    """A search hit its node, depth or time limit before finishing."""

    def __init__(self, message: str, nodes_expanded: int = 0, depth: int = 0):
        super().__init__(message)
        self.nodes_expanded = nodes_expanded
        self.depth = depth


class Unreachable(Exception):
    """The whole component of the start state was exhausted without meeting the goal."""

    def __init__(self, message: str, nodes_expanded: int = 0, component_size: int = 0):
        super().__init__(message)
        self.nodes_expanded = nodes_expanded
        self.component_size = component_size


@dataclass(frozen=True)
class SearchBudget:
    max_depth: Optional[int] = None
    max_nodes: Optional[int] = None
    max_time: Optional[float] = None  # seconds


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def check(self, nodes: int, depth: int) -> None:
        b = self.budget
        if b.max_nodes is not None and nodes > b.max_nodes:
            raise BudgetExhausted(f"node budget {b.max_nodes} exhausted", nodes, depth)
        if b.max_depth is not None and depth > b.max_depth:
            raise BudgetExhausted(f"depth budget {b.max_depth} exhausted", nodes, depth)
        if b.max_time is not None and self.elapsed() > b.max_time:
            raise BudgetExhausted(f"time budget {b.max_time}s exhausted", nodes, depth)


def _sorted_member(haystack: np.ndarray, needles: np.ndarray) -> np.ndarray:
    """Boolean mask of ``needles`` present in the sorted array ``haystack``."""
    if len(haystack) == 0 or len(needles) == 0:
        return np.zeros(len(needles), dtype=bool)
    idx = np.searchsorted(haystack, needles)
    idx[idx == len(haystack)] = 0
    return haystack[idx] == needles


class LayerEngine:
    """Vectorised layer-by-layer BFS over one (dims, mode) state space."""

    def __init__(self, dims, mode: Mode | str, threads: int = 1):
        self.dims = tuple(dims)
        self.mode = Mode.parse(mode)
        self.size = math.prod(self.dims)
        self.threads = max(1, int(threads))
        self.moves = legal_moves(self.dims)
        signed = self.mode is Mode.SIGNED
        src = np.empty((len(self.moves), self.size), dtype=np.intp)
        flip = np.zeros((len(self.moves), self.size), dtype=np.uint8)
        for i, mv in enumerate(self.moves):
            source, slab = slab_map(self.dims, mv)
            src[i] = source
            if signed:
                flip[i, list(slab)] = 1
        self._src = src
        self._flip = flip
        self._bits = max(1, (2 * self.size - 1).bit_length())
        self._packed = self._bits * self.size <= 63
        if self._packed:
            self._shifts = (np.arange(self.size, dtype=np.int64) * self._bits)
        self._dtype = np.uint8 if 2 * self.size <= 256 else np.uint16

    # -- key packing -------------------------------------------------------

    def pack(self, codes: np.ndarray) -> np.ndarray:
        codes = np.atleast_2d(codes)
        if self._packed:
            return (codes.astype(np.int64) << self._shifts).sum(axis=1)
        rows = np.ascontiguousarray(codes.astype(">u2"))
        return rows.view(np.dtype((np.void, 2 * self.size))).ravel()

    def unpack(self, keys: np.ndarray) -> np.ndarray:
        if self._packed:
            mask = (1 << self._bits) - 1
            return ((keys[:, None] >> self._shifts) & mask).astype(self._dtype)
        return keys.view(">u2").reshape(-1, self.size).astype(self._dtype)

    def key_of(self, ma: MultiArray) -> np.ndarray:
        return self.pack(np.array(ma.codes(), dtype=self._dtype))

    def array_of(self, key) -> MultiArray:
        codes = self.unpack(np.asarray(key).reshape(-1))[0]
        return MultiArray.from_codes(self.dims, [int(c) for c in codes], self.mode)

    # -- expansion ---------------------------------------------------------

    def apply(self, codes: np.ndarray, move_index: int) -> np.ndarray:
        return codes[:, self._src[move_index]] ^ self._flip[move_index]

    def _neighbours_chunk(self, keys: np.ndarray) -> np.ndarray:
        codes = self.unpack(keys)
        parts = [self.pack(self.apply(codes, i)) for i in range(len(self.moves))]
        return np.unique(np.concatenate(parts))

    def neighbours(self, keys: np.ndarray) -> np.ndarray:
        """Sorted unique keys of every state one move away from ``keys``."""
        if len(keys) == 0:
            return keys
        if self.threads == 1 or len(keys) < 4096:
            return self._neighbours_chunk(keys)
        chunks = np.array_split(keys, self.threads)
        with ThreadPoolExecutor(self.threads) as pool:
            parts = list(pool.map(self._neighbours_chunk, chunks))
        return np.unique(np.concatenate(parts))

    def layers(self, start_keys: np.ndarray) -> Iterator[np.ndarray]:
        """Yield BFS layers (sorted unique keys), starting with ``start_keys``."""
        previous = start_keys[:0]
        current = np.unique(start_keys)
        while len(current):
            yield current
            nxt = self.neighbours(current)
            nxt = nxt[~_sorted_member(current, nxt)]
            nxt = nxt[~_sorted_member(previous, nxt)]
            previous, current = current, nxt


class TupleSpace:
    """Tuple states with ``itemgetter`` moves, for node-at-a-time searches."""

    def __init__(self, dims, mode: Mode | str):
        self.dims = tuple(dims)
        self.mode = Mode.parse(mode)
        self.size = math.prod(self.dims)
        self.moves = legal_moves(self.dims)
        self.signed = self.mode is Mode.SIGNED
        self.getters = []
        for mv in self.moves:
            source, slab = slab_map(self.dims, mv)
            if not self.signed:
                perm = source
            else:
                moved = set(slab)
                perm = []
                for p, s in enumerate(source):
                    if p in moved:
                        perm += [2 * s + 1, 2 * s]
                    else:
                        perm += [2 * s, 2 * s + 1]
            # itemgetter with one index returns a scalar, not a tuple
            self.getters.append(itemgetter(*perm) if len(perm) > 1 else (lambda s, i=perm[0]: (s[i],)))
        self.goal = self.encode(standard(self.dims, self.mode))

    def encode(self, ma: MultiArray) -> tuple:
        codes = ma.codes()
        if not self.signed:
            return codes
        out = []
        for c in codes:
            out += [c, c ^ 1]
        return tuple(out)

    def codes(self, state: tuple) -> tuple:
        return state[0::2] if self.signed else state

    def decode(self, state: tuple) -> MultiArray:
        return MultiArray.from_codes(self.dims, self.codes(state), self.mode)

    def signed_values(self, state: tuple) -> list[int]:
        return [-((c >> 1) + 1) if c & 1 else (c >> 1) + 1 for c in self.codes(state)]
