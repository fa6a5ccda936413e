"""Greedy and exact solvers that rearrange arrays into standard form."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .engine import (
    BudgetExhausted,
    LayerEngine,
    SearchBudget,
    TupleSpace,
    Unreachable,
    _Clock,
    _sorted_member,
)
from .model import (
    InvalidMoveError,
    Mode,
    Move,
    MultiArray,
    apply_move,
    is_standard,
    standard,
)

__all__ = [
    "BudgetExhausted",
    "ModeError",
    "SearchBudget",
    "Solution",
    "Unreachable",
    "Verification",
    "bfs_solve",
    "bidirectional_bfs_solve",
    "breakpoint_bound",
    "greedy_signed_1d",
    "greedy_unsigned_1d",
    "ida_solve",
    "verify",
]


class ModeError(ValueError):
    pass


@dataclass(frozen=True)
class Solution:
    moves: tuple[Move, ...]
    optimal: bool
    nodes_expanded: int = 0
    elapsed: float = 0.0
    method: str = ""

    @property
    def length(self) -> int:
        return len(self.moves)


@dataclass(frozen=True)
class Verification:
    valid: bool
    solved: bool
    final: MultiArray
    invalid_index: Optional[int] = None
    error: str = ""
    trace: tuple[MultiArray, ...] = field(default=(), repr=False)


def verify(ma: MultiArray, moves: Sequence[Move]) -> Verification:
    """Replay ``moves`` from ``ma``; illegal moves are reported, not raised."""
    current = ma
    trace = [ma]
    for i, mv in enumerate(moves):
        try:
            mv.check(current.dims)
        except InvalidMoveError as exc:
            return Verification(False, False, current, i, str(exc), tuple(trace))
        current = apply_move(current, mv)
        trace.append(current)
    return Verification(True, is_standard(current), current, None, "", tuple(trace))


# -- greedy -------------------------------------------------------------------


def _require_line(ma: MultiArray, mode: Mode | None = None) -> None:
    if ma.rank != 1:
        raise ModeError(f"expected a rank-1 array, got rank {ma.rank}")
    if mode is not None and ma.mode is not mode:
        raise ModeError(f"expected a {mode.value} array, got {ma.mode.value}")


def _flip(values: list[int], k: int, signed: bool) -> None:
    prefix = values[:k][::-1]
    values[:k] = [-v for v in prefix] if signed else prefix


def greedy_unsigned_1d(line: MultiArray) -> Solution:
    """Bring-the-largest-to-front pancake sort; at most ``2n - 3`` flips for n >= 2."""
    _require_line(line, Mode.UNSIGNED)
    t0 = time.perf_counter()
    values = list(line.values())
    moves = []
    for size in range(len(values), 1, -1):
        pos = values.index(size)
        if pos == size - 1:
            continue
        if pos > 0:
            _flip(values, pos + 1, False)
            moves.append(Move(0, pos + 1))
        _flip(values, size, False)
        moves.append(Move(0, size))
    return Solution(tuple(moves), False, 0, time.perf_counter() - t0, "greedy")


def greedy_signed_1d(line: MultiArray) -> Solution:
    """Burnt pancake sort using at most three flips per element (``<= 3n`` total)."""
    _require_line(line, Mode.SIGNED)
    t0 = time.perf_counter()
    values = list(line.values())
    moves = []

    def flip(k):
        _flip(values, k, True)
        moves.append(Move(0, k))

    for size in range(len(values), 0, -1):
        if values[size - 1] == size:
            continue
        pos = [abs(v) for v in values].index(size)
        if pos > 0:
            flip(pos + 1)
        if values[0] > 0:
            flip(1)
        flip(size)
    return Solution(tuple(moves), False, 0, time.perf_counter() - t0, "greedy")


# -- lower bound --------------------------------------------------------------


def _breakpoints(values: Sequence[int], signed: bool) -> int:
    n = len(values)
    count = 0
    for i in range(n):
        nxt = values[i + 1] if i + 1 < n else n + 1
        if signed:
            count += nxt != values[i] + 1
        else:
            count += abs(nxt - values[i]) != 1
    return count


def breakpoint_bound(line: MultiArray) -> int:
    """Admissible lower bound on the prefix-reversal distance of a line.

    Signed lines count positions where the next signed value (with sentinel
    ``n+1``) is not the successor. For unsigned lines an adjacency in either
    direction is kept, since a flip turns a descending run into an ascending
    one; counting only ascending pairs would overestimate (``3 2 1``).
    """
    if line.rank != 1:
        raise ModeError(f"breakpoint_bound needs a rank-1 array, got rank {line.rank}")
    return _breakpoints(line.values(), line.signed)


# -- exact search ----------------------------------------------------------------


def bfs_solve(ma: MultiArray, budget: SearchBudget = SearchBudget(), threads: int = 1) -> Solution:
    """Exact breadth-first search from ``ma`` to the standard array.

    The returned sequence is the lexicographically smallest optimal one in
    canonical move order, independent of ``threads``.
    """
    clock = _Clock(budget)
    engine = LayerEngine(ma.dims, ma.mode, threads)
    start = engine.key_of(ma)
    goal = engine.key_of(standard(ma.dims, ma.mode))
    layers = []
    expanded = 0
    found = False
    for depth, layer in enumerate(engine.layers(start)):
        layers.append(layer)
        if _sorted_member(layer, goal)[0]:
            found = True
            break
        expanded += len(layer)
        clock.check(expanded, depth + 1)
    if not found:
        total = sum(len(x) for x in layers)
        raise Unreachable(
            f"standard array is not reachable; component of {total} states exhausted",
            expanded, total,
        )

    # states lying on some optimal path, per depth
    on_path = [None] * len(layers)
    on_path[-1] = goal
    for d in range(len(layers) - 2, -1, -1):
        nb = engine.neighbours(on_path[d + 1])
        on_path[d] = layers[d][_sorted_member(nb, layers[d])]

    moves = []
    codes = engine.unpack(start)
    for d in range(1, len(layers)):
        for i, mv in enumerate(engine.moves):
            nxt = engine.apply(codes, i)
            if _sorted_member(on_path[d], engine.pack(nxt))[0]:
                moves.append(mv)
                codes = nxt
                break
    return Solution(tuple(moves), True, expanded, clock.elapsed(), "bfs")


def _path(parents: dict, state) -> list[int]:
    out = []
    while True:
        prev = parents[state]
        if prev is None:
            return out
        state, move_index = prev
        out.append(move_index)


def bidirectional_bfs_solve(ma: MultiArray, budget: SearchBudget = SearchBudget()) -> Solution:
    """Meet-in-the-middle BFS; returns some optimal sequence."""
    clock = _Clock(budget)
    space = TupleSpace(ma.dims, ma.mode)
    start = space.encode(ma)
    if start == space.goal:
        return Solution((), True, 0, clock.elapsed(), "bibfs")
    getters = space.getters
    fwd = {start: None}
    bwd = {space.goal: None}
    fwd_frontier, bwd_frontier = [start], [space.goal]
    fwd_depth = bwd_depth = 0
    expanded = 0
    while fwd_frontier and bwd_frontier:
        forward = len(fwd_frontier) <= len(bwd_frontier)
        frontier, seen, other = (fwd_frontier, fwd, bwd) if forward else (bwd_frontier, bwd, fwd)
        nxt = []
        best = None
        for state in frontier:
            for i, g in enumerate(getters):
                child = g(state)
                if child in seen:
                    continue
                seen[child] = (state, i)
                nxt.append(child)
                if child in other:
                    if forward:
                        cand = (len(_path(bwd, child)), child)
                    else:
                        cand = (len(_path(fwd, child)), child)
                    if best is None or cand[0] < best[0]:
                        best = cand
        expanded += len(frontier)
        if forward:
            fwd_frontier, fwd_depth = nxt, fwd_depth + 1
        else:
            bwd_frontier, bwd_depth = nxt, bwd_depth + 1
        if best is not None:
            meet = best[1]
            head = _path(fwd, meet)[::-1]
            tail = _path(bwd, meet)
            moves = tuple(space.moves[i] for i in head + tail)
            return Solution(moves, True, expanded, clock.elapsed(), "bibfs")
        clock.check(expanded, fwd_depth + bwd_depth)
    component = len(fwd) if not fwd_frontier else len(bwd)
    raise Unreachable(
        f"standard array is not reachable; component of {component} states exhausted",
        expanded, component,
    )


def _heuristic(space: TupleSpace) -> Callable[[tuple], int]:
    long_axes = [d for d in space.dims if d > 1]
    if len(long_axes) <= 1:
        # a line embedded in a higher rank has the same move graph as the line
        signed = space.signed
        return lambda s: _breakpoints(space.signed_values(s), signed)
    goal = space.goal
    return lambda s: 0 if s == goal else 1


def ida_solve(
    ma: MultiArray, budget: SearchBudget = SearchBudget(), table_limit: int = 1 << 21
) -> Solution:
    """Iterative-deepening A* with the breakpoint bound on lines, 0/1 elsewhere.

    Each iteration keeps a transposition table (up to ``table_limit`` states)
    of the smallest depth at which a state was expanded; revisits at the same
    or greater depth are pruned. Moves are tried in canonical order, so the
    first solution found is the lexicographically smallest optimal one.
    IDA* cannot prove unreachability: such instances run until the budget is
    exhausted.
    """
    clock = _Clock(budget)
    space = TupleSpace(ma.dims, ma.mode)
    h = _heuristic(space)
    goal = space.goal
    getters = space.getters
    n_moves = len(getters)
    start = space.encode(ma)
    path: list[int] = []
    nodes = 0
    check_every = 1 << 14
    table: dict = {}

    def search(state, g, bound, last):
        nonlocal nodes
        f = g + h(state)
        if f > bound:
            return f
        if state == goal:
            return -1
        seen = table.get(state)
        if seen is not None and seen <= g:
            return None
        if seen is not None or len(table) < table_limit:
            table[state] = g
        nodes += 1
        if nodes % check_every == 0:
            clock.check(nodes, g)
        smallest = None
        for i in range(n_moves):
            if i == last:
                continue
            path.append(i)
            t = search(getters[i](state), g + 1, bound, i)
            if t == -1:
                return -1
            path.pop()
            if t is not None and (smallest is None or t < smallest):
                smallest = t
        return smallest

    bound = h(start)
    while True:
        if budget.max_depth is not None and bound > budget.max_depth:
            raise BudgetExhausted(f"depth budget {budget.max_depth} exhausted", nodes, bound)
        table.clear()
        t = search(start, 0, bound, -1)
        if t == -1:
            moves = tuple(space.moves[i] for i in path)
            return Solution(moves, True, nodes, clock.elapsed(), "ida")
        if t is None:
            raise Unreachable("every branch was cut without exceeding the bound", nodes)
        bound = t
