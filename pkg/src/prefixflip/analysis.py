"""Reachability decisions, parity certificates and orbit experiments."""

from __future__ import annotations

import enum
import math
import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .engine import LayerEngine, SearchBudget
from .model import (
    Mode,
    MultiArray,
    Parity,
    _check_dims,
    apply_move,
    id_parity,
    legal_moves,
    move_parity,
    slab_map,
    standard,
)

THEOREM = (
    "an n x m array can always be rearranged iff n or m is not divisible by 4; "
    "when both are, only even permutations are reachable"
)


class Verdict(str, enum.Enum):
    ALWAYS_REACHABLE = "AlwaysReachable"
    CONSTRAINED = "Constrained"
    UNREACHABLE_ODD_PARITY = "UnreachableOddParity"
    EVEN_PARITY_UNDETERMINED = "EvenParityUndetermined"
    EMPIRICAL_ONLY = "EmpiricalOnly"


@dataclass(frozen=True)
class Reachability:
    verdict: Verdict
    parity: Optional[Parity] = None
    reason: str = ""


def decide_dims(dims: Sequence[int]) -> Reachability:
    dims = tuple(dims)
    if len(dims) != 2:
        return Reachability(Verdict.EMPIRICAL_ONLY, None,
                            f"no characterization known for rank {len(dims)}; use orbit enumeration")
    n, m = dims
    if n % 4 or m % 4:
        return Reachability(Verdict.ALWAYS_REACHABLE, None,
                            f"{n} x {m}: not both divisible by 4, every arrangement is reachable ({THEOREM})")
    return Reachability(Verdict.CONSTRAINED, None,
                        f"{n} x {m}: both divisible by 4, only even permutations are reachable ({THEOREM})")


def decide_instance(ma: MultiArray) -> Reachability:
    if ma.rank != 2 or ma.signed:
        return Reachability(
            Verdict.EMPIRICAL_ONLY, None,
            "no characterization known for signed or non-rank-2 arrays; use orbit enumeration",
        )
    by_dims = decide_dims(ma.dims)
    if by_dims.verdict is Verdict.ALWAYS_REACHABLE:
        return by_dims
    parity = id_parity(ma)
    if parity is Parity.ODD:
        return Reachability(
            Verdict.UNREACHABLE_ODD_PARITY, parity,
            f"odd permutation on a {ma.dims[0]} x {ma.dims[1]} array; every move is even, so it is unreachable",
        )
    return Reachability(
        Verdict.EVEN_PARITY_UNDETERMINED, parity,
        "even permutation: parity does not rule it out, but evenness is only known to be "
        "necessary here, not sufficient; confirm with a solver",
    )


@dataclass(frozen=True)
class OrbitReport:
    dims: tuple[int, ...]
    mode: Mode
    orbit_size: int
    eccentricity: int
    histogram: tuple[tuple[int, int], ...]
    complete: bool = True
    elapsed: float = 0.0


def orbit_layers(dims: Sequence[int], mode: Mode | str, threads: int = 1):
    """Yield the BFS layers (sorted packed keys) of the orbit of the standard array."""
    engine = LayerEngine(_check_dims(dims), mode, threads)
    yield from engine.layers(engine.key_of(standard(engine.dims, engine.mode)))


def orbit_stats(dims: Sequence[int], mode: Mode | str, budget: SearchBudget = SearchBudget(),
                threads: int = 1) -> OrbitReport:
    """Breadth-first enumeration of every state reachable from the standard array.

    Moves are involutions, so this is also the set of states that can reach
    the standard array. The eccentricity of the standard array is the diameter
    of the move graph whenever that graph is vertex-transitive (e.g. lines).
    """
    t0 = time.perf_counter()
    dims = _check_dims(dims)
    mode = Mode.parse(mode)
    histogram = []
    total = 0
    complete = True
    for depth, layer in enumerate(orbit_layers(dims, mode, threads)):
        histogram.append((depth, len(layer)))
        total += len(layer)
        over_nodes = budget.max_nodes is not None and total >= budget.max_nodes
        over_depth = budget.max_depth is not None and depth >= budget.max_depth
        over_time = budget.max_time is not None and time.perf_counter() - t0 > budget.max_time
        if over_nodes or over_depth or over_time:
            complete = False
            break
    return OrbitReport(dims, mode, total, len(histogram) - 1, tuple(histogram), complete,
                       time.perf_counter() - t0)


def distance_table(dims: Sequence[int], mode: Mode | str) -> dict[tuple[int, ...], int]:
    """Exact distance to the standard array for every reachable state, keyed by signed values."""
    engine = LayerEngine(_check_dims(dims), mode)
    table = {}
    for depth, layer in enumerate(orbit_layers(engine.dims, engine.mode)):
        for codes in engine.unpack(layer):
            table[tuple(-(c >> 1) - 1 if c & 1 else (c >> 1) + 1 for c in codes.tolist())] = depth
    return table


def random_instance(dims: Sequence[int], mode: Mode | str, seed: int, policy: str = "uniform") -> MultiArray:
    """Seeded instance: ``uniform`` over all arrangements, or ``walk:K`` random moves from standard."""
    dims = _check_dims(dims)
    mode = Mode.parse(mode)
    rng = random.Random(seed)
    if policy == "uniform":
        ids = list(range(1, math.prod(dims) + 1))
        rng.shuffle(ids)
        if mode is Mode.SIGNED:
            ids = [i if rng.random() < 0.5 else -i for i in ids]
        return MultiArray.from_values(dims, ids, mode)
    if policy.startswith("walk:"):
        try:
            steps = int(policy[5:])
        except ValueError:
            raise ValueError(f"bad walk length in policy {policy!r}") from None
        if steps < 0:
            raise ValueError(f"walk length must be >= 0, got {steps}")
        ma = standard(dims, mode)
        moves = legal_moves(dims)
        for _ in range(steps):
            ma = apply_move(ma, rng.choice(moves))
        return ma
    raise ValueError(f"unknown policy {policy!r}; expected 'uniform' or 'walk:K'")


@dataclass(frozen=True)
class TheoremRow:
    dims: tuple[int, int]
    verdict: Verdict
    orbit_size: Optional[int]
    expected: Optional[int]
    status: str  # PASS, FAIL or SKIP


def theorem_shapes(max_cells: int) -> list[tuple[int, int]]:
    shapes = {(n, m) for n in range(1, max_cells + 1) for m in range(1, max_cells // n + 1)}
    shapes |= {(2, 4), (1, 8)}
    return sorted(shapes, key=lambda s: (s[0] * s[1], s))


def theorem_experiment(max_cells: int, threads: int = 1, max_states: int = 2 * 10 ** 7) -> list[TheoremRow]:
    """Compare unsigned orbit sizes against the rearrangeability theorem.

    Shapes whose full permutation count exceeds ``max_states`` are reported
    as SKIP rather than enumerated.
    """
    rows = []
    for dims in theorem_shapes(max_cells):
        verdict = decide_dims(dims).verdict
        full = math.factorial(dims[0] * dims[1])
        expected = full if verdict is Verdict.ALWAYS_REACHABLE else full // 2
        if full > max_states:
            rows.append(TheoremRow(dims, verdict, None, expected, "SKIP"))
            continue
        size = orbit_stats(dims, Mode.UNSIGNED, threads=threads).orbit_size
        if verdict is Verdict.ALWAYS_REACHABLE:
            ok = size == expected
        else:
            # only necessity is known: the orbit cannot exceed the even permutations
            ok = size <= expected
        rows.append(TheoremRow(dims, verdict, size, expected, "PASS" if ok else "FAIL"))
    return rows


@dataclass(frozen=True)
class ParityWalkReport:
    dims: tuple[int, int]
    generator_parities: tuple[tuple[str, Parity, Parity], ...]
    steps: int
    seed: int
    passed: bool
    failure: Optional[str] = None


def parity_walk_check(dims: Sequence[int], steps: int, seed: int) -> ParityWalkReport:
    """Check that every generator is even and a seeded walk never leaves the even permutations.

    Each generator's parity is computed two ways: from the closed form and by
    cycle decomposition of the move applied to the standard array.
    """
    dims = _check_dims(dims)
    if len(dims) != 2 or dims[0] % 4 or dims[1] % 4:
        raise ValueError(f"parity_walk_check needs a rank-2 shape with both sides divisible by 4, got {dims}")
    gens = []
    failure = None
    base = standard(dims)
    for mv in legal_moves(dims):
        closed = move_parity(dims, mv)
        cycles = id_parity(apply_move(base, mv))
        gens.append((str(mv), closed, cycles))
        if failure is None and (closed is not Parity.EVEN or cycles is not Parity.EVEN):
            failure = f"generator {mv}: closed form {closed}, cycle count {cycles}"

    rng = random.Random(seed)
    moves = legal_moves(dims)
    # track positions with a plain list; the parity is checked on the real array
    ids = list(range(1, math.prod(dims) + 1))
    for step in range(steps):
        if failure is not None:
            break
        mv = rng.choice(moves)
        source, _ = slab_map(dims, mv)
        ids = [ids[s] for s in source]
        state = MultiArray.from_values(dims, ids)
        if id_parity(state) is not Parity.EVEN:
            failure = f"step {step + 1} ({mv}): odd state {state}"
    return ParityWalkReport(dims, tuple(gens), steps, seed, failure is None, failure)
