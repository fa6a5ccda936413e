"""Tokens, multidimensional arrays and prefix-reversal moves.

Arrays are immutable values of rank 1, 2 or 3 holding a permutation of the
ids ``1..N`` in row-major order. In signed mode every token also carries an
orientation that is toggled whenever a reversal moves it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

AXIS_NAMES = "HVD"


class DimensionError(ValueError):
    pass


class InvalidMoveError(ValueError):
    def __init__(self, message: str, field: str):
        super().__init__(message)
        self.field = field


class Orientation(enum.IntEnum):
    UP = 0
    DOWN = 1

    def flip(self) -> "Orientation":
        return Orientation(1 - self)


class Mode(str, enum.Enum):
    UNSIGNED = "unsigned"
    SIGNED = "signed"

    @classmethod
    def parse(cls, value: "Mode | str") -> "Mode":
        if isinstance(value, Mode):
            return value
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown mode {value!r}; expected 'unsigned' or 'signed'") from None


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __xor__(self, other: "Parity") -> "Parity":  # type: ignore[override]
        return Parity(int(self) ^ int(other))

    def __str__(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class Token:
    id: int
    orientation: Orientation = Orientation.UP

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"token id must be >= 1, got {self.id}")

    @property
    def value(self) -> int:
        """Signed integer spelling: negative when the token is Down."""
        return -self.id if self.orientation is Orientation.DOWN else self.id

    @classmethod
    def from_value(cls, value: int) -> "Token":
        if value == 0:
            raise ValueError("token value 0 is not allowed")
        return cls(abs(value), Orientation.DOWN if value < 0 else Orientation.UP)

    def flipped(self) -> "Token":
        return Token(self.id, self.orientation.flip())


@dataclass(frozen=True, order=True)
class Move:
    axis: int
    depth: int

    def __str__(self) -> str:
        if 0 <= self.axis < len(AXIS_NAMES):
            return f"{AXIS_NAMES[self.axis]}{self.depth}"
        return f"?{self.axis}:{self.depth}"

    def check(self, dims: Sequence[int]) -> None:
        if not 0 <= self.axis < len(dims):
            raise InvalidMoveError(
                f"move {self}: axis {self.axis} out of range for rank {len(dims)}", "axis"
            )
        if not 1 <= self.depth <= dims[self.axis]:
            raise InvalidMoveError(
                f"move {self}: depth {self.depth} out of range 1..{dims[self.axis]}", "depth"
            )

    def is_valid(self, dims: Sequence[int]) -> bool:
        return 0 <= self.axis < len(dims) and 1 <= self.depth <= dims[self.axis]


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not 1 <= len(dims) <= 3:
        raise DimensionError(f"rank must be 1, 2 or 3, got {len(dims)}")
    if any(d < 1 for d in dims):
        raise DimensionError(f"all dimensions must be >= 1, got {dims}")
    return dims


@dataclass(frozen=True)
class MultiArray:
    dims: tuple[int, ...]
    cells: tuple[Token, ...]
    mode: Mode = Mode.UNSIGNED

    def __post_init__(self):
        object.__setattr__(self, "dims", _check_dims(self.dims))
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        size = math.prod(self.dims)
        if len(self.cells) != size:
            raise ValueError(f"expected {size} cells for dims {self.dims}, got {len(self.cells)}")
        if sorted(t.id for t in self.cells) != list(range(1, size + 1)):
            raise ValueError(f"cell ids must be a permutation of 1..{size}")
        if self.mode is Mode.UNSIGNED and any(t.orientation for t in self.cells):
            raise ValueError("unsigned arrays cannot contain Down tokens")

    @classmethod
    def from_values(cls, dims: Iterable[int], values: Iterable[int], mode: Mode | str = Mode.UNSIGNED) -> "MultiArray":
        return cls(tuple(dims), tuple(Token.from_value(v) for v in values), Mode.parse(mode))

    @classmethod
    def from_codes(cls, dims: Sequence[int], codes: Iterable[int], mode: Mode | str) -> "MultiArray":
        """Inverse of :meth:`codes`."""
        cells = tuple(Token((c >> 1) + 1, Orientation(c & 1)) for c in codes)
        return cls(tuple(dims), cells, Mode.parse(mode))

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def signed(self) -> bool:
        return self.mode is Mode.SIGNED

    def values(self) -> tuple[int, ...]:
        return tuple(t.value for t in self.cells)

    def ids(self) -> tuple[int, ...]:
        return tuple(t.id for t in self.cells)

    def codes(self) -> tuple[int, ...]:
        """Per-cell integer code ``2*(id-1) + orientation`` used by the search engines."""
        return tuple(((t.id - 1) << 1) | t.orientation for t in self.cells)

    def nested(self) -> list:
        """Signed values as nested lists following ``dims``."""
        vals = list(self.values())
        for d in reversed(self.dims[1:]):
            vals = [vals[i:i + d] for i in range(0, len(vals), d)]
        return vals

    def __str__(self) -> str:
        return " / ".join(
            " ".join(str(v) for v in row) for row in _rows(self.values(), self.dims[-1])
        )


def _rows(values: Sequence[int], width: int):
    for i in range(0, len(values), width):
        yield values[i:i + width]


def standard(dims: Iterable[int], mode: Mode | str = Mode.UNSIGNED) -> MultiArray:
    dims = _check_dims(dims)
    return MultiArray(dims, tuple(Token(p + 1) for p in range(math.prod(dims))), Mode.parse(mode))


def is_standard(ma: MultiArray) -> bool:
    return all(t.id == p + 1 and t.orientation is Orientation.UP for p, t in enumerate(ma.cells))


@lru_cache(maxsize=None)
def slab_map(dims: tuple[int, ...], move: Move) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Position map of ``move`` on arrays of shape ``dims``.

    Returns ``(source, slab)``: after the move, position ``p`` holds the token
    previously at ``source[p]``; ``slab`` lists the positions whose tokens were
    moved (and flipped, in signed mode), in increasing order.
    """
    move.check(dims)
    strides = [math.prod(dims[k + 1:]) for k in range(len(dims))]
    extent = list(dims)
    extent[move.axis] = move.depth
    source = list(range(math.prod(dims)))
    slab = []
    for p in range(len(source)):
        idx = [(p // strides[k]) % dims[k] for k in range(len(dims))]
        if idx[move.axis] >= move.depth:
            continue
        slab.append(p)
        source[p] = sum((extent[k] - 1 - idx[k]) * strides[k] for k in range(len(dims)))
    return tuple(source), tuple(slab)


def reverse_block(ma: MultiArray) -> MultiArray:
    """Point reflection of the whole array, flipping orientations in signed mode."""
    cells = ma.cells[::-1]
    if ma.signed:
        cells = tuple(t.flipped() for t in cells)
    return MultiArray(ma.dims, cells, ma.mode)


def apply_move(ma: MultiArray, move: Move) -> MultiArray:
    source, slab = slab_map(ma.dims, move)
    cells = [ma.cells[s] for s in source]
    if ma.signed:
        for p in slab:
            cells[p] = cells[p].flipped()
    return MultiArray(ma.dims, tuple(cells), ma.mode)


def apply_moves(ma: MultiArray, moves: Iterable[Move]) -> MultiArray:
    for mv in moves:
        ma = apply_move(ma, mv)
    return ma


def legal_moves(dims: Sequence[int] | MultiArray) -> list[Move]:
    """All moves in canonical order: axis ascending, then depth ascending."""
    if isinstance(dims, MultiArray):
        dims = dims.dims
    return [Move(axis, depth) for axis, d in enumerate(dims) for depth in range(1, d + 1)]


def permutation_parity(perm: Sequence[int]) -> Parity:
    """Parity of a permutation of ``0..n-1`` by cycle decomposition."""
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return Parity((len(perm) - cycles) % 2)


def id_parity(ma: MultiArray) -> Parity:
    return permutation_parity([t.id - 1 for t in ma.cells])


def move_parity(dims: Sequence[int], move: Move) -> Parity:
    dims = _check_dims(dims)
    move.check(dims)
    t = move.depth * math.prod(d for k, d in enumerate(dims) if k != move.axis)
    return Parity((t // 2) % 2)


def canonical_key(ma: MultiArray) -> int | bytes:
    """Compact injective key; an int of 6 bits per cell up to 16 cells, bytes beyond."""
    if ma.size <= 16:
        key = 0
        for t in reversed(ma.cells):
            key = (key << 6) | ((t.id - 1) << 1) | t.orientation
        return key
    out = bytearray()
    for t in ma.cells:
        out += ((t.id - 1) << 1 | t.orientation).to_bytes(2, "big")
    return bytes(out)


def decode_key(key: int | bytes, dims: Sequence[int], mode: Mode | str) -> MultiArray:
    size = math.prod(dims)
    if isinstance(key, int):
        codes = [(key >> (6 * p)) & 0x3F for p in range(size)]
    else:
        codes = [int.from_bytes(key[2 * p:2 * p + 2], "big") for p in range(size)]
    return MultiArray.from_codes(dims, codes, mode)
