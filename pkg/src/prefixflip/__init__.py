"""Prefix-reversal rearrangement of 1D, 2D and 3D token arrays."""

from .engine import BudgetExhausted, SearchBudget, Unreachable
from .model import (
    DimensionError,
    InvalidMoveError,
    Mode,
    Move,
    MultiArray,
    Orientation,
    Parity,
    Token,
    apply_move,
    apply_moves,
    canonical_key,
    decode_key,
    id_parity,
    is_standard,
    legal_moves,
    move_parity,
    reverse_block,
    standard,
)
from .solvers import (
    ModeError,
    Solution,
    Verification,
    bfs_solve,
    bidirectional_bfs_solve,
    breakpoint_bound,
    greedy_signed_1d,
    greedy_unsigned_1d,
    ida_solve,
    verify,
)

__all__ = [
    "BudgetExhausted",
    "SearchBudget",
    "Unreachable",
    "apply_move",
    "apply_moves",
    "bfs_solve",
    "bidirectional_bfs_solve",
    "breakpoint_bound",
    "canonical_key",
    "decode_key",
    "DimensionError",
    "greedy_signed_1d",
    "greedy_unsigned_1d",
    "id_parity",
    "ida_solve",
    "InvalidMoveError",
    "is_standard",
    "legal_moves",
    "Mode",
    "ModeError",
    "Move",
    "move_parity",
    "MultiArray",
    "Orientation",
    "Parity",
    "reverse_block",
    "Solution",
    "standard",
    "Token",
    "Verification",
    "verify",
]

__version__ = "0.1.0"
