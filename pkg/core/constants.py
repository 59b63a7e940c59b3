"""
core/constants.py
Hard-coded model constants for cmpkit.
These values are NOT configurable via environment; the gadget arithmetic depends on them.
"""

from typing import Final

# ---------------------------------------------------------------------------
# Moves (x grows rightward, y grows upward)
# ---------------------------------------------------------------------------
MOVE_ORDER: Final[str] = "UDLRW"                  # Tie-break order U<D<L<R<W
MOVE_VECTORS: Final[dict[str, tuple[int, int]]] = {
    "U": (0, 1),
    "D": (0, -1),
    "L": (-1, 0),
    "R": (1, 0),
    "W": (0, 0),
}
REVERSE_MOVE: Final[dict[str, str]] = {"U": "D", "D": "U", "L": "R", "R": "L", "W": "W"}

# ---------------------------------------------------------------------------
# Reduction gadgets
# ---------------------------------------------------------------------------
VDP_PATH_BOUND: Final[int] = 27                   # d for the disjoint-paths reductions
CMPM_MAKESPAN: Final[int] = 26                    # ℓ for the makespan reduction
GADGET_PERIMETER: Final[int] = 54                 # 2(a+b-2) for a variable gadget
GADGET_MIN_SIDE: Final[int] = 4
CLAUSE_TARGET_OFFSET: Final[tuple[int, int]] = (8, -5)
CLAUSE_ROBOT_OFFSET: Final[tuple[int, int]] = (4, -7)
DEFAULT_REFINEMENT: Final[int] = 1000
MIN_REFINEMENT: Final[int] = 20                   # Smallest factor the layout fits in

# ---------------------------------------------------------------------------
# Constructive scheduler
# ---------------------------------------------------------------------------
DELEGATION_HORIZON_FACTOR: Final[int] = 32        # Delegated small grids: horizon cap = 32k
LENGTH_OVERHEAD_C: Final[int] = 30                # total ≤ dist_min + C·k²
TURN_BOUND_C: Final[int] = 14                     # per-robot turns ≤ 3k + C'

# ---------------------------------------------------------------------------
# CLI exit codes
# ---------------------------------------------------------------------------
EXIT_OK: Final[int] = 0
EXIT_USAGE: Final[int] = 1
EXIT_UNSOLVABLE: Final[int] = 2
EXIT_RESOURCE_LIMIT: Final[int] = 3

# ---------------------------------------------------------------------------
# System
# ---------------------------------------------------------------------------
SYSTEM_VERSION: Final[str] = "cmpkit-1.0"
