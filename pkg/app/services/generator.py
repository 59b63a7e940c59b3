"""
app/services/generator.py
Seeded random scenario generation for `cmpkit gen` and the seeded test suites.
"""

import logging

import numpy as np

from core.exceptions import TooManyRobots
from core.grid import GridDims, Instance, Point, Robot

logger = logging.getLogger(__name__)


def gen_random(dims: GridDims, k: int, seed: int) -> Instance:
    """
    k robots with distinct random starts and distinct random targets. The objective is
    left unset for the caller to choose.

    Raises
    ------
    TooManyRobots
        k exceeds the number of grid cells.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > dims.area:
        raise TooManyRobots(f"{k} robots do not fit on a {dims.width}x{dims.height} grid")
    rng = np.random.default_rng(seed)
    starts = rng.choice(dims.area, size=k, replace=False)
    targets = rng.choice(dims.area, size=k, replace=False)

    def cell(index: int) -> Point:
        return Point(int(index) % dims.width, int(index) // dims.width)

    robots = tuple(Robot(i, cell(s), cell(t)) for i, (s, t) in enumerate(zip(starts, targets)))
    logger.debug("gen_random: %dx%d, k=%d, seed=%d", dims.width, dims.height, k, seed)
    return Instance(dims, robots)
