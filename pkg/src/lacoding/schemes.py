"""Single Rate Coding (SRC) and Equal Rate Coding (ERC).

SRC points every transmitter over one receiver at that receiver and sends a
level in ``0..n``. ERC pre-inverts the topological matrix over GF(2) so that
each receiver reads one private bit as the parity of its perceived level.
"""

from __future__ import annotations

import math
from typing import Sequence

from . import gf2
from .channel import Frame, Levels
from .exceptions import SingularMatrixError
from .topology import Topology, topological_matrix

RateTuple = tuple[float, ...]


def src_rate(t: Topology, receiver: int) -> RateTuple:
    n = len(t.covering(receiver))
    if n == 0:
        raise ValueError(f"R{receiver + 1} is not covered by any transmitter")
    rates = [0.0] * t.num_receivers
    rates[receiver] = math.log2(n + 1)
    return tuple(rates)


def src_encode(level: int, n: int) -> tuple[int, ...]:
    """Bits for the ``n`` covering transmitters: ``level`` ones, lowest index first."""
    if not 0 <= level <= n:
        raise ValueError(f"level {level} outside 0..{n}")
    return (1,) * level + (0,) * (n - level)


def src_frame(t: Topology, receiver: int, level: int) -> Frame:
    covering = t.covering(receiver)
    bits = src_encode(level, len(covering))
    frame = [0] * t.num_transmitters
    for j, bit in zip(covering, bits):
        frame[j] = bit
    return tuple(frame)


def src_decode(levels: Levels, receiver: int) -> int:
    return levels[receiver]


def erc_encode(h: gf2.Gf2Matrix, b: Sequence[int]) -> Frame:
    """Solve ``H x = b`` over GF(2); ``h`` must be square and full rank."""
    return gf2.solve(h, b)


def erc_decode(levels: Sequence[int]) -> tuple[int, ...]:
    return tuple(y % 2 for y in levels)


def erc_columns(t: Topology) -> list[int] | None:
    """Transmitters carrying ERC, or None when no m x m full-rank submatrix exists.

    Columns are taken greedily from T1 upward; the rest stay dark.
    """
    h = gf2.Gf2Matrix.from_array(topological_matrix(t))
    cols = gf2.select_independent_columns(h)
    return cols if len(cols) == t.num_receivers else None


def erc_matrix(t: Topology) -> tuple[gf2.Gf2Matrix, list[int]]:
    cols = erc_columns(t)
    if cols is None:
        raise SingularMatrixError("topological matrix has rank below the receiver count")
    return gf2.Gf2Matrix.from_array(topological_matrix(t)).columns(cols), cols


def erc_frame(t: Topology, b: Sequence[int]) -> Frame:
    """Full transmit frame delivering bit ``b[i]`` to every receiver ``i``."""
    if len(b) != t.num_receivers:
        raise ValueError(f"ERC message needs {t.num_receivers} bits, got {len(b)}")
    h, cols = erc_matrix(t)
    x = erc_encode(h, b)
    frame = [0] * t.num_transmitters
    for j, bit in zip(cols, x):
        frame[j] = bit
    return tuple(frame)


def erc_rate(t: Topology) -> RateTuple | None:
    if erc_columns(t) is None:
        return None
    return (1.0,) * t.num_receivers
