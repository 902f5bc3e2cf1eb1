"""Noiseless additive intensity channel.

Each transmitter sends one OOK bit per slot. A receiver perceives the number
of lit transmitters whose cones contain it; there is no other impairment.

Frames are enumerated as integers with transmitter ``T1`` in the least
significant bit. This is the ordering under which the per-receiver channel
matrices come out in the familiar alternating pattern for ``T1``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .topology import Topology

MAX_ENUMERATED_TRANSMITTERS = 20

Frame = tuple[int, ...]
Levels = tuple[int, ...]


def frame_to_int(frame: Sequence[int]) -> int:
    word = 0
    for j, bit in enumerate(frame):
        if bit not in (0, 1):
            raise ValueError(f"frame bit {j + 1} is {bit!r}, expected 0 or 1")
        word |= bit << j
    return word


def int_to_frame(word: int, k: int) -> Frame:
    return tuple((word >> j) & 1 for j in range(k))


def transmit(t: Topology, frame: Sequence[int]) -> Levels:
    """Received intensity level at every receiver."""
    if len(frame) != t.num_transmitters:
        raise ValueError(f"frame has {len(frame)} bits, topology has {t.num_transmitters} transmitters")
    word = frame_to_int(frame)
    return tuple((mask & word).bit_count() for mask in t.receiver_masks)


def transmit_word(t: Topology, word: int) -> Levels:
    """`transmit` for a frame already packed into an int (no validation)."""
    return tuple((mask & word).bit_count() for mask in t.receiver_masks)


def channel_matrix(t: Topology, receiver: int) -> np.ndarray:
    """Deterministic 2^k x (n_i + 1) transition matrix of one receiver.

    Row ``p`` is frame ``p``; column ``l`` is the perceived level ``l``.
    """
    if not 0 <= receiver < t.num_receivers:
        raise ValueError(f"receiver index {receiver} out of range for m={t.num_receivers}")
    k = t.num_transmitters
    if k > MAX_ENUMERATED_TRANSMITTERS:
        raise ValueError(f"k={k} is too large to enumerate (limit {MAX_ENUMERATED_TRANSMITTERS})")
    mask = t.receiver_masks[receiver]
    n_i = mask.bit_count()
    words = np.arange(1 << k, dtype=np.int64)
    levels = _popcount(words & mask)
    a = np.zeros((1 << k, n_i + 1), dtype=np.uint8)
    a[words, levels] = 1
    return a


def all_levels(t: Topology) -> np.ndarray:
    """Received levels for every frame, shape (2^k, m), row order as above."""
    k = t.num_transmitters
    if k > MAX_ENUMERATED_TRANSMITTERS:
        raise ValueError(f"k={k} is too large to enumerate (limit {MAX_ENUMERATED_TRANSMITTERS})")
    words = np.arange(1 << k, dtype=np.int64)
    return np.stack([_popcount(words & m) for m in t.receiver_masks], axis=1)


def _popcount(x: np.ndarray) -> np.ndarray:
    counts = np.zeros_like(x)
    x = x.copy()
    while x.any():
        counts += x & 1
        x >>= 1
    return counts
