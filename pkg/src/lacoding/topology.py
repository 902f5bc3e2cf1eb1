"""Coverage structure of a free-space optical deployment.

A topology records, for every transmitter, the set of receivers inside its
light cone. Everything the coding schemes need (the topological matrix and
the exclusive/shared transmitter counts) is derived from that set structure.

Indices are 0-based in the Python API. Documents, CLI arguments and printed
messages use 1-based labels (``T1``, ``R1``) to match the usual notation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import TopologyError

# c_i is bounded by k + 1, so this keeps every modulus far below 2**31.
MAX_TRANSMITTERS = 64


@dataclass(frozen=True)
class Topology:
    """Which receivers each transmitter covers.

    ``coverage[j]`` is the sorted tuple of receivers lit by transmitter ``j``.
    """

    num_transmitters: int
    num_receivers: int
    coverage: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k, m = self.num_transmitters, self.num_receivers
        if not isinstance(k, int) or not isinstance(m, int) or k < 1 or m < 1:
            raise TopologyError(f"need at least one transmitter and one receiver, got k={k}, m={m}")
        if k > MAX_TRANSMITTERS:
            raise TopologyError(f"k={k} exceeds the supported maximum of {MAX_TRANSMITTERS}")
        if len(self.coverage) != k:
            raise TopologyError(f"coverage lists {len(self.coverage)} transmitters, expected {k}")
        cleaned = []
        for j, cov in enumerate(self.coverage):
            cov = tuple(cov)
            if len(set(cov)) != len(cov):
                raise TopologyError(f"T{j + 1} lists a receiver more than once")
            for r in cov:
                if not isinstance(r, (int, np.integer)) or not 0 <= r < m:
                    raise TopologyError(f"T{j + 1} covers receiver index {r}, but m={m}")
            cleaned.append(tuple(sorted(int(r) for r in cov)))
        object.__setattr__(self, "coverage", tuple(cleaned))

    @classmethod
    def from_coverage(cls, coverage: Sequence[Iterable[int]], num_receivers: int | None = None) -> "Topology":
        """Build from 0-based coverage sets; ``m`` defaults to the largest index + 1."""
        coverage = [tuple(c) for c in coverage]
        if num_receivers is None:
            num_receivers = 1 + max((r for c in coverage for r in c), default=0)
        return cls(len(coverage), num_receivers, tuple(coverage))

    @cached_property
    def receiver_masks(self) -> tuple[int, ...]:
        """Bitmask per receiver; bit ``j`` is set when transmitter ``j`` covers it."""
        masks = [0] * self.num_receivers
        for j, cov in enumerate(self.coverage):
            for r in cov:
                masks[r] |= 1 << j
        return tuple(masks)

    def covering(self, receiver: int) -> tuple[int, ...]:
        """Transmitters whose cone contains ``receiver``, ascending."""
        return tuple(j for j, cov in enumerate(self.coverage) if receiver in cov)


@dataclass(frozen=True)
class TransmitterGroup:
    """Transmitters whose coverage is exactly ``receiver_set``."""

    receiver_set: tuple[int, ...]
    transmitters: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.transmitters)

    @property
    def order(self) -> int:
        return len(self.receiver_set)


def parse_topology(text: str) -> Topology:
    """Parse the JSON topology document (1-based receiver labels)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TopologyError("topology document must be a JSON object")
    missing = {"transmitters", "receivers", "coverage"} - doc.keys()
    if missing:
        raise TopologyError(f"missing field(s): {', '.join(sorted(missing))}")
    k, m, coverage = doc["transmitters"], doc["receivers"], doc["coverage"]
    for name, value in (("transmitters", k), ("receivers", m)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TopologyError(f'"{name}" must be an integer')
    if not isinstance(coverage, list) or not all(isinstance(c, list) for c in coverage):
        raise TopologyError('"coverage" must be an array of arrays')
    sets = []
    for j, cov in enumerate(coverage):
        if not all(isinstance(r, int) and not isinstance(r, bool) for r in cov):
            raise TopologyError(f"coverage of T{j + 1} must hold integer receiver labels")
        if any(r < 1 or r > m for r in cov):
            bad = next(r for r in cov if r < 1 or r > m)
            raise TopologyError(f"T{j + 1} covers R{bad}, but there are {m} receivers")
        sets.append(tuple(r - 1 for r in cov))
    return Topology(k, m, tuple(sets))


def load_topology(path) -> Topology:
    return parse_topology(Path(path).read_text())


def serialize_topology(t: Topology) -> str:
    """Canonical JSON form: sorted 1-based coverage lists, compact separators."""
    doc = {
        "transmitters": t.num_transmitters,
        "receivers": t.num_receivers,
        "coverage": [[r + 1 for r in cov] for cov in t.coverage],
    }
    return json.dumps(doc, separators=(",", ":"))


def topological_matrix(t: Topology) -> np.ndarray:
    """The m-by-k 0/1 matrix with ``H[i, j] = 1`` when T_j lights R_i."""
    h = np.zeros((t.num_receivers, t.num_transmitters), dtype=np.uint8)
    for j, cov in enumerate(t.coverage):
        h[list(cov), j] = 1
    return h


def group_decomposition(t: Topology) -> list[TransmitterGroup]:
    """Partition the covering transmitters by their exact coverage set.

    Groups come out sorted by (set size, set) so that results are stable.
    Transmitters covering nobody belong to no group.
    """
    buckets: dict[tuple[int, ...], list[int]] = {}
    for j, cov in enumerate(t.coverage):
        if cov:
            buckets.setdefault(cov, []).append(j)
    return [
        TransmitterGroup(s, tuple(js))
        for s, js in sorted(buckets.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]


def group_counts(t: Topology) -> dict[tuple[int, ...], int]:
    """``t_S`` for every receiver set S with at least one transmitter."""
    return {g.receiver_set: g.count for g in group_decomposition(t)}


def exclusive_counts(t: Topology) -> tuple[int, ...]:
    counts = group_counts(t)
    return tuple(counts.get((i,), 0) for i in range(t.num_receivers))


def pair_counts(t: Topology) -> dict[tuple[int, int], int]:
    """``t_ij`` for every receiver pair i < j (zero entries included)."""
    counts = group_counts(t)
    return {p: counts.get(p, 0) for p in combinations(range(t.num_receivers), 2)}


def higher_order_transmitters(t: Topology) -> list[int]:
    """Transmitters covering three or more receivers, ascending."""
    return [j for j, cov in enumerate(t.coverage) if len(cov) >= 3]


def describe_groups(t: Topology) -> str:
    """One ``t_S = n`` line per group, 1-based, for CLI output."""
    lines = []
    for g in group_decomposition(t):
        label = "".join(str(r + 1) for r in g.receiver_set)
        lines.append(f"t_{label} = {g.count}")
    return "\n".join(lines)
