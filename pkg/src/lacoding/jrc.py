"""Joint Rate Coding (JRC).

Receivers share transmitters pairwise. An allocation credits ``t^i_{ip}`` of
the ``t_{ip}`` units shared by receivers ``i`` and ``p`` to receiver ``i``,
which then decodes its message as its perceived level modulo

    c_i = t_i + sum_p t^i_{ip} + 1.

The two-receiver encoder follows the set-intersection construction: the
shared level is the smallest value both receivers can compensate with their
exclusive transmitters. The n-receiver encoder admits receivers one at a
time in index order; when receiver ``p`` joins, the levels on its pairs with
earlier receivers are chosen smallest-first, and the search backtracks when
some receiver could no longer be brought onto its residue. For two
receivers both encoders produce the same codeword.

Transmitters covering three or more receivers are handled by assigning each
one to a pair (which raises that pair's count by one) and treating its bit
as a known offset at every receiver it lights; each receiver then encodes
``b_l`` minus that offset, modulo ``c_l``.

The allocation constraints are sufficient for two receivers but not for
three or more: some valid allocations leave a few messages without any
codeword. The encoders raise :class:`InfeasibleMessageError` for those, and
:func:`is_decodable` detects such allocations by brute force over frames.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .channel import Frame, all_levels
from .exceptions import AllocationError, EnumerationBoundError, InfeasibleMessageError, TopologyError
from .topology import (
    Topology,
    exclusive_counts,
    group_decomposition,
    higher_order_transmitters,
    pair_counts,
)

Pair = tuple[int, int]

MAX_ALLOCATIONS = 10**6
MAX_HIGHER_ORDER = 16


@dataclass(frozen=True)
class PairwiseProfile:
    """Exclusive counts ``t_i`` and the symmetric pairwise counts ``t_{ip}``."""

    exclusive: tuple[int, ...]
    shared: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.exclusive)
        if m < 1:
            raise ValueError("profile needs at least one receiver")
        if len(self.shared) != m or any(len(row) != m for row in self.shared):
            raise ValueError(f"shared counts must form a {m}x{m} matrix")
        if any(v < 0 for v in self.exclusive) or any(v < 0 for row in self.shared for v in row):
            raise ValueError("counts must be non-negative")
        for i in range(m):
            if self.shared[i][i]:
                raise ValueError("shared counts must have a zero diagonal")
            for p in range(i + 1, m):
                if self.shared[i][p] != self.shared[p][i]:
                    raise ValueError(f"shared counts not symmetric at R{i + 1},R{p + 1}")

    @classmethod
    def from_counts(cls, exclusive: Sequence[int], pairs: Mapping[Pair, int]) -> "PairwiseProfile":
        m = len(exclusive)
        shared = [[0] * m for _ in range(m)]
        for (i, p), v in pairs.items():
            if i == p:
                raise ValueError("a pair needs two distinct receivers")
            shared[i][p] = shared[p][i] = v
        return cls(tuple(exclusive), tuple(tuple(r) for r in shared))

    @classmethod
    def from_topology(cls, t: Topology) -> "PairwiseProfile":
        if higher_order_transmitters(t):
            raise TopologyError("topology has transmitters covering 3+ receivers; convert it first")
        return cls.from_counts(exclusive_counts(t), pair_counts(t))

    @property
    def num_receivers(self) -> int:
        return len(self.exclusive)

    def pair(self, i: int, p: int) -> int:
        return self.shared[i][p]

    def pairs(self) -> list[Pair]:
        """All receiver pairs i < p with at least one shared unit."""
        m = self.num_receivers
        return [(i, p) for i in range(m) for p in range(i + 1, m) if self.shared[i][p]]

    def to_topology(self) -> Topology:
        """A concrete deployment realizing the profile, transmitters in group order."""
        coverage: list[tuple[int, ...]] = []
        for i, n in enumerate(self.exclusive):
            coverage += [(i,)] * n
        for i, p in self.pairs():
            coverage += [(i, p)] * self.shared[i][p]
        if not coverage:
            # one dark transmitter keeps the topology well formed
            coverage = [()]
        return Topology(len(coverage), self.num_receivers, tuple(coverage))


@dataclass(frozen=True)
class JrcAllocation:
    """``split[i][p]`` shared units of pair {i, p} credited to receiver ``i``."""

    split: tuple[tuple[int, ...], ...]

    @classmethod
    def zeros(cls, m: int) -> "JrcAllocation":
        return cls(tuple((0,) * m for _ in range(m)))

    @classmethod
    def from_splits(cls, m: int, splits: Iterable[tuple[int, int, int]]) -> "JrcAllocation":
        """From ``(i, p, value)`` triples meaning ``t^i_{ip} = value``."""
        split = [[0] * m for _ in range(m)]
        for i, p, v in splits:
            if not (0 <= i < m and 0 <= p < m) or i == p:
                raise AllocationError(f"bad split pair R{i + 1},R{p + 1} for m={m}")
            split[i][p] = v
        return cls(tuple(tuple(r) for r in split))

    @property
    def num_receivers(self) -> int:
        return len(self.split)

    def violations(self, profile: PairwiseProfile) -> list[str]:
        m = profile.num_receivers
        if self.num_receivers != m:
            return [f"allocation is {self.num_receivers}x{self.num_receivers}, profile has {m} receivers"]
        out = []
        s, t = self.split, profile
        for i in range(m):
            if s[i][i]:
                out.append(f"diagonal entry t^{i + 1}_{i + 1}{i + 1} must be 0")
            for p in range(m):
                if p == i:
                    continue
                v = s[i][p]
                if v < 0:
                    out.append(f"t^{i + 1}_{{{i + 1}{p + 1}}} is negative")
                if t.pair(i, p) == 0 and v:
                    out.append(f"R{i + 1} and R{p + 1} share nothing, so t^{i + 1}_{{{i + 1}{p + 1}}} must be 0")
                elif v > t.exclusive[p]:
                    out.append(f"t^{i + 1}_{{{i + 1}{p + 1}}}={v} exceeds t_{p + 1}={t.exclusive[p]}")
                if i < p and v + s[p][i] > t.pair(i, p):
                    out.append(
                        f"t^{i + 1}_{{{i + 1}{p + 1}}} + t^{p + 1}_{{{i + 1}{p + 1}}} = {v + s[p][i]}"
                        f" exceeds t_{i + 1}{p + 1}={t.pair(i, p)}"
                    )
        return out

    def validate(self, profile: PairwiseProfile) -> None:
        problems = self.violations(profile)
        if problems:
            raise AllocationError("; ".join(problems))

    def is_valid(self, profile: PairwiseProfile) -> bool:
        return not self.violations(profile)

    def moduli(self, profile: PairwiseProfile) -> tuple[int, ...]:
        return tuple(
            profile.exclusive[i] + sum(self.split[i]) + 1 for i in range(profile.num_receivers)
        )

    def describe(self) -> str:
        m = self.num_receivers
        parts = [
            f"t^{i + 1}_{min(i, p) + 1}{max(i, p) + 1}={self.split[i][p]}"
            for i in range(m)
            for p in range(m)
            if self.split[i][p]
        ]
        return " ".join(parts) if parts else "(none)"


@dataclass(frozen=True)
class JrcCodeword:
    """Per-group levels; realized on the wire lowest transmitter index first."""

    exclusive_levels: tuple[int, ...]
    shared_levels: dict = field(default_factory=dict)  # (i, p) -> level
    higher_bits: dict = field(default_factory=dict)  # transmitter -> bit

    def receiver_sums(self, t: Topology) -> tuple[int, ...]:
        """Perceived levels, computed from the group levels directly."""
        sums = list(self.exclusive_levels)
        for (i, p), v in self.shared_levels.items():
            sums[i] += v
            sums[p] += v
        for j, bit in self.higher_bits.items():
            for r in t.coverage[j]:
                sums[r] += bit
        return tuple(sums)


def jrc_rates(profile: PairwiseProfile, alloc: JrcAllocation) -> tuple[float, ...]:
    return tuple(math.log2(c) for c in alloc.moduli(profile))


# ---------------------------------------------------------------- two receivers


@dataclass(frozen=True)
class Jrc2Trace:
    """Intermediate sets of the two-receiver encoder, kept for inspection."""

    moduli: tuple[int, int]
    candidates: tuple[tuple[int, ...], tuple[int, ...]]
    intersection: tuple[int, ...]
    shared_level: int
    exclusive_levels: tuple[int, int]


def jrc2_trace(t1: int, t2: int, t12: int, split: tuple[int, int], b: tuple[int, int]) -> Jrc2Trace:
    s1, s2 = split
    if min(t1, t2, t12, s1, s2) < 0:
        raise AllocationError("counts and splits must be non-negative")
    if s1 + s2 > t12:
        raise AllocationError(f"split {s1}+{s2} exceeds t_12={t12}")
    if t1 < s2 or t2 < s1:
        raise AllocationError(f"need t_1 >= t^2_12 and t_2 >= t^1_12, got t=({t1},{t2}), split=({s1},{s2})")
    c1, c2 = t1 + s1 + 1, t2 + s2 + 1
    b1, b2 = b
    if not (0 <= b1 < c1 and 0 <= b2 < c2):
        raise ValueError(f"message {tuple(b)} outside {{0..{c1 - 1}}} x {{0..{c2 - 1}}}")
    set1 = tuple((b1 - i) % c1 for i in range(t1 + 1))
    set2 = tuple((b2 - i) % c2 for i in range(t2 + 1))
    common = tuple(sorted(set(set1) & set(set2)))
    if not common:
        raise InfeasibleMessageError(b, "candidate sets do not intersect")
    x12 = common[0]
    x1, x2 = (b1 - x12) % c1, (b2 - x12) % c2
    if x12 > t12 or x1 > t1 or x2 > t2:
        raise InfeasibleMessageError(b, f"levels ({x1},{x2},{x12}) exceed group sizes")
    return Jrc2Trace((c1, c2), (set1, set2), common, x12, (x1, x2))


def jrc2_encode(t1: int, t2: int, t12: int, split: tuple[int, int], b: tuple[int, int]) -> JrcCodeword:
    tr = jrc2_trace(t1, t2, t12, split, b)
    shared = {(0, 1): tr.shared_level} if t12 else {}
    return JrcCodeword(tr.exclusive_levels, shared)


def jrc2_decode(y: int, c: int) -> int:
    if c < 1:
        raise ValueError("modulus must be positive")
    return y % c


# ---------------------------------------------------------------- n receivers


def _induction_order(pairs: Iterable[Pair]) -> list[Pair]:
    # pairs of receiver p with earlier receivers are settled when p joins
    return sorted(pairs, key=lambda q: (q[1], q[0]))


def _search_levels(
    exclusive: Sequence[int],
    caps: Mapping[Pair, int],
    moduli: Sequence[int],
    targets: Sequence[int],
    offsets: Sequence[int],
):
    """Depth-first search for pair levels meeting every receiver's congruence.

    Returns ``(exclusive_levels, pair_levels)`` or None when none exist.
    """
    m = len(exclusive)
    order = _induction_order(q for q, cap in caps.items() if cap > 0)
    sums = list(offsets)
    room = list(exclusive)
    for i, p in order:
        room[i] += caps[(i, p)]
        room[p] += caps[(i, p)]

    def reachable(r: int) -> bool:
        c = moduli[r]
        return room[r] >= c - 1 or (targets[r] - sums[r]) % c <= room[r]

    if not all(reachable(r) for r in range(m)):
        return None
    chosen: dict[Pair, int] = {}

    def descend(depth: int) -> bool:
        if depth == len(order):
            return True
        i, p = order[depth]
        cap = caps[(i, p)]
        room[i] -= cap
        room[p] -= cap
        for v in range(cap + 1):
            sums[i] += v
            sums[p] += v
            if reachable(i) and reachable(p) and descend(depth + 1):
                chosen[(i, p)] = v
                return True
            sums[i] -= v
            sums[p] -= v
        room[i] += cap
        room[p] += cap
        return False

    if not descend(0):
        return None
    excl = tuple((targets[r] - sums[r]) % moduli[r] for r in range(m))
    return excl, {q: chosen[q] for q in order}


def _check_message(b: Sequence[int], c: Sequence[int]) -> tuple[int, ...]:
    b = tuple(int(v) for v in b)
    if len(b) != len(c):
        raise ValueError(f"message has {len(b)} entries, expected {len(c)}")
    for i, (v, ci) in enumerate(zip(b, c)):
        if not 0 <= v < ci:
            raise ValueError(f"b_{i + 1}={v} outside 0..{ci - 1}")
    return b


def jrcn_encode(profile: PairwiseProfile, alloc: JrcAllocation, b: Sequence[int]) -> JrcCodeword:
    alloc.validate(profile)
    c = alloc.moduli(profile)
    b = _check_message(b, c)
    caps = {q: profile.pair(*q) for q in profile.pairs()}
    found = _search_levels(profile.exclusive, caps, c, b, [0] * len(c))
    if found is None:
        raise InfeasibleMessageError(b, f"moduli {c}")
    excl, shared = found
    return JrcCodeword(excl, shared)


def jrcn_decode(levels: Sequence[int], moduli: Sequence[int]) -> tuple[int, ...]:
    if len(levels) != len(moduli):
        raise ValueError("levels and moduli differ in length")
    return tuple(jrc2_decode(y, c) for y, c in zip(levels, moduli))


# ---------------------------------------------------------------- general topologies


def default_assignment(t: Topology) -> dict[int, Pair]:
    """Map each 3+-receiver transmitter to the first pair of its coverage set."""
    return {j: t.coverage[j][:2] for j in higher_order_transmitters(t)}


def assignment_choices(t: Topology) -> list[dict[int, Pair]]:
    """Every way of assigning the 3+-receiver transmitters to pairs."""
    higher = higher_order_transmitters(t)
    options = [list(itertools.combinations(t.coverage[j], 2)) for j in higher]
    return [dict(zip(higher, combo)) for combo in itertools.product(*options)]


def _checked_assignment(t: Topology, assignment: Mapping[int, Pair] | None) -> dict[int, Pair]:
    higher = higher_order_transmitters(t)
    if assignment is None:
        return default_assignment(t)
    extra = set(assignment) - set(higher)
    if extra:
        raise AllocationError(
            "assignment names transmitters that cover fewer than three receivers: "
            + ", ".join(f"T{j + 1}" for j in sorted(extra))
        )
    out = {}
    for j in higher:
        if j not in assignment:
            raise AllocationError(f"T{j + 1} covers {len(t.coverage[j])} receivers but has no pair assigned")
        i, p = sorted(assignment[j])
        if i == p or i not in t.coverage[j] or p not in t.coverage[j]:
            raise AllocationError(
                f"T{j + 1} covers {{{', '.join(f'R{r + 1}' for r in t.coverage[j])}}}"
                f" and cannot be assigned to R{i + 1},R{p + 1}"
            )
        out[j] = (i, p)
    return out


def convert_to_pairwise(t: Topology, assignment: Mapping[int, Pair] | None = None) -> PairwiseProfile:
    """Fold every 3+-receiver transmitter into the pair it is assigned to."""
    assignment = _checked_assignment(t, assignment)
    counts = dict(pair_counts(t))
    for q in assignment.values():
        counts[q] = counts.get(q, 0) + 1
    return PairwiseProfile.from_counts(exclusive_counts(t), counts)


class JrcEncoder:
    """Encoder for one (topology, allocation, assignment) configuration.

    ``alloc`` refers to the converted profile. ``higher_bits`` fixes the bit
    of every 3+-receiver transmitter (ascending transmitter order); when it is
    omitted the bit patterns are tried in ascending order and the first one
    admitting a codeword is used.
    """

    def __init__(
        self,
        t: Topology,
        alloc: JrcAllocation,
        assignment: Mapping[int, Pair] | None = None,
        higher_bits: Sequence[int] | None = None,
    ):
        self.topology = t
        self.assignment = _checked_assignment(t, assignment)
        self.profile = convert_to_pairwise(t, self.assignment)
        alloc.validate(self.profile)
        self.alloc = alloc
        self.moduli = alloc.moduli(self.profile)
        self.higher = sorted(self.assignment)
        if higher_bits is not None:
            higher_bits = tuple(int(v) for v in higher_bits)
            if len(higher_bits) != len(self.higher) or any(v not in (0, 1) for v in higher_bits):
                raise ValueError(f"need {len(self.higher)} higher-order bits (0/1), got {higher_bits}")
            self.patterns = [higher_bits]
        else:
            if len(self.higher) > MAX_HIGHER_ORDER:
                raise EnumerationBoundError(
                    f"{len(self.higher)} higher-order transmitters exceed {MAX_HIGHER_ORDER}"
                )
            self.patterns = list(itertools.product((0, 1), repeat=len(self.higher)))
        self._caps = {q: n for q, n in pair_counts(t).items() if n}
        self._exclusive = exclusive_counts(t)
        self._offsets = []
        for bits in self.patterns:
            offsets = [0] * t.num_receivers
            for j, bit in zip(self.higher, bits):
                for r in t.coverage[j]:
                    offsets[r] += bit
            self._offsets.append(offsets)
        self._groups = group_decomposition(t)

    def encode(self, b: Sequence[int]) -> JrcCodeword:
        b = _check_message(b, self.moduli)
        for bits, offsets in zip(self.patterns, self._offsets):
            found = _search_levels(self._exclusive, self._caps, self.moduli, b, offsets)
            if found is not None:
                excl, shared = found
                return JrcCodeword(excl, shared, dict(zip(self.higher, bits)))
        raise InfeasibleMessageError(b, f"moduli {self.moduli}")

    def frame(self, b: Sequence[int]) -> Frame:
        return codeword_frame(self.topology, self.encode(b), self._groups)

    def decode(self, levels: Sequence[int]) -> tuple[int, ...]:
        return jrcn_decode(levels, self.moduli)


def general_encode(
    t: Topology,
    alloc: JrcAllocation,
    b: Sequence[int],
    assignment: Mapping[int, Pair] | None = None,
    higher_bits: Sequence[int] | None = None,
) -> JrcCodeword:
    """Encode ``b`` on an arbitrary topology; see :class:`JrcEncoder`."""
    return JrcEncoder(t, alloc, assignment, higher_bits).encode(b)


def codeword_frame(t: Topology, cw: JrcCodeword, groups=None) -> Frame:
    """Lay the codeword's group levels onto concrete transmitters."""
    frame = [0] * t.num_transmitters
    for g in groups if groups is not None else group_decomposition(t):
        if g.order == 1:
            level = cw.exclusive_levels[g.receiver_set[0]]
        elif g.order == 2:
            level = cw.shared_levels.get(g.receiver_set, 0)
        else:
            for j in g.transmitters:
                frame[j] = cw.higher_bits.get(j, 0)
            continue
        if not 0 <= level <= g.count:
            raise ValueError(f"level {level} does not fit group {g.receiver_set} of size {g.count}")
        for j in g.transmitters[:level]:
            frame[j] = 1
    return tuple(frame)


# ---------------------------------------------------------------- allocations


def _pair_options(profile: PairwiseProfile, i: int, p: int) -> list[tuple[int, int]]:
    n = profile.pair(i, p)
    return [
        (a, b)
        for a in range(min(n, profile.exclusive[p]) + 1)
        for b in range(min(n - a, profile.exclusive[i]) + 1)
    ]


def enumerate_allocations(profile: PairwiseProfile, limit: int = MAX_ALLOCATIONS) -> list[JrcAllocation]:
    """Every valid allocation, in lexicographic order over pairs (i < p)."""
    pairs = profile.pairs()
    bound = math.prod((profile.pair(*q) + 1) * (profile.pair(*q) + 2) // 2 for q in pairs)
    if bound > limit:
        raise EnumerationBoundError(f"up to {bound} allocations exceed the limit of {limit}")
    m = profile.num_receivers
    out = []
    for combo in itertools.product(*(_pair_options(profile, *q) for q in pairs)):
        split = [[0] * m for _ in range(m)]
        for (i, p), (a, b) in zip(pairs, combo):
            split[i][p], split[p][i] = a, b
        out.append(JrcAllocation(tuple(tuple(r) for r in split)))
    return out


@dataclass(frozen=True)
class GreedyStep:
    pair: Pair
    moduli_before: tuple[int, int]
    feasible: tuple[int, ...]  # receivers allowed to take the unit
    chosen: int | None

    def gain(self, receiver: int) -> float:
        c = self.moduli_before[self.pair.index(receiver)]
        return math.log2(1 + 1 / c)


def greedy_trace(profile: PairwiseProfile) -> tuple[JrcAllocation, list[GreedyStep]]:
    """Hand out shared units one at a time to the side with the smaller alphabet.

    A side is eligible while its credit on the pair stays within the other
    side's exclusive count. Ties go to the lower receiver index.
    """
    m = profile.num_receivers
    split = [[0] * m for _ in range(m)]
    c = [profile.exclusive[i] + 1 for i in range(m)]
    steps = []
    for i, p in profile.pairs():
        for _ in range(profile.pair(i, p)):
            feasible = tuple(
                r
                for r, other in ((i, p), (p, i))
                if split[r][other] + 1 <= profile.exclusive[other]
            )
            chosen = min(feasible, key=lambda r: (c[r], r)) if feasible else None
            steps.append(GreedyStep((i, p), (c[i], c[p]), feasible, chosen))
            if chosen is not None:
                other = p if chosen == i else i
                split[chosen][other] += 1
                c[chosen] += 1
    return JrcAllocation(tuple(tuple(r) for r in split)), steps


def greedy_max_sum(profile: PairwiseProfile) -> JrcAllocation:
    return greedy_trace(profile)[0]


# ---------------------------------------------------------------- brute-force check


def reachable_residues(t: Topology, moduli: Sequence[int]) -> np.ndarray:
    """Distinct message codes ``sum_i (y_i mod c_i) * radix_i`` over all 2^k frames."""
    levels = all_levels(t)
    c = np.asarray(moduli, dtype=np.int64)
    radix = np.concatenate(([1], np.cumprod(c[:-1]))).astype(np.int64)
    return np.unique((levels % c) @ radix)


def is_decodable(t: Topology, moduli: Sequence[int]) -> bool:
    """True when every message in prod{0..c_i-1} is produced by some frame."""
    return len(reachable_residues(t, moduli)) == math.prod(moduli)
