"""Encode -> channel -> decode sweeps with machine-readable reports.

A scheme instance is reduced to three things: the message box
``prod{0..c_i-1}``, a function from message to transmit frame, and a
function from received levels to decoded message. The harness runs every
message (or a seeded random sample), pushes the frame through the channel
and records each mismatch or encoding failure.

Random sampling uses xorshift64* seeded through splitmix64, so a seed gives
the same message sequence in any implementation::

    state = splitmix64(seed)             # once
    state ^= state >> 12
    state ^= (state << 25) mod 2**64
    state ^= state >> 27
    out   = (state * 0x2545F4914F6CDD1D) mod 2**64
    b_i   = out mod c_i                  # one draw per receiver, in order
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from . import jrc, schemes
from .channel import transmit_word, frame_to_int
from .exceptions import EnumerationBoundError, InfeasibleMessageError
from .topology import Topology

MAX_EXHAUSTIVE = 10**7
MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or 1

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        return self.next() % n


@dataclass
class SchemeRun:
    """A scheme instance ready to verify."""

    name: str
    params: dict
    moduli: tuple[int, ...]
    encode: Callable[[tuple[int, ...]], tuple[int, ...]]
    decode: Callable[[tuple[int, ...]], tuple[int, ...]]


def _split_params(alloc: jrc.JrcAllocation) -> list[list[int]]:
    m = alloc.num_receivers
    return [[i + 1, p + 1, alloc.split[i][p]] for i in range(m) for p in range(m) if alloc.split[i][p]]


def build_scheme(
    t: Topology,
    scheme: str,
    *,
    receiver: int | None = None,
    alloc: jrc.JrcAllocation | None = None,
    assignment: Mapping[int, tuple[int, int]] | None = None,
    higher_bits: Sequence[int] | None = None,
) -> SchemeRun:
    m = t.num_receivers
    if scheme == "src":
        if receiver is None:
            raise ValueError("SRC needs a target receiver")
        n = len(t.covering(receiver))
        if n == 0:
            raise ValueError(f"R{receiver + 1} is not covered by any transmitter")
        moduli = tuple(n + 1 if r == receiver else 1 for r in range(m))

        def encode(b):
            return schemes.src_frame(t, receiver, b[receiver])

        def decode(y):
            return tuple(y[r] if r == receiver else 0 for r in range(m))

        return SchemeRun("src", {"receiver": receiver + 1}, moduli, encode, decode)

    if scheme == "erc":
        h, cols = schemes.erc_matrix(t)

        def encode(b):
            frame = [0] * t.num_transmitters
            for j, bit in zip(cols, schemes.erc_encode(h, b)):
                frame[j] = bit
            return tuple(frame)

        return SchemeRun("erc", {"columns": [j + 1 for j in cols]}, (2,) * m, encode, schemes.erc_decode)

    if scheme == "jrc2":
        profile = jrc.PairwiseProfile.from_topology(t)
        if m != 2:
            raise ValueError("jrc2 is the two-receiver construction")
        alloc = alloc or jrc.JrcAllocation.zeros(2)
        (t1, t2), t12 = profile.exclusive, profile.pair(0, 1)
        split = (alloc.split[0][1], alloc.split[1][0])
        alloc.validate(profile)
        moduli = alloc.moduli(profile)
        groups = jrc.group_decomposition(t)

        def encode(b):
            return jrc.codeword_frame(t, jrc.jrc2_encode(t1, t2, t12, split, b), groups)

        def decode(y):
            return jrc.jrcn_decode(y, moduli)

        return SchemeRun("jrc2", {"split": _split_params(alloc)}, moduli, encode, decode)

    if scheme == "jrc":
        enc = jrc.JrcEncoder(t, alloc or jrc.JrcAllocation.zeros(m), assignment, higher_bits)
        params = {
            "split": _split_params(enc.alloc),
            "assignment": [[j + 1, i + 1, p + 1] for j, (i, p) in sorted(enc.assignment.items())],
            "higher_bits": None if higher_bits is None else list(higher_bits),
        }
        return SchemeRun("jrc", params, enc.moduli, enc.frame, enc.decode)

    raise ValueError(f"unknown scheme {scheme!r}; expected src, erc, jrc or jrc2")


@dataclass
class VerificationReport:
    scheme: str
    params: dict
    tested: int
    failures: list = field(default_factory=list)
    rates: list = field(default_factory=list)  # empirical, log2 of decodable levels
    levels: list = field(default_factory=list)
    claimed: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {
                "scheme": self.scheme,
                "params": self.params,
                "tested": self.tested,
                "failures": self.failures,
                "rates": self.rates,
                "levels": self.levels,
                "claimed": self.claimed,
            },
            separators=(",", ":"),
        )


def _messages(moduli: Sequence[int], mode: str, seed: int, samples: int) -> Iterator[tuple[int, ...]]:
    if mode == "exhaustive":
        size = math.prod(moduli)
        if size > MAX_EXHAUSTIVE:
            raise EnumerationBoundError(f"message box of {size} exceeds {MAX_EXHAUSTIVE}")
        return itertools.product(*(range(c) for c in moduli))
    if mode == "random":
        rng = XorShift64Star(seed)
        return (tuple(rng.below(c) for c in moduli) for _ in range(samples))
    raise ValueError(f"unknown mode {mode!r}")


def run_verification(
    t: Topology,
    run: SchemeRun,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 1000,
    corrupt: bool = False,
) -> VerificationReport:
    m = t.num_receivers
    decoded_ok = [set() for _ in range(m)]
    failures = []
    tested = 0
    for b in _messages(run.moduli, mode, seed, samples):
        tested += 1
        try:
            frame = run.encode(b)
        except InfeasibleMessageError:
            failures.append({"message": list(b), "frame": None, "received": None, "decoded": None})
            continue
        y = transmit_word(t, frame_to_int(frame))
        got = run.decode(y)
        if corrupt:
            got = (got[0] + 1,) + tuple(got[1:])
        for r in range(m):
            if got[r] == b[r]:
                decoded_ok[r].add(b[r])
        if tuple(got) != tuple(b):
            failures.append({"message": list(b), "frame": list(frame), "received": list(y), "decoded": list(got)})
    levels = [len(s) for s in decoded_ok]
    params = dict(run.params, mode=mode)
    if mode == "random":
        params.update(seed=seed, samples=samples)
    return VerificationReport(
        scheme=run.name,
        params=params,
        tested=tested,
        failures=failures,
        rates=[math.log2(n) if n else 0.0 for n in levels],
        levels=levels,
        claimed=[math.log2(c) for c in run.moduli],
    )


def verify_scheme(
    t: Topology,
    scheme: str,
    *,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 1000,
    corrupt: bool = False,
    **params,
) -> VerificationReport:
    return run_verification(t, build_scheme(t, scheme, **params), mode, seed, samples, corrupt)


# ---------------------------------------------------------------- parameter sweeps


@dataclass
class SweepResult:
    receivers: int
    max_count: int
    reports: list

    @property
    def configurations(self) -> int:
        return len(self.reports)

    @property
    def messages(self) -> int:
        return sum(r.tested for r in self.reports)

    @property
    def failed(self) -> list:
        return [r for r in self.reports if r.failures]

    @property
    def passed(self) -> bool:
        return not self.failed


def sweep_configurations(receivers: int, max_count: int):
    """Every (profile, allocation) with all counts in ``0..max_count``, in canonical order."""
    if receivers not in (2, 3):
        raise ValueError("sweeps cover two- and three-receiver pairwise profiles")
    pairs = list(itertools.combinations(range(receivers), 2))
    for counts in itertools.product(range(max_count + 1), repeat=receivers + len(pairs)):
        profile = jrc.PairwiseProfile.from_counts(counts[:receivers], dict(zip(pairs, counts[receivers:])))
        for alloc in jrc.enumerate_allocations(profile):
            yield profile, alloc


def _verify_config(args) -> VerificationReport:
    profile, alloc, scheme = args
    t = profile.to_topology()
    report = verify_scheme(t, scheme, alloc=alloc)
    report.params = {
        "exclusive": list(profile.exclusive),
        "shared": [[i + 1, p + 1, profile.pair(i, p)] for i, p in profile.pairs()],
        **report.params,
    }
    return report


def sweep_parameter_space(receivers: int, max_count: int, workers: int = 1) -> SweepResult:
    """Exhaustive JRC verification over all small pairwise profiles.

    Two receivers use the set-intersection encoder, three use the
    induction-order encoder. Report order is the configuration order
    regardless of ``workers``.
    """
    scheme = "jrc2" if receivers == 2 else "jrc"
    jobs = [(p, a, scheme) for p, a in sweep_configurations(receivers, max_count)]
    total = sum(math.prod(a.moduli(p)) for p, a, _ in jobs)
    if total > MAX_EXHAUSTIVE:
        raise EnumerationBoundError(f"sweep would test {total} messages, limit {MAX_EXHAUSTIVE}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_verify_config, jobs, chunksize=64))
    else:
        reports = [_verify_config(j) for j in jobs]
    return SweepResult(receivers, max_count, reports)


def write_jsonl(reports, fh) -> None:
    for r in reports:
        fh.write(r.to_json() + "\n")
