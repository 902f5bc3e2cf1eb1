"""Achievable rate regions under time sharing.

Every scheme instance yields one feasible rate tuple. Time sharing among them,
and with silence, makes the convex hull of the tuples together with all of
their coordinate-zeroing projections achievable; that down-closed polytope is
the region.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull

from . import jrc, schemes
from .topology import Topology

TOL = 1e-9
MAX_DIMENSION = 4


@dataclass(frozen=True)
class TaggedTuple:
    rates: tuple[float, ...]
    provenance: str


@dataclass(frozen=True)
class RateRegion:
    dimension: int
    vertices: tuple[tuple[float, ...], ...]
    provenance: tuple[str, ...]

    def max_sum_rate(self) -> float:
        return max(sum(v) for v in self.vertices)

    def has_vertex(self, point: Sequence[float], tol: float = TOL) -> bool:
        p = np.asarray(point, dtype=float)
        return any(np.allclose(v, p, atol=tol, rtol=0) for v in self.vertices)

    def contains(self, point: Sequence[float], tol: float = TOL) -> bool:
        """Membership via the hull's halfspace description."""
        p = np.asarray(point, dtype=float)
        if p.shape != (self.dimension,) or (p < -tol).any():
            return False
        v = np.asarray(self.vertices, dtype=float)
        upper = v.max(axis=0)
        active = upper > TOL
        if (p[~active] > tol).any():
            return False
        d = int(active.sum())
        if d == 0:
            return True
        if d == 1:
            return bool(p[active][0] <= upper[active][0] + tol)
        hull = ConvexHull(v[:, active])
        return bool((hull.equations[:, :-1] @ p[active] + hull.equations[:, -1] <= tol).all())


def _src_tuples(t: Topology) -> list[TaggedTuple]:
    out = []
    for r in range(t.num_receivers):
        if t.covering(r):
            out.append(TaggedTuple(schemes.src_rate(t, r), f"src R{r + 1}"))
    return out


def jrc_tuples(t: Topology, verify: bool = True) -> list[TaggedTuple]:
    """One tuple per (pair assignment, valid allocation).

    With ``verify`` set, allocations whose message box is not fully reachable
    by some frame are left out, since their nominal rates are not achievable.
    """
    out = []
    seen_profiles = set()
    for assignment in jrc.assignment_choices(t):
        profile = jrc.convert_to_pairwise(t, assignment)
        if profile in seen_profiles:
            continue
        seen_profiles.add(profile)
        label = ",".join(f"T{j + 1}->R{i + 1}R{p + 1}" for j, (i, p) in sorted(assignment.items()))
        for alloc in jrc.enumerate_allocations(profile):
            c = alloc.moduli(profile)
            if verify and not jrc.is_decodable(t, c):
                continue
            tag = f"jrc {alloc.describe()}" + (f" assign {label}" if label else "")
            out.append(TaggedTuple(tuple(math.log2(ci) for ci in c), tag))
    return out


def collect_tuples(t: Topology, verify: bool = True) -> list[TaggedTuple]:
    """Origin, SRC per covered receiver, ERC when applicable, then JRC."""
    out = [TaggedTuple((0.0,) * t.num_receivers, "origin")]
    out += _src_tuples(t)
    erc = schemes.erc_rate(t)
    if erc is not None:
        out.append(TaggedTuple(erc, "erc"))
    out += jrc_tuples(t, verify=verify)
    return out


def collect_family(topologies: Iterable[Topology], names: Sequence[str] | None = None) -> list[TaggedTuple]:
    """Tuples of several deployments over the same receiver labels."""
    topologies = list(topologies)
    if len({t.num_receivers for t in topologies}) > 1:
        raise ValueError("all topologies in a family must have the same number of receivers")
    names = list(names) if names is not None else [f"#{n + 1}" for n in range(len(topologies))]
    out = []
    for name, t in zip(names, topologies):
        out += [TaggedTuple(tt.rates, f"{name}: {tt.provenance}") for tt in collect_tuples(t)]
    return out


def _down_closure(tagged: Sequence[TaggedTuple], m: int) -> list[TaggedTuple]:
    out = [TaggedTuple((0.0,) * m, "origin")]
    for tt in tagged:
        out.append(tt)
        for zeroed in range(1, m + 1):
            for idx in itertools.combinations(range(m), zeroed):
                p = list(tt.rates)
                for i in idx:
                    p[i] = 0.0
                out.append(TaggedTuple(tuple(p), f"projection of {tt.provenance}"))
    return out


def _dedupe(tagged: Sequence[TaggedTuple]) -> list[TaggedTuple]:
    seen = {}
    for tt in tagged:
        key = tuple(round(v / TOL) for v in tt.rates)
        seen.setdefault(key, tt)
    return list(seen.values())


def convex_hull(points: Sequence, dimension: int | None = None) -> RateRegion:
    """Vertices of the down-closed hull of ``points`` (plain tuples or tagged)."""
    tagged = [p if isinstance(p, TaggedTuple) else TaggedTuple(tuple(map(float, p)), "input") for p in points]
    if dimension is None:
        if not tagged:
            raise ValueError("need points or an explicit dimension")
        dimension = len(tagged[0].rates)
    m = dimension
    if not 1 <= m <= MAX_DIMENSION:
        raise ValueError(f"exact hulls are supported for 1..{MAX_DIMENSION} receivers, got {m}")
    for tt in tagged:
        if len(tt.rates) != m:
            raise ValueError("points have mixed dimensions")
        if not all(math.isfinite(v) and v >= -TOL for v in tt.rates):
            raise ValueError(f"rates must be finite and non-negative, got {tt.rates}")
    cand = _dedupe(_down_closure(tagged, m))
    pts = np.array([tt.rates for tt in cand], dtype=float)
    active = pts.max(axis=0) > TOL
    d = int(active.sum())
    if d == 0:
        keep = [0]
    elif d == 1:
        keep = [0, int(np.argmax(pts[:, active][:, 0]))]
    else:
        keep = list(ConvexHull(pts[:, active]).vertices)
    chosen = sorted((cand[i] for i in keep), key=lambda tt: tt.rates)
    return RateRegion(m, tuple(tt.rates for tt in chosen), tuple(tt.provenance for tt in chosen))


def region_of(t: Topology) -> RateRegion:
    return convex_hull(collect_tuples(t), dimension=t.num_receivers)


def sum_rate_check(region: RateRegion, k: int, tol: float = TOL):
    """``(True, None)`` when every vertex has sum rate at most ``k``, else ``(False, vertex)``."""
    for v in region.vertices:
        if sum(v) > k + tol:
            return False, v
    return True, None
