"""Location-assisted coding over additive on-off optical broadcast channels."""

from importlib import resources

from .channel import channel_matrix, transmit
from .exceptions import (
    AllocationError,
    EnumerationBoundError,
    InfeasibleMessageError,
    SingularMatrixError,
    TopologyError,
)
from .jrc import (
    JrcAllocation,
    JrcCodeword,
    JrcEncoder,
    PairwiseProfile,
    convert_to_pairwise,
    enumerate_allocations,
    general_encode,
    greedy_max_sum,
    is_decodable,
    jrc2_decode,
    jrc2_encode,
    jrcn_decode,
    jrcn_encode,
)
from .region import RateRegion, collect_tuples, convex_hull, region_of, sum_rate_check
from .schemes import erc_frame, erc_rate, src_frame, src_rate
from .topology import Topology, load_topology, parse_topology, serialize_topology, topological_matrix
from .verify import VerificationReport, sweep_parameter_space, verify_scheme

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a bundled example topology, e.g. ``fixture_path("two_tx")``."""
    return resources.files(__name__) / "fixtures" / f"{name.removesuffix('.json')}.json"


def load_fixture(name: str) -> Topology:
    return parse_topology(fixture_path(name).read_text())
