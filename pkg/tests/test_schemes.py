import itertools
import math

import pytest

from lacoding import schemes
from lacoding.channel import transmit
from lacoding.exceptions import SingularMatrixError
from lacoding.topology import Topology
from conftest import random_suite


def test_src_rate_and_roundtrip(three_tx):
    assert schemes.src_rate(three_tx, 1) == (0.0, 2.0)
    for level in range(4):
        y = transmit(three_tx, schemes.src_frame(three_tx, 1, level))
        assert schemes.src_decode(y, 1) == level
    assert schemes.src_frame(three_tx, 1, 1) == (1, 0, 0)


def test_src_errors():
    t = Topology.from_coverage([(0,)], num_receivers=2)
    with pytest.raises(ValueError):
        schemes.src_rate(t, 1)
    with pytest.raises(ValueError):
        schemes.src_encode(3, 2)


def test_erc_two_tx(two_tx):
    assert schemes.erc_rate(two_tx) == (1.0, 1.0)
    for b in itertools.product((0, 1), repeat=2):
        assert schemes.erc_decode(transmit(two_tx, schemes.erc_frame(two_tx, b))) == b


def test_erc_unavailable_when_rank_deficient():
    t = Topology.from_coverage([(0, 1), (0, 1)])
    assert schemes.erc_rate(t) is None
    with pytest.raises(SingularMatrixError):
        schemes.erc_frame(t, (1, 0))


def test_erc_roundtrip_random_topologies():
    for t in random_suite(200, seed=5):
        if schemes.erc_rate(t) is None:
            continue
        for b in itertools.product((0, 1), repeat=t.num_receivers):
            assert schemes.erc_decode(transmit(t, schemes.erc_frame(t, b))) == b


def test_src_rate_is_log_of_cover_plus_one():
    for t in random_suite(100, seed=9):
        for r in range(t.num_receivers):
            n = len(t.covering(r))
            if n:
                assert schemes.src_rate(t, r)[r] == math.log2(n + 1)
