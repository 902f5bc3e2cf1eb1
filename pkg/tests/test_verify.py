import io
import json
import math

import numpy as np
import pytest

from lacoding import jrc
from lacoding.exceptions import EnumerationBoundError
from lacoding.topology import Topology
from lacoding.verify import (
    XorShift64Star,
    splitmix64,
    sweep_parameter_space,
    verify_scheme,
    write_jsonl,
)
from conftest import LOG3


def test_splitmix64_reference_value():
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_xorshift64star_against_numpy():
    rng = XorShift64Star(12345)
    state = np.uint64(splitmix64(12345))
    with np.errstate(over="ignore"):
        for _ in range(50):
            state ^= state >> np.uint64(12)
            state ^= state << np.uint64(25)
            state ^= state >> np.uint64(27)
            assert rng.next() == int(state * np.uint64(0x2545F4914F6CDD1D))


def test_erc_two_tx(two_tx):
    rep = verify_scheme(two_tx, "erc")
    assert (rep.tested, rep.failures, rep.rates) == (4, [], [1.0, 1.0])


def test_two_receiver_worked_parameters(three_tx):
    alloc = jrc.JrcAllocation.from_splits(2, [(0, 1, 1)])
    for scheme in ("jrc2", "jrc"):
        rep = verify_scheme(three_tx, scheme, alloc=alloc)
        assert rep.tested == 6 and not rep.failures
        assert rep.rates == [1.0, LOG3]


def test_src_three_transmitters():
    t = Topology.from_coverage([(0,), (0,), (0,)])
    rep = verify_scheme(t, "src", receiver=0)
    assert (rep.tested, rep.failures, rep.rates) == (4, [], [2.0])


def test_bad_parameters(two_tx):
    with pytest.raises(ValueError):
        verify_scheme(two_tx, "src")
    with pytest.raises(ValueError):
        verify_scheme(two_tx, "nope")
    with pytest.raises(ValueError):
        verify_scheme(two_tx, "erc", mode="sometimes")


def test_exhaustive_bound():
    t = Topology.from_coverage([(r,) for r in range(8) for _ in range(8)])
    with pytest.raises(EnumerationBoundError):
        verify_scheme(t, "jrc")
    rep = verify_scheme(t, "jrc", mode="random", seed=3, samples=20)
    assert rep.tested == 20 and not rep.failures


def test_random_mode_is_deterministic(eleven_tx):
    alloc = jrc.JrcAllocation.from_splits(3, [(0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 1), (1, 2, 1), (2, 1, 1)])
    kw = dict(alloc=alloc, assignment={10: (0, 2)}, mode="random", samples=50)
    a = verify_scheme(eleven_tx, "jrc", seed=99, **kw).to_json()
    assert a == verify_scheme(eleven_tx, "jrc", seed=99, **kw).to_json()
    assert a != verify_scheme(eleven_tx, "jrc", seed=100, **kw).to_json()


def test_corrupt_decoder_is_caught(two_tx):
    rep = verify_scheme(two_tx, "erc", corrupt=True)
    assert len(rep.failures) == 4
    assert rep.failures[0]["decoded"] != rep.failures[0]["message"]


def test_infeasible_messages_are_reported():
    profile = jrc.PairwiseProfile.from_counts((1, 1, 1), {(0, 1): 1, (0, 2): 1, (1, 2): 2})
    alloc = jrc.JrcAllocation.from_splits(3, [(0, 2, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1)])
    rep = verify_scheme(profile.to_topology(), "jrc", alloc=alloc)
    assert rep.failures == [{"message": [0, 0, 2], "frame": None, "received": None, "decoded": None}]


def test_report_format(two_tx):
    buf = io.StringIO()
    write_jsonl([verify_scheme(two_tx, "erc"), verify_scheme(two_tx, "src", receiver=1)], buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 2
    for line in lines:
        doc = json.loads(line)
        assert {"scheme", "params", "tested", "failures", "rates"} <= doc.keys()


def test_zero_bounds_sweep():
    res = sweep_parameter_space(2, 0)
    assert res.configurations == 1 and res.messages == 1 and res.passed


def test_sweep_rates_match_claims():
    res = sweep_parameter_space(2, 2)
    assert res.passed
    for rep in res.reports:
        assert rep.rates == rep.claimed
        assert [2**r for r in rep.rates] == pytest.approx(rep.levels)


def test_parallel_sweep_keeps_order():
    serial = [r.to_json() for r in sweep_parameter_space(3, 1).reports]
    parallel = [r.to_json() for r in sweep_parameter_space(3, 1, workers=2).reports]
    assert serial == parallel


def test_sweep_rejects_other_sizes():
    with pytest.raises(ValueError):
        sweep_parameter_space(4, 1)
