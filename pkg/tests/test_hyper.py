import itertools
import random

import pytest

from logtwist import fixtures
from logtwist.hyper import (
    HypSignature,
    check_involution_compat,
    check_nonempty,
    edge_orbit_split,
    hyperelliptic_signature,
    quadratic_pushforward,
    quotient_cover_check,
)
from logtwist.jsonio import parse_job
from logtwist.stablegraph import GraphInvolution, StableGraph
from logtwist.twist import TwistedStructure, WeightedGraph

from generators import random_symmetric


def hyp_config():
    job = parse_job(fixtures.load("banana_h4_hyperelliptic"))
    return job.graph, job.involution, WeightedGraph(job.graph, job.signature, job.structure)


def test_nonempty_examples():
    assert check_nonempty(HypSignature((4,) + (0,) * 7))
    assert check_nonempty(HypSignature((0,) * 8, (2,)))
    assert not check_nonempty(HypSignature((2,) + (0,) * 7))
    with pytest.raises(ValueError):
        check_nonempty(HypSignature((3,) + (0,) * 7))
    with pytest.raises(ValueError):
        check_nonempty(HypSignature((0,) * 8, (0,)))
    assert HypSignature((0,) * 8).genus == 3


def test_pushforward_examples():
    assert quadratic_pushforward(HypSignature((0,) * 8, (2,))) == (0,) * 8 + (4,)
    assert quadratic_pushforward(HypSignature((4,) + (0,) * 7)) == (4,) + (0,) * 7
    assert quadratic_pushforward(HypSignature((2, 2) + (0,) * 6)) == (2, 2) + (0,) * 6
    with pytest.raises(ValueError):
        quadratic_pushforward(HypSignature(()))
    with pytest.raises(ValueError):
        quadratic_pushforward(HypSignature((2,) + (0,) * 7))


def test_pushforward_preserves_condition():
    for n1 in (6, 8, 10):
        for fixed in itertools.combinations_with_replacement((0, 2, 4), 3):
            for pairs in ((), (1,), (2,), (1, 1)):
                mu = HypSignature(fixed + (0,) * (n1 - 3), pairs)
                if check_nonempty(mu):
                    out = quadratic_pushforward(mu)
                    assert sum(out) == n1 - 4 and len(out) == n1 + len(pairs)


def test_compat_examples():
    G, inv, W = hyp_config()
    assert check_involution_compat(W, inv)
    bad = WeightedGraph(G, W.signature, TwistedStructure((1, 3), ("forward", "forward"), (False, True)))
    assert not check_involution_compat(bad, inv)
    assert check_involution_compat(bad, GraphInvolution.identity(G))


def test_compat_requires_orientation_match():
    G = StableGraph((0, 0), ((0, 1),))
    W = WeightedGraph(G, (), TwistedStructure((1,), ("forward",), (True, True)))
    assert not check_involution_compat(W, GraphInvolution.build(G, [1, 0], [0]))


def test_cover_check_accepts_config():
    G, inv, _ = hyp_config()
    assert quotient_cover_check(G, inv) is None


def test_cover_check_rejects_corruptions():
    G, inv, _ = hyp_config()
    unswapped = GraphInvolution.identity(G)
    assert quotient_cover_check(G, unswapped) == "quotient not a tree"
    mm = list(inv.marking_map)
    mm[1], mm[2] = 3, 2
    assert "v_X has 4 fixed" in quotient_cover_check(G, GraphInvolution(inv.vertex_map, inv.edge_map, tuple(mm), inv.edge_flips))
    heavier = StableGraph((3, 0), G.edges, G.legs, G.vertex_names, G.edge_names)
    assert "expected 8" in quotient_cover_check(heavier, inv)
    moved = StableGraph(G.genera, G.edges, tuple((i, 0 if i == 8 else v) for i, v in G.legs), G.vertex_names, G.edge_names)
    assert "v_X has 7 fixed" in quotient_cover_check(moved, inv)
    flipped = GraphInvolution(inv.vertex_map, inv.edge_map, inv.marking_map, (True, True))
    assert quotient_cover_check(G, flipped) == "not a graph involution"


def test_cover_check_small_failures():
    G = StableGraph((0, 1, 1), ((0, 1), (0, 2)), ((1, 0), (2, 0)), ("c", "x", "y"))
    inv = GraphInvolution.build(G, [0, 2, 1], [1, 0])
    assert quotient_cover_check(G, inv) == "swapped component x must be rational"
    cyc = StableGraph((0, 0), ((0, 1), (0, 1)))
    assert quotient_cover_check(cyc, GraphInvolution.identity(cyc)) == "quotient not a tree"
    bridge = StableGraph((0, 0), ((0, 1),))
    assert "branches exchanged" in quotient_cover_check(bridge, GraphInvolution.build(bridge, [1, 0], [0]))


def test_edge_orbit_split():
    G, inv, _ = hyp_config()
    assert edge_orbit_split(G, inv).fixed == () and edge_orbit_split(G, inv).swapped == (0, 1)
    assert edge_orbit_split(G, inv).pairs(inv) == [(0, 1)]
    assert edge_orbit_split(G, GraphInvolution.identity(G)).swapped == ()
    loop = StableGraph((1,), ((0, 0),))
    assert edge_orbit_split(loop, GraphInvolution.build(loop, [0], [0], loop_flips=[0])).fixed == (0,)


def test_split_is_stable_under_involution():
    rnd = random.Random(9)
    for _ in range(30):
        W, inv = random_symmetric(rnd)
        split = edge_orbit_split(W.graph, inv)
        assert {inv.edge_map[k] for k in split.swapped} == set(split.swapped)
        assert all(inv.edge_map[k] == k for k in split.fixed)
        assert check_involution_compat(W, inv)


def test_signature_of_config():
    _, inv, W = hyp_config()
    mu = hyperelliptic_signature(W, inv)
    assert mu == HypSignature((4,) + (0,) * 7) and check_nonempty(mu)
