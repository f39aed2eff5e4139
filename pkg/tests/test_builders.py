import random
from itertools import combinations

import pytest

from cycledecomp.builders import (check_feasibility, close_with_complete_leave, combine_paths,
                                  decompose_bipartite, decompose_hole, decompose_multipartite,
                                  find_disjoint_sets, good_triple, packing_with_cycle_leave,
                                  path_lengths_for, split_cycle, split_schedule, two_path_leave)
from cycledecomp.core import Packing, Vertex, bipartite, bipartite_minus_matching, edge, hole, multipartite, path_edges
from cycledecomp.errors import HypothesesViolated, NotGood, PreconditionViolated, Unsupported
from cycledecomp.oracle import verify
from cycledecomp.transforms import Chooser

V = Vertex


# -- feasibility -------------------------------------------------------------


@pytest.mark.parametrize("host,M,status", [
    (bipartite(6, 6), [4, 4, 4, 6, 6, 6, 6], "SatisfiesTheorem"),
    (bipartite(8, 8), [16, 16, 16, 16], "OutsideSupportedRegion"),
    (bipartite(4, 4), [4, 4, 4, 5], "ViolatesNecessary"),
    (bipartite(4, 4), [16], "ViolatesNecessary"),
    (bipartite(4, 4), [6, 10], "ViolatesNecessary"),
    (bipartite(4, 6), [12, 12], "ViolatesNecessary"),
    (bipartite(5, 5), [5] * 5, "ViolatesNecessary"),
    (bipartite_minus_matching(6), [6] * 5, "ViolatesNecessary"),
    (bipartite_minus_matching(7), [4] * 3 + [6] * 5, "SatisfiesTheorem"),
    (bipartite(6, 6), [4] * 8, "ViolatesNecessary"),
    (bipartite(6, 6), [4, 4, 4, 4, 4, 4, 12], "OutsideSupportedRegion"),
    (bipartite(12, 12), [4] * 34 + [8], "SatisfiesTheorem"),
    (bipartite(12, 12), [4] * 30 + [12, 12], "SatisfiesTheorem"),
    (bipartite(12, 12), [4] * 33 + [12], "SatisfiesTheorem"),
    (bipartite(8, 8), [4] * 12 + [16], "OutsideSupportedRegion"),
    (bipartite(6, 6), [4] * 8 + [6] * 2, "ViolatesNecessary"),
    (hole(9, 5), [4] * 7, "OutsideSupportedRegion"),
])
def test_check_feasibility(host, M, status):
    assert check_feasibility(host, M).status == status


def test_split_schedule():
    z, merges = split_schedule([4, 6, 6, 8, 8, 8, 8, 8, 8])
    assert set(z) <= {4, 6}
    assert sum(z) == 64
    # undoing the merges rebuilds the original list
    cur = sorted(z)
    for mp, h in merges:
        cur.remove(4)
        cur.remove(mp)
        assert h in cur
        cur = sorted(cur + [4 + mp])
    assert cur == [4, 6, 6, 8, 8, 8, 8, 8, 8]


# -- bipartite ---------------------------------------------------------------


@pytest.mark.parametrize("a,b,mm,M", [
    (8, 8, False, [4, 6, 6, 8, 8, 8, 8, 8, 8]),
    (5, 5, True, [4] * 5),
    (6, 6, False, [6] * 6),
    (7, 7, True, [4] * 3 + [6] * 5),
    (10, 12, False, [4] * 10 + [10] * 8),
    (12, 12, False, [12] * 12),
])
def test_decompose_bipartite(a, b, mm, M):
    pk = decompose_bipartite(a, b, mm, M)
    assert verify(pk).ok
    assert pk.lengths() == sorted(M)
    if mm:
        assert pk.host.kind == "bipartite-minus-matching"
        assert pk.matching == pk.host.removed_matching


def test_decompose_bipartite_rejects():
    with pytest.raises(HypothesesViolated):
        decompose_bipartite(8, 8, False, [16] * 4)
    with pytest.raises(HypothesesViolated):
        decompose_bipartite(5, 7, True, [4] * 5)


def test_decompose_bipartite_randomized_choices_still_verify():
    for seed in range(5):
        pk = decompose_bipartite(10, 10, False, [4] * 5 + [8] * 10, Chooser(random.Random(seed)), seed)
        assert verify(pk).ok and pk.lengths() == [4] * 5 + [8] * 10


def test_packing_with_cycle_leave():
    pk = packing_with_cycle_leave(10, 10, 8, 4)
    assert pk.lengths() == [8] * 12
    assert len(pk.leave) == 4
    with pytest.raises(PreconditionViolated):
        packing_with_cycle_leave(10, 10, 8, 6)


def test_split_cycle():
    c = [V(0, i // 2) if i % 2 == 0 else V(1, i // 2) for i in range(8)]
    P, Q = split_cycle(c, 2, start=2)
    assert P[0] == Q[0] == c[2] and P[-1] == Q[-1]
    assert len(P) == 3 and len(Q) == 7
    assert set(path_edges(P)) | set(path_edges(Q)) == {edge(c[i], c[(i + 1) % 8]) for i in range(8)}


def leave_is_two_paths(pk, P, Q, R):
    assert set(path_edges(P)) | set(path_edges(Q)) == pk.leave
    assert not set(path_edges(P)) & set(path_edges(Q))
    assert P[0] == Q[0] and P[-1] == Q[-1]
    assert P[0].part == R and P[-1].part == R


def test_two_path_leave_direct_split():
    pk, P, Q = two_path_leave(10, 10, 0, 8, 4, 2, 2)
    leave_is_two_paths(pk, P, Q, 0)
    assert pk.lengths() == [8] * 12


def test_two_path_leave_flatten_branch():
    pk, P, Q = two_path_leave(10, 10, 1, 8, 12, 6, 6)
    leave_is_two_paths(pk, P, Q, 1)
    assert len(P) - 1 == 6 and len(Q) - 1 == 6
    assert pk.lengths() == [8] * 11


def test_two_path_leave_rejects():
    with pytest.raises(PreconditionViolated):
        two_path_leave(10, 10, 0, 8, 12, 2, 10)
    with pytest.raises(PreconditionViolated):
        two_path_leave(10, 10, 0, 8, 6, 2, 4)
    with pytest.raises(PreconditionViolated):
        two_path_leave(8, 10, 0, 8, 4, 2, 2)


# -- witness sets ------------------------------------------------------------


def test_good_triple_examples():
    assert good_triple(range(1, 6), [], [], 2, 3)
    A = range(10)
    assert not good_triple(A, range(5), range(5), 3, 3)


def witness_exists(A, S, T, s, t):
    A = sorted(A)
    for Sp in combinations([x for x in A if x not in S], s):
        rest = [x for x in A if x not in T and x not in Sp]
        if len(rest) >= t:
            return True
    return False


def test_good_triple_matches_brute_force():
    rng = random.Random(5)
    for _ in range(1500):
        n = rng.randint(0, 12)
        A = list(range(n))
        S = {x for x in A if rng.random() < 0.4}
        T = {x for x in A if rng.random() < 0.4}
        s, t = rng.randint(0, n), rng.randint(0, n)
        good = good_triple(A, S, T, s, t)
        assert good == witness_exists(A, S, T, s, t), (n, S, T, s, t)
        if good:
            Sp, Tp = find_disjoint_sets(A, S, T, s, t)
            assert len(Sp) == s and len(Tp) == t
            assert not set(Sp) & S and not set(Tp) & T and not set(Sp) & set(Tp)


def test_find_sets_first_branch():
    Sp, Tp = find_disjoint_sets(range(1, 7), {1}, {1, 2, 3}, 2, 2)
    assert set(Sp) <= {2, 3} and set(Tp) <= {4, 5, 6}


def test_find_sets_second_branch():
    Sp, Tp = find_disjoint_sets(range(1, 7), {1}, {1, 2}, 3, 1)
    assert 2 in Sp and len(Sp) == 3
    assert not set(Tp) & ({1, 2} | set(Sp))


def test_find_sets_not_good():
    with pytest.raises(NotGood):
        find_disjoint_sets(range(10), range(5), range(5), 3, 3)
    with pytest.raises(NotGood):
        find_disjoint_sets(range(3), {7}, set(), 0, 0)


# -- holes -------------------------------------------------------------------


@pytest.mark.parametrize("v,u,m,cycles", [(13, 5, 4, 17), (19, 7, 6, 25), (25, 9, 6, 44), (25, 9, 8, 33)])
def test_decompose_hole(v, u, m, cycles):
    pk = decompose_hole(v, u, m)
    assert verify(pk).ok
    assert pk.lengths() == [m] * cycles
    assert pk.host == hole(v, u)


@pytest.mark.parametrize("v,u,m", [(9, 5, 4), (13, 3, 4), (13, 5, 3), (12, 5, 4), (11, 5, 8)])
def test_decompose_hole_rejects(v, u, m):
    with pytest.raises(HypothesesViolated):
        decompose_hole(v, u, m)


def test_close_with_complete_leave_long_first_path():
    # leave (m+2)-cycle closed by a (m-4)-path P2 and a 2-path Q2, with P1 of length 4
    m = 8
    W = [V(1, i) for i in range(12)]
    pool = [V(0, 0)] + W
    leave = W[:m + 2]
    cycles1 = [tuple(W[2:6])]
    y, z = V(1, 10), V(1, 11)
    P2 = [y, V(2, 0), V(1, 0), V(2, 1), z]
    Q2 = [y, V(2, 2), z]
    out = close_with_complete_leave(cycles1, leave, pool, W, P2, Q2, 4)
    assert len(out) == 3
    closed_p, closed_q = out[1], out[2]
    assert len(closed_p) == (m - 4) + 4 and len(closed_q) == 2 + (m + 2 - 4)
    for c in (closed_p, closed_q):
        assert len(set(c)) == len(c)
    # the relabelled leave cycle is exactly y-P1-z-Q1-y
    leave_edges = {edge(a, b) for a, b in zip(leave, leave[1:] + leave[:1])}
    used = {edge(a, b) for c in out[1:] for a, b in zip(c, c[1:] + c[:1])}
    gained = used - set(path_edges(P2)) - set(path_edges(Q2))
    assert len(gained) == len(leave_edges) == m + 2
    assert all(a.part == 1 and b.part == 1 for a, b in gained)


# -- combine paths -----------------------------------------------------------


def combine_fixture(p, q):
    """Leave paths of lengths p, q inside V1 u V2 of K_{10,10,10} and a K_{20,10} layer with an 8-cycle leave."""
    host = multipartite([10, 10, 10])
    A = list(host.part(0)) + list(host.part(1))
    B = list(host.part(2))
    rng = random.Random(p * 31 + q)
    v1, v2 = list(host.part(0)), list(host.part(1))
    rng.shuffle(v1)
    rng.shuffle(v2)
    a, a_dag = v1[0], v1[1]
    inner_p = [v2[i] if i % 2 == 0 else v1[2 + i // 2] for i in range(p - 1)]
    inner_q = [v2[5 + i] if i % 2 == 0 else v1[6 + i // 2] for i in range(q - 1)]
    P = [a] + inner_p + [a_dag]
    Q = [a] + inner_q + [a_dag]
    layer = packing_with_cycle_leave(20, 10, 8, 8)
    return host, A, B, P, Q, layer


def check_partition(host, A, B, P, Q, out):
    want = {edge(x, y) for x in A for y in B} | set(path_edges(P)) | set(path_edges(Q))
    got = []
    for c in out.cycles:
        assert len(set(c)) == len(c)
        got += [edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]
    for path in out.paths or ():
        assert len(set(path)) == len(path)
        got += path_edges(path)
    assert len(got) == len(set(got))
    assert set(got) == want
    assert all(host.adjacent(*e) for e in got)


def test_combine_paths_a():
    host, A, B, P, Q, layer = combine_fixture(4, 4)
    out = combine_paths("a", P, Q, layer, A, B, 4, 4)
    check_partition(host, A, B, P, Q, out)
    assert out.paths is None
    assert sorted(map(len, out.cycles)) == [8] * (len(layer.cycles) + 2)


def test_combine_paths_b():
    host, A, B, P, Q, layer = combine_fixture(4, 2)
    out = combine_paths("b", P, Q, layer, A, B, 2, 6)
    check_partition(host, A, B, P, Q, out)
    P2, Q2 = out.paths
    assert (len(P2) - 1, len(Q2) - 1) == (6, 8)
    assert P2[0] == Q2[0] and P2[-1] == Q2[-1]


@pytest.mark.parametrize("pp,qp,pdp", [(4, 0, 4), (2, 2, 4), (4, 2, 2)])
def test_combine_paths_c(pp, qp, pdp):
    host, A, B, P, Q, layer = combine_fixture(4, 4)
    out = combine_paths("c", P, Q, layer, A, B, pp, qp, pdp)
    check_partition(host, A, B, P, Q, out)
    assert sorted(map(len, out.cycles)).count(4 + pp) >= 1
    P2, Q2 = out.paths
    assert sorted((len(P2) - 1, len(Q2) - 1)) == sorted((pdp, 4 + qp))
    if qp == 0:
        # the q side keeps the original path untouched
        assert set(path_edges(Q2)) == set(path_edges(Q))


def test_combine_paths_rejects_odd_parts():
    host, A, B, P, Q, _ = combine_fixture(4, 4)
    odd = Packing(bipartite(5, 4), [])
    with pytest.raises(PreconditionViolated):
        combine_paths("a", P, Q, odd, A[:5], B[:4], 4, 4)


def test_combine_paths_rejects_bad_lengths():
    host, A, B, P, Q, layer = combine_fixture(4, 4)
    with pytest.raises(PreconditionViolated):
        combine_paths("a", P, Q, layer, A, B, 2, 4)
    with pytest.raises(PreconditionViolated):
        combine_paths("z", P, Q, layer, A, B, 4, 4)


# -- multipartite ------------------------------------------------------------


@pytest.mark.parametrize("residue,m,want", [(0, 8, None), (2, 8, (4, 2)), (14, 8, (6, 4)), (4, 8, (6, 6)),
                                            (6, 10, (8, 6)), (8, 10, (6, 6))])
def test_path_lengths_for(residue, m, want):
    assert path_lengths_for(residue, m) == want


@pytest.mark.parametrize("sizes,m", [
    ((6, 6, 6), 4), ((12, 12), 8), ((12, 12, 14), 10), ((14, 16, 16, 16), 10), ((10, 10, 10, 10, 12), 8),
    ((12, 12, 12, 12, 12), 10), ((12, 12, 12, 16, 16), 10), ((12, 12, 16, 16, 16, 18), 10),
    ((12, 14, 14, 16, 18), 10), ((12, 14, 14, 16, 18, 20), 10), ((12, 10, 12), 8),
])
def test_decompose_multipartite(sizes, m):
    pk = decompose_multipartite(sizes, m)
    assert verify(pk).ok
    assert pk.host == multipartite(sizes)
    assert set(pk.lengths()) == {m}


@pytest.mark.parametrize("sizes,m,err", [
    ((10, 10, 10), 8, HypothesesViolated), ((8, 8, 8), 6, Unsupported), ((9, 10), 4, HypothesesViolated),
    ((8, 10), 8, HypothesesViolated), ((12, 12), 5, HypothesesViolated),
])
def test_decompose_multipartite_rejects(sizes, m, err):
    with pytest.raises(err):
        decompose_multipartite(sizes, m)
