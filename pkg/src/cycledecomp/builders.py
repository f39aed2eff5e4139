"""Top-level constructions.

* :func:`decompose_bipartite` - arbitrary even cycle lengths in K_{a,b} or
  K_{a,a} - I, by splitting the list down to 4s and 6s and merging back with
  :func:`~cycledecomp.transforms.join_cycles`.
* :func:`decompose_hole` - m-cycle systems of K_v - K_u from a packed K_n and a
  bipartite packing whose two leave paths close up the K_n leave cycle.
* :func:`decompose_multipartite` - uniform m-cycles of a complete multipartite
  graph, layer by layer, tracking the leave as a pair of paths.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .base import canonical_matching, decompose_four_six, leave_residue, pack_complete_graph_uniform
from .core import (HostGraph, Packing, Vertex, bipartite, bipartite_minus_matching, classify_leave,
                   cycle_edges, hole, multipartite, path_edges)
from .errors import (HypothesesViolated, InternalTransformFailure, NotGood, PreconditionViolated,
                     Unsupported)
from .transforms import LEAST, Chooser, attach_cycles, flatten_out, join_cycles

log = logging.getLogger("cycledecomp.provenance")

Path = List[Vertex]


# ---------------------------------------------------------------------------
# feasibility


@dataclass(frozen=True)
class FeasibilityVerdict:
    status: str  # "SatisfiesTheorem", "ViolatesNecessary" or "OutsideSupportedRegion"
    reason: str = ""

    def __str__(self) -> str:
        return self.status if not self.reason else f"{self.status}: {self.reason}"


def check_feasibility(host: HostGraph, lengths: Sequence[int]) -> FeasibilityVerdict:
    """Classify a length list against the bipartite existence theorem and the obvious necessities."""
    ms = sorted(lengths)
    if host.kind not in ("bipartite", "bipartite-minus-matching"):
        return FeasibilityVerdict("OutsideSupportedRegion", f"{host.kind} hosts take no length lists")
    a, b = host.part_sizes
    if host.kind == "bipartite" and (a % 2 or b % 2):
        return FeasibilityVerdict("ViolatesNecessary", f"K_{{{a},{b}}} has vertices of odd degree")
    if host.kind == "bipartite-minus-matching" and a % 2 == 0:
        return FeasibilityVerdict("ViolatesNecessary", f"K_{{{a},{a}}}-I has vertices of odd degree")
    if not ms:
        return FeasibilityVerdict("ViolatesNecessary", "empty length list")
    bad = [x for x in ms if x % 2 or x < 4]
    if bad:
        return FeasibilityVerdict("ViolatesNecessary", f"length {bad[0]} is not an even integer >= 4")
    if sum(ms) != host.edge_count:
        return FeasibilityVerdict("ViolatesNecessary", f"lengths sum to {sum(ms)}, host has {host.edge_count} edges")
    lo = min(a, b)
    if ms[-1] > 2 * lo:
        return FeasibilityVerdict("ViolatesNecessary", f"m_t = {ms[-1]} exceeds 2 min(a,b) = {2 * lo}")
    if len(ms) < 2:
        return FeasibilityVerdict("OutsideSupportedRegion", "a single cycle has no m_{t-1} to compare with")
    limit = min(lo, 3 * ms[-2])
    if ms[-1] > limit:
        return FeasibilityVerdict("OutsideSupportedRegion",
                                  f"m_t = {ms[-1]} exceeds min(a, b, 3 m_(t-1)) = {limit}")
    return FeasibilityVerdict("SatisfiesTheorem")


# ---------------------------------------------------------------------------
# bipartite hosts


def split_schedule(lengths: Sequence[int]) -> Tuple[List[int], List[Tuple[int, int]]]:
    """Split the largest entry into {4, z-4} until only 4s and 6s remain.

    Returns the final list and the merges ``(m', h)`` to undo, last split first.
    """
    z = sorted(lengths)
    merges: List[Tuple[int, int]] = []
    while z[-1] >= 8:
        top, h = z[-1], z[-2]
        merges.append((top - 4, h))
        z = sorted(z[:-1] + [4, top - 4])
        if z[-1] > min(3 * z[-2], top):
            raise InternalTransformFailure(f"split list {z} breaks the theorem hypotheses")
    return z, merges[::-1]


def _pipeline(func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except PreconditionViolated as exc:
        raise InternalTransformFailure(f"lemma precondition failed mid-pipeline: {exc}") from exc


def decompose_bipartite(a: int, b: int, minus_matching: bool, lengths: Sequence[int],
                        chooser: Chooser = LEAST, seed: int = 0) -> Packing:
    """Decomposition of K_{a,b} (or K_{a,a}-I) into cycles of exactly the given lengths.

    For the odd diagonal case the result lives on the minus-matching host and
    carries the removed canonical matching as its matching line.
    """
    host = bipartite_minus_matching(a) if minus_matching else bipartite(a, b)
    if minus_matching and a != b:
        raise HypothesesViolated("the minus-matching host needs a = b")
    verdict = check_feasibility(host, lengths)
    if verdict.status != "SatisfiesTheorem":
        raise HypothesesViolated(str(verdict))
    if min(a, b) < 4:
        raise HypothesesViolated("part sizes below 4 admit no decomposition of this kind")
    base, merges = split_schedule(lengths)
    pk = decompose_four_six(a, b, (base.count(4), base.count(6)), seed)
    log.info("46Decomp K_{%d,%d} t4=%d t6=%d", a, b, base.count(4), base.count(6))
    for mp, h in merges:
        pk = _pipeline(join_cycles, pk, 4, mp, h, chooser)
    if minus_matching:
        pk = _to_minus_matching(pk)
    if sorted(pk.lengths()) != sorted(lengths) or pk.leave:
        raise InternalTransformFailure("bipartite pipeline produced the wrong length multiset")
    return pk


def _to_minus_matching(pk: Packing) -> Packing:
    a = pk.host.part_sizes[0]
    mapping = {}
    for x, y in pk.matching:
        u, w = (x, y) if x.part == 0 else (y, x)
        mapping[w] = Vertex(1, u.index)
    for u in pk.host.part(0):
        mapping[u] = u
    log.info("relabel part 1 so the matching is canonical: %s",
             " ".join(f"{k}->{v}" for k, v in sorted(mapping.items()) if k != v))
    return Packing(bipartite_minus_matching(a), [tuple(mapping[v] for v in c) for c in pk.cycles],
                   canonical_matching(a))


def packing_with_cycle_leave(a: int, b: int, m: int, leave: int, extra: Sequence[int] = (),
                             chooser: Chooser = LEAST, seed: int = 0) -> Packing:
    """m-cycles (plus ``extra`` cycles) of K_{a,b} whose leave is a single ``leave``-cycle."""
    rest = a * b - leave - sum(extra)
    if rest % m or rest < 0:
        raise PreconditionViolated(f"K_{{{a},{b}}} has no m-cycle packing with a {leave}-cycle leave")
    lengths = [m] * (rest // m) + list(extra) + ([leave] if leave else [])
    full = decompose_bipartite(a, b, False, lengths, chooser, seed)
    if not leave:
        return full
    idx = max(i for i, c in enumerate(full.cycles) if len(c) == leave)
    return full.remove_cycles([idx])


def split_cycle(cycle: Sequence[Vertex], p: int, start: int = 0) -> Tuple[Path, Path]:
    """Cut a cycle into a p-path and the complementary path, both beginning at cycle[start]."""
    c = list(cycle[start:]) + list(cycle[:start])
    first = c[:p + 1]
    second = [c[0]] + c[:p - 1:-1]
    return first, second


def _leave_cycle(pk: Packing) -> List[Vertex]:
    comps = classify_leave(pk.leave).components
    if len(comps) != 1 or comps[0].kind != "cycle":
        raise InternalTransformFailure("expected a single leave cycle")
    return list(comps[0].cycles[0])


def two_path_leave(a: int, b: int, R: int, m: int, l: int, p: int, q: int,
                   chooser: Chooser = LEAST, seed: int = 0) -> Tuple[Packing, Path, Path]:
    """m-cycle packing of K_{a,b} whose leave splits into a p-path and a q-path with all ends in part R."""
    if a % 2 or b % 2 or min(a, b) < m + 2:
        raise PreconditionViolated(f"two_path_leave: parts must be even and at least m+2 = {m + 2}")
    if l % 2 or not 4 <= l <= 2 * m - 4 or (a * b - l) % m:
        raise PreconditionViolated(f"two_path_leave: l = {l} must be in 4..2m-4 with |E| = l mod m")
    if p % 2 or q % 2 or p <= 0 or q <= 0 or p + q != l or min(p, q) < l - m:
        raise PreconditionViolated(f"two_path_leave: need even p, q >= max(2, l-m) with p+q = l (p={p}, q={q})")
    if l <= m + 2:
        pk = packing_with_cycle_leave(a, b, m, l, chooser=chooser, seed=seed)
        cyc = _leave_cycle(pk)
        start = chooser.pick([i for i, v in enumerate(cyc) if v.part == R], "path start in R")
        P, Q = split_cycle(cyc, p, start)
        log.info("TwoPathLeave l=%d direct split p=%d q=%d", l, p, q)
        return pk, P, Q
    pk = packing_with_cycle_leave(a, b, m, l - m, chooser=chooser, seed=seed)
    ring = set(_leave_cycle(pk))
    idx = chooser.pick([i for i, c in enumerate(pk.cycles) if len(c) == m and ring & set(c)],
                       "m-cycle meeting the leave cycle")
    pk = pk.remove_cycles([idx])
    pk = _pipeline(flatten_out, pk, chooser)
    pk, P, Q = _pipeline(attach_cycles, pk, p, q, R, chooser)
    log.info("TwoPathLeave l=%d flatten+attach p=%d q=%d", l, p, q)
    return pk, P, Q


# ---------------------------------------------------------------------------
# disjoint witness sets


def good_triple(A: Iterable, S: Iterable, T: Iterable, s_prime: int, t_prime: int) -> bool:
    A, S, T = set(A), set(S), set(T)
    n = len(A)
    return len(S & T) + s_prime + t_prime <= n and len(S) + s_prime <= n and len(T) + t_prime <= n


def find_disjoint_sets(A: Iterable, S: Iterable, T: Iterable, s_prime: int, t_prime: int):
    """Sets S', T' of sizes s', t' with S' missing S, T' missing T, and S', T' disjoint."""
    A, S, T = set(A), set(S), set(T)
    if not (S <= A and T <= A):
        raise NotGood("S and T must be subsets of A")
    if s_prime < 0 or t_prime < 0 or not good_triple(A, S, T, s_prime, t_prime):
        raise NotGood(f"triple is not ({s_prime},{t_prime})-good")
    t_minus_s = sorted(T - S)
    if s_prime <= len(t_minus_s):
        s_set = t_minus_s[:s_prime]
        t_set = sorted(A - T)[:t_prime]
    else:
        s_set = t_minus_s + sorted(A - S - T)[:s_prime - len(t_minus_s)]
        t_set = sorted(A - (S & T) - set(s_set))[:t_prime]
    return s_set, t_set


# ---------------------------------------------------------------------------
# holes


def _relabel_onto(cycle: Sequence[Vertex], target: Sequence[Vertex], pool: Sequence[Vertex]) -> Dict[Vertex, Vertex]:
    """A bijection of ``pool`` sending cycle[i] to target[i]; other vertices keep their order."""
    if len(cycle) != len(target) or len(set(target)) != len(target):
        raise InternalTransformFailure("relabel target is not a simple sequence of the right length")
    mapping = dict(zip(cycle, target))
    src = [v for v in pool if v not in mapping]
    dst = [v for v in pool if v not in set(target)]
    mapping.update(zip(src, dst))
    return mapping


def close_with_complete_leave(cycles1: Sequence[Sequence[Vertex]], leave_cycle: Sequence[Vertex],
                              pool: Sequence[Vertex], W: Sequence[Vertex], P2: Path, Q2: Path,
                              p1: int) -> List[Tuple[Vertex, ...]]:
    """Relabel a packing so its leave cycle becomes y-P1-z-Q1-y, then close P1+P2 and Q1+Q2.

    P2 and Q2 are paths from y to z; P1 has length ``p1``.  Returns the
    relabelled cycles followed by the two closed cycles.
    """
    e = len(leave_cycle)
    y, z = P2[0], P2[-1]
    if Q2[0] != y or Q2[-1] != z:
        raise InternalTransformFailure("P2 and Q2 must share their end vertices")
    S = set(P2) & set(W)
    T = set(Q2) & set(W)
    s_set, t_set = find_disjoint_sets(W, S, T, p1 - 1, e - p1 - 1)
    target = [y] + s_set + [z] + t_set
    mapping = _relabel_onto(leave_cycle, target, pool)
    log.info("relabel complete-graph packing: leave -> %s", " ".join(map(str, target)))
    out = [tuple(mapping[v] for v in c) for c in cycles1]
    out.append(tuple(P2) + tuple(s_set[::-1]))
    out.append(tuple(Q2) + tuple(t_set))
    return out


def decompose_hole(v: int, u: int, m: int, chooser: Chooser = LEAST, seed: int = 0) -> Packing:
    """m-cycle decomposition of K_v - K_u.

    The hole is part 0 of the host and its vertex p0.0 plays the point at
    infinity joined to the complete graph on the outside vertices.
    """
    if v % 2 == 0 or u % 2 == 0 or u > v or u < 1:
        raise HypothesesViolated(f"v and u must be odd with u <= v (got v={v}, u={u})")
    if m < 4 or m % 2:
        raise HypothesesViolated(f"m must be an even integer >= 4, got {m}")
    total = comb(v, 2) - comb(u, 2)
    if total % m:
        raise HypothesesViolated(f"C({v},2) - C({u},2) = {total} is not divisible by {m}")
    if u < m + 1 or v - u < m:
        raise HypothesesViolated(f"need u >= m+1 and v-u >= m (u={u}, v-u={v - u}, m={m})")
    host = hole(v, u)
    n = v - u + 1
    if n < 7:
        raise InternalTransformFailure("v-u = 4 contradicts divisibility and should be unreachable")
    e = leave_residue(n, m)
    if e is None:
        raise InternalTransformFailure(f"no admissible leave size for K_{n} and m={m}")
    log.info("HoleTheorem v=%d u=%d m=%d e=%d", v, u, m, e)
    p1 = pack_complete_graph_uniform(n, m, e, seed)
    # K_n packing lives on hole(n, 1): p0.0 is infinity, p1.j is the outside vertex p1.j
    cycles1 = list(p1.cycles)
    ga, gb = u - 1, v - u

    def lift(c):
        return tuple(Vertex(0, x.index + 1) if x.part == 0 else x for x in c)

    if e == 0:
        p2 = decompose_bipartite(ga, gb, False, [m] * (ga * gb // m), chooser, seed)
        cycles = cycles1 + [lift(c) for c in p2.cycles]
        log.info("HoleTheorem case 1")
    else:
        if u < m + 3 or v - u < m + 2:
            raise InternalTransformFailure("a non-zero leave needs u >= m+3 and v-u >= m+2")
        if e <= m - 2:
            p, q, plen = m - 2, m - e + 2, 2
            case = 2
        else:
            p, q, plen = m - 4, 2, 4
            case = 3
        p2, P2, Q2 = two_path_leave(ga, gb, 1, m, p + q, p, q, chooser, seed)
        P2, Q2 = list(lift(P2)), list(lift(Q2))
        W = list(host.part(1))
        pool = [Vertex(0, 0)] + W
        ring = list(classify_leave(p1.leave).components[0].cycles[0])
        closed = close_with_complete_leave(cycles1, ring, pool, W, P2, Q2, plen)
        cycles = closed + [lift(c) for c in p2.cycles]
        log.info("HoleTheorem case %d p=%d q=%d", case, p, q)
    pk = Packing(host, cycles)
    if pk.leave or set(pk.lengths()) != {m}:
        raise InternalTransformFailure("hole construction did not produce an m-cycle decomposition")
    return pk


# ---------------------------------------------------------------------------
# combining a leave-path packing with a layer packing


@dataclass
class CombineOutcome:
    cycles: List[Tuple[Vertex, ...]]  # layer cycles after relabelling plus any closed cycles
    paths: Optional[Tuple[Path, Path]]  # new leave paths, both from the same start, or None


def _interleave(first: Sequence[Vertex], second: Sequence[Vertex]) -> List[Vertex]:
    out: List[Vertex] = []
    for i in range(max(len(first), len(second))):
        if i < len(first):
            out.append(first[i])
        if i < len(second):
            out.append(second[i])
    return out


def _take(pool: Iterable[Vertex], k: int, avoid: Set[Vertex], what: str) -> List[Vertex]:
    got = [x for x in pool if x not in avoid][:k]
    if len(got) < k:
        raise PreconditionViolated(f"combine_paths: not enough spare vertices for {what}")
    return got


def combine_paths(variant: str, P: Path, Q: Path, layer: Packing, A: Sequence[Vertex],
                  B: Sequence[Vertex], p_prime: int, q_prime: int, p_dprime: int = 0) -> CombineOutcome:
    """Glue a layer packing with an l-cycle leave onto the leave paths P, Q (a to a').

    ``layer`` is a packing of K_{|A|,|B|}; part-0 vertex i stands for some vertex
    of ``A`` and part-1 vertex j for some vertex of ``B``, fixed by a relabelling
    chosen here so that the leave cycle takes the shape the variant needs.
    """
    a_sizes = layer.host.part_sizes
    if layer.host.kind != "bipartite" or a_sizes[0] % 2 or a_sizes[1] % 2:
        raise PreconditionViolated("combine_paths: layer host must be bipartite with even parts")
    if (len(A), len(B)) != a_sizes:
        raise PreconditionViolated("combine_paths: vertex lists do not match the layer host")
    a, a_dag = P[0], P[-1]
    if Q[0] != a or Q[-1] != a_dag or a == a_dag:
        raise PreconditionViolated("combine_paths: P and Q must run between the same two vertices")
    if not set(P) | set(Q) <= set(A):
        raise PreconditionViolated("combine_paths: leave paths must lie in A")
    ring = _leave_cycle(layer)
    l = len(ring)
    for x in (p_prime, q_prime, p_dprime):
        if x % 2:
            raise PreconditionViolated("combine_paths: path lengths must be even")
    A_list = list(A)
    VP, VQ = set(P), set(Q)
    ends = {a, a_dag}

    if variant in ("a", "b"):
        if p_prime < 2 or q_prime < 2 or p_prime + q_prime != l:
            raise PreconditionViolated(f"combine_paths ({variant}): need p',q' >= 2 with p'+q' = {l}")
        S1, T1 = find_disjoint_sets(A_list, VP, VQ, (p_prime - 2) // 2, (q_prime - 2) // 2)
        Bs = list(B[:l // 2])
        if len(Bs) < l // 2:
            raise PreconditionViolated("combine_paths: B is too small")
        if variant == "a":
            p_mid = _interleave(Bs[:p_prime // 2], S1)
            q_mid = _interleave(Bs[p_prime // 2:], T1)
            P1 = [a] + p_mid + [a_dag]
            Q1 = [a_dag] + q_mid + [a]
            target = P1 + Q1[1:-1]
            closed = [tuple(P) + tuple(P1[-2:0:-1]), tuple(Q) + tuple(Q1[1:-1])]
            new_paths = None
        else:
            b, b_dag = Bs[0], Bs[1]
            rest = Bs[2:]
            kp = (p_prime - 2) // 2
            P1 = [a_dag] + _interleave(rest[:kp], S1) + [b_dag]
            Q1 = [a_dag] + _interleave(rest[kp:], T1) + [b]
            target = [a] + P1[::-1] + Q1[1:]
            closed = []
            newP = [b] + list(P) + P1[1:]
            newQ = ([b_dag] + list(Q) + Q1[1:])[::-1]
            new_paths = (newP, newQ)
    elif variant == "c":
        if p_prime < 2 or q_prime < 0 or p_dprime < 2 or p_prime + q_prime + p_dprime != l:
            raise PreconditionViolated(f"combine_paths (c): need p' >= 2, q' >= 0, p'' >= 2 summing to {l}")
        t_need = max((q_prime - 2) // 2, 0)
        S1, T1 = find_disjoint_sets(A_list, VP, VQ, (p_prime - 2) // 2, t_need)
        Bs = list(B[:l // 2])
        if len(Bs) < l // 2:
            raise PreconditionViolated("combine_paths: B is too small")
        P1 = [a] + _interleave(Bs[:p_prime // 2], S1) + [a_dag]
        rest_b = Bs[p_prime // 2:]
        used = ends | set(S1) | set(T1)
        if q_prime == 0:
            R1 = _take(A_list, (p_dprime - 2) // 2, used, "the p''-path")
            P2 = [a_dag] + _interleave(rest_b, R1) + [a]
            target = P1 + P2[1:-1]
            new_paths = (P2[::-1], list(Q))
        else:
            b, b_dag = rest_b[0], rest_b[1]
            more = rest_b[2:]
            kq = (q_prime - 2) // 2
            Q1 = [a_dag] + _interleave(more[:kq], T1) + [b]
            R1 = _take(A_list, p_dprime // 2, used, "the p''-path")
            P2 = [b] + _interleave(R1, more[kq:]) + [b_dag]
            target = P1 + Q1[1:] + P2[1:]
            newQ = ([b_dag] + list(Q) + Q1[1:])[::-1]
            new_paths = (P2, newQ)
        closed = [tuple(P) + tuple(P1[-2:0:-1])]
    else:
        raise PreconditionViolated(f"unknown combine_paths variant {variant!r}")

    if len(target) != l or len(set(target)) != l:
        raise InternalTransformFailure("combine_paths built an invalid target cycle")
    # orient the layer's leave cycle so it starts in part 0, matching target[0] in A
    if ring[0].part != 0:
        ring = ring[1:] + ring[:1]
    mapping = _layer_map(ring, target, A, B)
    cycles = [tuple(mapping[x] for x in c) for c in layer.cycles]
    log.info("CombinePaths (%s) p=%d p'=%d q=%d q'=%d p''=%d", variant, len(P) - 1, p_prime,
             len(Q) - 1, q_prime, p_dprime)
    return CombineOutcome(cycles + closed, new_paths)


def _layer_map(ring: Sequence[Vertex], target: Sequence[Vertex], A: Sequence[Vertex],
               B: Sequence[Vertex]) -> Dict[Vertex, Vertex]:
    """Bijections of each side of the layer sending the leave cycle onto ``target``."""
    sides = (list(A), list(B))
    mapping: Dict[Vertex, Vertex] = {}
    for x, t in zip(ring, target):
        if t not in set(sides[x.part]):
            raise InternalTransformFailure("combine_paths target does not alternate between A and B")
        mapping[x] = t
    for side in (0, 1):
        taken = {mapping[x] for x in mapping if x.part == side}
        src = [Vertex(side, i) for i in range(len(sides[side])) if Vertex(side, i) not in mapping]
        dst = [v for v in sides[side] if v not in taken]
        mapping.update(zip(src, dst))
    return mapping


# ---------------------------------------------------------------------------
# multipartite hosts


@dataclass
class LayerState:
    index: int
    l: int
    sigma: int
    residue: int
    paths: Optional[Tuple[Path, Path]]


def path_lengths_for(residue: int, m: int) -> Optional[Tuple[int, int]]:
    """(first, second) leave path lengths demanded by a residue of sigma mod 2m."""
    if residue == 0:
        return None
    if residue == 2:
        return (m - 4, 2)
    if residue == 2 * m - 2:
        return (m - 2, 4)
    half = (2 * m - residue) // 2
    if half % 2 == 0:
        return (half, half)
    return (half + 1, half - 1)


def _residue_leave(edges: int, m: int) -> int:
    r = edges % m
    return m + 2 if r == 2 else r


def decompose_multipartite(sizes: Sequence[int], m: int, chooser: Chooser = LEAST, seed: int = 0) -> Packing:
    """Decomposition of the complete multipartite graph with the given even part sizes into m-cycles."""
    sizes = list(sizes)
    if m < 4 or m % 2:
        raise HypothesesViolated(f"m must be an even integer >= 4, got {m}")
    if not sizes or any(s % 2 or s < m + 2 for s in sizes):
        raise HypothesesViolated(f"every part must be even and at least m+2 = {m + 2}")
    host = multipartite(sizes)
    if host.edge_count % m:
        raise HypothesesViolated(f"|E| = {host.edge_count} is not divisible by {m}")
    if m == 6:
        raise Unsupported("uniform 6-cycle decompositions of multipartite graphs are not supported")
    order = sorted(range(len(sizes)), key=lambda i: (-sizes[i], i))
    srt = [sizes[i] for i in order]
    parts = [[Vertex(k, j) for j in range(s)] for k, s in enumerate(srt)]
    if len(srt) == 1:
        cycles: List[Tuple[Vertex, ...]] = []
    elif m == 4:
        cycles = []
        for i in range(1, len(srt)):
            A = [x for p in parts[:i] for x in p]
            layer = decompose_bipartite(len(A), srt[i], False, [4] * (len(A) * srt[i] // 4), chooser, seed)
            cycles += _embed(layer.cycles, A, parts[i])
            log.info("Multipartite m=4 layer %d", i)
    else:
        cycles = _layered(srt, parts, m, chooser, seed)
    back = {Vertex(k, j): Vertex(order[k], j) for k, s in enumerate(srt) for j in range(s)}
    pk = Packing(host, [tuple(back[x] for x in c) for c in cycles])
    if pk.leave or set(pk.lengths()) != {m}:
        raise InternalTransformFailure("multipartite construction did not produce an m-cycle decomposition")
    return pk


def _embed(cycles: Iterable[Sequence[Vertex]], A: Sequence[Vertex], B: Sequence[Vertex]):
    return [tuple(A[x.index] if x.part == 0 else B[x.index] for x in c) for c in cycles]


def _check_state(state: LayerState, cycles, srt: Sequence[int], m: int) -> None:
    host = multipartite(srt[:state.index + 2])
    pk = Packing(host, cycles)
    if set(pk.lengths()) - {m}:
        raise InternalTransformFailure(f"layer {state.index}: a non-{m}-cycle is in the packing")
    want = path_lengths_for(state.residue, m)
    if want is None:
        if pk.leave or state.paths is not None:
            raise InternalTransformFailure(f"layer {state.index}: leave should be empty")
        return
    P, Q = state.paths
    if (len(P) - 1, len(Q) - 1) != want:
        raise InternalTransformFailure(f"layer {state.index}: paths have lengths {len(P) - 1},{len(Q) - 1}, want {want}")
    if P[0] != Q[0] or P[-1] != Q[-1] or len(set(P)) != len(P) or len(set(Q)) != len(Q):
        raise InternalTransformFailure(f"layer {state.index}: leave paths are malformed")
    pe, qe = set(path_edges(P)), set(path_edges(Q))
    if pe & qe or pe | qe != pk.leave:
        raise InternalTransformFailure(f"layer {state.index}: leave is not the union of the two paths")


def _layered(srt: List[int], parts: List[List[Vertex]], m: int, chooser: Chooser, seed: int):
    t = len(srt)
    lefts = [[x for p in parts[:i + 1] for x in p] for i in range(t - 1)]
    ls = [_residue_leave(len(lefts[i]) * srt[i + 1], m) for i in range(t - 1)]
    sigmas = [sum(ls[i + 1:]) for i in range(t - 1)]
    mod = 2 * m

    def dims(i):
        return len(lefts[i]), srt[i + 1]

    # first layer
    a, b = dims(0)
    r = sigmas[0] % mod
    want = path_lengths_for(r, m)
    if r == 0:
        layer = packing_with_cycle_leave(a, b, m, 0, chooser=chooser, seed=seed)
        paths = None
    elif r in (2, mod - 2):
        layer = packing_with_cycle_leave(a, b, m, sum(want), chooser=chooser, seed=seed)
        paths = split_cycle(_leave_cycle(layer), want[0])
    else:
        layer, P, Q = two_path_leave(a, b, 0, m, 2 * m - r, want[0], want[1], chooser, seed)
        paths = (P, Q)
    cycles = _embed(layer.cycles, lefts[0], parts[1])
    if paths is not None:
        paths = tuple(_embed([p], lefts[0], parts[1])[0] for p in paths)
        paths = tuple(list(p) for p in paths)
    state = LayerState(0, ls[0], sigmas[0], r, paths)
    _check_state(state, cycles, srt, m)
    log.info("Multipartite layer 0 l=%d sigma=%d residue=%d", ls[0], sigmas[0], r)

    for k in range(1, t - 1):
        l = ls[k]
        x = state.residue
        new_r = sigmas[k] % mod
        a, b = dims(k)
        A, B = lefts[k], parts[k + 1]
        nxt = path_lengths_for(new_r, m)
        new_paths = None
        if l == 0:
            layer = packing_with_cycle_leave(a, b, m, 0, chooser=chooser, seed=seed)
            cycles += _embed(layer.cycles, A, B)
            new_paths = state.paths
            bullet = "union"
        elif x == 0:
            layer = packing_with_cycle_leave(a, b, m, l, chooser=chooser, seed=seed)
            cycles += _embed(layer.cycles, A, B)
            ring = _embed([_leave_cycle(layer)], A, B)[0]
            new_paths = split_cycle(ring, nxt[0])
            bullet = "union+split"
        else:
            P, Q = state.paths
            d, e = len(P) - 1, len(Q) - 1
            if x == 2 and l == 4:
                variant, pp, qp, pd = "b", 2, 2, 0
            elif x == 2:
                variant, pp, qp, pd = "c", 4, nxt[0] - 2, nxt[1]
            elif x == mod - 2:
                variant, pp, qp, pd = "c", 2, nxt[0] - 4, nxt[1]
            elif l <= x - 4:
                variant, pp, qp, pd = "b", nxt[0] - d, nxt[1] - e, 0
            elif l == x - 2:
                variant, pp, qp, pd = "c", m - d, m - 4 - e, 2
            elif l == x:
                variant, pp, qp, pd = "a", m - d, m - e, 0
            elif l == x + 2:
                variant, pp, qp, pd = "c", m - d, m - 2 - e, 4
            else:
                variant, pp, qp, pd = "a*", m - d, m - e, 0
            if variant == "a*":
                # m-cycles, one (l-x)-cycle and an x-cycle leave; the (l-x)-cycle is freed afterwards
                layer = packing_with_cycle_leave(a, b, m, x, extra=[l - x], chooser=chooser, seed=seed)
                out = combine_paths("a", P, Q, layer, A, B, pp, qp)
                spare = next(i for i, c in enumerate(out.cycles) if len(c) == l - x)
                ring = list(out.cycles.pop(spare))
                cycles += out.cycles
                new_paths = split_cycle(ring, nxt[0])
            else:
                layer = packing_with_cycle_leave(a, b, m, l, chooser=chooser, seed=seed)
                out = combine_paths(variant, P, Q, layer, A, B, pp, qp, pd)
                cycles += out.cycles
                new_paths = out.paths
                if new_paths is not None and (len(new_paths[0]) - 1, len(new_paths[1]) - 1) != nxt:
                    new_paths = (new_paths[1], new_paths[0])
            bullet = f"{variant} p'={pp} q'={qp} p''={pd}"
        if new_paths is not None:
            new_paths = (list(new_paths[0]), list(new_paths[1]))
        state = LayerState(k, l, sigmas[k], new_r, new_paths)
        _check_state(state, cycles, srt, m)
        log.info("Multipartite layer %d l=%d sigma=%d residue %d -> %d via %s", k, l, sigmas[k], x, new_r, bullet)
    return cycles
