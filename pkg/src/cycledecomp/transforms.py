"""Leave surgery on bipartite packings.

Each operation takes a packing whose leave has a prescribed shape and uses
(alpha, beta)-switches to reshape the leave until it can be cut into cycles of
requested lengths.  Free vertex choices go through a :class:`Chooser`, which
picks the least candidate unless it was given a random generator.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .core import (Component, Cycle, Edge, LeaveStructure, Packing, Vertex, adjacency,
                   chain_from_cycles, classify_leave, edge, path_edges)
from .errors import InternalTransformFailure, PreconditionViolated
from .switch import pair_partition, perform_switch

log = logging.getLogger("cycledecomp.provenance")


class Chooser:
    """Resolves the free choices of the constructions deterministically or by seed."""

    def __init__(self, rng: Optional[random.Random] = None):
        self.rng = rng

    def pick(self, candidates: Iterable, what: str = "vertex"):
        items = sorted(candidates)
        if not items:
            raise InternalTransformFailure(f"no candidate {what} available")
        if self.rng is None:
            return items[0]
        return items[self.rng.randrange(len(items))]


LEAST = Chooser()


@dataclass(frozen=True)
class TransformOutcome:
    variant: str  # "decomposed" or "new_leave"
    packing: Packing
    cycles: Tuple[Cycle, ...] = ()
    structure: Optional[LeaveStructure] = None
    branch: str = ""


# ---------------------------------------------------------------------------
# small helpers


def size_bound(packing: Packing) -> int:
    """Largest leave size the switching lemmas tolerate on this bipartite host."""
    a, b = packing.host.part_sizes[:2]
    lo = min(a, b)
    return 2 * lo if a == b else 2 * lo + 2


def _check_size(packing: Packing, l: int, what: str) -> None:
    if len(packing.host.part_sizes) != 2:
        raise PreconditionViolated(f"{what}: host must be bipartite")
    bound = size_bound(packing)
    if l > bound:
        a, b = packing.host.part_sizes
        rel = "2a" if a == b else "2a+2"
        raise PreconditionViolated(f"{what}: leave size {l} exceeds {rel} = {bound}")


def _only_component(packing: Packing, what: str) -> Component:
    comps = classify_leave(packing.leave).components
    if len(comps) != 1:
        raise PreconditionViolated(f"{what}: leave has {len(comps)} non-trivial components, expected 1")
    return comps[0]


def same_class(packing: Packing, u: Vertex) -> List[Vertex]:
    """Vertices other than u with the same host neighbourhood."""
    host = packing.host
    nb = host.neighbors(u)
    return [w for w in host.part(u.part) if w != u and host.neighbors(w) == nb]


def isolated_partners(packing: Packing, u: Vertex) -> List[Vertex]:
    return [w for w in same_class(packing, u) if packing.leave_degree(w) == 0]


def compute_excess(packing: Packing) -> int:
    """Half the total degree excess over 2 among leave vertices of degree at least 4."""
    return sum(len(n) - 2 for n in packing.leave_adj.values() if len(n) >= 4) // 2


def _walk_path(edges: Iterable[Edge], start: Vertex, end: Vertex) -> Optional[List[Vertex]]:
    """Vertex sequence of the edge set if it is a simple path from start to end."""
    edges = set(edges)
    adj = adjacency(edges)
    if start == end or start not in adj or end not in adj:
        return None
    if len(adj[start]) != 1 or len(adj[end]) != 1:
        return None
    seq, prev, cur = [start], None, start
    while cur != end:
        nxt = [w for w in adj[cur] if w != prev]
        if len(nxt) != 1:
            return None
        prev, cur = cur, nxt[0]
        seq.append(cur)
        if len(seq) > len(edges) + 1:
            return None
    if len(seq) != len(edges) + 1 or len(set(seq)) != len(seq):
        return None
    return seq


def find_path_split(edges: FrozenSet[Edge], len1: int, len2: int, part: Optional[int] = None,
                    endpoint: Optional[Vertex] = None,
                    accept: Optional[Callable[[Vertex, Vertex], bool]] = None
                    ) -> Optional[Tuple[List[Vertex], List[Vertex]]]:
    """Split an edge set into a len1-path and a len2-path with common end vertices.

    With ``part`` given and both lengths at least 3, some end vertex must lie in
    that part.  With ``endpoint`` given, it must be one of the two ends.
    ``accept`` can veto an end pair.
    Returns (P, Q) with P of length len1 and both running from the same start.
    """
    if len1 + len2 != len(edges) or len1 < 1 or len2 < 1:
        return None
    if len1 > len2:
        found = find_path_split(edges, len2, len1, part, endpoint, accept)
        return None if found is None else (found[1], found[0])
    adj = {v: sorted(n) for v, n in adjacency(edges).items()}
    need_part = part is not None and len1 >= 3 and len2 >= 3
    starts = [v for v in sorted(adj) if len(adj[v]) == 2]

    def ok_ends(a: Vertex, b: Vertex) -> bool:
        if endpoint is not None and endpoint not in (a, b):
            return False
        if accept is not None and not accept(a, b):
            return False
        return not need_part or a.part == part or b.part == part

    for x0 in starts:
        path = [x0]
        on = {x0}

        def extend() -> Optional[Tuple[List[Vertex], List[Vertex]]]:
            cur = path[-1]
            if len(path) == len1 + 1:
                if len(adj[cur]) != 2 or not ok_ends(x0, cur):
                    return None
                rest = edges - set(path_edges(path))
                q = _walk_path(rest, x0, cur)
                return (list(path), q) if q is not None else None
            for w in adj[cur]:
                if w in on:
                    continue
                path.append(w)
                on.add(w)
                got = extend()
                if got is not None:
                    return got
                on.discard(path.pop())
            return None

        got = extend()
        if got is not None:
            return got
    return None


def _with_start(path: Sequence[Vertex], v: Vertex) -> List[Vertex]:
    path = list(path)
    return path if path[0] == v else path[::-1]


# ---------------------------------------------------------------------------
# path splitting and chains


def split_path_leave(packing: Packing, path: Sequence[Vertex]) -> TransformOutcome:
    """Switch (x_0, x_t) with origin x_1 along a path P whose complement in the leave is a path."""
    path = list(path)
    t = len(path) - 1
    if t < 4 or t % 2:
        raise PreconditionViolated(f"split_path_leave: path length {t} must be even and at least 4")
    comp = _only_component(packing, "split_path_leave")
    pe = set(path_edges(path))
    if len(set(path)) != len(path) or not pe <= comp.edges:
        raise PreconditionViolated("split_path_leave: P is not a path of the leave")
    comp_path = _walk_path(comp.edges - pe, path[-1], path[0])
    if comp_path is None:
        raise PreconditionViolated("split_path_leave: the remaining leave edges do not form a path")
    if edge(path[1], path[-1]) in comp.edges:
        raise PreconditionViolated("split_path_leave: x_1 x_t is a leave edge")
    y = comp_path[::-1]
    new, term = perform_switch(packing, path[0], path[-1], path[1])
    if term == path[-2]:
        st = classify_leave(new.leave)
        log.info("PathThing t=%d branch=new-leave %s", t, st.labels())
        return TransformOutcome("new_leave", new, structure=st, branch="terminus x_{t-1}")
    if term == y[1]:
        cycles, branch = (tuple(path[1:]), tuple(y[1:])), "terminus y_1"
    elif term == y[-2]:
        cycles, branch = (tuple(path[1:]), tuple(y[:-1])), "terminus y_{l-t-1}"
    else:
        raise InternalTransformFailure(f"split_path_leave: unexpected terminus {term}")
    if chain_from_cycles(cycles) != new.leave:
        raise InternalTransformFailure("split_path_leave: cycles do not partition the new leave")
    log.info("PathThing t=%d branch=%s", t, branch)
    return TransformOutcome("decomposed", new, cycles=cycles, branch=branch)


def _chain_labels(comp: Component, p: int, chooser: Chooser):
    """Orient a 2-chain as (x_1..x_{p-1}, c).(c, y_1..y_{q-1}) with the p-cycle first."""
    if comp.kind != "chain" or len(comp.cycles) != 2:
        raise PreconditionViolated(f"expected a 2-chain, found {comp.label()}")
    a, b = comp.cycles
    if len(a) != p:
        a, b = b, a
    if len(a) != p:
        raise PreconditionViolated(f"chain {comp.label()} has no {p}-cycle")
    c = comp.links[0]

    def from_c(cyc: Cycle, first: Vertex) -> List[Vertex]:
        i = cyc.index(c)
        seq = list(cyc[i:] + cyc[:i])
        return seq if seq[1] == first else [seq[0]] + seq[:0:-1]

    def nbrs(cyc: Cycle) -> List[Vertex]:
        i = cyc.index(c)
        return [cyc[i - 1], cyc[(i + 1) % len(cyc)]]

    xs = from_c(a, chooser.pick(nbrs(a)))
    ys = from_c(b, chooser.pick(nbrs(b)))
    return xs, ys, c


def chain_reduction_step(packing: Packing, m: int, variant: str, p: int,
                         chooser: Chooser = LEAST) -> TransformOutcome:
    """One step of the figure-of-eight reduction on a (p, q)-chain leave."""
    comp = _only_component(packing, "chain_reduction_step")
    xs, ys, c = _chain_labels(comp, p, chooser)
    q = len(ys)
    if m % 2 or p > m or p + q - m < 4:
        raise PreconditionViolated(f"chain_reduction_step: need even m >= p and p+q-m >= 4 (p={p}, q={q}, m={m})")
    if p == m:
        return TransformOutcome("decomposed", packing, cycles=tuple(comp.cycles), branch="p = m")
    # xs = [c, x_1, ..., x_{p-1}], ys = [c, y_1, ..., y_{q-1}]
    if variant == "i":
        path = xs[1:] + [c] + ys[1:m - p + 2]
        expect = sorted((m - p + 2, 2 * p + q - m - 2))
    elif variant == "ii":
        path = xs[2:] + [c] + ys[1:m - p + 3]
        expect = sorted((m - p + 4, 2 * p + q - m - 4))
    else:
        raise PreconditionViolated(f"unknown variant {variant!r}")
    out = split_path_leave(packing, path)
    if out.variant == "new_leave":
        comp2 = out.structure.only()
        if comp2.kind != "chain" or sorted(comp2.lengths) != expect:
            raise InternalTransformFailure(f"chain_reduction_step: got {comp2.label()}, expected chain {expect}")
    return TransformOutcome(out.variant, out.packing, out.cycles, out.structure, f"({variant}) {out.branch}")


def figure_eight_next(m: int, p: int) -> Tuple[str, int]:
    """Variant used at p and the next p of the schedule."""
    if 2 * p >= m + 4:
        return "i", m - p + 2
    return "ii", m - p + 4


def figure_eight_schedule(m: int, p: int) -> List[int]:
    """The sequence p, p_2, ... ending at m, assuming every step yields a new chain."""
    seq = [p]
    while seq[-1] != m:
        seq.append(figure_eight_next(m, seq[-1])[1])
        if len(seq) > m:
            raise InternalTransformFailure(f"schedule for m={m} from p={p} does not terminate")
    return seq


def chain_to_cycles(packing: Packing, m1: int, m2: int, chooser: Chooser = LEAST) -> Packing:
    """Turn a (p, q)-chain leave into an m1-cycle and an m2-cycle."""
    comp = _only_component(packing, "chain_to_cycles")
    if comp.kind != "chain" or len(comp.cycles) != 2:
        raise PreconditionViolated(f"chain_to_cycles: leave is {comp.label()}, not a 2-chain")
    if m1 % 2 or m2 % 2 or min(m1, m2) < 4 or m1 + m2 != comp.size:
        raise PreconditionViolated(f"chain_to_cycles: bad lengths {m1},{m2} for leave of size {comp.size}")
    m = max(m1, m2)
    p = min(comp.lengths)
    steps = 0
    while True:
        if p == m:
            cycles = _only_component(packing, "chain_to_cycles").cycles
            log.info("FigureOfEight m=%d steps=%d", m, steps)
            return packing.add_cycles(cycles)
        variant, nxt = figure_eight_next(m, p)
        out = chain_reduction_step(packing, m, variant, p, chooser)
        steps += 1
        if steps > m // 2:
            raise InternalTransformFailure("chain_to_cycles exceeded m/2 steps")
        if out.variant == "decomposed":
            log.info("FigureOfEight m=%d steps=%d", m, steps)
            return out.packing.add_cycles(out.cycles)
        packing, p = out.packing, nxt


# ---------------------------------------------------------------------------
# chains and rings with a two-path split


def paths_to_decomposition(packing: Packing, m1: int, m2: int, path: Optional[Sequence[Vertex]] = None,
                           chooser: Chooser = LEAST) -> Packing:
    """Cover a chain or ring leave that splits into an m1-path and m2-path by an m1- and m2-cycle."""
    if m1 % 2 or m2 % 2 or min(m1, m2) < 4:
        raise PreconditionViolated(f"paths_to_decomposition: lengths {m1},{m2} must be even and >= 4")
    comp = _only_component(packing, "paths_to_decomposition")
    _check_size(packing, comp.size, "paths_to_decomposition")
    if comp.kind not in ("chain", "ring"):
        raise PreconditionViolated(f"paths_to_decomposition: leave is {comp.label()}")
    if m1 + m2 != comp.size:
        raise PreconditionViolated("paths_to_decomposition: m1 + m2 must equal the leave size")
    if path is not None:
        path = list(path)
        if len(path) != m1 + 1 or _walk_path(comp.edges - set(path_edges(path)), path[-1], path[0]) is None:
            raise PreconditionViolated("paths_to_decomposition: given path does not split the leave")
    while True:
        comp = _only_component(packing, "paths_to_decomposition")
        s = len(comp.cycles)
        if comp.kind == "chain" and s == 2:
            return chain_to_cycles(packing, m1, m2, chooser)
        if comp.kind == "ring" and s == 2:
            pairs = [(u, v) for u in comp.links for v in isolated_partners(packing, u)]
            u = chooser.pick({u for u, _ in pairs}, "degree-4 vertex with an isolated partner")
            v = chooser.pick([w for x, w in pairs if x == u])
            y = chooser.pick(packing.leave_adj[u])
            packing, _ = perform_switch(packing, u, v, y)
            got = _only_component(packing, "paths_to_decomposition")
            if got.kind != "chain" or len(got.cycles) != 2:
                raise InternalTransformFailure(f"2-ring switch gave {got.label()}")
            log.info("PathOfCycles base 2-ring u=%s v=%s", u, v)
            return chain_to_cycles(packing, m1, m2, chooser)
        # on a ring both path ends must share a ring cycle; not every split does
        on_one_cycle = None
        if comp.kind == "ring":
            on_one_cycle = lambda x, y: any(x in c and y in c for c in comp.cycles)  # noqa: E731
            if path is not None and not on_one_cycle(path[0], path[-1]):
                path = None
        if path is None:
            found = find_path_split(comp.edges, m1, m2, accept=on_one_cycle)
            if found is None:
                raise (InternalTransformFailure if on_one_cycle else PreconditionViolated)(
                    f"paths_to_decomposition: {comp.label()} has no suitable {m1}/{m2} path split")
            path = found[0]
        if comp.kind == "chain":
            out = split_path_leave(packing, path)
            if out.variant == "decomposed":
                log.info("PathOfCycles case 1 s=%d decomposed", s)
                return out.packing.add_cycles(out.cycles)
            got = out.structure.only()
            if got.kind != "ring" or len(got.cycles) != s - 1:
                raise InternalTransformFailure(f"case 1 gave {got.label()}, expected a {s - 1}-ring")
            log.info("PathOfCycles case 1 s=%d -> ring", s)
            packing = out.packing
            path = [path[0]] + path[-2:0:-1] + [path[-1]]
            continue
        # ring with s >= 3
        ends = {path[0], path[-1]}
        ring = [c for c in comp.cycles if ends <= set(c)]
        if not ring:
            raise InternalTransformFailure("no ring cycle holds both path ends")
        cyc = ring[0]
        deg4 = [x for x in comp.links]
        cands = []
        for u in deg4:
            if u not in cyc:
                continue
            if not any(w != u and w.part == u.part and packing.host.neighbors(w) == packing.host.neighbors(u)
                       for w in deg4):
                continue
            iso = isolated_partners(packing, u)
            if iso:
                cands.append(u)
        u = chooser.pick(cands, "ring vertex u")
        v = chooser.pick(isolated_partners(packing, u))
        i = cyc.index(u)
        y = chooser.pick([cyc[i - 1], cyc[(i + 1) % len(cyc)]])
        packing, term = perform_switch(packing, u, v, y)
        got = _only_component(packing, "paths_to_decomposition")
        if not ((got.kind == "ring" and len(got.cycles) == s - 1) or (got.kind == "chain" and len(got.cycles) == s)):
            raise InternalTransformFailure(f"case 2 gave {got.label()}")
        log.info("PathOfCycles case 2 s=%d -> %s", s, got.label())
        path = None


# ---------------------------------------------------------------------------
# attaching cycles to a 2-chain


def attach_cycles(packing: Packing, m1: int, m2: int, R: int,
                  chooser: Chooser = LEAST) -> Tuple[Packing, List[Vertex], List[Vertex]]:
    """Absorb the cycle components of the leave into its 2-chain.

    Returns the packing with the m1-path and m2-path that split the resulting
    chain leave; when both lengths are at least 3 an end vertex lies in part R.
    """
    comps = list(classify_leave(packing.leave).components)
    chains = [c for c in comps if c.kind == "chain"]
    others = [c for c in comps if c.kind != "chain"]
    if len(chains) != 1 or len(chains[0].cycles) != 2 or any(c.kind != "cycle" for c in others):
        raise PreconditionViolated("attach_cycles: leave must be one 2-chain plus disjoint cycles")
    k = len(comps)
    l = sum(c.size for c in comps)
    if min(m1, m2) < k + 1 or m1 + m2 != l:
        raise PreconditionViolated(f"attach_cycles: need m1,m2 >= k+1 = {k + 1} and m1+m2 = {l}")
    h = chains[0].size
    sizes = [c.size for c in others]
    targets = {k: tuple(sorted((m1, m2)))}
    for t in range(k - 1, 0, -1):
        x1, _ = targets[t + 1]
        prev = h + sum(sizes[:t - 1])
        p = min(prev // 2, x1 - 1)
        targets[t] = (p, prev - p)
    p, q = targets[1]
    found = find_path_split(chains[0].edges, p, q, part=R)
    if found is None:
        raise InternalTransformFailure(f"2-chain has no {p}/{q} split with an end in part {R}")
    P, Q = found
    for t in range(1, k):
        p = len(P) - 1
        ends = [P[0], P[-1]]
        if p >= 3 and len(Q) - 1 >= 3:
            in_r = [x for x in ends if x.part == R]
            w = chooser.pick(in_r, "end vertex in R")
        else:
            w = chooser.pick(ends)
        u = ends[1] if w == ends[0] else ends[0]
        P, Q = _with_start(P, u), _with_start(Q, u)
        y = P[1]
        target = others[t - 1]
        v = chooser.pick([x for x in target.vertices
                          if packing.host.neighbors(x) == packing.host.neighbors(u)], "vertex of C_t")
        packing, term = perform_switch(packing, u, v, y)
        x1, x2 = targets[t + 1]
        # u may drop out of the leave; w is an end of the new paths either way
        comp = [c for c in classify_leave(packing.leave).components if w in c.vertices]
        if len(comp) != 1 or comp[0].kind != "chain":
            raise InternalTransformFailure("attach_cycles: absorbed component is not a chain")
        found = (find_path_split(comp[0].edges, x1, x2, part=R, endpoint=w)
                 or find_path_split(comp[0].edges, x1, x2, part=R))
        if found is None:
            raise InternalTransformFailure(f"attach_cycles: no {x1}/{x2} split after absorbing C_{t}")
        P, Q = found
        log.info("AttachCycles t=%d u=%s v=%s terminus=%s -> %s", t, u, v, term, comp[0].label())
    if len(P) - 1 != m1:
        P, Q = Q, P
    return packing, P, Q


def squash_to_two_cycles(packing: Packing, m1: int, m2: int, chooser: Chooser = LEAST) -> Packing:
    """Leave with one degree-4 vertex (a 2-chain plus cycles) becomes an m1-cycle and m2-cycle."""
    if m1 % 2 or m2 % 2:
        raise PreconditionViolated(f"squash_to_two_cycles: lengths {m1},{m2} must be even")
    st = classify_leave(packing.leave)
    k = len(st)
    if min(m1, m2) < max(4, k + 1):
        raise PreconditionViolated(f"squash_to_two_cycles: need m1,m2 >= max(4, k+1) = {max(4, k + 1)}")
    _check_size(packing, st.size, "squash_to_two_cycles")
    packing, P, _ = attach_cycles(packing, m1, m2, 0, chooser)
    return paths_to_decomposition(packing, m1, m2, P, chooser)


# ---------------------------------------------------------------------------
# degree levelling


def equitable_step(packing: Packing, u: Vertex, v: Vertex, chooser: Chooser = LEAST) -> Packing:
    """Move two leave edges from u to v with a (u, v)-switch whose ends both neighbour u."""
    if u == v or u not in same_class(packing, v) and v not in same_class(packing, u):
        raise PreconditionViolated(f"equitable_step: {u} and {v} are not in the same part")
    du, dv = packing.leave_degree(u), packing.leave_degree(v)
    if du <= dv:
        raise PreconditionViolated(f"equitable_step: need deg(u) > deg(v), got {du} <= {dv}")
    lu = packing.leave_adj.get(u, frozenset())
    lv = packing.leave_adj.get(v, frozenset())
    only_u = lu - lv
    good = [min(pr) for pr in pair_partition(packing, u, v) if pr <= only_u]
    y = chooser.pick(good, "origin for equitable step")
    new, term = perform_switch(packing, u, v, y)
    if new.leave_degree(u) != du - 2 or new.leave_degree(v) != dv + 2:
        raise InternalTransformFailure("equitable_step: degree postcondition failed")
    return new


def flatten_out(packing: Packing, chooser: Chooser = LEAST) -> Packing:
    """Equitable steps until exactly one leave vertex has degree 4 and the rest 2 or 0."""
    _check_size(packing, len(packing.leave), "flatten_out")
    if not any(len(n) >= 4 for n in packing.leave_adj.values()):
        raise PreconditionViolated("flatten_out: no leave vertex of degree at least 4")
    d = compute_excess(packing)
    for _ in range(d - 1):
        high = [x for x, n in packing.leave_adj.items() if len(n) >= 4]
        cands = [x for x in high if isolated_partners(packing, x)]
        u = chooser.pick(cands, "high-degree vertex with an isolated partner")
        v = chooser.pick(isolated_partners(packing, u))
        packing = equitable_step(packing, u, v, chooser)
    log.info("FlattenOut d=%d steps=%d", d, max(d - 1, 0))
    return packing


# ---------------------------------------------------------------------------
# merging


def join_cycles(decomposition: Packing, m: int, mp: int, h: int, chooser: Chooser = LEAST) -> Packing:
    """Merge an m-cycle and an m'-cycle into one (m+m')-cycle with an h-cycle as catalyst."""
    if decomposition.leave:
        raise PreconditionViolated("join_cycles: input must be a decomposition")
    for x in (m, mp, h):
        if x % 2 or x < 4:
            raise PreconditionViolated(f"join_cycles: length {x} must be even and >= 4")
    if m + mp > 3 * h:
        raise PreconditionViolated(f"join_cycles: m+m' = {m + mp} exceeds 3h = {3 * h}")
    _check_size(decomposition, m + mp + h, "join_cycles (m+m'+h)")
    picked: List[int] = []
    for want in (h, m, mp):
        idx = next((i for i, c in enumerate(decomposition.cycles) if len(c) == want and i not in picked), None)
        if idx is None:
            raise PreconditionViolated(f"join_cycles: no spare {want}-cycle")
        picked.append(idx)
    i_h, i_m, i_mp = picked
    cyc_m, cyc_mp = decomposition.cycles[i_m], decomposition.cycles[i_mp]
    packing = decomposition.remove_cycles(picked)
    comps = classify_leave(packing.leave).components
    k = len(comps)
    if k == 3:
        u = chooser.pick(cyc_m)
        v = chooser.pick([x for x in cyc_mp if packing.host.neighbors(x) == packing.host.neighbors(u)])
        y = chooser.pick(packing.leave_adj[u])
        packing, _ = perform_switch(packing, u, v, y)
        comps2 = classify_leave(packing.leave).components
        if all(c.kind == "cycle" for c in comps2):
            if sorted(c.size for c in comps2) != sorted((h, m + mp)):
                raise InternalTransformFailure("join_cycles case 1: unexpected cycle sizes")
            log.info("JoinCycles m=%d m'=%d h=%d case=1 joined", m, mp, h)
            return packing.add_cycles(c.cycles[0] for c in comps2)
        log.info("JoinCycles m=%d m'=%d h=%d case=1 chain", m, mp, h)
        return squash_to_two_cycles(packing, h, m + mp, chooser)
    kinds = sorted(c.kind for c in comps)
    if k == 2 and kinds == ["chain", "cycle"] and all(len(c.cycles) <= 2 for c in comps):
        log.info("JoinCycles m=%d m'=%d h=%d case=2", m, mp, h)
        return squash_to_two_cycles(packing, h, m + mp, chooser)
    positive = len(packing.leave_adj)
    if positive == h:
        high = [x for x, n in packing.leave_adj.items() if len(n) >= 4]
        u = chooser.pick([x for x in high if isolated_partners(packing, x)], "case 3b vertex")
        v = chooser.pick(isolated_partners(packing, u))
        packing = equitable_step(packing, u, v, chooser)
        branch = "3b"
    else:
        branch = "3a"
    packing = flatten_out(packing, chooser)
    log.info("JoinCycles m=%d m'=%d h=%d case=%s", m, mp, h, branch)
    return squash_to_two_cycles(packing, h, m + mp, chooser)
