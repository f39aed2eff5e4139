"""The (alpha, beta)-switch on packings.

Given two vertices with the same host neighbourhood, the swap graph has one
node per common neighbour.  Every packing piece that meets alpha or beta
contributes links between nodes:

* a cycle through exactly one of them links that vertex's two cycle neighbours;
* a cycle through both is split at alpha and beta into two paths P and P',
  and each path links its neighbour of alpha with its neighbour of beta;
* the matching links the partners of alpha and beta.

Leave edges add nothing, so a node has degree 2 when both of its edges to
alpha and beta are covered, 1 when exactly one is, and 0 otherwise.  Path
components therefore pair up the degree-1 nodes.  A switch walks one such path
and applies the transposition (alpha beta) to every piece along it: whole
cycles are relabelled, a two-path cycle has only the traversed half swapped,
and the matching edges at alpha and beta are exchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .core import MATCHING_OWNER, Packing, Vertex, edge
from .errors import InvalidOrigin, NeighborhoodMismatch


@dataclass(frozen=True)
class Link:
    ends: Tuple[Vertex, Vertex]
    piece: int  # cycle index, or MATCHING_OWNER
    kind: str  # "one", "path", "path_dagger" or "matching"


@dataclass(frozen=True)
class SwapGraph:
    alpha: Vertex
    beta: Vertex
    nodes: FrozenSet[Vertex]
    links: Tuple[Link, ...]

    def incidence(self) -> Dict[Vertex, List[int]]:
        inc: Dict[Vertex, List[int]] = {v: [] for v in self.nodes}
        for k, link in enumerate(self.links):
            a, b = link.ends
            # a self-loop (a == b) closes on itself and must not look like a path end
            inc[a].append(k)
            inc[b].append(k)
        return inc

    def degree(self, v: Vertex) -> int:
        return sum((lk.ends[0] == v) + (lk.ends[1] == v) for lk in self.links)

    def endpoints(self) -> List[Vertex]:
        return sorted(v for v, ks in self.incidence().items() if len(ks) == 1)


def _check_pair(packing: Packing, alpha: Vertex, beta: Vertex):
    host = packing.host
    if alpha == beta:
        raise NeighborhoodMismatch("alpha and beta must differ")
    if not (host.has_vertex(alpha) and host.has_vertex(beta)):
        raise NeighborhoodMismatch("alpha and beta must be host vertices")
    if host.neighbors(alpha) != host.neighbors(beta):
        raise NeighborhoodMismatch(f"{alpha} and {beta} have different host neighbourhoods")
    return host.neighbors(alpha)


def swap_graph(packing: Packing, alpha: Vertex, beta: Vertex) -> SwapGraph:
    common = _check_pair(packing, alpha, beta)
    own = packing.owner
    pieces = set()
    for w in common:
        for x in (alpha, beta):
            o = own.get(edge(x, w))
            if o is not None:
                pieces.add(o)
    links: List[Link] = []
    for ci in sorted(pieces):
        if ci == MATCHING_OWNER:
            pa = _partner(packing, alpha, common)
            pb = _partner(packing, beta, common)
            links.append(Link((pa, pb), ci, "matching"))
            continue
        cyc = packing.cycles[ci]
        n = len(cyc)
        pos = {v: k for k, v in enumerate(cyc)}
        ia, ib = pos.get(alpha), pos.get(beta)
        if ia is not None and ib is not None:
            seq = cyc[ia:] + cyc[:ia]
            j = (ib - ia) % n
            links.append(Link((seq[1], seq[j - 1]), ci, "path"))
            links.append(Link((seq[-1], seq[(j + 1) % n]), ci, "path_dagger"))
        else:
            i = ia if ia is not None else ib
            links.append(Link((cyc[i - 1], cyc[(i + 1) % n]), ci, "one"))
    return SwapGraph(alpha, beta, frozenset(common), tuple(links))


def _partner(packing: Packing, x: Vertex, common) -> Vertex:
    own = packing.owner
    for w in common:
        if own.get(edge(x, w)) == MATCHING_OWNER:
            return w
    raise AssertionError(f"{x} has no matching partner")


def switch_set(packing: Packing, alpha: Vertex, beta: Vertex) -> FrozenSet[Vertex]:
    """N: vertices adjacent in the leave to exactly one of alpha, beta."""
    _check_pair(packing, alpha, beta)
    la = packing.leave_adj.get(alpha, frozenset())
    lb = packing.leave_adj.get(beta, frozenset())
    return frozenset((la ^ lb) - {alpha, beta})


def _trace(graph: SwapGraph, origin: Vertex) -> Tuple[Vertex, List[int]]:
    inc = graph.incidence()
    if len(inc.get(origin, ())) != 1:
        raise InvalidOrigin(f"{origin} is not an end of a swap path")
    used: List[int] = []
    prev_link: Optional[int] = None
    cur = origin
    while True:
        nxt = [k for k in inc[cur] if k != prev_link]
        if not nxt:
            return cur, used
        k = nxt[0]
        used.append(k)
        a, b = graph.links[k].ends
        cur = b if a == cur else a
        prev_link = k


def pair_partition(packing: Packing, alpha: Vertex, beta: Vertex) -> FrozenSet[FrozenSet[Vertex]]:
    graph = swap_graph(packing, alpha, beta)
    pairs = set()
    for v in graph.endpoints():
        t, _ = _trace(graph, v)
        pairs.add(frozenset((v, t)))
    return frozenset(pairs)


def partner(packing: Packing, alpha: Vertex, beta: Vertex, origin: Vertex) -> Vertex:
    graph = swap_graph(packing, alpha, beta)
    if origin not in switch_set(packing, alpha, beta):
        raise InvalidOrigin(f"{origin} is not in N for ({alpha},{beta})")
    return _trace(graph, origin)[0]


def perform_switch(packing: Packing, alpha: Vertex, beta: Vertex,
                   origin: Vertex) -> Tuple[Packing, Vertex]:
    """Switch along the swap path starting at ``origin``; returns the packing and the terminus."""
    graph = swap_graph(packing, alpha, beta)
    if origin not in switch_set(packing, alpha, beta):
        raise InvalidOrigin(f"{origin} is not in N for ({alpha},{beta})")
    terminus, used = _trace(graph, origin)

    def swap(v: Vertex) -> Vertex:
        return beta if v == alpha else alpha if v == beta else v

    kinds: Dict[int, set] = {}
    for k in used:
        link = graph.links[k]
        kinds.setdefault(link.piece, set()).add(link.kind)
    changes = {}
    matching = packing.matching
    for ci, ks in kinds.items():
        if ci == MATCHING_OWNER:
            pa = _partner(packing, alpha, graph.nodes)
            pb = _partner(packing, beta, graph.nodes)
            matching = (matching - {edge(alpha, pa), edge(beta, pb)}) | {edge(beta, pa), edge(alpha, pb)}
            continue
        cyc = packing.cycles[ci]
        if ks == {"one"} or ks == {"path", "path_dagger"}:
            changes[ci] = tuple(swap(v) for v in cyc)
            continue
        ia = cyc.index(alpha)
        seq = cyc[ia:] + cyc[:ia]
        j = seq.index(beta)
        inner_p, inner_d = list(seq[1:j]), list(seq[j + 1:])
        if ks == {"path"}:
            changes[ci] = tuple([alpha] + inner_p[::-1] + [beta] + inner_d)
        else:
            changes[ci] = tuple([alpha] + inner_p + [beta] + inner_d[::-1])
    toggled = {edge(alpha, origin), edge(beta, origin), edge(alpha, terminus), edge(beta, terminus)}
    new = packing.replace_cycles(changes, matching, packing.leave ^ toggled)
    return new, terminus
