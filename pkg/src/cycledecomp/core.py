"""Host graphs, vertices, cycles, packings and leave classification.

Everything here is an immutable value.  A :class:`Packing` validates itself
on construction and caches the edge ownership map and its leave, so derived
packings produced by the transforms can be built incrementally without
revalidating the whole host.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import InvalidPacking, InvalidParameters, OddDegree


class Vertex(NamedTuple):
    part: int
    index: int

    def __str__(self) -> str:
        return f"p{self.part}.{self.index}"


Edge = Tuple[Vertex, Vertex]
Cycle = Tuple[Vertex, ...]

MATCHING_OWNER = -1


def edge(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if u < v else (v, u)


def cycle_edges(cycle: Sequence[Vertex]) -> List[Edge]:
    n = len(cycle)
    return [edge(cycle[i], cycle[(i + 1) % n]) for i in range(n)]


def path_edges(path: Sequence[Vertex]) -> List[Edge]:
    return [edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def canonical_cycle(cycle: Sequence[Vertex]) -> Cycle:
    """Rotate to the smallest vertex, then pick the direction whose second vertex is smaller."""
    seq = list(cycle)
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


HOST_KINDS = ("bipartite", "bipartite-minus-matching", "hole", "multipartite")


@dataclass(frozen=True)
class HostGraph:
    """One of the four host families, identified by kind and its text-format parameters.

    ``hole`` hosts are K_v - K_u: part 0 holds the u hole vertices and part 1
    the v - u outside vertices.  ``hole(n, 1)`` is therefore a copy of K_n.
    """

    kind: str
    params: Tuple[int, ...]

    def __post_init__(self):
        if self.kind not in HOST_KINDS:
            raise InvalidParameters(f"unknown host kind {self.kind!r}")
        p = self.params
        if self.kind == "bipartite":
            if len(p) != 2 or min(p) < 1:
                raise InvalidParameters(f"bipartite host needs two positive sizes, got {p}")
        elif self.kind == "bipartite-minus-matching":
            if len(p) != 1 or p[0] < 1:
                raise InvalidParameters(f"bipartite-minus-matching host needs one positive size, got {p}")
        elif self.kind == "hole":
            if len(p) != 2 or min(p) < 1:
                raise InvalidParameters(f"hole host needs positive V and U, got {p}")
            if p[1] > p[0]:
                raise InvalidParameters(f"hole host needs U <= V, got V={p[0]} U={p[1]}")
        else:
            if len(p) < 1 or min(p) < 1:
                raise InvalidParameters(f"multipartite host needs positive part sizes, got {p}")

    # -- shape -----------------------------------------------------------
    @cached_property
    def part_sizes(self) -> Tuple[int, ...]:
        p = self.params
        if self.kind == "bipartite":
            return (p[0], p[1])
        if self.kind == "bipartite-minus-matching":
            return (p[0], p[0])
        if self.kind == "hole":
            return (p[1], p[0] - p[1])
        return tuple(p)

    @cached_property
    def vertices(self) -> Tuple[Vertex, ...]:
        return tuple(Vertex(i, j) for i, n in enumerate(self.part_sizes) for j in range(n))

    def part(self, i: int) -> Tuple[Vertex, ...]:
        return tuple(Vertex(i, j) for j in range(self.part_sizes[i]))

    def has_vertex(self, v: Vertex) -> bool:
        return 0 <= v.part < len(self.part_sizes) and 0 <= v.index < self.part_sizes[v.part]

    @property
    def is_bipartite(self) -> bool:
        return self.kind in ("bipartite", "bipartite-minus-matching") or (
            self.kind == "multipartite" and len(self.params) <= 2
        )

    # -- adjacency -------------------------------------------------------
    def adjacent(self, u: Vertex, v: Vertex) -> bool:
        if u == v or not (self.has_vertex(u) and self.has_vertex(v)):
            return False
        if self.kind in ("bipartite", "multipartite"):
            return u.part != v.part
        if self.kind == "bipartite-minus-matching":
            return u.part != v.part and u.index != v.index
        return not (u.part == 0 and v.part == 0)

    @cached_property
    def _neighbor_cache(self) -> Dict[Vertex, FrozenSet[Vertex]]:
        verts = self.vertices
        return {u: frozenset(w for w in verts if self.adjacent(u, w)) for u in verts}

    def neighbors(self, v: Vertex) -> FrozenSet[Vertex]:
        return self._neighbor_cache[v]

    def degree(self, v: Vertex) -> int:
        sizes = self.part_sizes
        if self.kind == "bipartite-minus-matching":
            return sizes[0] - 1
        if self.kind == "hole":
            return sizes[1] if v.part == 0 else sum(sizes) - 1
        return sum(sizes) - sizes[v.part]

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        out = []
        verts = self.vertices
        for i, u in enumerate(verts):
            for w in verts[i + 1:]:
                if self.adjacent(u, w):
                    out.append((u, w))
        return tuple(out)

    @cached_property
    def edge_count(self) -> int:
        p = self.params
        if self.kind == "bipartite":
            return p[0] * p[1]
        if self.kind == "bipartite-minus-matching":
            return p[0] * p[0] - p[0]
        if self.kind == "hole":
            v, u = p
            return v * (v - 1) // 2 - u * (u - 1) // 2
        total = sum(p)
        return (total * total - sum(s * s for s in p)) // 2

    @cached_property
    def is_odd_graph(self) -> bool:
        return all(self.degree(v) % 2 == 1 for v in self.vertices)

    @cached_property
    def is_even_graph(self) -> bool:
        return all(self.degree(v) % 2 == 0 for v in self.vertices)

    @cached_property
    def removed_matching(self) -> Optional[FrozenSet[Edge]]:
        if self.kind != "bipartite-minus-matching":
            return None
        return frozenset((Vertex(0, i), Vertex(1, i)) for i in range(self.params[0]))

    def header(self) -> str:
        if self.kind == "multipartite":
            return "host multipartite " + ",".join(map(str, self.params))
        return "host " + self.kind + " " + " ".join(map(str, self.params))

    def __str__(self) -> str:
        return self.header()[5:]


def bipartite(a: int, b: int) -> HostGraph:
    return HostGraph("bipartite", (a, b))


def bipartite_minus_matching(a: int) -> HostGraph:
    return HostGraph("bipartite-minus-matching", (a,))


def hole(v: int, u: int) -> HostGraph:
    return HostGraph("hole", (v, u))


def complete(n: int) -> HostGraph:
    """K_n, realised as K_n - K_1 so that it stays inside the four families."""
    return HostGraph("hole", (n, 1))


def multipartite(sizes: Iterable[int]) -> HostGraph:
    return HostGraph("multipartite", tuple(sizes))


def build_host(kind: str, *params: int) -> HostGraph:
    try:
        params = tuple(int(p) for p in params)
    except (TypeError, ValueError) as exc:
        raise InvalidParameters(f"host parameters must be integers: {params}") from exc
    return HostGraph(kind, params)


# ---------------------------------------------------------------------------
# Packings


@dataclass(frozen=True, eq=False)
class Packing:
    """Edge-disjoint cycles (plus an optional perfect matching) inside a host.

    The matching is mandatory on odd hosts.  On a ``bipartite-minus-matching``
    host it may be attached as a record of the removed canonical matching.
    """

    host: HostGraph
    cycles: Tuple[Cycle, ...]
    matching: Optional[FrozenSet[Edge]] = None
    _owner: Dict[Edge, int] = field(default=None, repr=False, compare=False)
    _leave: FrozenSet[Edge] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(tuple(c) for c in self.cycles))
        if self.matching is not None:
            object.__setattr__(self, "matching", frozenset(edge(*e) for e in self.matching))
        if self._owner is None:
            self._validate()

    def _validate(self) -> None:
        host = self.host
        owner: Dict[Edge, int] = {}
        for ci, cyc in enumerate(self.cycles):
            if len(cyc) < 3:
                raise InvalidPacking(f"cycle {ci} has length {len(cyc)} < 3")
            if len(set(cyc)) != len(cyc):
                raise InvalidPacking(f"cycle {ci} repeats a vertex")
            for e in cycle_edges(cyc):
                if not host.adjacent(*e):
                    raise InvalidPacking(f"cycle {ci} uses non-edge {e[0]}-{e[1]}")
                if e in owner:
                    raise InvalidPacking(f"edge {e[0]}-{e[1]} used twice")
                owner[e] = ci
        removed = host.removed_matching
        if self.matching is not None:
            if removed is not None:
                if self.matching != removed:
                    raise InvalidPacking("matching on a minus-matching host must be the removed canonical one")
            else:
                if not host.is_odd_graph:
                    raise InvalidPacking("a matching is only allowed on odd hosts")
                seen = set()
                for e in self.matching:
                    if not host.adjacent(*e):
                        raise InvalidPacking(f"matching uses non-edge {e[0]}-{e[1]}")
                    if e in owner:
                        raise InvalidPacking(f"matching edge {e[0]}-{e[1]} also lies in a cycle")
                    if e[0] in seen or e[1] in seen:
                        raise InvalidPacking("matching edges share a vertex")
                    seen.update(e)
                    owner[e] = MATCHING_OWNER
                if len(seen) != len(host.vertices):
                    raise InvalidPacking("matching is not perfect")
        elif host.is_odd_graph:
            raise InvalidPacking("odd host requires a perfect matching")
        object.__setattr__(self, "_owner", owner)
        object.__setattr__(self, "_leave", frozenset(e for e in host.edges if e not in owner))

    @classmethod
    def derived(cls, host, cycles, matching, owner, leave) -> "Packing":
        """Build without revalidation; callers guarantee consistency."""
        return cls(host, tuple(cycles), matching, owner, leave)

    @classmethod
    def empty(cls, host: HostGraph, matching=None) -> "Packing":
        return cls(host, (), matching)

    # -- derived views -----------------------------------------------------
    @property
    def owner(self) -> Dict[Edge, int]:
        return self._owner

    @property
    def leave(self) -> FrozenSet[Edge]:
        return self._leave

    @cached_property
    def leave_adj(self) -> Dict[Vertex, FrozenSet[Vertex]]:
        return adjacency(self._leave)

    def leave_degree(self, v: Vertex) -> int:
        return len(self.leave_adj.get(v, ()))

    def lengths(self) -> List[int]:
        return sorted(len(c) for c in self.cycles)

    @property
    def is_decomposition(self) -> bool:
        return not self._leave

    def matching_partner(self, v: Vertex) -> Optional[Vertex]:
        if self.matching is None or self.host.removed_matching is not None:
            return None
        own = self._owner
        for w in self.host.neighbors(v):
            if own.get(edge(v, w)) == MATCHING_OWNER:
                return w
        return None

    # -- incremental edits -------------------------------------------------
    def add_cycles(self, new: Iterable[Sequence[Vertex]]) -> "Packing":
        new = [tuple(c) for c in new]
        owner = dict(self._owner)
        removed = set()
        base = len(self.cycles)
        for k, cyc in enumerate(new):
            if len(set(cyc)) != len(cyc) or len(cyc) < 3:
                raise InvalidPacking("added cycle is not simple")
            for e in cycle_edges(cyc):
                if e not in self._leave or e in removed:
                    raise InvalidPacking(f"added cycle uses edge {e[0]}-{e[1]} outside the leave")
                removed.add(e)
                owner[e] = base + k
        return Packing.derived(self.host, self.cycles + tuple(new), self.matching, owner,
                               self._leave - removed)

    def remove_cycles(self, indices: Iterable[int]) -> "Packing":
        drop = set(indices)
        keep = [c for i, c in enumerate(self.cycles) if i not in drop]
        freed = set()
        for i in drop:
            freed.update(cycle_edges(self.cycles[i]))
        return self._rebuilt(keep, self.matching, self._leave | freed)

    def replace_cycles(self, changes: Dict[int, Cycle], matching, leave) -> "Packing":
        """Swap in new versions of some cycles; the new leave is supplied by the caller."""
        cycles = list(self.cycles)
        owner = dict(self._owner)
        for i in changes:
            for e in cycle_edges(cycles[i]):
                if owner.get(e) == i:
                    del owner[e]
        for i, cyc in changes.items():
            cycles[i] = cyc
            for e in cycle_edges(cyc):
                owner[e] = i
        if matching is not self.matching:
            for e in self.matching or ():
                if owner.get(e) == MATCHING_OWNER:
                    del owner[e]
            for e in matching or ():
                owner[e] = MATCHING_OWNER
        return Packing.derived(self.host, cycles, matching, owner, leave)

    def _rebuilt(self, cycles, matching, leave) -> "Packing":
        owner = {}
        for i, cyc in enumerate(cycles):
            for e in cycle_edges(cyc):
                owner[e] = i
        if matching is not None and self.host.removed_matching is None:
            for e in matching:
                owner[e] = MATCHING_OWNER
        return Packing.derived(self.host, cycles, matching, owner, frozenset(leave))

    def relabel(self, mapping: Dict[Vertex, Vertex], host: Optional[HostGraph] = None) -> "Packing":
        """Apply a vertex map (identity where absent) and revalidate in ``host``."""
        host = host or self.host
        f = lambda v: mapping.get(v, v)  # noqa: E731
        cycles = [tuple(f(v) for v in c) for c in self.cycles]
        matching = None
        if self.matching is not None:
            matching = frozenset(edge(f(a), f(b)) for a, b in self.matching)
        return Packing(host, cycles, matching)

    def canonical(self) -> "Packing":
        cycles = sorted(canonical_cycle(c) for c in self.cycles)
        return self._rebuilt(cycles, self.matching, self._leave)


def adjacency(edges: Iterable[Edge]) -> Dict[Vertex, FrozenSet[Vertex]]:
    adj: Dict[Vertex, set] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return {v: frozenset(s) for v, s in adj.items()}


def leave_of(packing: Packing) -> FrozenSet[Edge]:
    return packing.leave


# ---------------------------------------------------------------------------
# Leave classification


@dataclass(frozen=True)
class Component:
    """A non-trivial connected component of an even graph.

    ``kind`` is ``cycle``, ``chain``, ``ring`` or ``general``.  For chains and
    rings ``cycles`` lists the constituent cycles in order, ``lengths`` their
    sizes, and ``links`` the shared vertices (``links[i]`` joins cycle i and
    i+1, cyclically for rings; a 2-ring lists both shared vertices).
    """

    kind: str
    vertices: FrozenSet[Vertex]
    edges: FrozenSet[Edge]
    lengths: Tuple[int, ...] = ()
    links: Tuple[Vertex, ...] = ()
    cycles: Tuple[Cycle, ...] = ()
    degree_profile: Tuple[Tuple[int, int], ...] = ()

    @property
    def size(self) -> int:
        return len(self.edges)

    def label(self) -> str:
        if self.kind == "general":
            return "GeneralEven(" + ",".join(f"{d}^{n}" for d, n in self.degree_profile) + ")"
        name = {"cycle": "SingleCycle", "chain": "Chain", "ring": "Ring"}[self.kind]
        return f"{name}({','.join(map(str, self.lengths))})"


@dataclass(frozen=True)
class LeaveStructure:
    components: Tuple[Component, ...]

    @property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    def labels(self) -> List[str]:
        return [c.label() for c in self.components]

    def only(self) -> Component:
        if len(self.components) != 1:
            raise ValueError(f"expected one non-trivial component, found {len(self.components)}")
        return self.components[0]

    def __len__(self) -> int:
        return len(self.components)


def _trace_cycle(adj, start: Vertex) -> Cycle:
    seq = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        seq.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    return tuple(seq)


def _components(adj) -> List[List[Vertex]]:
    seen = set()
    comps = []
    for v in sorted(adj):
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _segments(adj, deg, high: List[Vertex]) -> List[List[Vertex]]:
    """Maximal trails between high-degree vertices through degree-2 vertices."""
    used = set()
    segs = []
    for d in high:
        for w in sorted(adj[d]):
            if edge(d, w) in used:
                continue
            used.add(edge(d, w))
            seq, prev, cur = [d], d, w
            while deg[cur] == 2:
                seq.append(cur)
                a, b = adj[cur]
                nxt = b if a == prev else a
                used.add(edge(cur, nxt))
                prev, cur = cur, nxt
            seq.append(cur)
            segs.append(seq)
    return segs


def _join(s1: List[Vertex], s2: List[Vertex]) -> Cycle:
    # both segments run between the same two endpoints
    if s2[0] != s1[0]:
        s2 = s2[::-1]
    return tuple(s1[:-1] + s2[::-1][:-1])


def _classify_component(verts: List[Vertex], adj) -> Component:
    vs = frozenset(verts)
    deg = {v: len(adj[v]) for v in verts}
    edges_ = frozenset(edge(v, w) for v in verts for w in adj[v])
    profile = tuple(sorted(Counter(deg.values()).items()))
    general = Component("general", vs, edges_, degree_profile=profile)
    high = [v for v in verts if deg[v] >= 4]
    if not high:
        cyc = canonical_cycle(_trace_cycle(adj, verts[0]))
        return Component("cycle", vs, edges_, (len(cyc),), (), (cyc,), profile)
    if any(deg[v] > 4 for v in high):
        return general
    segs = _segments(adj, deg, high)
    groups: Dict[Tuple[Vertex, Vertex], List[List[Vertex]]] = {}
    for s in segs:
        groups.setdefault(tuple(sorted((s[0], s[-1]))), []).append(s)
    if len(high) == 2 and len(groups) == 1 and len(segs) == 4 and high[0] != high[1]:
        ss = sorted(segs, key=lambda s: (len(s), s))
        c1, c2 = canonical_cycle(_join(ss[0], ss[1])), canonical_cycle(_join(ss[2], ss[3]))
        c1, c2 = sorted((c1, c2))
        return Component("ring", vs, edges_, (len(c1), len(c2)), tuple(high), (c1, c2), profile)
    cycles: List[Cycle] = []
    for (a, b), ss in sorted(groups.items()):
        if a == b:
            cycles.extend(canonical_cycle(s[:-1]) for s in ss)
        elif len(ss) == 2:
            cycles.append(canonical_cycle(_join(ss[0], ss[1])))
        else:
            return general
    holders: Dict[Vertex, List[int]] = {d: [] for d in high}
    for i, c in enumerate(cycles):
        for v in c:
            if v in holders:
                holders[v].append(i)
    links = {}
    for d, hs in holders.items():
        if len(hs) != 2:
            return general
        key = tuple(sorted(hs))
        if key in links:
            return general
        links[key] = d
    s = len(cycles)
    nbrs: Dict[int, List[int]] = {i: [] for i in range(s)}
    for i, j in links:
        nbrs[i].append(j)
        nbrs[j].append(i)
    if any(len(n) > 2 for n in nbrs.values()):
        return general
    if len(links) == s - 1:
        ends = sorted((i for i in range(s) if len(nbrs[i]) <= 1), key=lambda i: cycles[i])
        order = [ends[0]]
    elif len(links) == s and s >= 3:
        order = [min(range(s), key=lambda i: cycles[i])]
    else:
        return general
    while len(order) < s:
        nxt = [j for j in nbrs[order[-1]] if j not in order]
        if not nxt:
            return general
        order.append(min(nxt, key=lambda j: cycles[j]))
    kind = "chain" if len(links) == s - 1 else "ring"
    pairs = list(zip(order, order[1:])) + ([(order[-1], order[0])] if kind == "ring" else [])
    link_vs = tuple(links[tuple(sorted(p))] for p in pairs)
    ordered = tuple(cycles[i] for i in order)
    return Component(kind, vs, edges_, tuple(len(c) for c in ordered), link_vs, ordered, profile)


def classify_leave(leave: Iterable[Edge]) -> LeaveStructure:
    """Label every non-trivial component of an even graph as cycle, chain, ring or general."""
    adj = {v: tuple(sorted(n)) for v, n in adjacency(leave).items()}
    odd = [v for v, n in adj.items() if len(n) % 2]
    if odd:
        raise OddDegree(f"vertices of odd degree: {', '.join(map(str, sorted(odd)[:6]))}")
    return LeaveStructure(tuple(_classify_component(c, adj) for c in _components(adj)))


def chain_from_cycles(cycles: Sequence[Sequence[Vertex]]) -> FrozenSet[Edge]:
    """Edge set of the union of cycles (used to build test leaves)."""
    out = set()
    for c in cycles:
        for e in cycle_edges(c):
            if e in out:
                raise InvalidPacking("cycles are not edge-disjoint")
            out.add(e)
    return frozenset(out)
