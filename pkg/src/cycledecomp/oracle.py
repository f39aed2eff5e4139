"""Independent checking.

No construction code and no host-graph caches are used: adjacency is rebuilt
from the host parameters and vertices are handled as plain ``(part, index)``
pairs.
The verifier accepts a :class:`~cycledecomp.textio.RawDecomposition` or any
object with ``host.kind``, ``host.params``, ``cycles`` and ``matching``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .core import Vertex
from .errors import EmptyInput, InvalidParameters, TooLarge
from .textio import RawDecomposition

V = Tuple[int, int]
E = FrozenSet[V]

BRUTE_FORCE_EDGE_CAP = 40
MUTATIONS = ("drop_edge", "duplicate_cycle", "swap_vertex", "break_matching")


def _pair(x: V, y: V) -> E:
    return frozenset((x, y))


def host_model(kind: str, params: Sequence[int]) -> Tuple[List[V], Set[E], Set[E], List[str]]:
    """(vertices, host edges, canonically removed edges, problems) from host parameters."""
    problems: List[str] = []
    params = list(params)
    if kind == "bipartite":
        sizes = params
        ok = len(params) == 2
    elif kind == "bipartite-minus-matching":
        sizes = params * 2
        ok = len(params) == 1
    elif kind == "hole":
        ok = len(params) == 2 and params[1] <= params[0]
        sizes = [params[1], params[0] - params[1]] if ok else []
    elif kind == "multipartite":
        sizes = params
        ok = len(params) >= 1
    else:
        return [], set(), set(), [f"unknown host kind {kind!r}"]
    if not ok or any(s < 0 for s in sizes) or (kind != "hole" and any(s < 1 for s in sizes)):
        return [], set(), set(), [f"invalid host parameters {kind} {params}"]
    verts = [(p, i) for p, s in enumerate(sizes) for i in range(s)]
    edges: Set[E] = set()
    removed: Set[E] = set()
    for x in verts:
        for y in verts:
            if x >= y:
                continue
            if kind == "hole":
                if x[0] == 0 and y[0] == 0:
                    continue
            elif x[0] == y[0]:
                continue
            if kind == "bipartite-minus-matching" and x[1] == y[1]:
                removed.add(_pair(x, y))
                continue
            edges.add(_pair(x, y))
    return verts, edges, removed, problems


@dataclass
class Report:
    violations: List[str] = field(default_factory=list)
    lengths: List[int] = field(default_factory=list)
    leave_size: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def text(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        lines = [head, "lengths " + " ".join(map(str, self.lengths))]
        if self.leave_size:
            lines.append(f"leave {self.leave_size} edges")
        lines += self.violations
        return "\n".join(lines) + "\n"


def _as_raw(obj) -> Tuple[str, List[int], List[List[V]], Optional[List[Tuple[V, V]]]]:
    if isinstance(obj, RawDecomposition):
        kind, params, cycles, matching = obj.kind, obj.params, obj.cycles, obj.matching
    else:
        kind, params, cycles = obj.host.kind, obj.host.params, obj.cycles
        matching = None if obj.matching is None else sorted(tuple(e) for e in obj.matching)
    cyc = [[(int(v[0]), int(v[1])) for v in c] for c in cycles]
    mat = None if matching is None else [((int(a[0]), int(a[1])), (int(b[0]), int(b[1]))) for a, b in matching]
    return kind, list(params), cyc, mat


def verify(claimed, decomposition: bool = True) -> Report:
    """Check a decomposition (or, with ``decomposition=False``, a packing); lists every violation."""
    kind, params, cycles, matching = _as_raw(claimed)
    rep = Report()
    verts, host_edges, removed, problems = host_model(kind, params)
    rep.violations += problems
    if problems:
        return rep
    vset = set(verts)
    use: Counter = Counter()
    for n, cyc in enumerate(cycles):
        rep.lengths.append(len(cyc))
        if len(cyc) < 3:
            rep.violations.append(f"cycle {n}: length {len(cyc)} is too short to close")
        missing = [v for v in cyc if v not in vset]
        for v in missing:
            rep.violations.append(f"cycle {n}: vertex p{v[0]}.{v[1]} is not in the host")
        if len(set(cyc)) != len(cyc):
            rep.violations.append(f"cycle {n}: repeats a vertex")
        for i in range(len(cyc)):
            x, y = cyc[i], cyc[(i + 1) % len(cyc)]
            e = _pair(x, y)
            if x == y or e not in host_edges:
                rep.violations.append(f"cycle {n}: p{x[0]}.{x[1]}-p{y[0]}.{y[1]} is not a host edge")
            else:
                use[e] += 1
    rep.lengths.sort()
    degree: Counter = Counter()
    for e in host_edges:
        for x in e:
            degree[x] += 1
    odd_host = bool(verts) and all(degree[x] % 2 == 1 for x in verts)
    if matching is not None:
        mset = [_pair(x, y) for x, y in matching]
        if kind == "bipartite-minus-matching" and not odd_host:
            if set(mset) != removed or len(mset) != len(removed):
                rep.violations.append("matching line differs from the removed canonical matching")
        else:
            if not odd_host:
                rep.violations.append("matching given for a host that is not an odd graph")
            covered: Counter = Counter()
            for e in mset:
                if e not in host_edges:
                    a, b = sorted(e)
                    rep.violations.append(f"matching: p{a[0]}.{a[1]}-p{b[0]}.{b[1]} is not a host edge")
                    continue
                use[e] += 1
                for x in e:
                    covered[x] += 1
            if odd_host and any(covered[x] != 1 for x in verts):
                rep.violations.append("matching is not a perfect matching")
    elif odd_host:
        rep.violations.append("host is an odd graph but no perfect matching is given")
    for e, k in sorted(use.items(), key=lambda kv: sorted(kv[0])):
        if k > 1:
            a, b = sorted(e)
            rep.violations.append(f"edge p{a[0]}.{a[1]}-p{b[0]}.{b[1]} is used {k} times")
    leave = [e for e in host_edges if use[e] == 0]
    rep.leave_size = len(leave)
    ldeg: Counter = Counter()
    for e in leave:
        for x in e:
            ldeg[x] += 1
    odd = sorted(x for x, d in ldeg.items() if d % 2)
    if odd:
        rep.violations.append(f"leave has {len(odd)} vertices of odd degree")
    if decomposition and leave:
        rep.violations.append(f"{len(leave)} host edges are not covered")
    return rep


# ---------------------------------------------------------------------------
# brute force


@dataclass
class OracleResult:
    status: str  # "Found" or "ProvedNone"
    decomposition: Optional[RawDecomposition] = None
    nodes: int = 0


def brute_force_decompose(kind: str, params: Sequence[int], lengths: Sequence[int]) -> OracleResult:
    """Exhaustive search: repeatedly cover the least uncovered edge by a cycle (or matching edge)."""
    verts, host_edges, _, problems = host_model(kind, params)
    if problems:
        raise InvalidParameters("; ".join(problems))
    if len(host_edges) > BRUTE_FORCE_EDGE_CAP:
        raise TooLarge(f"host has {len(host_edges)} edges; the oracle cap is {BRUTE_FORCE_EDGE_CAP}")
    degree: Counter = Counter(x for e in host_edges for x in e)
    need_matching = bool(verts) and all(degree[x] % 2 for x in verts)
    want = Counter(lengths)
    total = sum(lengths) + (len(verts) // 2 if need_matching else 0)
    if total != len(host_edges):
        return OracleResult("ProvedNone")
    adj: Dict[V, Set[V]] = {x: set() for x in verts}
    for e in host_edges:
        x, y = tuple(e)
        adj[x].add(y)
        adj[y].add(x)
    order = sorted(host_edges, key=lambda e: sorted(e))
    free = set(host_edges)
    chosen: List[List[V]] = []
    matched: Dict[V, V] = {}
    nodes = 0

    def paths(start: V, goal: V, steps: int, on: Set[V]):
        cur = [start]

        def go(v: V, left: int):
            if left == 1:
                if _pair(v, goal) in free:
                    yield list(cur)
                return
            for w in sorted(adj[v]):
                if w in on or w == goal or _pair(v, w) not in free:
                    continue
                on.add(w)
                cur.append(w)
                yield from go(w, left - 1)
                cur.pop()
                on.discard(w)

        yield from go(start, steps)

    def solve() -> bool:
        nonlocal nodes
        nodes += 1
        e = next((f for f in order if f in free), None)
        if e is None:
            return not need_matching or len(matched) == len(verts)
        x, y = sorted(e)
        if need_matching and x not in matched and y not in matched:
            free.discard(e)
            matched[x], matched[y] = y, x
            if solve():
                return True
            del matched[x], matched[y]
            free.add(e)
        for L in sorted(k for k, c in want.items() if c > 0):
            for tail in paths(y, x, L - 1, {x, y}):
                cyc = [x] + tail
                es = [_pair(cyc[i], cyc[(i + 1) % L]) for i in range(L)]
                for f in es:
                    free.discard(f)
                want[L] -= 1
                chosen.append(cyc)
                if solve():
                    return True
                chosen.pop()
                want[L] += 1
                for f in es:
                    free.add(f)
        return False

    if solve():
        pairs = sorted({tuple(sorted((a, b))) for a, b in matched.items()})
        raw = RawDecomposition(kind, tuple(params), [[Vertex(*v) for v in c] for c in chosen],
                               [(Vertex(*a), Vertex(*b)) for a, b in pairs] if need_matching else None)
        return OracleResult("Found", raw, nodes)
    return OracleResult("ProvedNone", None, nodes)


# ---------------------------------------------------------------------------
# mutation


def mutate(raw: RawDecomposition, kind: str, seed: int = 0) -> RawDecomposition:
    """A corrupted copy of ``raw``; the result always differs from the input."""
    if not raw.cycles:
        raise EmptyInput("nothing to mutate")
    rng = random.Random(seed)
    out = raw.copy()
    i = rng.randrange(len(out.cycles))
    cyc = out.cycles[i]
    if kind == "drop_edge":
        del cyc[rng.randrange(len(cyc))]
    elif kind == "duplicate_cycle":
        out.cycles.append(list(cyc))
    elif kind == "swap_vertex":
        verts, _, _, _ = host_model(raw.kind, raw.params)
        j = rng.randrange(len(cyc))
        x = cyc[j]
        others = [v for v in verts if v[0] != x.part] or [v for v in verts if v != (x.part, x.index)]
        y = others[rng.randrange(len(others))]
        cyc[j] = Vertex(*y)
    elif kind == "break_matching":
        if out.matching:
            k = rng.randrange(len(out.matching))
            if len(out.matching) >= 2:
                # exchange partners of two matching edges
                k2 = (k + 1) % len(out.matching)
                (a, b), (c, d) = out.matching[k], out.matching[k2]
                out.matching[k], out.matching[k2] = (a, d), (c, b)
            else:
                del out.matching[k]
        else:
            out.matching = [(cyc[0], cyc[1])]
    else:
        raise ValueError(f"unknown mutation kind {kind!r}")
    return out
