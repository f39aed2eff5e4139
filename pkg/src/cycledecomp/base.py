"""Building blocks: {4,6}-cycle decompositions of bipartite hosts and uniform
cycle packings of complete graphs.

Bipartite hosts are tiled by blocks.  A K_{2,y} strip is y/2 four-cycles; the
few block/count combinations that tiling cannot reach come from shipped tables
(``tables/*.dec``) produced by :func:`search_cycles`.  K_{a,a} - I for odd a
is split into two smaller diagonal pieces sharing one index plus two even
off-diagonal blocks.  Complete graphs are packed by the same search.
"""

from __future__ import annotations

import logging
import random
from functools import lru_cache
from importlib import resources
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .core import (HostGraph, Packing, Vertex, bipartite, bipartite_minus_matching, complete,
                   cycle_edges, edge)
from .errors import ConstructionFailed, InfeasibleCounts, InfeasibleParameters
from .textio import format_packing, parse_packing

log = logging.getLogger("cycledecomp.provenance")

TABLE_PACKAGE = "cycledecomp.tables"


# ---------------------------------------------------------------------------
# randomized search


def _cycle_through(adj: Dict, x, m: int, rng: random.Random, budget: int):
    path, on = [x], {x}
    stack = [iter(rng.sample(sorted(adj[x]), len(adj[x])))]
    nodes = 0
    while stack:
        nodes += 1
        if nodes > budget:
            return None
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on.discard(path.pop())
            continue
        if nxt in on:
            continue
        if len(path) == m - 1:
            if x in adj[nxt]:
                return path + [nxt]
            continue
        path.append(nxt)
        on.add(nxt)
        nb = sorted(w for w in adj[nxt] if w not in on)
        rng.shuffle(nb)
        stack.append(iter(nb))
    return None


def search_cycles(edges: Sequence[Tuple[Hashable, Hashable]], lengths: Dict[int, int],
                  rng: random.Random, max_iters: int = 200000, budget: int = 2000) -> Optional[List[list]]:
    """Partition ``edges`` into cycles with the given length counts.

    Repeatedly grows a cycle through a random vertex of the remaining graph;
    when none is found, a random packed cycle through that vertex is returned
    to the pool.  Returns None when ``max_iters`` is exhausted.
    """
    if sum(k * n for k, n in lengths.items()) != len(edges):
        raise InfeasibleCounts("cycle lengths do not add up to the edge count")
    adj: Dict = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    need = dict(lengths)
    cycles: Dict[int, list] = {}
    next_id = 0
    for _ in range(max_iters):
        live = sorted(v for v in adj if adj[v])
        if not live:
            return [cycles[k] for k in sorted(cycles)]
        x = live[rng.randrange(len(live))]
        found = None
        for m in sorted((m for m, n in need.items() if n > 0), key=lambda m: (rng.random(), m)):
            found = _cycle_through(adj, x, m, rng, budget)
            if found is not None:
                break
        if found is not None:
            cycles[next_id] = found
            next_id += 1
            need[len(found)] -= 1
            for a, b in zip(found, found[1:] + found[:1]):
                adj[a].discard(b)
                adj[b].discard(a)
            continue
        holders = sorted(k for k, c in cycles.items() if x in c) or sorted(cycles)
        if not holders:
            return None
        k = holders[rng.randrange(len(holders))]
        c = cycles.pop(k)
        need[len(c)] += 1
        for a, b in zip(c, c[1:] + c[:1]):
            adj[a].add(b)
            adj[b].add(a)
    return None


SEARCH_JOBS = 1


def _attempt(edges, lengths, seed: int, attempt: int):
    return search_cycles(edges, lengths, random.Random(seed * 1000003 + attempt))


def search_host(host: HostGraph, lengths: Dict[int, int], seed: int = 0, attempts: int = 20,
                matching=None, skip=()) -> Packing:
    """Seeded restarts of :func:`search_cycles`; the lowest successful attempt wins.

    With ``SEARCH_JOBS`` above 1 the restarts run in worker processes, batch by
    batch, and the result is the same as in a sequential run.
    """
    skip = set(skip) | set(matching or ())
    if host.removed_matching is not None:
        skip |= host.removed_matching
    edges = [e for e in host.edges if e not in skip]
    jobs = max(1, SEARCH_JOBS)
    for start in range(0, attempts, jobs):
        batch = range(start, min(start + jobs, attempts))
        if jobs == 1:
            results = [_attempt(edges, lengths, seed, batch[0])]
        else:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(jobs) as ex:
                results = list(ex.map(_attempt, *zip(*[(edges, lengths, seed, a) for a in batch])))
        for got in results:
            if got is not None:
                return Packing(host, [tuple(c) for c in got], matching)
    raise ConstructionFailed(f"search failed for {host} with lengths {lengths}")


# ---------------------------------------------------------------------------
# tables


def table_name(host: HostGraph, t4: int, t6: int) -> str:
    return f"{host.kind}-{'-'.join(map(str, host.params))}_{t4}x4_{t6}x6.dec"


def complete_table_name(n: int, m: int, e: int) -> str:
    return f"K{n}_m{m}_e{e}.dec"


@lru_cache(maxsize=None)
def _table_files() -> Tuple[str, ...]:
    try:
        return tuple(sorted(p.name for p in resources.files(TABLE_PACKAGE).iterdir() if p.name.endswith(".dec")))
    except (FileNotFoundError, ModuleNotFoundError):
        return ()


@lru_cache(maxsize=None)
def load_table(name: str) -> Optional[Packing]:
    if name not in _table_files():
        return None
    text = resources.files(TABLE_PACKAGE).joinpath(name).read_text()
    return parse_packing(text)


def _table_four_six(host: HostGraph, t4: int, t6: int) -> Optional[Packing]:
    pk = load_table(table_name(host, t4, t6))
    if pk is None:
        return None
    if pk.host != host or pk.leave or pk.lengths() != [4] * t4 + [6] * t6:
        raise ConstructionFailed(f"table {table_name(host, t4, t6)} does not match its name")
    return pk


@lru_cache(maxsize=None)
def _table_counts(kind: str, params: Tuple[int, ...]) -> Tuple[int, ...]:
    prefix = f"{kind}-{'-'.join(map(str, params))}_"
    out = []
    for name in _table_files():
        if name.startswith(prefix):
            t6 = int(name[len(prefix):].split("_")[1].split("x")[0])
            out.append(t6)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# block planner (sets of achievable 6-cycle counts stored as bitmasks)


def _shift_or(m1: int, m2: int) -> int:
    out, t = 0, 0
    while m1:
        if m1 & 1:
            out |= m2 << t
        m1 >>= 1
        t += 1
    return out


STRIPS = (2, 4, 6, 8)


@lru_cache(maxsize=None)
def even_options(a: int, b: int) -> int:
    """Bitmask of 6-cycle counts the planner can realise on K_{a,b} (a, b even)."""
    if a > b:
        return even_options(b, a)
    mask = 1
    if a == 2:
        return mask
    for t6 in _table_counts("bipartite", (a, b)):
        mask |= 1 << t6
    for s in STRIPS:
        if s < a:
            mask |= _shift_or(even_options(s, b), even_options(a - s, b))
        if s < b:
            mask |= _shift_or(even_options(a, s), even_options(a, b - s))
    return mask


@lru_cache(maxsize=None)
def odd_options(a: int) -> int:
    """Bitmask of 6-cycle counts realisable on K_{a,a} - I, a odd."""
    mask = 0
    for t6 in _table_counts("bipartite-minus-matching", (a,)):
        mask |= 1 << t6
    for n in range(3, a - 1, 2):
        j = a - n
        part = _shift_or(odd_options(n), odd_options(j + 1))
        part = _shift_or(part, even_options(n - 1, j))
        mask |= _shift_or(part, even_options(j, n - 1))
    return mask


def _bits(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _offset(cycles, dr: int, dc: int, rows=None, cols=None):
    """Shift block-local vertices; ``rows``/``cols`` override the index maps."""
    out = []
    for c in cycles:
        cc = []
        for v in c:
            if v.part == 0:
                cc.append(Vertex(0, rows[v.index] if rows else v.index + dr))
            else:
                cc.append(Vertex(1, cols[v.index] if cols else v.index + dc))
        out.append(tuple(cc))
    return out


def _even_cycles(a: int, b: int, t6: int, seed: int) -> List[tuple]:
    if not even_options(a, b) >> t6 & 1:
        raise InfeasibleCounts(f"planner cannot place {t6} six-cycles in K_{{{a},{b}}}")
    if t6 == 0:
        return [(Vertex(0, i), Vertex(1, j), Vertex(0, i + 1), Vertex(1, j + 1))
                for i in range(0, a, 2) for j in range(0, b, 2)]
    for key in ((a, b), (b, a)):
        if t6 in _table_counts("bipartite", key):
            t4 = (a * b - 6 * t6) // 4
            pk = _table_four_six(bipartite(*key), t4, t6)
            if key == (a, b):
                return list(pk.cycles)
            return [tuple(Vertex(1 - v.part, v.index) for v in c) for c in pk.cycles]
    for s in STRIPS:
        if s < a:
            m1, m2 = even_options(s, b), even_options(a - s, b)
            for t1 in _bits(m1):
                if t1 <= t6 and m2 >> (t6 - t1) & 1:
                    return (_even_cycles(s, b, t1, seed)
                            + _offset(_even_cycles(a - s, b, t6 - t1, seed), s, 0))
        if s < b:
            m1, m2 = even_options(a, s), even_options(a, b - s)
            for t1 in _bits(m1):
                if t1 <= t6 and m2 >> (t6 - t1) & 1:
                    return (_even_cycles(a, s, t1, seed)
                            + _offset(_even_cycles(a, b - s, t6 - t1, seed), 0, s))
    raise ConstructionFailed(f"planner inconsistency for K_{{{a},{b}}} with t6={t6}")


def _odd_cycles(a: int, t6: int, seed: int) -> List[tuple]:
    """Cycles of K_{a,a} - I with canonical removed matching {p0.i p1.i}."""
    if not odd_options(a) >> t6 & 1:
        raise InfeasibleCounts(f"planner cannot place {t6} six-cycles in K_{{{a},{a}}}-I")
    if t6 in _table_counts("bipartite-minus-matching", (a,)):
        t4 = (a * a - a - 6 * t6) // 4
        return list(_table_four_six(bipartite_minus_matching(a), t4, t6).cycles)
    for n in range(3, a - 1, 2):
        j = a - n
        o1, o2 = odd_options(n), odd_options(j + 1)
        e1, e2 = even_options(n - 1, j), even_options(j, n - 1)
        for t1 in _bits(o1):
            for t2 in _bits(o2):
                for t3 in _bits(e1):
                    rest = t6 - t1 - t2 - t3
                    if rest < 0 or not e2 >> rest & 1:
                        continue
                    shared = [n - 1] + list(range(n, a))
                    out = _odd_cycles(n, t1, seed)
                    out += _offset(_odd_cycles(j + 1, t2, seed), 0, 0, rows=shared, cols=shared)
                    out += _offset(_even_cycles(n - 1, j, t3, seed), 0, n)
                    out += _offset(_even_cycles(j, n - 1, rest, seed), n, 0)
                    return out
    raise ConstructionFailed(f"planner inconsistency for K_{{{a},{a}}}-I with t6={t6}")


def canonical_matching(a: int) -> frozenset:
    return frozenset((Vertex(0, i), Vertex(1, i)) for i in range(a))


def decompose_four_six(a: int, b: int, counts: Tuple[int, int], seed: int = 0) -> Packing:
    """A decomposition of K_{a,b} (or K_{a,a} plus a perfect matching for odd a) into 4- and 6-cycles.

    For odd a the result lives on the host K_{a,a} and carries the canonical
    matching, which is the form the switching pipeline works with.
    """
    t4, t6 = counts
    if a < 4 or b < 4:
        raise InfeasibleCounts(f"part sizes must be at least 4, got {a}, {b}")
    if t4 < 0 or t6 < 0:
        raise InfeasibleCounts("counts must be non-negative")
    odd = a % 2 == 1 or b % 2 == 1
    if odd and a != b:
        raise InfeasibleCounts("odd part sizes are only supported for a = b")
    total = a * a - a if odd else a * b
    if 4 * t4 + 6 * t6 != total:
        raise InfeasibleCounts(f"4*{t4} + 6*{t6} != {total}")
    host = bipartite(a, b)
    if odd:
        mask = odd_options(a)
        matching = canonical_matching(a)
    else:
        mask = even_options(a, b)
        matching = None
    if mask >> t6 & 1:
        cycles = _odd_cycles(a, t6, seed) if odd else _even_cycles(a, b, t6, seed)
        pk = Packing(host, cycles, matching)
    else:
        log.info("decompose_four_six K_{%d,%d} t6=%d by search", a, b, t6)
        pk = search_host(host, {4: t4, 6: t6}, seed, matching=matching)
    if pk.leave or pk.lengths() != [4] * t4 + [6] * t6:
        raise ConstructionFailed("four-six decomposition failed its postcondition")
    return pk


# ---------------------------------------------------------------------------
# complete graphs


def leave_residue(n: int, m: int) -> Optional[int]:
    """The element e of {0, 4, 6, ..., m-2, m+2} congruent to C(n,2) mod m, if any."""
    r = (n * (n - 1) // 2) % m
    allowed = [0] + list(range(4, m - 1, 2)) + [m + 2]
    for e in allowed:
        if e % m == r:
            return e
    return None


def pack_complete_graph_uniform(n: int, m: int, e: int, seed: int = 0) -> Packing:
    """m-cycle packing of K_n (host ``hole n 1``) whose leave is one e-cycle, or empty."""
    if n % 2 == 0 or n < 7:
        raise InfeasibleParameters(f"n must be odd and at least 7, got {n}")
    if m % 2 or m < 4 or m > n:
        raise InfeasibleParameters(f"m must be even with 4 <= m <= n, got {m}")
    allowed = [0] + list(range(4, m - 1, 2)) + [m + 2]
    if e not in allowed:
        raise InfeasibleParameters(f"e={e} is not in {{0,4,...,m-2,m+2}}")
    total = n * (n - 1) // 2
    if (total - e) % m:
        raise InfeasibleParameters(f"C({n},2) = {total} is not congruent to {e} mod {m}")
    if e > n - 1:
        raise InfeasibleParameters(f"an {e}-cycle does not fit in K_{n} away from the hole vertex")
    host = complete(n)
    ring = [Vertex(1, i) for i in range(e)]
    skip = set(cycle_edges(ring)) if e else set()
    pk = load_table(complete_table_name(n, m, e))
    if pk is None:
        pk = search_host(host, {m: (total - e) // m}, seed, skip=skip)
    if pk.host != host or pk.lengths() != [m] * ((total - e) // m) or pk.leave != frozenset(skip):
        raise ConstructionFailed(f"complete-graph packing K{n} m={m} e={e} failed its postcondition")
    return pk


def write_table(pk: Packing, name: str, directory) -> None:
    from pathlib import Path
    Path(directory, name).write_text(format_packing(pk))
