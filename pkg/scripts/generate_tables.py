"""Regenerate the shipped primitive tables under src/cycledecomp/tables/."""

from pathlib import Path

from cycledecomp.base import (complete_table_name, leave_residue, search_host, table_name,
                              write_table)
from cycledecomp.core import bipartite, bipartite_minus_matching, complete, cycle_edges, Vertex

OUT = Path(__file__).resolve().parent.parent / "src" / "cycledecomp" / "tables"

FOUR_SIX = [
    (bipartite(4, 4), 2), (bipartite(4, 6), 4), (bipartite(6, 6), 6), (bipartite(8, 8), 10),
    (bipartite_minus_matching(3), 1), (bipartite_minus_matching(5), 0),
    (bipartite_minus_matching(7), 5), (bipartite_minus_matching(7), 7),
    (bipartite_minus_matching(9), 10), (bipartite_minus_matching(9), 12),
]

COMPLETE = {(21, 6, 0), (25, 4, 0)}


def main() -> None:
    for host, t6 in FOUR_SIX:
        t4 = (host.edge_count - 6 * t6) // 4
        pk = search_host(host, {4: t4, 6: t6})
        write_table(pk, table_name(host, t4, t6), OUT)
    for n in range(9, 18, 2):
        for m in range(4, n + 1, 2):
            e = leave_residue(n, m)
            if e is not None and e <= n - 1:
                COMPLETE.add((n, m, e))
    for n, m, e in sorted(COMPLETE):
        skip = set(cycle_edges([Vertex(1, i) for i in range(e)])) if e else set()
        pk = search_host(complete(n), {m: (n * (n - 1) // 2 - e) // m}, skip=skip)
        write_table(pk, complete_table_name(n, m, e), OUT)


if __name__ == "__main__":
    main()
