"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest, where
the summary lines are repeated at the end of the session.
"""

from __future__ import annotations

import random
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, List

sys.path.insert(0, str(Path(__file__).parent))

from cycledecomp.builders import check_feasibility, decompose_bipartite, decompose_hole, decompose_multipartite
from cycledecomp.cli import run
from cycledecomp.core import bipartite, bipartite_minus_matching, classify_leave
from cycledecomp.oracle import MUTATIONS, brute_force_decompose, mutate, verify
from cycledecomp.textio import format_packing, raw_from_packing
from cycledecomp.transforms import Chooser, compute_excess, figure_eight_schedule, flatten_out, size_bound

from grids import decomposition, hole_grid, multipartite_grid, random_packing, theorem1_grid
from test_switch import check_switch

RESULTS: Dict[int, str] = {}
_OUTPUTS: Dict[tuple, object] = {}


@contextmanager
def criterion(n: int, title: str):
    detail: List[str] = []
    try:
        yield detail
    except BaseException as exc:
        RESULTS[n] = f"criterion {n}: FAIL {title}: {type(exc).__name__}: {exc}"
        print(RESULTS[n])
        raise
    RESULTS[n] = f"criterion {n}: PASS {title}" + (f" ({'; '.join(detail)})" if detail else "")
    print(RESULTS[n])


def build(key):
    if key not in _OUTPUTS:
        family, args = key
        if family == "bipartite":
            a, b, mm, M = args
            _OUTPUTS[key] = decompose_bipartite(a, b, mm, list(M))
        elif family == "hole":
            _OUTPUTS[key] = decompose_hole(*args)
        else:
            parts, m = args
            _OUTPUTS[key] = decompose_multipartite(list(parts), m)
    return _OUTPUTS[key]


def grid_keys():
    return ([("bipartite", c) for c in theorem1_grid()] + [("hole", c) for c in hole_grid()]
            + [("multipartite", c) for c in multipartite_grid()])


def test_criterion_1_bipartite_grid():
    with criterion(1, "bipartite length-list grid") as detail:
        cases = theorem1_grid()
        for a, b, mm, M in cases:
            pk = build(("bipartite", (a, b, mm, M)))
            rep = verify(pk)
            assert rep.ok, (a, b, mm, M, rep.violations[:3])
            assert rep.lengths == sorted(M), (a, b, M)
            assert (pk.matching is not None) == mm
            if mm:
                assert pk.host == bipartite_minus_matching(a) and len(pk.matching) == a
        detail.append(f"{len(cases)} lists verified")


def test_criterion_2_switch_properties():
    with criterion(2, "switch engine properties") as detail:
        rng = random.Random(2024)
        done = tried = 0
        while done < 10_000:
            a = rng.choice((6, 8))
            pk = random_packing(rng, a, a, pool=8, keep=rng.choice((0.4, 0.6, 0.8)))
            for _ in range(5):
                tried += 1
                if check_switch(pk, rng):
                    done += 1
        detail.append(f"{done} switches with non-empty N out of {tried} draws")


def printed_schedule(m: int) -> List[int]:
    """The two closed-form sequences, interleaving a rising and a falling run."""
    if m % 4 == 0:
        seq, up, down = [], (m + 4) // 2, m // 2
    else:
        seq, up, down = [(m + 2) // 2], (m + 6) // 2, (m - 2) // 2
    while up <= m - 2:
        seq += [up, down]
        up, down = up + 2, down - 2
    return seq + [m]


def test_criterion_3_figure_eight_schedule():
    with criterion(3, "figure-of-eight schedule") as detail:
        for m in range(8, 33, 2):
            evens = list(range(4, m + 1, 2))
            longest: List[int] = []
            for p in evens:
                seq = figure_eight_schedule(m, p)
                assert seq[0] == p and seq[-1] == m and m not in seq[:-1]
                assert len(seq) - 1 <= m // 2, (m, p, seq)
                if len(seq) > len(longest):
                    longest = seq
            assert sorted(longest) == evens, (m, longest)
            printed = printed_schedule(m)
            assert figure_eight_schedule(m, printed[0]) == printed == longest, (m, printed)
            assert printed[-5:] == [m - 4, 6, m - 2, 4, m][-len(printed[-5:]):]
            # every other start lands on a suffix of the printed sequence
            for p in evens:
                seq = figure_eight_schedule(m, p)
                assert printed[-len(seq):] == seq
        detail.append("m = 8..32, all even starts")


def flatten_instances(rng: random.Random, count: int):
    hosts = [(6, 6), (8, 8), (6, 8), (8, 10)]
    made = 0
    while made < count:
        a, b = rng.choice(hosts)
        full = decomposition(a, b, rng.randrange(12))
        bound = size_bound(full)
        order = list(range(len(full.cycles)))
        rng.shuffle(order)
        drop: List[int] = []
        used = 0
        for i in order:
            if used + len(full.cycles[i]) > bound:
                continue
            drop.append(i)
            used += len(full.cycles[i])
            pk = full.remove_cycles(drop)
            if any(len(n) >= 4 for n in pk.leave_adj.values()) and rng.random() < 0.5:
                made += 1
                yield pk
                break


def test_criterion_4_flatten_out_bound():
    with criterion(4, "flatten-out component bound") as detail:
        rng = random.Random(7)
        n = steps = 0
        for pk in flatten_instances(rng, 1000):
            l = len(pk.leave)
            k0 = len(classify_leave(pk.leave))
            d = compute_excess(pk)
            out = flatten_out(pk, Chooser(random.Random(n)))
            degs = [out.leave_degree(x) for x in out.host.vertices]
            assert degs.count(4) == 1 and all(x in (0, 2, 4) for x in degs), (pk.host, degs)
            assert len(classify_leave(out.leave)) <= min(k0 + d - 1, l // 4 - 1), (pk.host, k0, d, l)
            assert verify(out, decomposition=False).ok
            assert out.lengths() == pk.lengths()
            n += 1
            steps += d - 1
        detail.append(f"{n} instances, {steps} equitable steps")


def test_criterion_5_hole_grid():
    with criterion(5, "hole grid") as detail:
        cases = hole_grid()
        for v, u, m in cases:
            pk = build(("hole", (v, u, m)))
            rep = verify(pk)
            assert rep.ok, (v, u, m, rep.violations[:3])
            assert set(rep.lengths) == {m}
        detail.append(f"{len(cases)} cases verified")


def test_criterion_6_multipartite_grid():
    with criterion(6, "multipartite grid") as detail:
        cases = multipartite_grid()
        for parts, m in cases:
            pk = build(("multipartite", (parts, m)))
            rep = verify(pk)
            assert rep.ok, (parts, m, rep.violations[:3])
            assert set(rep.lengths) == {m}
        detail.append(f"{len(cases)} cases verified")


def even_lists(total: int, lo: int = 4):
    def go(rest, last, acc):
        if rest == 0:
            yield list(acc)
            return
        for x in range(last, rest + 1, 2):
            acc.append(x)
            yield from go(rest - x, x, acc)
            acc.pop()

    yield from go(total, lo, [])


def test_criterion_7_oracle_agreement():
    with criterion(7, "oracle agreement") as detail:
        hosts = [("bipartite", (a, b), bipartite(a, b)) for a in range(2, 11) for b in range(a, 21) if a * b <= 40]
        hosts += [("bipartite-minus-matching", (a,), bipartite_minus_matching(a)) for a in (3, 5)]
        agreed = 0
        for kind, params, host in hosts:
            for M in even_lists(host.edge_count):
                if check_feasibility(host, M).status != "SatisfiesTheorem":
                    continue
                got = brute_force_decompose(kind, params, M)
                assert got.status == "Found", (kind, params, M)
                assert verify(got.decomposition).ok
                agreed += 1
        assert agreed > 0
        for params, M in (((4, 4), [16]), ((4, 4), [6, 10]), ((4, 6), [12, 12])):
            assert brute_force_decompose("bipartite", params, M).status == "ProvedNone"
            assert check_feasibility(bipartite(*params), M).status == "ViolatesNecessary"
        detail.append(f"{agreed} satisfying lists found by brute force, 3 infeasible cases proved none")


def test_criterion_8_mutations_rejected():
    with criterion(8, "mutations rejected") as detail:
        total = 0
        for key in grid_keys():
            raw = raw_from_packing(build(key))
            for kind in MUTATIONS:
                bad = mutate(raw, kind, total)
                assert bad != raw, (key, kind)
                assert not verify(bad).ok, (key, kind)
                total += 1
        detail.append(f"{total} mutants over {total // len(MUTATIONS)} outputs")


def test_criterion_9_determinism(tmp_path):
    with criterion(9, "byte-identical reruns") as detail:
        keys = grid_keys()
        for key in keys:
            first = format_packing(build(key))
            family, args = key
            if family == "bipartite":
                a, b, mm, M = args
                again = decompose_bipartite(a, b, mm, list(M))
            elif family == "hole":
                again = decompose_hole(*args)
            else:
                again = decompose_multipartite(list(args[0]), args[1])
            assert format_packing(again) == first, key
        argvs = [
            ["decompose", "bipartite", "--a", "8", "--b", "8", "--lengths", "4,6,6,8x6"],
            ["decompose", "bipartite", "--a", "9", "--b", "9", "--minus-matching", "--lengths", "4x3,6x6,8x3",
             "--randomized", "--seed", "11"],
            ["decompose", "hole", "--v", "19", "--u", "7", "--m", "6", "--randomized", "--seed", "5"],
            ["decompose", "multipartite", "--parts", "10,12,16", "--m", "8", "--randomized", "--seed", "2"],
        ]
        for i, argv in enumerate(argvs):
            blobs = []
            for rep in range(2):
                f = tmp_path / f"{i}-{rep}.dec"
                assert run(argv + ["--out", str(f)]) == 0, argv
                blobs.append(f.read_bytes())
            assert blobs[0] == blobs[1], argv
        detail.append(f"{len(keys)} grid entries rebuilt, {len(argvs)} CLI runs repeated")


if __name__ == "__main__":
    import tempfile

    for n, fn in enumerate([test_criterion_1_bipartite_grid, test_criterion_2_switch_properties,
                            test_criterion_3_figure_eight_schedule, test_criterion_4_flatten_out_bound,
                            test_criterion_5_hole_grid, test_criterion_6_multipartite_grid,
                            test_criterion_7_oracle_agreement, test_criterion_8_mutations_rejected], 1):
        try:
            fn()
        except Exception:
            pass
    with tempfile.TemporaryDirectory() as d:
        try:
            test_criterion_9_determinism(Path(d))
        except Exception:
            pass
    print()
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(0 if all("PASS" in r for r in RESULTS.values()) else 1)
