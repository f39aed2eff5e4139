"""Command line front end.

Exit status: 0 success, 1 rejected by hypotheses or feasibility, 2 failed
verification or internal failure, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from typing import List, Optional, Sequence

from . import base
from .builders import check_feasibility, decompose_bipartite, decompose_hole, decompose_multipartite
from .core import build_host
from .errors import CycleDecompError, ParseError
from .oracle import brute_force_decompose, verify
from .textio import format_packing, format_raw, parse_host_line, parse_text
from .transforms import LEAST, Chooser

USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def parse_lengths(text: str) -> List[int]:
    """Expand ``4x7,8`` style run-length lists."""
    out: List[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise UsageError(f"empty entry in length list {text!r}")
        try:
            if "x" in item:
                val, rep = item.split("x", 1)
                out += [int(val)] * int(rep)
            else:
                out.append(int(item))
        except ValueError as exc:
            raise UsageError(f"bad length entry {item!r}") from exc
    return out


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def parse_host_spec(text: str):
    """``bipartite:4,4``, ``bipartite-minus-matching:5``, ``hole:13,5`` or ``multipartite:6,6,6``."""
    kind, _, rest = text.partition(":")
    if not rest:
        raise UsageError(f"host spec {text!r} must look like kind:n1,n2,...")
    words = [kind, rest] if kind == "multipartite" else [kind] + rest.split(",")
    try:
        return parse_host_line(words)
    except ParseError as exc:
        raise UsageError(str(exc)) from exc


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cycledecomp", description="Construct and verify even-cycle decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for search fallbacks and for --randomized choices (default 0)")
        sp.add_argument("--randomized", action="store_true",
                        help="resolve free vertex choices with the seeded generator instead of least-first")
        sp.add_argument("--out", help="write the decomposition here instead of standard output")
        sp.add_argument("--provenance", nargs="?", const="-", metavar="FILE",
                        help="log one line per applied lemma (to FILE, or standard error)")
        sp.add_argument("--jobs", type=int, default=1, help="parallel search workers (default 1)")

    dec = sub.add_parser("decompose", help="build a decomposition")
    dsub = dec.add_subparsers(dest="family", required=True)
    bp = dsub.add_parser("bipartite", help="K_{a,b} or K_{a,a}-I into cycles of given lengths")
    bp.add_argument("--a", type=int, required=True)
    bp.add_argument("--b", type=int, required=True)
    bp.add_argument("--minus-matching", action="store_true")
    bp.add_argument("--lengths", required=True, help="comma list, e.g. 4x7,8")
    common(bp)
    hp = dsub.add_parser("hole", help="m-cycle decomposition of K_v - K_u")
    hp.add_argument("--v", type=int, required=True)
    hp.add_argument("--u", type=int, required=True)
    hp.add_argument("--m", type=int, required=True)
    common(hp)
    mp = dsub.add_parser("multipartite", help="m-cycle decomposition of a complete multipartite graph")
    mp.add_argument("--parts", required=True, help="comma list of part sizes")
    mp.add_argument("--m", type=int, required=True)
    common(mp)

    vp = sub.add_parser("verify", help="check a decomposition file")
    vp.add_argument("--in", dest="infile", required=True)
    vp.add_argument("--packing", action="store_true", help="accept a non-empty even leave")

    op = sub.add_parser("oracle", help="exhaustive search on hosts with at most 40 edges")
    op.add_argument("--host", required=True)
    op.add_argument("--lengths", required=True)
    op.add_argument("--out")
    op.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; the search is sequential")

    cp = sub.add_parser("check", help="print the feasibility verdict for a length list")
    cp.add_argument("--host", required=True)
    cp.add_argument("--lengths", required=True)
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _provenance(target: Optional[str]):
    if target is None:
        return None
    handler = logging.StreamHandler(sys.stderr) if target == "-" else logging.FileHandler(target, mode="w")
    handler.setFormatter(logging.Formatter("%(message)s"))
    lg = logging.getLogger("cycledecomp.provenance")
    lg.addHandler(handler)
    lg.setLevel(logging.INFO)
    return handler


def _decompose(args) -> int:
    saved = base.SEARCH_JOBS
    base.SEARCH_JOBS = max(1, args.jobs)
    try:
        return _decompose_with(args)
    finally:
        base.SEARCH_JOBS = saved


def _decompose_with(args) -> int:
    chooser = Chooser(random.Random(args.seed)) if args.randomized else LEAST
    if args.family == "bipartite":
        lengths = parse_lengths(args.lengths)
        pk = decompose_bipartite(args.a, args.b, args.minus_matching, lengths, chooser, args.seed)
        note = f"decompose bipartite a={args.a} b={args.b} lengths={','.join(map(str, sorted(lengths)))}"
    elif args.family == "hole":
        pk = decompose_hole(args.v, args.u, args.m, chooser, args.seed)
        note = f"decompose hole v={args.v} u={args.u} m={args.m}"
    else:
        parts = parse_int_list(args.parts)
        pk = decompose_multipartite(parts, args.m, chooser, args.seed)
        note = f"decompose multipartite parts={args.parts} m={args.m}"
    report = verify(pk)
    if not report.ok:
        sys.stderr.write(report.text())
        return 2
    _emit(format_packing(pk, (note, f"seed={args.seed}")), args.out)
    return 0


def _verify(args) -> int:
    try:
        with open(args.infile, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.infile}: {exc}") from exc
    raw = parse_text(text)
    report = verify(raw, decomposition=not args.packing)
    sys.stdout.write(report.text())
    return 0 if report.ok else 2


def _oracle(args) -> int:
    kind, params = parse_host_spec(args.host)
    lengths = parse_lengths(args.lengths)
    result = brute_force_decompose(kind, params, lengths)
    if result.status == "Found":
        _emit(format_raw(result.decomposition, ("oracle: Found",)), args.out)
        return 0
    sys.stdout.write(f"ProvedNone ({result.nodes} search nodes)\n")
    return 1


def _check(args) -> int:
    kind, params = parse_host_spec(args.host)
    host = build_host(kind, *params)
    verdict = check_feasibility(host, parse_lengths(args.lengths))
    sys.stdout.write(str(verdict) + "\n")
    return 0 if verdict.status == "SatisfiesTheorem" else 1


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    handler = _provenance(getattr(args, "provenance", None))
    try:
        if args.command == "decompose":
            return _decompose(args)
        if args.command == "verify":
            return _verify(args)
        if args.command == "oracle":
            return _oracle(args)
        return _check(args)
    except UsageError as exc:
        sys.stderr.write(f"cycledecomp: {exc}\n")
        return USAGE_ERROR
    except CycleDecompError as exc:
        sys.stderr.write(f"cycledecomp: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    finally:
        if handler is not None:
            logging.getLogger("cycledecomp.provenance").removeHandler(handler)
            handler.close()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
