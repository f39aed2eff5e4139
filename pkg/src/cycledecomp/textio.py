"""Line-based decomposition text format.

::

    # comments run to end of line
    host bipartite 8 8
    cycle p0.0 p1.0 p0.1 p1.1
    matching p0.0-p1.0 p0.1-p1.1

The parser returns raw data (:class:`RawDecomposition`) so that the verifier
can judge malformed content instead of tripping over a validating
constructor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .core import Packing, Vertex, build_host, canonical_cycle
from .errors import ParseError

_VERTEX = re.compile(r"^p(\d+)\.(\d+)$")


@dataclass
class RawDecomposition:
    kind: str
    params: Tuple[int, ...]
    cycles: List[List[Vertex]]
    matching: Optional[List[Tuple[Vertex, Vertex]]] = None

    def copy(self) -> "RawDecomposition":
        return RawDecomposition(self.kind, tuple(self.params), [list(c) for c in self.cycles],
                                None if self.matching is None else list(self.matching))


def parse_vertex(token: str) -> Vertex:
    m = _VERTEX.match(token)
    if not m:
        raise ParseError(f"bad vertex token {token!r}")
    return Vertex(int(m.group(1)), int(m.group(2)))


def parse_host_line(words: List[str]) -> Tuple[str, Tuple[int, ...]]:
    if not words:
        raise ParseError("empty host line")
    kind, rest = words[0], words[1:]
    try:
        if kind == "multipartite":
            if len(rest) != 1:
                raise ParseError("multipartite host expects one comma-separated size list")
            params = tuple(int(x) for x in rest[0].split(","))
        elif kind in ("bipartite", "hole"):
            if len(rest) != 2:
                raise ParseError(f"{kind} host expects two sizes")
            params = (int(rest[0]), int(rest[1]))
        elif kind == "bipartite-minus-matching":
            if len(rest) != 1:
                raise ParseError("bipartite-minus-matching host expects one size")
            params = (int(rest[0]),)
        else:
            raise ParseError(f"unknown host kind {kind!r}")
    except ValueError as exc:
        raise ParseError(f"non-integer host parameter in {' '.join(words)!r}") from exc
    return kind, params


def parse_text(text: str) -> RawDecomposition:
    host = None
    cycles: List[List[Vertex]] = []
    matching = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, rest = words[0], words[1:]
        if host is None:
            if head != "host":
                raise ParseError(f"line {lineno}: expected a host line first")
            host = parse_host_line(rest)
        elif head == "cycle":
            cycles.append([parse_vertex(t) for t in rest])
        elif head == "matching":
            if matching is not None:
                raise ParseError(f"line {lineno}: second matching line")
            matching = []
            for t in rest:
                parts = t.split("-")
                if len(parts) != 2:
                    raise ParseError(f"line {lineno}: bad matching edge {t!r}")
                matching.append((parse_vertex(parts[0]), parse_vertex(parts[1])))
        else:
            raise ParseError(f"line {lineno}: unknown record {head!r}")
    if host is None:
        raise ParseError("no host line")
    return RawDecomposition(host[0], host[1], cycles, matching)


def raw_from_packing(packing: Packing) -> RawDecomposition:
    return RawDecomposition(packing.host.kind, packing.host.params,
                            [list(c) for c in packing.cycles],
                            None if packing.matching is None else sorted(packing.matching))


def format_raw(raw: RawDecomposition, comments: Tuple[str, ...] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    if raw.kind == "multipartite":
        lines.append("host multipartite " + ",".join(map(str, raw.params)))
    else:
        lines.append("host " + raw.kind + " " + " ".join(map(str, raw.params)))
    for cyc in sorted(canonical_cycle(c) for c in raw.cycles):
        lines.append("cycle " + " ".join(map(str, cyc)))
    if raw.matching is not None:
        pairs = sorted(tuple(sorted(e)) for e in raw.matching)
        lines.append("matching " + " ".join(f"{a}-{b}" for a, b in pairs))
    return "\n".join(lines) + "\n"


def format_packing(packing: Packing, comments: Tuple[str, ...] = ()) -> str:
    return format_raw(raw_from_packing(packing), comments)


def packing_from_raw(raw: RawDecomposition) -> Packing:
    host = build_host(raw.kind, *raw.params)
    return Packing(host, [tuple(c) for c in raw.cycles],
                   None if raw.matching is None else frozenset(raw.matching))


def parse_packing(text: str) -> Packing:
    return packing_from_raw(parse_text(text))
