"""Graph representation and trail primitives.

A graph is an undirected multigraph stored as an indexed edge list; parallel
edges and self-loops are allowed, and an edge's identity is its index in that
list.  Edge subsets are plain Python ints used as bitmasks (bit i = edge i),
which keeps subset arithmetic cheap for the subset-DP solvers.

A trail is a sequence of edge indices realizable as a walk: consecutive edges
must attach at the walk's current head vertex and no edge repeats (vertices
may).  Orientation matters; a sequence whose consecutive edges merely share
*some* vertex is not necessarily walkable (e.g. the three edges of a star).

Arcs: each non-loop edge has two directed versions, encoded as
``arc = edge_id * 2 + d`` where ``d`` selects which endpoint is the head
(the vertex the walk sits on after traversing the edge).  A self-loop has a
single arc (d = 0).  Solvers use arcs internally to track walk orientation.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Iterable, Iterator

MAX_EDGES = 30


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""


class SizeLimitError(ValueError):
    """Raised when an instance exceeds a solver's size bound."""


def check_edge_budget(m: int, limit: int, what: str) -> None:
    if m > limit:
        raise SizeLimitError(f"{what} supports at most {limit} edges, got {m}")
    if m > MAX_EDGES:
        raise SizeLimitError(f"instances are capped at {MAX_EDGES} edges, got {m}")


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph over vertices 0..n-1 with an indexed edge list."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    # Derived, filled in __post_init__:
    vertex_edge_masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    arcs_into: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    arc_count: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be non-negative")
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        masks = [0] * n
        arcs_into: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {i} endpoint out of range: ({u}, {v})")
            masks[u] |= 1 << i
            masks[v] |= 1 << i
            # arc 2i has head u, arc 2i+1 has head v; loops keep one arc
            arcs_into[u].append(2 * i)
            if u != v:
                arcs_into[v].append(2 * i + 1)
        object.__setattr__(self, "vertex_edge_masks", tuple(masks))
        object.__setattr__(self, "arcs_into", tuple(tuple(a) for a in arcs_into))
        object.__setattr__(
            self,
            "arc_count",
            tuple(1 if u == v else 2 for (u, v) in self.edges),
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def full_edge_set(self) -> int:
        return (1 << len(self.edges)) - 1

    def arc_head(self, arc: int) -> int:
        u, v = self.edges[arc >> 1]
        return u if arc & 1 == 0 else v

    def arc_tail(self, arc: int) -> int:
        """Vertex the walk occupies before traversing the arc."""
        u, v = self.edges[arc >> 1]
        return v if arc & 1 == 0 else u

    def arcs_of(self, e: int) -> tuple[int, ...]:
        u, v = self.edges[e]
        return (2 * e,) if u == v else (2 * e, 2 * e + 1)

    def reverse_arc(self, arc: int) -> int:
        e = arc >> 1
        u, v = self.edges[e]
        return arc if u == v else arc ^ 1


# ---------------------------------------------------------------------------
# Edge-set helpers (bitmask ints)

def edge_set(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def incident_edges(g: Graph, e: int) -> int:
    """Edge-set bitmask of edges sharing at least one endpoint with edge e.

    Edge e itself is excluded.  A self-loop at w is incident to every other
    edge touching w.
    """
    if not 0 <= e < g.edge_count:
        raise IndexError(f"edge index {e} out of range")
    u, v = g.edges[e]
    return (g.vertex_edge_masks[u] | g.vertex_edge_masks[v]) & ~(1 << e)


# ---------------------------------------------------------------------------
# Trail validation

@dataclass(frozen=True)
class TrailVerdict:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _walk_from(g: Graph, trail: list[int], head: int) -> int | None:
    """Try to realize trail[1:] starting at head; return final head or None."""
    for e in trail[1:]:
        u, v = g.edges[e]
        if u == head:
            head = v
        elif v == head:
            head = u
        else:
            return None
    return head


def validate_trail(g: Graph, trail: Iterable[int]) -> TrailVerdict:
    """Check that a sequence of edge indices forms an edge-simple walk.

    The first edge may be traversed in either direction; after that each edge
    must attach at the current head vertex, so the orientation is forced
    (greedy checking with the two first-edge choices is complete).
    """
    seq = []
    seen: set[int] = set()
    for pos, item in enumerate(trail):
        try:
            e = operator.index(item)
        except TypeError:
            e = -1
        if not 0 <= e < g.edge_count:
            return TrailVerdict(False, f"bad edge index {item!r} at position {pos}")
        if e in seen:
            return TrailVerdict(False, f"duplicate edge {e} at position {pos}")
        seen.add(e)
        seq.append(e)
    if len(seq) <= 1:
        return TrailVerdict(True)
    u0, v0 = g.edges[seq[0]]
    for head in (v0, u0) if u0 != v0 else (u0,):
        if _walk_from(g, seq, head) is not None:
            return TrailVerdict(True)
    # Locate the first break for the better orientation to report it.
    best_pos, pair = 0, (seq[0], seq[1])
    for head in (v0, u0):
        cur = head
        for pos in range(1, len(seq)):
            e = seq[pos]
            u, v = g.edges[e]
            if u == cur:
                cur = v
            elif v == cur:
                cur = u
            else:
                if pos > best_pos:
                    best_pos, pair = pos, (seq[pos - 1], e)
                break
    return TrailVerdict(
        False,
        f"edges {pair[0]} and {pair[1]} do not attach at the walk head "
        f"(position {best_pos})",
    )


# ---------------------------------------------------------------------------
# Parsing, serialization, random instances

def parse_graph(text: str | bytes) -> Graph:
    """Parse the edge-list format: header "n m", then m lines "u v".

    Accepts LF or CRLF and tolerates trailing blank lines.  Errors carry the
    offending 1-based line number.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.split("\n")
    # Strip CR and trailing blank lines.
    lines = [ln.rstrip("\r") for ln in lines]
    while lines and lines[-1].strip() == "":
        lines.pop()
    if not lines:
        raise GraphFormatError("empty input, expected 'n m' header at line 1")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"malformed header at line 1: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(f"non-integer token in header at line 1: {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise GraphFormatError("header counts must be non-negative at line 1")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for k in range(m):
        lineno = k + 2
        parts = lines[k + 1].split()
        if len(parts) != 2:
            raise GraphFormatError(f"malformed edge line at line {lineno}: {lines[k + 1]!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer token at line {lineno}: {lines[k + 1]!r}") from None
        for w in (u, v):
            if not 0 <= w < n:
                raise GraphFormatError(f"vertex {w} out of range at line {lineno}")
        edges.append((u, v))
    return Graph(n, tuple(edges))


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def random_graph(n: int, m: int, seed: int) -> Graph:
    """Seeded random multigraph: m edges drawn uniformly over unordered
    vertex pairs (self-loops included, repeats allowed)."""
    if n < 1:
        raise ValueError(f"need at least one vertex, got n={n}")
    if not 0 <= m <= MAX_EDGES:
        raise ValueError(f"edge count must be in [0, {MAX_EDGES}], got m={m}")
    import random as _random

    rng = _random.Random(seed)
    npairs = n * (n + 1) // 2
    edges = []
    for _ in range(m):
        k = rng.randrange(npairs)
        u = 0
        row = n
        while k >= row:
            k -= row
            u += 1
            row -= 1
        edges.append((u, u + k))
    return Graph(n, tuple(edges))
