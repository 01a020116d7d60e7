"""Subset dynamic programming over (edge set, first arc, last arc) states.

The state value L(S, a, b) is the length of the longest edge-simple walk that
uses only edges from the bitmask S, whose first traversed arc is a and whose
last traversed arc is b, or None when no such walk exists.  Tracking arcs
rather than bare edge ids is what makes the recursion sound: extending a walk
by an edge requires that edge to attach at the walk's actual head vertex, not
merely at either endpoint of the walk's last edge.  (With bare edge ids the
three edges of a star would combine into a "walk" of length 3.)

Recurrence, peeling the last arc b with tail vertex p:

    L(S, a, b) = 1 + max over arcs c with head p, edge(c) in S minus edge(b),
                 of L(S \\ {edge(b)}, a, c)

with L(S, a, a) = 1 whenever edge(a) is in S, and None when first and last
edge coincide but the arcs differ.  The winning predecessor arc is memoized
per state so any stored walk can be rebuilt by chaining.

Public entry points expose the edge-level view L(S, v, u) = max over the arc
pairs of the two edges; the arc level stays available for the hybrid solver.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from itertools import combinations

from .bruteforce import OracleResult
from .graphs import Graph, check_edge_budget, validate_trail

FULL_DP_MAX_EDGES = 20
_MISSING = object()


class CapacityError(MemoryError):
    """Raised when a precompute layer would exceed the entry budget."""


class TableLookupError(KeyError):
    """Raised when a required table entry is absent."""


def combine(a: int | None, b: int | None) -> int | None:
    """Length of two walks concatenated at a shared pivot edge.

    The pivot is counted by both halves, hence the minus one; None (no walk)
    absorbs.
    """
    if a is None or b is None:
        return None
    return a + b - 1


@dataclass(frozen=True)
class LayerSpec:
    """Precompute layer: all states with |S| <= k_pre are tabulated."""

    alpha: float = 0.055
    k_pre: int = 1

    @classmethod
    def for_graph(cls, m: int, alpha: float = 0.055) -> "LayerSpec":
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        if m < 1:
            raise ValueError("layer needs at least one edge")
        quarter = ((m + 1) // 2 + 1) // 2  # ceil(ceil(m/2)/2)
        k = math.ceil((1.0 - alpha) * quarter)
        # Sets of size 2 cannot shrink under the pivot split, so the layer
        # must reach at least 2 whenever the graph has that many edges.
        k = max(k, min(m, 2))
        return cls(alpha, min(k, m))


class DpTable:
    """Memo table for L(S, a, b) with predecessor witnesses.

    Entries map a packed (S, a, b) key to (length | None, predecessor arc).
    After `precompute_layer` the table is authoritative for every state with
    |S| <= k_pre: a miss there means the state was never swept and is an
    internal error, so `get_arc` raises instead of guessing.
    """

    def __init__(self, g: Graph, k_pre: int = 0):
        self.g = g
        self.k_pre = k_pre
        self._A = max(2 * g.edge_count, 1)
        self.entries: dict[int, tuple[int | None, int | None]] = {}
        self.matrices: dict[int, tuple[int, int, int, int]] = {}

    def pack(self, S: int, a: int, b: int) -> int:
        return (S * self._A + a) * self._A + b

    def unpack(self, key: int) -> tuple[int, int, int]:
        key, b = divmod(key, self._A)
        S, a = divmod(key, self._A)
        return S, a, b

    def __len__(self) -> int:
        return len(self.entries)

    def get_arc(self, S: int, a: int, b: int) -> int | None:
        ea, eb = a >> 1, b >> 1
        if not (S >> ea & 1 and S >> eb & 1):
            return None
        if ea == eb:
            return 1 if a == b else None
        hit = self.entries.get(self.pack(S, a, b), _MISSING)
        if hit is _MISSING:
            raise TableLookupError(f"state (S={S:#x}, a={a}, b={b}) not in table")
        return hit[0]

    def matrix(self, S: int, v: int, u: int):
        """4-slot tuple of L(S, arc(v, i), arc(u, j)) values, slot = i*2 + j.

        Only defined for v != u.  Cells are plain ints with -1 encoding "no
        walk" (covering orientations a loop does not have), so the solver's
        hot path never touches None.  Built by `finalize_matrices`.
        """
        return self.matrices[(S * self.g.edge_count + v) * self.g.edge_count + u]

    def finalize_matrices(self) -> None:
        m = self.g.edge_count
        grid: dict[int, list[int]] = {}
        for key, (length, _pred) in self.entries.items():
            S, a, b = self.unpack(key)
            v, u = a >> 1, b >> 1
            gkey = (S * m + v) * m + u
            cells = grid.get(gkey)
            if cells is None:
                cells = [-1, -1, -1, -1]
                grid[gkey] = cells
            if length is not None:
                cells[(a & 1) * 2 + (b & 1)] = length
        self.matrices = {k: tuple(c) for k, c in grid.items()}


def get_len_arc(g: Graph, S: int, a: int, b: int, table: DpTable) -> int | None:
    """Memoized L(S, a, b); fills the table with every state it touches."""
    ea, eb = a >> 1, b >> 1
    if not (S >> ea & 1 and S >> eb & 1):
        return None
    if ea == eb:
        return 1 if a == b else None
    entries = table.entries
    key = table.pack(S, a, b)
    hit = entries.get(key, _MISSING)
    if hit is not _MISSING:
        return hit[0]
    p = g.arc_tail(b)
    S2 = S & ~(1 << eb)
    best: int | None = None
    pred: int | None = None
    for c in g.arcs_into[p]:
        if not S2 >> (c >> 1) & 1:
            continue
        sub = get_len_arc(g, S2, a, c, table)
        if sub is not None and (best is None or sub + 1 > best):
            best = sub + 1
            pred = c
    entries[key] = (best, pred)
    return best


def get_len(g: Graph, S: int, v: int, u: int, table: DpTable) -> int | None:
    """L(S, v, u): longest walk within S starting with edge v, ending with
    edge u, orientation-free at both ends."""
    if not (0 <= v < g.edge_count and 0 <= u < g.edge_count):
        raise IndexError("edge index out of range")
    if not (S >> v & 1 and S >> u & 1):
        return None
    if v == u:
        return 1
    best: int | None = None
    for a in g.arcs_of(v):
        for b in g.arcs_of(u):
            val = get_len_arc(g, S, a, b, table)
            if val is not None and (best is None or val > best):
                best = val
    return best


def estimate_layer_entries(m: int, k_pre: int) -> int:
    return sum(math.comb(m, k) * (2 * k) ** 2 for k in range(1, k_pre + 1))


def precompute_layer(
    g: Graph, spec: LayerSpec, *, entry_budget: int = 1 << 28
) -> DpTable:
    """Tabulate L(S, a, b) for every S with |S| <= spec.k_pre.

    Sweeps each cardinality in deterministic lexicographic order, so the
    table is complete for the whole layer, not only for states the largest
    sets happen to reach.  Fails fast when the projected entry count exceeds
    the budget.
    """
    m = g.edge_count
    if m < 1:
        raise ValueError("precompute needs at least one edge")
    if not 1 <= spec.k_pre <= m:
        raise ValueError(f"k_pre must lie in [1, {m}], got {spec.k_pre}")
    est = estimate_layer_entries(m, spec.k_pre)
    if est > entry_budget:
        raise CapacityError(
            f"layer k_pre={spec.k_pre} needs about {est} entries, "
            f"budget is {entry_budget}"
        )
    table = DpTable(g, spec.k_pre)
    for k in range(1, spec.k_pre + 1):
        for combo in combinations(range(m), k):
            S = 0
            for i in combo:
                S |= 1 << i
            arcs = [arc for e in combo for arc in g.arcs_of(e)]
            for a in arcs:
                for b in arcs:
                    get_len_arc(g, S, a, b, table)
    table.finalize_matrices()
    return table


def full_dp_longest_trail(g: Graph) -> OracleResult:
    """Exact longest trail via the full subset DP (all states on demand)."""
    m = g.edge_count
    check_edge_budget(m, FULL_DP_MAX_EDGES, "full DP")
    if m == 0:
        return OracleResult(0, ())
    table = DpTable(g)
    E = g.full_edge_set
    best = 0
    best_arcs: tuple[int, int] | None = None
    for v in range(m):
        for a in g.arcs_of(v):
            for u in range(m):
                if u == v:
                    continue
                for b in g.arcs_of(u):
                    val = get_len_arc(g, E, a, b, table)
                    if val is not None and val > best:
                        best = val
                        best_arcs = (a, b)
    if best_arcs is None:
        # No two-edge walk anywhere; any single edge is a longest trail.
        return OracleResult(1, (0,))
    trail = reconstruct_arc(table, E, best_arcs[0], best_arcs[1])
    result = OracleResult(best, tuple(trail))
    assert validate_trail(g, result.trail), "DP produced an invalid trail"
    return result


def reconstruct_arc(table: DpTable, S: int, a: int, b: int) -> list[int]:
    """Rebuild the stored walk for state (S, a, b) by predecessor chaining."""
    g = table.g
    seq: list[int] = []
    cur_S, cur_b = S, b
    while True:
        ea, eb = a >> 1, cur_b >> 1
        if ea == eb:
            if cur_b != a:
                raise TableLookupError("chain ended on mismatched arcs")
            seq.append(ea)
            break
        hit = table.entries.get(table.pack(cur_S, a, cur_b), _MISSING)
        if hit is _MISSING or hit[0] is None:
            raise TableLookupError(
                f"no stored walk for state (S={cur_S:#x}, a={a}, b={cur_b})"
            )
        seq.append(eb)
        cur_S &= ~(1 << eb)
        cur_b = hit[1]
    seq.reverse()
    return seq


def reconstruct_path(table: DpTable, S: int, v: int, u: int) -> list[int]:
    """Rebuild a longest stored walk for (S, v, u), edge-level view."""
    g = table.g
    if v == u:
        if not S >> v & 1:
            raise TableLookupError(f"edge {v} not in S")
        return [v]
    best: int | None = None
    arcs: tuple[int, int] | None = None
    for a in g.arcs_of(v):
        for b in g.arcs_of(u):
            hit = table.entries.get(table.pack(S, a, b), _MISSING)
            if hit is _MISSING:
                continue
            if hit[0] is not None and (best is None or hit[0] > best):
                best, arcs = hit[0], (a, b)
    if arcs is None:
        raise TableLookupError(f"no stored walk for (S={S:#x}, v={v}, u={u})")
    return reconstruct_arc(table, S, arcs[0], arcs[1])


# ---------------------------------------------------------------------------
# Binary table dump (debug aid)

def write_table_dump(table: DpTable, path: str) -> int:
    """Dump the edge-level view of the table: one fixed-width record per
    (S, v, u) group, best length over arc orientations (-1 when no walk) and
    the winning predecessor edge (0xFFFF when none).  Returns record count.
    """
    m = table.g.edge_count
    nwords = (max(m, 1) + 63) // 64
    grouped: dict[tuple[int, int, int], tuple[int, int]] = {}
    for key, (length, pred) in table.entries.items():
        S, a, b = table.unpack(key)
        gkey = (S, a >> 1, b >> 1)
        cur = grouped.get(gkey)
        cand = (-1 if length is None else length, 0xFFFF if pred is None else pred >> 1)
        if cur is None or cand[0] > cur[0]:
            grouped[gkey] = cand
    fmt = "<" + "Q" * nwords + "HHhH"
    with open(path, "wb") as fh:
        for (S, v, u) in sorted(grouped):
            length, pred = grouped[(S, v, u)]
            words = [(S >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(nwords)]
            fh.write(struct.pack(fmt, *words, v, u, length, pred))
    return len(grouped)


def read_table_dump(path: str, m: int) -> list[tuple[int, int, int, int, int]]:
    """Read a dump written by `write_table_dump`; yields
    (S, v, u, length, pred_edge) tuples with -1/0xFFFF sentinels intact."""
    nwords = (max(m, 1) + 63) // 64
    fmt = "<" + "Q" * nwords + "HHhH"
    size = struct.calcsize(fmt)
    out = []
    with open(path, "rb") as fh:
        while chunk := fh.read(size):
            fields = struct.unpack(fmt, chunk)
            S = 0
            for w in range(nwords):
                S |= fields[w] << (64 * w)
            out.append((S, *fields[nwords:]))
    return out
