"""Exhaustive ground-truth engines for the longest trail.

Deliberately the simplest correct implementation: depth-first extension of
walks over (current head vertex, used-edge bitmask), comparing every maximal
extension.  Used to validate every other engine, so it shares no machinery
with the DP or hybrid solvers.

The only concession to speed is a symmetry prune: edges with identical
endpoint pairs are interchangeable inside a walk, so among unused parallel
copies only the lowest-indexed one is extended.  For the constrained variant
the required last edge is exempted from the prune (it is pinned to a specific
position, so it may not be swapped for a parallel sibling).
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, check_edge_budget, validate_trail

BRUTE_FORCE_MAX_EDGES = 14


@dataclass(frozen=True)
class OracleResult:
    length: int
    trail: tuple[int, ...]


def _class_groups(g: Graph) -> tuple[dict[tuple[int, int], list[int]], list[tuple[int, int]]]:
    groups: dict[tuple[int, int], list[int]] = {}
    keys: list[tuple[int, int]] = []
    for i, (u, v) in enumerate(g.edges):
        key = (u, v) if u <= v else (v, u)
        groups.setdefault(key, []).append(i)
        keys.append(key)
    return groups, keys


def _first_unused(members: list[int], used: int, restrict: int) -> int:
    for e in members:
        if restrict >> e & 1 and not used >> e & 1:
            return e
    return -1


def longest_trail_bruteforce(g: Graph) -> OracleResult:
    """Exact longest edge-simple walk by exhaustive DFS."""
    m = g.edge_count
    check_edge_budget(m, BRUTE_FORCE_MAX_EDGES, "brute-force oracle")
    if m == 0:
        return OracleResult(0, ())
    groups, keys = _class_groups(g)
    full = g.full_edge_set
    edges = g.edges
    vmasks = g.vertex_edge_masks
    best_len = 0
    best: list[int] = []
    path: list[int] = []

    def extend(head: int, used: int) -> None:
        nonlocal best_len, best
        if len(path) > best_len:
            best_len = len(path)
            best = path[:]
        avail = vmasks[head] & ~used
        while avail:
            low = avail & -avail
            e = low.bit_length() - 1
            avail ^= low
            if _first_unused(groups[keys[e]], used, full) != e:
                continue
            u, v = edges[e]
            path.append(e)
            extend(v if u == head else u, used | 1 << e)
            path.pop()

    for e in range(m):
        if groups[keys[e]][0] != e:
            continue  # parallel copies are equivalent as a starting edge
        u, v = edges[e]
        path.append(e)
        heads = (v, u) if u != v else (u,)
        for head in heads:
            extend(head, 1 << e)
        path.pop()
    result = OracleResult(best_len, tuple(best))
    assert validate_trail(g, result.trail), "oracle produced an invalid trail"
    return result


def constrained_longest_bruteforce(g: Graph, S: int, v: int, u: int) -> int | None:
    """Exact length of the longest walk inside edge-set S with first edge v
    and last edge u, or None when no such walk exists.

    "Inside S" is subset semantics: the walk may use any edges of S, not
    necessarily all of them.
    """
    m = g.edge_count
    check_edge_budget(m, BRUTE_FORCE_MAX_EDGES, "brute-force oracle")
    if not (0 <= v < m and 0 <= u < m):
        raise IndexError("edge index out of range")
    if not (S >> v & 1 and S >> u & 1):
        return None
    groups, keys = _class_groups(g)
    edges = g.edges
    vmasks = g.vertex_edge_masks
    best: int | None = None
    depth = 0

    def extend(head: int, used: int) -> None:
        nonlocal best, depth
        avail = vmasks[head] & S & ~used
        while avail:
            low = avail & -avail
            e = low.bit_length() - 1
            avail ^= low
            # Parallel-copy prune, except the pinned final edge u.
            if e != u and _first_unused(groups[keys[e]], used | 1 << u, S) != e:
                continue
            a, b = edges[e]
            depth += 1
            if e == u and depth > (best or 0):
                best = depth
            extend(b if a == head else a, used | 1 << e)
            depth -= 1

    a, b = edges[v]
    depth = 1
    if v == u:
        best = 1
    for head in (b, a) if a != b else (a,):
        extend(head, 1 << v)
    return best
