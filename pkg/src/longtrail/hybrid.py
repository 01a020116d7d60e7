"""Hybrid solver: classical layer precompute plus nested maximum-finding.

Step 1 tabulates every L(S, a, b) with |S| <= k_pre, where k_pre is roughly
(1 - alpha) * m/4 (see LayerSpec).  Step 2 answers L(E, v, u) for every edge
pair through a recursion on subset splits: a state over S is maximized over
candidates (S', y) with first-edge membership v in S', |S'| = h about half of
|S|, and pivot edge y in S'; the candidate's value combines the half-walks
L(S', a, c) and L((S \\ S') | {y}, c, b) over the two orientations c of the
pivot.  Sharing the pivot *arc* between the halves is what keeps the
concatenation walkable.  The recursion bottoms out in table lookups once
|S| <= k_pre.

Each maximization runs through the query-counting qmax simulators: exhaustive
scans in deterministic mode (results provably equal to the full DP), boosted
bounded-error threshold searches in stochastic mode.  Charges land in a
QueryLedger keyed by recursion depth.

States are solved once per run and memoized ("frozen field").  In stochastic
mode this means repeated references to a sub-state share one realization
instead of re-running its search; re-running every nested search per
reference, times 2m boosting per level, would multiply work by millions and
is not simulable.  Errors stay one-sided and witnesses stay genuine, and a
state's charges are attributed to the depth at which it is first reached.

Values for a state are kept as a 4-slot cell tuple indexed by the arc
orientations of the two endpoint edges (slot = first*2 + last), so one dict
hit serves all orientation combinations.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .dp import (
    DpTable,
    LayerSpec,
    precompute_layer,
    reconstruct_arc,
)
from .graphs import Graph, bits_of, check_edge_budget, validate_trail
from .qmax import QueryLedger, _boosted_on_ints

HYBRID_DET_MAX_EDGES = 20
HYBRID_STOCH_MAX_EDGES = 16

MODE_DETERMINISTIC = "deterministic"
MODE_STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class HybridConfig:
    alpha: float = 0.055
    mode: str = MODE_DETERMINISTIC
    repeats_per_level: Optional[int] = None  # None resolves to 2m
    seed: int = 0
    budget_constant: float = 23.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.mode not in (MODE_DETERMINISTIC, MODE_STOCHASTIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.repeats_per_level is not None and self.repeats_per_level < 1:
            raise ValueError("repeats_per_level must be at least 1")
        if self.budget_constant <= 0:
            raise ValueError("budget_constant must be positive")


# Witness tree: how a solved length decomposes back into a walk.
@dataclass(frozen=True)
class EdgeWitness:
    edge: int


@dataclass(frozen=True)
class LeafWitness:
    subset: int
    first_arc: int
    last_arc: int


@dataclass(frozen=True)
class RevWitness:
    inner: "Witness"


@dataclass(frozen=True)
class SplitNode:
    subset: int      # S' of the winning candidate (covers the left half)
    pivot_arc: int   # shared arc; its edge is counted once
    rest: int        # (S \ S') | {pivot edge} (covers the right half)
    left: "Witness"
    right: "Witness"


Witness = EdgeWitness | LeafWitness | RevWitness | SplitNode


@dataclass(frozen=True)
class SolveResult:
    length: int
    trail: tuple[int, ...]
    ledger: QueryLedger
    classical_entries: int
    success_nominal: bool


class SolveContext:
    """Per-run solver state: frozen table, memo field, stream, ledger."""

    def __init__(self, g: Graph, cfg: HybridConfig, table: DpTable):
        self.graph = g
        self.cfg = cfg
        self.table = table
        self.k_pre = table.k_pre
        self.stochastic = cfg.mode == MODE_STOCHASTIC
        self.repeats = (
            cfg.repeats_per_level
            if cfg.repeats_per_level is not None
            else max(1, 2 * g.edge_count)
        )
        self.rng = random.Random(cfg.seed)
        self.ledger = QueryLedger()
        self.vals: dict[int, tuple] = {}
        self.wits: dict[int, tuple] = {}

    @classmethod
    def create(cls, g: Graph, cfg: HybridConfig) -> "SolveContext":
        layer = LayerSpec.for_graph(g.edge_count, cfg.alpha)
        table = precompute_layer(g, layer)
        return cls(g, cfg, table)


def _split_size(size: int, k_pre: int) -> int:
    """First-half cardinality: half of |S|, raised onto the table layer when
    halving would undershoot it, and capped so the split stays proper."""
    h = size >> 1
    if h < 2:
        h = 2
    if h < k_pre:
        h = k_pre
    if h > size - 1:
        h = size - 1
    return h


def _candidates(S: int, lo: int, hi: int, h: int) -> list[tuple[int, int, int]]:
    """Deterministic candidate enumeration for a split of S.

    Yields (S', y, T): S' contains the first edge lo with |S'| = h, pivot
    y in S', T = (S \\ S') | {y}.  Candidates that strand the last edge hi
    (hi in S' but y != hi) are excluded up front.
    """
    vbit = 1 << lo
    positions = [p for p in bits_of(S) if p != lo]
    out = []
    for combo in combinations(positions, h - 1):
        S1 = vbit
        for p in combo:
            S1 |= 1 << p
        rest = S & ~S1
        if S1 >> hi & 1:
            out.append((S1, hi, rest | (1 << hi)))
        else:
            out.append((S1, lo, rest | vbit))
            for p in combo:
                out.append((S1, p, rest | (1 << p)))
    return out


def _transpose_cells(cells: tuple, n_first: int, n_second: int) -> tuple:
    """Reorder a cell tuple for the reversed endpoint order."""
    out: list = [-1, -1, -1, -1]
    for ai in range(n_first):
        ra = (ai ^ 1) if n_first == 2 else 0
        for bi in range(n_second):
            v = cells[ai * 2 + bi]
            if v >= 0:
                rb = (bi ^ 1) if n_second == 2 else 0
                out[rb * 2 + ra] = v
    return tuple(out)


def _ensure_solved(ctx: SolveContext, S: int, v: int, u: int, depth: int) -> None:
    lo, hi = (v, u) if v < u else (u, v)
    m = ctx.graph.edge_count
    if (S * m + lo) * m + hi not in ctx.vals:
        _solve_matrix(ctx, S, lo, hi, depth)


def _solve_matrix(ctx: SolveContext, S: int, lo: int, hi: int, depth: int) -> None:
    g = ctx.graph
    m = g.edge_count
    table_cells = ctx.table.matrices
    field_vals = ctx.vals
    k_pre = ctx.k_pre
    size = S.bit_count()
    h = _split_size(size, k_pre)
    left_small = h <= k_pre
    right_small = size - h + 1 <= k_pre
    cands = _candidates(S, lo, hi, h)
    arc_count = g.arc_count
    n_lo = arc_count[lo]
    n_hi = arc_count[hi]
    cells = [(ai * 2 + bi, ai, bi) for ai in range(n_lo) for bi in range(n_hi)]
    arrays: list[list] = [[], [], [], []]
    ap0, ap1, ap2, ap3 = (a.append for a in arrays)
    unrolled = n_lo == 2 and n_hi == 2
    child_depth = depth + 1

    for S1, y, T in cands:
        if y == lo:
            # Left half degenerates to the single edge lo; the candidate's
            # value is the right half's, pivot orientation locked to ai.
            if right_small:
                rf = table_cells[(T * m + lo) * m + hi]
            else:
                rkey = (T * m + lo) * m + hi
                rf = field_vals.get(rkey)
                if rf is None:
                    _ensure_solved(ctx, T, lo, hi, child_depth)
                    rf = field_vals[rkey]
            if unrolled:
                ap0(rf[0]); ap1(rf[1]); ap2(rf[2]); ap3(rf[3])
            else:
                for ci, ai, bi in cells:
                    arrays[ci].append(rf[ai * 2 + bi])
            continue
        if left_small:
            lf = table_cells[(S1 * m + lo) * m + y]
        else:
            lkey = (S1 * m + lo) * m + y
            lf = field_vals.get(lkey)
            if lf is None:
                _ensure_solved(ctx, S1, lo, y, child_depth)
                lf = field_vals[lkey]
        if y == hi:
            # Right half degenerates to the single edge hi.
            if unrolled:
                ap0(lf[0]); ap1(lf[1]); ap2(lf[2]); ap3(lf[3])
            else:
                for ci, ai, bi in cells:
                    arrays[ci].append(lf[ai * 2 + bi])
            continue
        if right_small:
            rf = table_cells[(T * m + y) * m + hi]
        else:
            rkey = (T * m + y) * m + hi
            rf = field_vals.get(rkey)
            if rf is None:
                _ensure_solved(ctx, T, y, hi, child_depth)
                rf = field_vals[rkey]
        if unrolled:
            lf0, lf1, lf2, lf3 = lf
            rf0, rf1, rf2, rf3 = rf
            two = arc_count[y] == 2
            v = lf0 + rf0 - 1 if lf0 > 0 and rf0 > 0 else -1
            if two and lf1 > 0 and rf2 > 0:
                w = lf1 + rf2 - 1
                if w > v:
                    v = w
            ap0(v)
            v = lf0 + rf1 - 1 if lf0 > 0 and rf1 > 0 else -1
            if two and lf1 > 0 and rf3 > 0:
                w = lf1 + rf3 - 1
                if w > v:
                    v = w
            ap1(v)
            v = lf2 + rf0 - 1 if lf2 > 0 and rf0 > 0 else -1
            if two and lf3 > 0 and rf2 > 0:
                w = lf3 + rf2 - 1
                if w > v:
                    v = w
            ap2(v)
            v = lf2 + rf1 - 1 if lf2 > 0 and rf1 > 0 else -1
            if two and lf3 > 0 and rf3 > 0:
                w = lf3 + rf3 - 1
                if w > v:
                    v = w
            ap3(v)
        else:
            n_y = arc_count[y]
            for ci, ai, bi in cells:
                lv = lf[ai * 2]
                rv = rf[bi]
                best = lv + rv - 1 if lv > 0 and rv > 0 else -1
                if n_y == 2:
                    lv = lf[ai * 2 + 1]
                    rv = rf[2 + bi]
                    if lv > 0 and rv > 0:
                        alt = lv + rv - 1
                        if alt > best:
                            best = alt
                arrays[ci].append(best)

    vals4: list = [-1, -1, -1, -1]
    wits4: list = [None, None, None, None]
    ledger = ctx.ledger
    if ctx.stochastic:
        rnd = ctx.rng.random
        repeats = ctx.repeats
        bconst = ctx.cfg.budget_constant
        for ci, ai, bi in cells:
            val, idx, charged = _boosted_on_ints(arrays[ci], repeats, rnd, bconst)
            ledger.charge(depth, charged)
            if val >= 0:
                vals4[ci] = val
                wits4[ci] = _winning_witness(
                    ctx, cands[idx], lo, hi, ai, bi, val, left_small, right_small
                )
    else:
        for ci, ai, bi in cells:
            arr = arrays[ci]
            best = -1
            idx = -1
            for i, val in enumerate(arr):
                if val > best:
                    best, idx = val, i
            ledger.charge(depth, len(arr))
            if best >= 0:
                vals4[ci] = best
                wits4[ci] = _winning_witness(
                    ctx, cands[idx], lo, hi, ai, bi, best, left_small, right_small
                )

    key = (S * m + lo) * m + hi
    field_vals[key] = tuple(vals4)
    field_vals[(S * m + hi) * m + lo] = _transpose_cells(vals4, n_lo, n_hi)
    ctx.wits[key] = tuple(wits4)


def _cell_witness(ctx: SolveContext, S: int, v: int, u: int, vi: int, ui: int) -> Witness:
    """Witness for a solved field cell, reversing when stored the other way."""
    m = ctx.graph.edge_count
    if v < u:
        return ctx.wits[(S * m + v) * m + u][vi * 2 + ui]
    arc_count = ctx.graph.arc_count
    rv = (vi ^ 1) if arc_count[v] == 2 else 0
    ru = (ui ^ 1) if arc_count[u] == 2 else 0
    return RevWitness(ctx.wits[(S * m + u) * m + v][ru * 2 + rv])


def _winning_witness(
    ctx: SolveContext,
    cand: tuple[int, int, int],
    lo: int,
    hi: int,
    ai: int,
    bi: int,
    target: int,
    left_small: bool,
    right_small: bool,
) -> SplitNode:
    g = ctx.graph
    m = g.edge_count
    S1, y, T = cand
    if y == lo:
        rf = (
            ctx.table.matrices[(T * m + lo) * m + hi]
            if T.bit_count() <= ctx.k_pre
            else ctx.vals[(T * m + lo) * m + hi]
        )
        if rf[ai * 2 + bi] != target:
            raise AssertionError("winning candidate no longer reproduces its value")
        right = (
            LeafWitness(T, 2 * lo + ai, 2 * hi + bi)
            if T.bit_count() <= ctx.k_pre
            else _cell_witness(ctx, T, lo, hi, ai, bi)
        )
        return SplitNode(S1, 2 * lo + ai, T, EdgeWitness(lo), right)
    lf = (
        ctx.table.matrices[(S1 * m + lo) * m + y]
        if left_small
        else ctx.vals[(S1 * m + lo) * m + y]
    )
    if y == hi:
        if lf[ai * 2 + bi] != target:
            raise AssertionError("winning candidate no longer reproduces its value")
        left = (
            LeafWitness(S1, 2 * lo + ai, 2 * hi + bi)
            if left_small
            else _cell_witness(ctx, S1, lo, y, ai, bi)
        )
        return SplitNode(S1, 2 * hi + bi, T, left, EdgeWitness(hi))
    rf = (
        ctx.table.matrices[(T * m + y) * m + hi]
        if right_small
        else ctx.vals[(T * m + y) * m + hi]
    )
    for gi in range(g.arc_count[y]):
        lv = lf[ai * 2 + gi]
        rv = rf[gi * 2 + bi]
        if lv > 0 and rv > 0 and lv + rv - 1 == target:
            left = (
                LeafWitness(S1, 2 * lo + ai, 2 * y + gi)
                if left_small
                else _cell_witness(ctx, S1, lo, y, ai, gi)
            )
            right = (
                LeafWitness(T, 2 * y + gi, 2 * hi + bi)
                if right_small
                else _cell_witness(ctx, T, y, hi, gi, bi)
            )
            return SplitNode(S1, 2 * y + gi, T, left, right)
    raise AssertionError("winning candidate no longer reproduces its value")


def solve_recursive(
    ctx: SolveContext, S: int, v: int, u: int, level: int = 0
) -> tuple[int | None, Witness | None]:
    """L(S, v, u) through the split recursion, with a decomposition witness.

    Membership guards return None without recursing; v == u short-circuits to
    the single-edge walk; sets on the precomputed layer resolve by lookup.
    """
    g = ctx.graph
    if not (S >> v & 1 and S >> u & 1):
        return None, None
    if v == u:
        return 1, EdgeWitness(v)
    if S.bit_count() <= ctx.k_pre:
        best: int | None = None
        arcs: tuple[int, int] | None = None
        for a in g.arcs_of(v):
            for b in g.arcs_of(u):
                val = ctx.table.get_arc(S, a, b)
                if val is not None and (best is None or val > best):
                    best, arcs = val, (a, b)
        if best is None:
            return None, None
        return best, LeafWitness(S, arcs[0], arcs[1])
    _ensure_solved(ctx, S, v, u, level)
    m = g.edge_count
    cells = ctx.vals[(S * m + v) * m + u]
    best = -1
    cell = -1
    for ci in range(4):
        val = cells[ci]
        if val > best:
            best, cell = val, ci
    if best < 0:
        return None, None
    return best, _cell_witness(ctx, S, v, u, cell >> 1, cell & 1)


def reconstruct_from_witness(w: Witness, table: DpTable) -> list[int]:
    """Expand a witness tree into the edge sequence it stands for."""
    if isinstance(w, EdgeWitness):
        return [w.edge]
    if isinstance(w, LeafWitness):
        return reconstruct_arc(table, w.subset, w.first_arc, w.last_arc)
    if isinstance(w, RevWitness):
        return list(reversed(reconstruct_from_witness(w.inner, table)))
    if isinstance(w, SplitNode):
        left = reconstruct_from_witness(w.left, table)
        right = reconstruct_from_witness(w.right, table)
        pivot = w.pivot_arc >> 1
        if left[-1] != pivot or right[0] != pivot:
            raise ValueError(
                f"inconsistent witness: halves do not share pivot edge {pivot}"
            )
        return left + right[1:]
    raise TypeError(f"not a witness: {w!r}")


def solve_hybrid(g: Graph, cfg: HybridConfig) -> SolveResult:
    """Full solve: layer precompute, split search per edge pair, reassembly."""
    m = g.edge_count
    if cfg.mode == MODE_STOCHASTIC:
        check_edge_budget(m, HYBRID_STOCH_MAX_EDGES, "stochastic hybrid solver")
    else:
        check_edge_budget(m, HYBRID_DET_MAX_EDGES, "deterministic hybrid solver")
    deterministic = cfg.mode == MODE_DETERMINISTIC
    if m == 0:
        return SolveResult(0, (), QueryLedger(), 0, deterministic)
    ctx = SolveContext.create(g, cfg)
    E = g.full_edge_set
    best = 0
    best_wit: Witness | None = None
    for v in range(m):
        for u in range(m):
            if v == u:
                val: int | None = 1
                wit: Witness | None = EdgeWitness(v)
            else:
                val, wit = solve_recursive(ctx, E, v, u, 0)
            if val is not None and val > best:
                best, best_wit = val, wit
    trail: list[int] = []
    if best_wit is not None:
        trail = reconstruct_from_witness(best_wit, ctx.table)
    verdict = validate_trail(g, trail)
    if not verdict.ok or len(trail) != best:
        raise AssertionError(f"solver returned an unusable walk: {verdict.reason}")
    return SolveResult(best, tuple(trail), ctx.ledger, len(ctx.table), deterministic)


# ---------------------------------------------------------------------------
# Deterministic-mode query prediction (independent of the solver's ledger)

def predict_deterministic_queries(g: Graph, alpha: float = 0.055) -> dict[str, int]:
    """Closed-form per-level query counts for a deterministic run.

    Walks the same recursion structurally (memoized on states, candidate
    counts from the enumeration rule) without evaluating any walk lengths, so
    it predicts exactly what the solver's ledger must report.
    """
    m = g.edge_count
    if m == 0:
        return {}
    k_pre = LayerSpec.for_graph(m, alpha).k_pre
    arc_count = g.arc_count
    visited: set[int] = set()
    per_level: dict[str, int] = {}

    def visit(S: int, v: int, u: int, depth: int) -> None:
        lo, hi = (v, u) if v < u else (u, v)
        key = (S * m + lo) * m + hi
        if key in visited:
            return
        visited.add(key)
        size = S.bit_count()
        h = _split_size(size, k_pre)
        cands = _candidates(S, lo, hi, h)
        ncells = arc_count[lo] * arc_count[hi]
        label = f"level{depth}"
        per_level[label] = per_level.get(label, 0) + ncells * len(cands)
        left_big = h > k_pre
        right_big = size - h + 1 > k_pre
        for S1, y, T in cands:
            if y != lo and left_big:
                visit(S1, lo, y, depth + 1)
            if y != hi and right_big:
                visit(T, y, hi, depth + 1)

    E = g.full_edge_set
    if m > k_pre:
        for v in range(m):
            for u in range(m):
                if v != u:
                    visit(E, v, u, 0)
    return per_level


# ---------------------------------------------------------------------------
# Theoretical cost model

@dataclass(frozen=True)
class CostReport:
    m: int
    alpha: float
    k_nominal: int
    k_layer: int
    classical_count: int
    quantum_count: float
    exponent_classical: float
    exponent_quantum: float
    balance_gap: float

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha": self.alpha,
            "k_nominal": self.k_nominal,
            "k_layer": self.k_layer,
            "classical_count": self.classical_count,
            "quantum_count": self.quantum_count,
            "exponent_classical": self.exponent_classical,
            "exponent_quantum": self.exponent_quantum,
            "balance_gap": self.balance_gap,
        }


def _log2_binom(x: float, y: float) -> float:
    """log2 of the generalized binomial coefficient C(x, y)."""
    if y < 0 or y > x:
        return float("-inf")
    lg = math.lgamma(x + 1.0) - math.lgamma(y + 1.0) - math.lgamma(x - y + 1.0)
    return lg / math.log(2.0)


def theoretical_costs(m: int, alpha: float = 0.055) -> CostReport:
    """Classical versus quantum nominal operation counts and their per-edge
    base-2 exponents; the two sides balance near alpha = 0.055."""
    if m < 4:
        raise ValueError(f"cost model needs m >= 4, got {m}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    k_nominal = round((1.0 - alpha) * m / 4.0)
    k_layer = LayerSpec.for_graph(m, alpha).k_pre
    classical_count = math.comb(m, k_nominal)
    log2_classical = _log2_binom(m, k_nominal)
    log2_quantum = 0.5 * (
        _log2_binom(m, m / 2.0)
        + _log2_binom(m / 2.0, m / 4.0)
        + _log2_binom(m / 4.0, round(alpha * m / 4.0))
    )
    quantum_count = 2.0 ** log2_quantum if log2_quantum < 1020 else float("inf")
    exp_c = log2_classical / m
    exp_q = log2_quantum / m
    return CostReport(
        m=m,
        alpha=alpha,
        k_nominal=k_nominal,
        k_layer=k_layer,
        classical_count=classical_count,
        quantum_count=quantum_count,
        exponent_classical=exp_c,
        exponent_quantum=exp_q,
        balance_gap=abs(exp_c - exp_q),
    )
