"""Simulated quantum maximum finding with exact query accounting.

The simulation lives at the query-model level: it never builds statevectors.
A run of the threshold search is modeled as a sequence of idealized Grover
stages.  Each stage, given t of N items strictly better than the current
threshold, charges ceil((pi/4) * sqrt(N/t)) queries and moves the threshold
to an item picked uniformly among those t; the run stops when no better item
exists or when the next stage would push the charged total past the query
budget (budget_constant * ceil(sqrt(N))).  A budget stop returns the current
threshold element, so errors are one-sided: the result is always a genuine
element of the sequence, at worst a non-maximal one.

Values may be ints or None; None means "no walk here" and compares below
everything, so an invalid candidate can never win a maximization.

Charged queries follow the model above, not the simulator's own bookkeeping
sweeps: the simulator inspects the whole value sequence to compute the t
counts, the way any classical driver of the model must, while the ledger
records what the idealized quantum search would have paid.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None

_NEG_INF = float("-inf")


@dataclass
class QueryLedger:
    """Per-recursion-level counts of charged oracle queries."""

    per_level: dict[str, int] = field(default_factory=dict)

    def charge(self, level: int | str, count: int) -> None:
        if count < 0:
            raise ValueError("cannot charge a negative query count")
        key = level if isinstance(level, str) else f"level{level}"
        self.per_level[key] = self.per_level.get(key, 0) + count

    @property
    def total(self) -> int:
        return sum(self.per_level.values())

    def merge(self, other: "QueryLedger") -> None:
        for key, count in other.per_level.items():
            self.per_level[key] = self.per_level.get(key, 0) + count

    def as_dict(self) -> dict:
        return {"total": self.total, "per_level": dict(sorted(self.per_level.items()))}


@dataclass(frozen=True)
class QmaxOutcome:
    value: int | None
    witness_index: int | None
    queries_charged: int


class ValueOracle:
    """Indexed value sequence, evaluated lazily.

    `evaluate` may recursively trigger nested searches; `snapshot` evaluates
    every index once and caches the result, fixing this run's view of the
    sequence.
    """

    def __init__(self, size: int, evaluate: Callable[[int], int | None]):
        if size < 1:
            raise ValueError("oracle needs at least one value")
        self.size = size
        self.evaluate = evaluate
        self._values: Sequence[int | None] | None = None

    @classmethod
    def from_values(cls, values) -> "ValueOracle":
        oracle = cls(len(values), lambda i: values[i])
        oracle._values = values
        return oracle

    def snapshot(self):
        if self._values is None:
            ev = self.evaluate
            self._values = [ev(i) for i in range(self.size)]
        return self._values


def grover_stage_cost(N: int, t: int) -> int:
    """Charged cost of one idealized Grover search with t of N items marked."""
    if not 1 <= t <= N:
        raise ValueError(f"need 1 <= t <= N, got t={t}, N={N}")
    return math.ceil(math.pi / 4.0 * math.sqrt(N / t))


def qmax_exhaustive(
    oracle: ValueOracle, ledger: QueryLedger, *, level: int | str = 0
) -> QmaxOutcome:
    """Deterministic reference mode: evaluate everything, charge N queries."""
    values = oracle.snapshot()
    best = None
    witness = None
    for i, val in enumerate(values):
        if val is not None and (best is None or val > best):
            best = val
            witness = i
    ledger.charge(level, oracle.size)
    return QmaxOutcome(best, witness, oracle.size)


def _prepare(values):
    """Sort indices by value descending (ties by index) and annotate each
    rank with the count of strictly greater values."""
    N = len(values)
    if _np is not None and isinstance(values, _np.ndarray):
        order = _np.argsort(-values, kind="stable")
        svals = values[order].tolist()
        order = order.tolist()
    else:
        if None in values:
            keyed = [(_NEG_INF if v is None else v) for v in values]
        else:
            keyed = values
        # Stable reverse sort: descending by value, ties by original index.
        order = sorted(range(N), key=keyed.__getitem__, reverse=True)
        svals = [values[i] for i in order]
    greater = [0] * N
    for r in range(1, N):
        greater[r] = greater[r - 1] if svals[r] == svals[r - 1] else r
    return order, svals, greater


_COST_TABLES: dict[int, list[int]] = {}


def _stage_costs(N: int) -> list[int]:
    """Charged cost of one stage for every possible t, indexed by t."""
    table = _COST_TABLES.get(N)
    if table is None:
        quarter_pi_rootn = math.pi / 4.0 * math.sqrt(N)
        table = [0] + [math.ceil(quarter_pi_rootn / math.sqrt(t)) for t in range(1, N + 1)]
        _COST_TABLES[N] = table
    return table


def _boosted_on_values(values, repeats: int, rnd, budget_constant: float):
    """Hot-path core shared by the public qmax entry points and the hybrid
    solver: `repeats` threshold-search trajectories over one value sequence.

    `rnd` is a bound `Random.random` method; repeats consume disjoint
    segments of that stream.  Returns (value, witness_index, charged_total).

    The trajectory walks ranks of the descending value order: the initial
    uniform index sample is taken directly in rank space (a bijection of
    index space), each stage jumps uniformly into the strictly-better prefix
    and charges the modeled Grover cost for its size, and a stage whose cost
    would overrun the query budget aborts the run with the current (genuine,
    possibly non-maximal) element.
    """
    N = len(values)
    budget = budget_constant * math.ceil(math.sqrt(N))
    order, svals, greater = _prepare(values)
    costs = _stage_costs(N)
    best_rank = -1
    best_val = None
    total = 0
    for _ in range(repeats):
        r = int(rnd() * N)
        if r >= N:
            r = N - 1
        charged = 1
        t = greater[r]
        while t:
            cost = costs[t]
            if charged + cost > budget:
                break
            charged += cost
            r = int(rnd() * t)
            if r >= t:
                r = t - 1
            t = greater[r]
        total += charged
        # Keep the first outcome attaining the maximal value.
        val = svals[r]
        if val is not None and (best_rank < 0 or val > best_val):
            best_rank = r
            best_val = val
    if best_rank < 0:
        return None, None, total
    return best_val, order[best_rank], total


def _boosted_on_ints(values, repeats: int, rnd, budget_constant: float):
    """Variant of `_boosted_on_values` over pure-int sequences where -1
    encodes "no walk"; walk lengths are always positive.  The hybrid solver
    keeps its value cells in this form so the trajectory loop runs without
    per-element None handling."""
    N = len(values)
    if max(values) < 0:
        # Nothing to find: each repeat samples once and stops immediately.
        for _ in range(repeats):
            rnd()
        return -1, -1, repeats
    budget = budget_constant * math.ceil(math.sqrt(N))
    order = sorted(range(N), key=values.__getitem__, reverse=True)
    svals = [values[i] for i in order]
    greater = [0] * N
    for r in range(1, N):
        greater[r] = greater[r - 1] if svals[r] == svals[r - 1] else r
    costs = _stage_costs(N)
    best_rank = 0
    best_val = -1
    total = 0
    for _ in range(repeats):
        r = int(rnd() * N)
        if r >= N:
            r = N - 1
        charged = 1
        t = greater[r]
        while t:
            cost = costs[t]
            if charged + cost > budget:
                break
            charged += cost
            r = int(rnd() * t)
            if r >= t:
                r = t - 1
            t = greater[r]
        total += charged
        val = svals[r]
        if val > best_val:
            best_val = val
            best_rank = r
    if best_val < 0:
        return -1, -1, total
    return best_val, order[best_rank], total


def qmax_durr_hoyer(
    oracle: ValueOracle,
    rng: random.Random,
    ledger: QueryLedger,
    *,
    level: int | str = 0,
    budget_constant: float = 23.0,
) -> QmaxOutcome:
    """One bounded-error maximum-finding run over the oracle's values."""
    val, idx, charged = _boosted_on_values(
        oracle.snapshot(), 1, rng.random, budget_constant
    )
    ledger.charge(level, charged)
    return QmaxOutcome(val, idx, charged)


def boosted_qmax(
    oracle: ValueOracle,
    repeats: int,
    rng: random.Random,
    ledger: QueryLedger,
    *,
    level: int | str = 0,
    budget_constant: float = 23.0,
) -> QmaxOutcome:
    """Repeat the bounded-error search and keep the best genuine element.

    One-sided error makes boosting safe: a repeat can only improve the
    value.  With repeats=1 this draws and returns exactly what a single
    `qmax_durr_hoyer` run on the same stream would.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    val, idx, charged = _boosted_on_values(
        oracle.snapshot(), repeats, rng.random, budget_constant
    )
    ledger.charge(level, charged)
    return QmaxOutcome(val, idx, charged)
