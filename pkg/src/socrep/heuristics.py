"""Constructive chain builders: greedy one-pass and exhaustive branch search.

Both operate on a working list of weights plus one designated *carry* slot
(the exponent borrowed from the bound variable).  Each round applies the first
matching deterministic reduction:

1. equal fold — two slots share the largest duplicated value v; pair them into
   a fresh variable of weight 2v (terminal when v is half the running total);
2. dominant split — one slot holds at least half the running total; peel half
   the power-of-two budget off it and restart the carry;
3. low-bit fold — a unique slot has the minimal low set bit and fits the
   power-of-two deficit; pair it with the carry slot;
4. padding — pour the power-of-two deficit into the carry slot, then fold the
   carry with an equal slot if one appeared;
5. otherwise a *strategy step*: pick two slots and a transfer amount gamma,
   moving gamma from each into a fresh variable of weight 2*gamma.

The greedy builder resolves step 5 with a fixed selection rule; the traversal
branches over every admissible selection and minimizes the chain length with
exact memoization on the multiset state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    Configuration,
    InternalCheckError,
    InvalidInputError,
    WeightTuple,
    ceil_log2,
    delta,
    omega,
)

STRATEGY_POWER_TWO = "power-two"
STRATEGY_COMMON_ONE = "common-one"
STRATEGIES = (STRATEGY_POWER_TWO, STRATEGY_COMMON_ONE)

ALGORITHMS = (
    "greedy-power-two",
    "greedy-common-one",
    "traversal-power-two",
    "traversal-common-one",
)

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class TraversalResult:
    config: Configuration
    exhaustive: bool
    expansions: int

    @property
    def size(self) -> int:
        return self.config.n


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise InvalidInputError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")


def _require_input(w: WeightTuple) -> None:
    if w.m < 2:
        raise InvalidInputError(f"need at least two weights, got {tuple(w.s)}")
    w.require_normalized("chain construction")


def _find_equal_pair(s: list[int], t: int) -> tuple[int, int] | None:
    """Two slots sharing the largest duplicated positive value.

    Prefers a pair of non-carry slots when one exists (this keeps the choice a
    function of the value multiset alone); lowest indices otherwise.
    """
    by_value: dict[int, list[int]] = {}
    for idx, v in enumerate(s):
        if v > 0:
            by_value.setdefault(v, []).append(idx)
    for v in sorted(by_value, reverse=True):
        idxs = by_value[v]
        if len(idxs) < 2:
            continue
        non_carry = [i for i in idxs if i != t]
        if len(non_carry) >= 2:
            return non_carry[0], non_carry[1]
        return idxs[0], idxs[1]
    return None


def _admissible_pairs(s: list[int], t: int, strategy: str) -> list[tuple[int, int, int]]:
    """Strategy-admissible (i, j, gamma) choices for the generic step, in index order.

    power-two: pairs among the slots whose low set bit is globally minimal;
    gamma is the smaller value.  common-one: pairs of slots whose binary
    expansions share at least one bit; gamma is the shared-bit mass.
    """
    positives = [idx for idx, v in enumerate(s) if v > 0]
    out: list[tuple[int, int, int]] = []
    if strategy == STRATEGY_POWER_TWO:
        dmin = min(delta(s[idx]) for idx in positives)
        cands = [idx for idx in positives if delta(s[idx]) == dmin]
        for a in range(len(cands)):
            for b in range(a + 1, len(cands)):
                i, j = cands[a], cands[b]
                out.append((i, j, min(s[i], s[j])))
    else:
        for a in range(len(positives)):
            for b in range(a + 1, len(positives)):
                i, j = positives[a], positives[b]
                shared = omega(s[i]) & omega(s[j])
                if shared:
                    out.append((i, j, sum(1 << k for k in shared)))
    return out


def _greedy_power_two(s: list[int], t: int) -> tuple[int, int, int]:
    """Among minimal-low-bit pairs, maximize the low bit of the difference."""
    best = None
    best_key = None
    for i, j, gamma in _admissible_pairs(s, t, STRATEGY_POWER_TWO):
        diff = abs(s[i] - s[j])
        key = delta(diff) if diff else 1 << 62
        if best_key is None or key > best_key:
            best, best_key = (i, j, gamma), key
    if best is None:
        raise InternalCheckError(f"no low-bit pair available in state {s}")
    return best


def _greedy_common_one(s: list[int], t: int) -> tuple[int, int, int]:
    """Maximize the number of shared bits; ties by lowest indices."""
    best = None
    best_count = -1
    for i, j, gamma in _admissible_pairs(s, t, STRATEGY_COMMON_ONE):
        count = gamma.bit_count()
        if count > best_count:
            best, best_count = (i, j, gamma), count
    if best is None:
        raise InternalCheckError(f"no shared-bit pair available in state {s}")
    return best


class _Engine:
    """One working state: the slot list, the carry index, and emitted triples."""

    def __init__(self, values: list[int], carry: int):
        self.s = values
        self.t = carry
        self.triples: list[tuple[int, int, int]] = []

    def _emit(self, i: int, j: int, target: int) -> None:
        a, b = (i, j) if i < j else (j, i)
        self.triples.append((a + 1, b + 1, target + 1))

    def _fresh(self, value: int) -> int:
        self.s.append(value)
        return len(self.s) - 1

    def step(self) -> str | list[tuple[int, int, int]]:
        """Apply one deterministic round.

        Returns "done" after the terminal fold, "again" after a deterministic
        reduction, or the admissible generic choices when only a strategy step
        remains (the caller then applies one via :meth:`apply_generic`).
        Strategy resolution is deferred to the caller so greedy and traversal
        share every deterministic rule.
        """
        s, t = self.s, self.t
        shat = sum(s)
        if shat < 2:
            raise InternalCheckError(f"degenerate state {s}")
        l = ceil_log2(shat)
        if s[t] > 0 and shat != (1 << l):
            raise InternalCheckError(f"carry positive but total {shat} not a power of two")

        pair = _find_equal_pair(s, t)
        if pair is not None:
            i, j = pair
            v = s[i]
            if v == 1 << (l - 1):
                rest = shat - 2 * v
                if rest != 0:
                    raise InternalCheckError(f"terminal fold with leftover mass {rest}")
                self._emit(i, j, t)
                return "done"
            fresh = self._fresh(2 * v)
            s[i] = 0
            s[j] = 0
            self._emit(i, j, fresh)
            return "again"

        k = max(range(len(s)), key=lambda idx: s[idx])
        if 2 * s[k] >= shat:
            if k == t:
                raise InternalCheckError(f"carry slot dominates state {s}")
            half = 1 << (l - 1)
            if 2 * s[k] == shat:
                s[k] = 0
            elif s[k] <= half:
                s[t] = 2 * s[k] - shat
                s[k] = 0
            elif shat < (1 << l):
                s[t] = (1 << l) - shat
                s[k] -= half
            else:
                s[k] -= half
            old_t = self.t
            self.t = self._fresh(0)
            self._emit(k, self.t, old_t)
            return "again"

        positives = [idx for idx, v in enumerate(s) if v > 0]
        dmin = min(delta(s[idx]) for idx in positives)
        low = [idx for idx in positives if delta(s[idx]) == dmin]
        deficit = (1 << l) - shat
        if len(low) == 1 and s[low[0]] <= deficit:
            r = low[0]
            if r == t:
                raise InternalCheckError(f"carry slot hit the low-bit fold in state {s}")
            fresh = self._fresh(2 * s[r])
            s[r] = 0
            self._emit(r, t, fresh)
            return "again"

        if deficit:
            s[t] += deficit
        if s[t] > 0:
            for i, v in enumerate(s):
                if i != t and v == s[t]:
                    fresh = self._fresh(2 * v)
                    s[i] = 0
                    s[t] = 0
                    self._emit(i, t, fresh)
                    return "again"

        return _admissible_pairs(s, t, self._strategy)

    def apply_generic(self, choice: tuple[int, int, int]) -> None:
        i, j, gamma = choice
        s = self.s
        if gamma < 1 or gamma > min(s[i], s[j]):
            raise InternalCheckError(f"bad transfer {gamma} for slots {i},{j} in {s}")
        fresh = self._fresh(2 * gamma)
        s[i] -= gamma
        s[j] -= gamma
        self._emit(i, j, fresh)

    def run_deterministic(self, strategy: str):
        """Advance until terminal or a generic step; returns the admissible list or None."""
        self._strategy = strategy
        while True:
            res = self.step()
            if res == "done":
                return None
            if res == "again":
                continue
            return res


def _state_key(s: list[int], t: int) -> tuple[tuple[int, ...], int]:
    return tuple(sorted(v for idx, v in enumerate(s) if v > 0 and idx != t)), s[t]


def _state_lower_bound(key: tuple[tuple[int, ...], int]) -> int:
    """Chain length still needed from a state: bit-length and slot-count floors."""
    values, carry = key
    rhs = sum(values)  # total minus carry = remaining right-hand exponent
    if rhs <= 0:
        raise InternalCheckError(f"state {key} carries no mass")
    g = math.gcd(*values) if values else 1
    return max(ceil_log2(max(rhs // g, 1)), len(values) - 1, 1)


def _engine_from_key(key: tuple[tuple[int, ...], int]) -> _Engine:
    values, carry = key
    s = list(values) + [carry]
    return _Engine(s, len(s) - 1)


def heuristic(w: WeightTuple, strategy: str) -> Configuration:
    """Greedy one-pass chain for a normalized tuple."""
    _check_strategy(strategy)
    _require_input(w)
    eng = _Engine(list(w.s) + [0], w.m)
    pick = _greedy_power_two if strategy == STRATEGY_POWER_TWO else _greedy_common_one
    while True:
        choices = eng.run_deterministic(strategy)
        if choices is None:
            return Configuration.from_raw_triples(w.m, eng.triples)
        if not choices:
            raise InternalCheckError(f"no admissible {strategy} step in state {eng.s}")
        eng.apply_generic(pick(eng.s, eng.t))


class _BudgetExceeded(Exception):
    pass


class _Search:
    """Exact minimal chain length over the strategy's branch space.

    States are keyed by (sorted positive non-carry values, carry value); the
    deterministic rounds are replayed on a canonical slot layout so the key
    determines them completely.  Memoized values are exact minima; children
    are only skipped against the current best when their lower bound already
    rules them out.
    """

    def __init__(self, strategy: str, budget: int):
        self.strategy = strategy
        self.budget = budget
        self.expansions = 0
        self.memo: dict[tuple, int] = {}

    def expand(self, key) -> tuple[int, list[tuple] | None]:
        """Deterministic prefix cost and child keys (None when terminal)."""
        self.expansions += 1
        if self.expansions > self.budget:
            raise _BudgetExceeded
        eng = _engine_from_key(key)
        choices = eng.run_deterministic(self.strategy)
        if choices is None:
            return len(eng.triples), None
        children = []
        for choice in choices:
            s2 = list(eng.s)
            i, j, gamma = choice
            s2.append(2 * gamma)
            s2[i] -= gamma
            s2[j] -= gamma
            children.append(_state_key(s2, eng.t))
        return len(eng.triples), children

    def solve(self, key) -> int:
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        prefix, children = self.expand(key)
        if children is None:
            self.memo[key] = prefix
            return prefix
        best = None
        for child in children:
            if best is not None and prefix + 1 + _state_lower_bound(child) >= best:
                continue
            cand = prefix + 1 + self.solve(child)
            if best is None or cand < best:
                best = cand
        self.memo[key] = best
        return best


def traversal(w: WeightTuple, strategy: str, budget: int = DEFAULT_BUDGET) -> TraversalResult:
    """Minimal chain over all strategy-admissible generic choices.

    Exact (exhaustive=True) when the memoized search fits the expansion
    budget; otherwise falls back to the greedy chain and flags the result.
    """
    _check_strategy(strategy)
    _require_input(w)
    if budget < 1:
        raise InvalidInputError(f"budget must be positive, got {budget}")
    search = _Search(strategy, budget)
    root = _state_key(list(w.s) + [0], w.m)
    try:
        target = search.solve(root)
        config = _replay(w, strategy, search, target)
        return TraversalResult(config, True, search.expansions)
    except _BudgetExceeded:
        return TraversalResult(heuristic(w, strategy), False, search.expansions)


def _replay(w: WeightTuple, strategy: str, search: _Search, target: int) -> Configuration:
    """Rebuild the real triple chain along a cost-optimal path."""
    eng = _Engine(list(w.s) + [0], w.m)
    while True:
        choices = eng.run_deterministic(strategy)
        if choices is None:
            if len(eng.triples) != target:
                raise InternalCheckError(
                    f"replayed chain length {len(eng.triples)} != searched minimum {target}"
                )
            return Configuration.from_raw_triples(w.m, eng.triples)
        remaining = target - len(eng.triples)
        chosen = None
        for choice in choices:
            s2 = list(eng.s)
            i, j, gamma = choice
            s2.append(2 * gamma)
            s2[i] -= gamma
            s2[j] -= gamma
            key = _state_key(s2, eng.t)
            if 1 + search.solve(key) == remaining:
                chosen = choice
                break
        if chosen is None:
            raise InternalCheckError("no generic choice achieves the memoized minimum")
        eng.apply_generic(chosen)


def run_algorithm(
    name: str, w: WeightTuple, budget: int = DEFAULT_BUDGET
) -> tuple[Configuration, bool]:
    """Dispatch by CLI algorithm name; returns (configuration, exhaustive)."""
    if name == "greedy-power-two":
        return heuristic(w, STRATEGY_POWER_TWO), True
    if name == "greedy-common-one":
        return heuristic(w, STRATEGY_COMMON_ONE), True
    if name == "traversal-power-two":
        res = traversal(w, STRATEGY_POWER_TWO, budget)
        return res.config, res.exhaustive
    if name == "traversal-common-one":
        res = traversal(w, STRATEGY_COMMON_ONE, budget)
        return res.config, res.exhaustive
    raise InvalidInputError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")
