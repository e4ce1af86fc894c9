"""Weight tuples, size bounds, and shared types.

A weight tuple ``s = (s_1, ..., s_m)`` of positive integers encodes the
inequality ``x_1^{s_1} * ... * x_m^{s_m} >= x_{m+1}^{s_hat}`` with
``s_hat = s_1 + ... + s_m`` — the right-hand side is the weighted geometric
mean of ``x_1..x_m`` raised to ``s_hat``.  Such an inequality can be written
as a chain of n quadratic constraints ``x_i * x_j >= x_t^2`` over the original
variables plus n-1 auxiliaries; a :class:`Configuration` records one such
chain.  This module provides the tuple/bit-profile arithmetic and the cheap
lower/upper bounds on the minimal chain length n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class SocrepError(Exception):
    """Base class for all package errors."""


class InvalidInputError(SocrepError):
    """Raised when user-supplied data violates a precondition."""


class SearchBudgetError(SocrepError):
    """Raised when a bounded search exceeds its cap without a definite answer."""


class InternalCheckError(SocrepError):
    """Raised when an internal consistency invariant fails (should be unreachable)."""


def parse_int(value) -> int:
    """Parse an integer given as int or decimal string (arbitrary precision)."""
    if isinstance(value, bool):
        raise InvalidInputError(f"expected an integer, got boolean {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        sign = 1
        if text[:1] in {"+", "-"}:
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        if not text.isdigit():
            raise InvalidInputError(f"not a decimal integer: {value!r}")
        return sign * int(text)
    raise InvalidInputError(f"expected an integer or decimal string, got {type(value).__name__}")


def ceil_log2(x: int) -> int:
    """Smallest l with 2**l >= x, for x >= 1."""
    if x < 1:
        raise InvalidInputError(f"ceil_log2 requires a positive integer, got {x}")
    return (x - 1).bit_length()


def omega(r: int) -> frozenset[int]:
    """Positions of the one-bits in the binary expansion of r >= 0."""
    if r < 0:
        raise InvalidInputError(f"omega requires a nonnegative integer, got {r}")
    return frozenset(k for k in range(r.bit_length()) if (r >> k) & 1)


def delta(r: int) -> int | None:
    """Index of the lowest set bit of r (None for r == 0)."""
    if r < 0:
        raise InvalidInputError(f"delta requires a nonnegative integer, got {r}")
    if r == 0:
        return None
    return (r & -r).bit_length() - 1


@dataclass(frozen=True)
class BitProfile:
    """Binary-expansion profile of a nonnegative integer."""

    value: int
    ones: frozenset[int]
    low_bit: int | None

    @classmethod
    def of(cls, r: int) -> "BitProfile":
        return cls(value=r, ones=omega(r), low_bit=delta(r))


@dataclass(frozen=True)
class WeightTuple:
    """An ordered tuple of positive integer weights."""

    s: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.s, tuple):
            object.__setattr__(self, "s", tuple(self.s))
        if len(self.s) < 1:
            raise InvalidInputError("weight tuple must have at least one entry")
        for e in self.s:
            if not isinstance(e, int) or isinstance(e, bool):
                raise InvalidInputError(f"weights must be integers, got {e!r}")
            if e < 1:
                raise InvalidInputError(f"weights must be positive, got {e}")

    @classmethod
    def parse(cls, items: Iterable) -> "WeightTuple":
        return cls(tuple(parse_int(x) for x in items))

    @property
    def m(self) -> int:
        return len(self.s)

    @property
    def s_hat(self) -> int:
        return sum(self.s)

    @property
    def is_normalized(self) -> bool:
        return math.gcd(*self.s) == 1 if self.m > 1 else self.s[0] == 1

    def normalize(self) -> tuple["WeightTuple", int]:
        """Divide out the gcd; returns (normalized tuple, gcd)."""
        g = math.gcd(*self.s)
        return WeightTuple(tuple(e // g for e in self.s)), g

    def require_normalized(self, what: str = "operation") -> None:
        if not self.is_normalized:
            g = math.gcd(*self.s)
            raise InvalidInputError(
                f"{what} requires a normalized tuple (gcd 1); {self.s} has gcd {g} — divide it out first"
            )

    def __iter__(self) -> Iterator[int]:
        return iter(self.s)

    def __len__(self) -> int:
        return len(self.s)


@dataclass(frozen=True)
class Configuration:
    """A chain of quadratic constraints ``x_i * x_j >= x_t^2``.

    ``m`` is the number of original left-hand variables; variable ``m+1`` is
    the bound (right-hand) variable, and variables ``m+2 .. m+n`` are
    auxiliaries.  Triples are 1-based ``(i, j, t)`` with ``i < j`` and targets
    ``t`` exactly ``m+1 .. m+n`` in ascending order.
    """

    m: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InvalidInputError(f"configuration needs m >= 1, got {self.m}")
        triples = tuple(tuple(tr) for tr in self.triples)
        object.__setattr__(self, "triples", triples)
        n = len(triples)
        if n < 1:
            raise InvalidInputError("configuration needs at least one triple")
        hi = self.m + n
        for k, (i, j, t) in enumerate(triples, start=1):
            if t != self.m + k:
                raise InvalidInputError(
                    f"triple targets must be m+1..m+n in order; triple {k} targets {t}, expected {self.m + k}"
                )
            if not (1 <= i < j <= hi):
                raise InvalidInputError(f"triple {k} pair ({i},{j}) out of range or unordered")
            if t in (i, j):
                raise InvalidInputError(f"triple {k} targets one of its own factors")

    @property
    def n(self) -> int:
        return len(self.triples)

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j, _ in self.triples)

    @classmethod
    def from_pairs(cls, m: int, pairs: Sequence[Sequence[int]]) -> "Configuration":
        return cls(m, tuple((int(i), int(j), m + k) for k, (i, j) in enumerate(pairs, start=1)))

    @classmethod
    def from_raw_triples(cls, m: int, triples: Iterable[Sequence[int]]) -> "Configuration":
        """Build from triples in any order, sorting factors and targets canonically."""
        fixed = []
        for i, j, t in triples:
            i, j, t = int(i), int(j), int(t)
            if i > j:
                i, j = j, i
            fixed.append((i, j, t))
        fixed.sort(key=lambda tr: tr[2])
        return cls(m, tuple(fixed))

    def to_json(self, w: WeightTuple | None = None) -> dict:
        doc: dict = {"schema": "socrep-v1", "m": self.m, "triples": [list(tr) for tr in self.triples]}
        if w is not None:
            doc["s"] = list(w.s)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> tuple["Configuration", WeightTuple | None]:
        try:
            m = parse_int(doc["m"])
            triples = [[parse_int(v) for v in tr] for tr in doc["triples"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed configuration document: {exc}") from exc
        if any(len(tr) != 3 for tr in triples):
            raise InvalidInputError("configuration triples must have exactly three entries")
        w = WeightTuple.parse(doc["s"]) if "s" in doc and doc["s"] is not None else None
        cfg = cls.from_raw_triples(m, triples)
        if w is not None and w.m != m:
            raise InvalidInputError(f"weight count {w.m} does not match m={m}")
        return cfg, w


@dataclass(frozen=True)
class Bounds:
    """Lower and upper bounds on the minimal chain length for a tuple."""

    lower: int
    upper_perm: int
    upper_common_one: int
    upper_power_two: int
    perm_exhaustive: bool

    @property
    def upper(self) -> int:
        return min(self.upper_perm, self.upper_common_one, self.upper_power_two)

    def to_json(self) -> dict:
        return {
            "schema": "socrep-v1",
            "lower": self.lower,
            "upper_perm": self.upper_perm,
            "upper_common_one": self.upper_common_one,
            "upper_power_two": self.upper_power_two,
            "upper": self.upper,
            "perm_exhaustive": self.perm_exhaustive,
        }


def _require_bounds_input(w: WeightTuple) -> None:
    if w.m < 2:
        raise InvalidInputError(f"bounds require at least two weights, got {w.s}")
    w.require_normalized("bounds computation")


def lower_bound(w: WeightTuple) -> int:
    """Floor on the chain length: max(ceil(log2 s_hat), m-1)."""
    _require_bounds_input(w)
    return max(ceil_log2(w.s_hat), w.m - 1)


def padded(w: WeightTuple) -> tuple[int, ...]:
    """Entries with the power-of-two deficit 2**l - s_hat appended when positive."""
    pad = (1 << ceil_log2(w.s_hat)) - w.s_hat
    return w.s + (pad,) if pad > 0 else w.s


def upper_bound_common_one(w: WeightTuple) -> int:
    """Chain length achieved by repeatedly merging shared one-bits: sum of popcounts minus one."""
    _require_bounds_input(w)
    return sum(e.bit_count() for e in padded(w)) - 1


def upper_bound_power_two(w: WeightTuple) -> int:
    """Chain length achieved by low-bit alignment: ceil of half the total bit spread."""
    _require_bounds_input(w)
    l = ceil_log2(w.s_hat)
    total = sum(l - delta(e) for e in padded(w))
    return (total + 1) // 2


def _chain_cost(order: Sequence[int]) -> int:
    """Cost of peeling weights off in the given order, one two-variable stage each."""
    total = 0
    tail = sum(order)
    for v in order[:-1]:
        total += ceil_log2(tail // math.gcd(tail, v))
        tail -= v
    return total


def upper_bound_perm(w: WeightTuple, exhaustive_max_m: int = 8) -> tuple[int, bool]:
    """Best peel-off order bound; exhaustive for small m, heuristic orders beyond.

    Returns (bound, exhaustive) where exhaustive is False when only a subset of
    orders was tried (descending, ascending, and all single swaps of descending).
    """
    _require_bounds_input(w)
    if w.m <= exhaustive_max_m:
        best = min(_chain_cost(p) for p in itertools.permutations(w.s))
        return best, True
    desc = sorted(w.s, reverse=True)
    candidates = [tuple(desc), tuple(sorted(w.s))]
    for a in range(w.m):
        for b in range(a + 1, w.m):
            order = list(desc)
            order[a], order[b] = order[b], order[a]
            candidates.append(tuple(order))
    return min(_chain_cost(p) for p in candidates), False


def bounds(w: WeightTuple) -> Bounds:
    """All cheap bounds for a normalized tuple."""
    perm, exhaustive = upper_bound_perm(w)
    return Bounds(
        lower=lower_bound(w),
        upper_perm=perm,
        upper_common_one=upper_bound_common_one(w),
        upper_power_two=upper_bound_power_two(w),
        perm_exhaustive=exhaustive,
    )


def partitions(s_hat: int, m: int) -> Iterator[tuple[int, ...]]:
    """Normalized partitions of s_hat into exactly m positive parts.

    Parts are nonincreasing, gcd 1, yielded in lexicographically descending
    order — a deterministic enumeration suitable for benchmarking sweeps.
    """
    if s_hat < 1 or m < 1:
        raise InvalidInputError(f"partitions require positive s_hat and m, got {s_hat}, {m}")

    def rec(remaining: int, parts_left: int, cap: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if parts_left == 1:
            if 1 <= remaining <= cap:
                parts = (*prefix, remaining)
                if math.gcd(*parts) == 1:
                    yield parts
            return
        lo = -(-remaining // parts_left)  # ceil: keep parts nonincreasing
        hi = min(cap, remaining - (parts_left - 1))
        for first in range(hi, lo - 1, -1):
            prefix.append(first)
            yield from rec(remaining - first, parts_left - 1, first, prefix)
            prefix.pop()

    yield from rec(s_hat, m, s_hat, [])


def count_partitions(s_hat: int, m: int) -> int:
    return sum(1 for _ in partitions(s_hat, m))
