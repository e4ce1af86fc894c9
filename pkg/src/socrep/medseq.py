"""Averaging-closed point sets on an integer segment, and their binary trees.

For coprime integers 0 < q < p, a mediated sequence for (p, q) is a set of
integers strictly between 0 and p that contains q and in which every element
is the average of two distinct elements of the set extended by {0, p}.  Such a
set with k elements is exactly the 1-D case of a constraint chain of length k
bounding x^q y^(p-q) >= z^p, so minimal sequences give minimal chains for two
weights.  The constructive minimum here always has ceil(log2 p) elements,
which is optimal.

A sequence is *successive* when each element can be generated from its
predecessor: q_i = (q_{i-1} + t_i) / 2 with t_i drawn from {0, p, q} or an
earlier element.  Successive sequences correspond one-to-one with binary trees
(:class:`MedTree`) whose leaf heights satisfy two exact bit-sum identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import (
    Configuration,
    InternalCheckError,
    InvalidInputError,
    ceil_log2,
    parse_int,
)


@dataclass(frozen=True)
class MediatedSequence:
    """A mediated sequence for (p, q); points kept in generation order."""

    p: int
    q: int
    points: tuple[int, ...]

    def to_json(self) -> dict:
        return {"schema": "socrep-v1", "p": self.p, "q": self.q, "points": list(self.points)}


@dataclass(frozen=True)
class MedTree:
    """Binary tree of a successive sequence; leaves are labelled p or q."""

    label: int
    left: "MedTree | None" = None
    right: "MedTree | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None and self.right is None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "left": self.left.to_json() if self.left is not None else None,
            "right": self.right.to_json() if self.right is not None else None,
        }


def _validate_pq(p, q) -> tuple[int, int]:
    p = parse_int(p)
    q = parse_int(q)
    if not (0 < q < p):
        raise InvalidInputError(f"need 0 < q < p, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise InvalidInputError(f"p and q must be coprime, got gcd({p},{q}) = {math.gcd(p, q)}")
    return p, q


def minimum_sequence(p, q) -> MediatedSequence:
    """A mediated sequence for (p, q) of minimal size ceil(log2 p).

    Runs the halving construction: the bookkeeping vector s starts at
    (q, p-q, 2^l - p) and always carries exactly two odd entries; each round
    averages the tracked endpoints of the two odd slots, halves the residuals,
    and emits one new point.  The final point is q itself.
    """
    p, q = _validate_pq(p, q)
    l = ceil_log2(p)
    s = [q, p - q, (1 << l) - p]
    t = [p, 0, q]
    points: list[int] = []
    seen: set[int] = set()
    for _ in range(l):
        odds = [idx for idx in range(3) if s[idx] & 1]
        if len(odds) != 2:
            raise InternalCheckError(f"odd-slot invariant broken for (p={p}, q={q}): s={s}")
        a, b = odds
        i, j = (a, b) if s[a] <= s[b] else (b, a)
        if (t[i] + t[j]) & 1:
            raise InternalCheckError(f"non-integer midpoint for (p={p}, q={q}): t={t}")
        qk = (t[i] + t[j]) // 2
        if qk in seen or not (0 < qk < p):
            raise InternalCheckError(f"degenerate point {qk} generated for (p={p}, q={q})")
        seen.add(qk)
        points.append(qk)
        t[i] = qk
        s[j] = (s[j] - s[i]) // 2
        r = 3 - i - j
        s[r] //= 2
    if points[-1] != q:
        raise InternalCheckError(f"construction for (p={p}, q={q}) ended at {points[-1]}, not q")
    return MediatedSequence(p, q, tuple(points))


def is_mediated_sequence(points: Sequence[int], p, q) -> bool:
    """Check the defining property: q is present and every point is an average
    of two distinct elements of points ∪ {0, p}.

    Malformed point lists (duplicates, values outside the open segment) fail
    the property and return False rather than raising; only 0 < q < p is a
    hard precondition."""
    p = parse_int(p)
    q = parse_int(q)
    if not 0 < q < p:
        raise InvalidInputError(f"need 0 < q < p, got p={p}, q={q}")
    pts = [parse_int(x) for x in points]
    if len(set(pts)) != len(pts):
        return False
    if any(not 0 < x < p for x in pts):
        return False
    if q not in pts:
        return False
    members = set(pts) | {0, p}
    return all(
        any((2 * a - u) in members and (2 * a - u) != u for u in members) for a in pts
    )


def enumerate_successive(
    p, q, limit: int = 1000, max_nodes: int = 2_000_000
) -> tuple[list[MediatedSequence], bool]:
    """All successive mediated sequences for odd coprime (p, q), in a fixed order.

    At each stage the generator t_i is tried in the order 0, p, q, then earlier
    elements oldest-first.  Partial chains are pruned with two exact leaf-sum
    counters (a_i, b_i) that satisfy 2^i * q_i = a_i * p + b_i * q and must
    finish at exactly (q, 2^l - p).  Returns (sequences, exhaustive);
    exhaustive is False when the result limit or the node budget was hit.
    """
    p, q = _validate_pq(p, q)
    if p % 2 == 0 or q % 2 == 0:
        raise InvalidInputError(
            f"successive enumeration needs odd p and q, got p={p}, q={q}"
        )
    l = ceil_log2(p)  # odd p >= 3, so l >= 2
    out: list[MediatedSequence] = []
    q1 = (p + q) // 2  # odd + odd is even; the only integer-valued first element
    if l == 1:
        raise InternalCheckError(f"unreachable: odd p={p} with ceil(log2 p) < 2")
    chain = [q1]
    avals = [1]
    bvals = [1]
    b_target = (1 << l) - p
    nodes = 0
    truncated = False

    def rec(i: int) -> bool:
        """DFS over generator choices for stage i+1 (building chain[i])."""
        nonlocal nodes, truncated
        if truncated:
            return False
        nodes += 1
        if nodes > max_nodes:
            truncated = True
            return False
        prev = chain[i - 1]
        stage = i + 1  # 1-based index of the element being generated
        candidates: list[tuple[int, int, int]] = [
            (0, 0, 0),
            (p, 1 << (stage - 1), 0),
            (q, 0, 1 << (stage - 1)),
        ]
        for jdx in range(i - 1):
            shift = stage - 1 - (jdx + 1)
            candidates.append((chain[jdx], avals[jdx] << shift, bvals[jdx] << shift))
        for tval, da, db in candidates:
            tot = prev + tval
            if tot & 1:
                continue
            qi = tot // 2
            if not (0 < qi < p) or qi in chain:
                continue
            na = avals[i - 1] + da
            nb = bvals[i - 1] + db
            if na > q or nb > b_target:
                continue
            if (qi << stage) != na * p + nb * q:
                raise InternalCheckError(f"leaf-sum counters out of sync at {qi} for ({p},{q})")
            chain.append(qi)
            avals.append(na)
            bvals.append(nb)
            if stage == l:
                if qi == q:
                    if na != q or nb != b_target:
                        raise InternalCheckError(
                            f"final counters ({na},{nb}) wrong for ({p},{q})"
                        )
                    out.append(MediatedSequence(p, q, tuple(chain)))
                    if len(out) >= limit:
                        chain.pop(); avals.pop(); bvals.pop()
                        truncated = True
                        return False
            else:
                if not rec(i + 1):
                    chain.pop(); avals.pop(); bvals.pop()
                    return False
            chain.pop()
            avals.pop()
            bvals.pop()
        return True

    rec(1)
    return out, not truncated


def build_tree(seq: MediatedSequence) -> MedTree:
    """Binary tree of a successive sequence.

    Element i is the root of a tree whose left child is the tree of element
    i-1 and whose right child encodes the generator: absent for t=0, a leaf
    for t in {p, q}, or a copy (shared immutable node) of an earlier element's
    tree.  Raises when the sequence is not successive.
    """
    p, q = seq.p, seq.q
    pts = seq.points
    if not pts:
        raise InvalidInputError("cannot build a tree from an empty sequence")
    if pts[-1] != q:
        raise InvalidInputError(f"sequence must end at q={q}, got {pts[-1]}")
    leaf_p = MedTree(p)
    leaf_q = MedTree(q)
    by_value: dict[int, MedTree] = {}
    node: MedTree | None = None
    for i, qi in enumerate(pts, start=1):
        if i == 1:
            if 2 * qi == p + q:
                node = MedTree(qi, leaf_p, leaf_q)
            elif 2 * qi == p:
                node = MedTree(qi, leaf_p, None)
            elif 2 * qi == q:
                node = MedTree(qi, leaf_q, None)
            else:
                raise InvalidInputError(
                    f"element {qi} is not generated from p, q, or a half: sequence not successive"
                )
        else:
            t = 2 * qi - pts[i - 2]
            if t == 0:
                node = MedTree(qi, node, None)
            elif t == p:
                node = MedTree(qi, node, leaf_p)
            elif t == q:
                node = MedTree(qi, node, leaf_q)
            elif t in by_value:
                node = MedTree(qi, node, by_value[t])
            else:
                raise InvalidInputError(
                    f"element {qi} needs generator {t}, which is not available: sequence not successive"
                )
        by_value[qi] = node
    return node


def leaf_heights(tree: MedTree) -> tuple[int, list[tuple[int, int]]]:
    """Tree height l and (label, height) for every leaf, height = l - depth."""
    stack = [(tree, 0)]
    leaves: list[tuple[int, int]] = []
    max_depth = 0
    while stack:
        node, depth = stack.pop()
        if node.is_leaf:
            leaves.append((node.label, depth))
            if depth > max_depth:
                max_depth = depth
        else:
            if node.left is not None:
                stack.append((node.left, depth + 1))
            if node.right is not None:
                stack.append((node.right, depth + 1))
    return max_depth, [(label, max_depth - depth) for label, depth in leaves]


def tree_leaf_sums(tree: MedTree, p: int, q: int) -> tuple[int, int, int]:
    """(l, sum of 2^height over p-leaves, same over q-leaves).

    For the tree of a successive sequence these sums are exactly q and
    2^l - p — the bit-level certificate that the tree realizes (p, q).
    """
    l, leaves = leaf_heights(tree)
    sum_p = sum(1 << h for label, h in leaves if label == p)
    sum_q = sum(1 << h for label, h in leaves if label == q)
    for label, _ in leaves:
        if label not in (p, q):
            raise InvalidInputError(f"leaf labelled {label}; expected only {p} or {q}")
    return l, sum_p, sum_q


def pow2_trivariate(s1, s2, s3) -> Configuration:
    """Minimal chain for three weights summing to a power of two.

    Runs the same two-odd-slot halving loop as :func:`minimum_sequence`, but
    the tracked endpoints are variable indices: each round pairs the two odd
    slots into a fresh constraint.  The resulting chain has exactly
    log2(s1+s2+s3) constraints, matching the lower bound.
    """
    vals = [parse_int(s1), parse_int(s2), parse_int(s3)]
    if any(v < 1 for v in vals):
        raise InvalidInputError(f"weights must be positive, got {vals}")
    if math.gcd(*vals) != 1:
        raise InvalidInputError(f"weights must be normalized (gcd 1), got {vals}")
    shat = sum(vals)
    l = ceil_log2(shat)
    if (1 << l) != shat:
        raise InvalidInputError(f"weights must sum to a power of two, got {shat}")
    s = vals[:]
    t = [1, 2, 3]
    raw: list[tuple[int, int, int]] = []
    next_fresh = 5  # generation-time labels for auxiliaries; renumbered below
    gen_labels: list[int] = []
    for k in range(1, l + 1):
        odds = [idx for idx in range(3) if s[idx] & 1]
        if len(odds) != 2:
            raise InternalCheckError(f"odd-slot invariant broken: s={s}")
        a, b = odds
        i, j = (a, b) if s[a] <= s[b] else (b, a)
        if k == l:
            new_var = 4
        else:
            new_var = next_fresh
            next_fresh += 1
            gen_labels.append(new_var)
        raw.append((t[i], t[j], new_var))
        t[i] = new_var
        s[j] = (s[j] - s[i]) // 2
        r = 3 - i - j
        s[r] //= 2
    # auxiliaries generated k-th from last get the lowest final indices:
    # generation k (1-based, k < l) becomes variable 4 + (l - k).
    remap = {label: 4 + (l - (idx + 1)) for idx, label in enumerate(gen_labels)}
    triples = [
        (remap.get(i, i), remap.get(j, j), remap.get(tv, tv)) for i, j, tv in raw
    ]
    return Configuration.from_raw_triples(3, triples)


def iter_tree_nodes(tree: MedTree) -> Iterator[MedTree]:
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        if node.left is not None:
            stack.append(node.left)
        if node.right is not None:
            stack.append(node.right)
