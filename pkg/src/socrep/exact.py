"""Exhaustive chain enumeration, rational feasibility, and optimal search.

A chain shape for (m, n) is a canonical sequence of factor pairs; feasibility
of a shape against a weight tuple asks whether the linear exponent system has
a rational solution, in which case the shape certifies the weighted inequality.
The minimal chain length is found by scanning shapes in a fixed enumeration
order for increasing n and returning the first feasible one — deterministic
across backends.

Fast scans run on int64 kernels inside a proven overflow envelope (factor
columns of the eliminated system have norm at most sqrt(6), so intermediate
products stay below 2^62 whenever s_hat <= 2^62 / (4 * 6^n * (m+n+1))); larger
instances automatically use arbitrary-precision Python integers.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .core import (
    Configuration,
    InternalCheckError,
    InvalidInputError,
    SearchBudgetError,
    WeightTuple,
    bounds,
    lower_bound,
)

CATALOG_MAGIC = b"TMN1"
CATALOG_MAX_ENTRIES = 5_000_000
_MATERIALIZE_MAX_N = 6

_count_cache: dict[tuple[int, int], int] = {}
_catalog_cache: dict[tuple[int, int], np.ndarray] = {}


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    gamma: tuple[Fraction, ...] | None
    strict_feasible: bool | None = None


@dataclass(frozen=True)
class OptimalResult:
    config: Configuration
    gamma: tuple[Fraction, ...]
    scanned: int  # shapes examined at the winning chain length

    @property
    def size(self) -> int:
        return self.config.n


def _check_mn(m: int, n: int) -> None:
    if m < 2:
        raise InvalidInputError(f"enumeration needs m >= 2, got m={m}")
    if n < 1:
        raise InvalidInputError(f"enumeration needs n >= 1, got n={n}")
    if m + n + 2 > 0x7FFF:
        raise InvalidInputError(f"m+n too large for 16-bit storage: {m + n}")


def int64_envelope(m: int, n: int, s_hat: int) -> bool:
    """True when the int64 elimination kernel provably cannot overflow."""
    if n > 20:
        return False
    return s_hat <= (1 << 62) // (4 * 6**n * (m + n + 1))


def count_configs(m: int, n: int) -> int:
    """Number of canonical chain shapes for (m, n)."""
    _check_mn(m, n)
    key = (m, n)
    if key not in _count_cache:
        ker = _kernels.get_kernels()
        dummy_s = np.zeros(m, np.int64)
        dummy_pairs = np.zeros((1, n, 2), np.int16)
        dummy_first = np.zeros((n, 2), np.int64)
        _count_cache[key] = int(
            ker.enum_core(m, n, _kernels.MODE_COUNT, dummy_s, 0, dummy_pairs, dummy_first)
        )
    return _count_cache[key]


def catalog(m: int, n: int) -> np.ndarray:
    """All canonical shapes for (m, n) as an int16 array of shape (count, n, 2)."""
    _check_mn(m, n)
    key = (m, n)
    if key not in _catalog_cache:
        count = count_configs(m, n)
        if count > CATALOG_MAX_ENTRIES:
            raise InvalidInputError(
                f"catalog for ({m},{n}) has {count} shapes; too large to materialize "
                f"(limit {CATALOG_MAX_ENTRIES}) — iterate or count instead"
            )
        ker = _kernels.get_kernels()
        pairs = np.zeros((count, n, 2), np.int16)
        dummy_s = np.zeros(m, np.int64)
        dummy_first = np.zeros((n, 2), np.int64)
        filled = int(ker.enum_core(m, n, _kernels.MODE_FILL, dummy_s, 0, pairs, dummy_first))
        if filled != count:
            raise InternalCheckError(f"catalog fill count {filled} != {count} for ({m},{n})")
        _catalog_cache[key] = pairs
    return _catalog_cache[key]


def _iter_pairs_py(m: int, n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Reference generator for canonical shapes, same order as the kernels.

    Recursive and unhurried; used for streaming very large (m, n) and as an
    independent cross-check of the kernel enumeration in the tests.
    """
    mn = m + n
    used_pairs: set[tuple[int, int]] = set()
    used_sets: set[tuple[int, int, int]] = set()
    cnt = [0] * (mn + 2)
    missing0 = mn - 1

    def candidates(tprev: int, tv: int) -> Iterator[tuple[int, int]]:
        jmax = min(tprev + 1, mn)
        for i in range(1, tprev + 1):
            if i == tv:
                continue
            for j in range(i + 1, jmax + 1):
                if j != tv:
                    yield i, j
        if tprev + 2 <= mn:
            yield tprev + 1, tprev + 2

    def rec(k: int, tprev: int, missing: int, acc: list[tuple[int, int]]):
        tv = m + k + 1
        for i, j in candidates(tprev, tv):
            if k <= n - 2 and max(tprev, j) < m + k + 2:
                continue
            if (i, j) in used_pairs:
                continue
            trip = tuple(sorted((i, j, tv)))
            if trip in used_sets:
                continue
            newcov = (1 if i != m + 1 and cnt[i] == 0 else 0) + (
                1 if j != m + 1 and cnt[j] == 0 else 0
            )
            if missing - newcov > 2 * (n - k - 1):
                continue
            used_pairs.add((i, j))
            used_sets.add(trip)
            cnt[i] += 1
            cnt[j] += 1
            acc.append((i, j))
            if k == n - 1:
                if missing - newcov == 0:
                    yield tuple(acc)
            else:
                yield from rec(k + 1, max(tprev, j), missing - newcov, acc)
            acc.pop()
            cnt[i] -= 1
            cnt[j] -= 1
            used_pairs.discard((i, j))
            used_sets.discard(trip)

    yield from rec(0, m + 1, missing0, [])


def iter_configs(m: int, n: int) -> Iterator[Configuration]:
    """Canonical shapes as Configuration objects, in enumeration order."""
    _check_mn(m, n)
    small = n <= _MATERIALIZE_MAX_N and count_configs(m, n) <= CATALOG_MAX_ENTRIES
    if (m, n) in _catalog_cache or small:
        pairs = catalog(m, n)
        for idx in range(pairs.shape[0]):
            yield Configuration.from_pairs(m, pairs[idx].tolist())
    else:
        for shape in _iter_pairs_py(m, n):
            yield Configuration.from_pairs(m, shape)


# ---------------------------------------------------------------------------
# catalog files


def store_catalog(path, m: int, n: int) -> int:
    """Write the (m, n) catalog to a checksummed binary file; returns the count.

    Layout, little-endian: magic "TMN1"; u64 m, n, count; count*n (i, j) pairs
    as u16 each; u64 blake2b-8 checksum of everything before it.
    """
    pairs = catalog(m, n)
    count = pairs.shape[0]
    body = bytearray()
    body += CATALOG_MAGIC
    body += struct.pack("<QQQ", m, n, count)
    body += pairs.astype("<u2").tobytes()
    digest = hashlib.blake2b(bytes(body), digest_size=8).digest()
    with open(path, "wb") as fh:
        fh.write(bytes(body))
        fh.write(digest)
    return count


def load_catalog(path) -> tuple[int, int, np.ndarray]:
    """Read a catalog file, verifying structure and checksum; returns (m, n, pairs)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 4 + 24 + 8:
        raise InvalidInputError(
            f"catalog file truncated: {len(blob)} bytes, need at least {4 + 24 + 8}"
        )
    if blob[:4] != CATALOG_MAGIC:
        raise InvalidInputError(
            f"bad catalog magic at offset 0: {blob[:4]!r}, expected {CATALOG_MAGIC!r}"
        )
    m, n, count = struct.unpack_from("<QQQ", blob, 4)
    payload_end = 4 + 24 + count * n * 2 * 2
    expected_len = payload_end + 8
    if len(blob) != expected_len:
        raise InvalidInputError(
            f"catalog file has {len(blob)} bytes, expected {expected_len} "
            f"(payload ends at offset {payload_end})"
        )
    digest = hashlib.blake2b(blob[:payload_end], digest_size=8).digest()
    if digest != blob[payload_end:]:
        raise InvalidInputError(
            f"catalog checksum mismatch at offset {payload_end}: "
            f"stored {blob[payload_end:].hex()}, computed {digest.hex()}"
        )
    pairs = np.frombuffer(blob, dtype="<u2", offset=28, count=count * n * 2)
    pairs = pairs.astype(np.int16).reshape(int(count), int(n), 2)
    return int(m), int(n), pairs


# ---------------------------------------------------------------------------
# feasibility


def _system_rows(cfg: Configuration, s: Sequence[int]) -> tuple[list[list[int]], list[int]]:
    """Integer matrix A and right side b of the exponent system A*gamma = b."""
    m, n = cfg.m, cfg.n
    shat = sum(s)
    A = [[0] * n for _ in range(m + n)]
    for col, (i, j, _) in enumerate(cfg.triples):
        A[i - 1][col] += 1
        A[j - 1][col] += 1
    A[m][0] -= 2
    for k in range(1, n):
        A[m + k][k] -= 2
    b = [0] * (m + n)
    for v in range(m):
        b[v] = s[v]
    b[m] = -shat
    return A, b


def _solve_rational(A: list[list[int]], b: list[int]) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """General rational solution of A x = b: (particular, nullspace basis), or None.

    Plain Gauss-Jordan over Fraction; the particular solution sets every free
    variable to zero.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [[Fraction(A[r][c]) for c in range(cols)] + [Fraction(b[r])] for r in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((rr for rr in range(r, rows) if M[rr][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for rr in range(rows):
            if rr != r and M[rr][c] != 0:
                f = M[rr][c]
                M[rr] = [x - f * y for x, y in zip(M[rr], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if M[rr][cols] != 0:
            return None
    particular = [Fraction(0)] * cols
    for prow, pc in enumerate(pivots):
        particular[pc] = M[prow][cols]
    free = [c for c in range(cols) if c not in pivots]
    basis: list[list[Fraction]] = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for prow, pc in enumerate(pivots):
            vec[pc] = -M[prow][fc]
        basis.append(vec)
    return particular, basis


def _nonneg_solution_exists(particular: list[Fraction], basis: list[list[Fraction]]) -> bool:
    """Whether x0 + span(basis) meets the nonnegative orthant (exact elimination)."""
    if not basis:
        return all(x >= 0 for x in particular)
    # Constraints: for each coordinate r, x0[r] + sum_d lam[d] * basis[d][r] >= 0.
    # Eliminate lam variables one at a time (Fourier-Motzkin).
    d = len(basis)
    ineqs = []  # (coeffs over lam, const): coeffs . lam + const >= 0
    for r in range(len(particular)):
        ineqs.append(([basis[k][r] for k in range(d)], particular[r]))
    for var in range(d):
        pos, neg, zero = [], [], []
        for coeffs, const in ineqs:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, const))
            elif c < 0:
                neg.append((coeffs, const))
            else:
                zero.append((coeffs, const))
        new = list(zero)
        for cp, kp in pos:
            for cn, kn in neg:
                # lam >= -(...)/cp from pos, lam <= (...)/(-cn) from neg; combine
                scale_p, scale_n = -cn[var], cp[var]
                coeffs = [scale_p * a + scale_n * b2 for a, b2 in zip(cp, cn)]
                const = scale_p * kp + scale_n * kn
                coeffs[var] = Fraction(0)
                new.append((coeffs, const))
        ineqs = new
    return all(const >= 0 for _, const in ineqs)


def feasible(w: WeightTuple, cfg: Configuration, strict: bool = False) -> FeasibilityResult:
    """Rational consistency of the exponent system, with a witness when feasible.

    With strict=True additionally reports whether a componentwise nonnegative
    witness exists (slower; exact).
    """
    if cfg.m != w.m:
        raise InvalidInputError(f"configuration has m={cfg.m}, weights have m={w.m}")
    A, b = _system_rows(cfg, w.s)
    sol = _solve_rational(A, b)
    if sol is None:
        return FeasibilityResult(False, None, False if strict else None)
    particular, basis = sol
    strict_ok = _nonneg_solution_exists(particular, basis) if strict else None
    return FeasibilityResult(True, tuple(particular), strict_ok)


def _consistent_bigint(shape: Sequence[tuple[int, int]], m: int, s: Sequence[int]) -> bool:
    """Arbitrary-precision mirror of the kernel consistency test."""
    n = len(shape)
    shat = sum(s)
    M = [[0] * (n + 1) for _ in range(m + n)]
    for col, (i, j) in enumerate(shape):
        M[i - 1][col] += 1
        M[j - 1][col] += 1
    M[m][0] -= 2
    for k in range(1, n):
        M[m + k][k] -= 2
    for v in range(m):
        M[v][n] = s[v]
    M[m][n] = -shat
    rows = m + n
    piv = 0
    prev = 1
    for c in range(n):
        pr = next((r for r in range(piv, rows) if M[r][c] != 0), None)
        if pr is None:
            continue
        M[piv], M[pr] = M[pr], M[piv]
        p = M[piv][c]
        for r in range(piv + 1, rows):
            f = M[r][c]
            row = M[r]
            prow = M[piv]
            for cc in range(c + 1, n + 1):
                row[cc] = (p * row[cc] - f * prow[cc]) // prev
            row[c] = 0
        prev = p
        piv += 1
    return all(M[r][n] == 0 for r in range(piv, rows))


def scan_first_feasible(w: WeightTuple, n: int) -> tuple[int, Configuration] | None:
    """First feasible shape of length n in enumeration order, or None.

    Uses the streaming int64 kernel inside the overflow envelope, otherwise an
    arbitrary-precision scan; both walk the identical order.
    """
    m = w.m
    _check_mn(m, n)
    if int64_envelope(m, n, w.s_hat):
        ker = _kernels.get_kernels()
        s_arr = np.asarray(w.s, np.int64)
        dummy_pairs = np.zeros((1, n, 2), np.int16)
        first = np.zeros((n, 2), np.int64)
        idx = int(
            ker.enum_core(
                m, n, _kernels.MODE_FIRST_FEASIBLE, s_arr, w.s_hat, dummy_pairs, first
            )
        )
        if idx < 0:
            return None
        return idx, Configuration.from_pairs(m, first.tolist())
    for idx, shape in enumerate(_iter_pairs_py(m, n)):
        if _consistent_bigint(shape, m, w.s):
            return idx, Configuration.from_pairs(m, shape)
    return None


def brute_force(w: WeightTuple, cap: int | None = None) -> OptimalResult:
    """Minimal-length feasible chain by exhaustive scan over increasing n.

    Starts at the lower bound and by default stops at the constructive upper
    bound, which is always attainable; an explicit smaller cap raises
    SearchBudgetError when exhausted.
    """
    w.require_normalized("optimal search")
    if w.m < 2:
        raise InvalidInputError(f"optimal search needs at least two weights, got {tuple(w.s)}")
    n0 = lower_bound(w)
    ub = bounds(w).upper
    cap_eff = cap if cap is not None else ub
    if cap_eff < n0:
        raise SearchBudgetError(f"cap {cap_eff} is below the lower bound {n0}")
    for n in range(n0, cap_eff + 1):
        hit = scan_first_feasible(w, n)
        if hit is not None:
            idx, cfg = hit
            check = feasible(w, cfg)
            if not check.feasible or check.gamma is None:
                raise InternalCheckError(
                    f"scan and exact feasibility disagree on {cfg.triples} for {tuple(w.s)}"
                )
            return OptimalResult(cfg, check.gamma, idx + 1)
    if cap is not None and cap_eff < ub:
        raise SearchBudgetError(
            f"no chain of length <= {cap_eff} found for {tuple(w.s)}; "
            f"the constructive upper bound is {ub}"
        )
    raise InternalCheckError(
        f"no feasible chain for {tuple(w.s)} within the constructive upper bound {ub}"
    )


def clear_caches() -> None:
    _count_cache.clear()
    _catalog_cache.clear()
