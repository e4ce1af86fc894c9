"""Hot integer kernels with optional numba acceleration.

The search loops below are written in a restricted Python style that numba's
nopython mode accepts.  :func:`build` instantiates the whole kernel family
either uncompiled (pure backend) or jit-compiled (numba backend); the active
backend is chosen per call from the ``SOCREP_PURE`` environment variable, with
an automatic fallback to pure when numba is not importable.

Kernels operate on fixed-width int64 arithmetic.  Callers are responsible for
keeping values inside the documented overflow envelope and must route larger
instances to the arbitrary-precision paths in :mod:`socrep.exact`.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAS_NUMBA = False
    _njit = None

ENV_FLAG = "SOCREP_PURE"

#: enum_core modes
MODE_COUNT = 0
MODE_FILL = 1
MODE_FIRST_FEASIBLE = 2


def build(jit):
    """Instantiate the kernel family, wrapping each function with ``jit``."""

    def consistent(pairs, m, n, s, shat):
        """Whether the exponent system of one constraint chain has a rational solution.

        ``pairs`` is int64[n, 2] of 1-based factor indices for targets
        ``m+1 .. m+n``; ``s`` is int64[m].  Unknowns are the per-constraint
        multipliers; row v <= m demands the multipliers incident to variable v
        sum to s[v], the row for variable m+1 demands -shat, and rows for the
        auxiliaries demand 0 (each auxiliary consumes twice what its defining
        constraint produces).  Consistency is checked by fraction-free row
        elimination (all divisions below are exact).
        """
        rows = m + n
        cols = n + 1
        M = np.zeros((rows, cols), np.int64)
        for t in range(n):
            M[pairs[t, 0] - 1, t] += 1
            M[pairs[t, 1] - 1, t] += 1
        M[m, 0] -= 2
        for k in range(1, n):
            M[m + k, k] -= 2
        for v in range(m):
            M[v, n] = s[v]
        M[m, n] = -shat

        piv = 0
        prev = np.int64(1)
        for c in range(n):
            pr = -1
            for r in range(piv, rows):
                if M[r, c] != 0:
                    pr = r
                    break
            if pr < 0:
                continue
            if pr != piv:
                for cc in range(c, cols):
                    tmp = M[piv, cc]
                    M[piv, cc] = M[pr, cc]
                    M[pr, cc] = tmp
            p = M[piv, c]
            for r in range(piv + 1, rows):
                f = M[r, c]
                for cc in range(c + 1, cols):
                    M[r, cc] = (p * M[r, cc] - f * M[piv, cc]) // prev
                M[r, c] = 0
            prev = p
            piv += 1
        for r in range(piv, rows):
            if M[r, n] != 0:
                return False
        return True

    def next_pair(i, j, tprev, mn):
        """Advance the candidate factor pair at one chain position.

        Candidates are all (a, b) with a < b, a <= tprev, b <= min(tprev+1, mn)
        in lexicographic order, followed by the expansion pair
        (tprev+1, tprev+2) when it fits.  (0, 0) requests the first candidate
        and signals exhaustion on return.
        """
        jmax = tprev + 1
        if jmax > mn:
            jmax = mn
        if i == 0:
            if 2 <= jmax:
                return 1, 2
            if tprev + 2 <= mn:
                return tprev + 1, tprev + 2
            return 0, 0
        if i == tprev + 1:
            return 0, 0
        j += 1
        if j <= jmax:
            return i, j
        i += 1
        if i <= tprev and i + 1 <= jmax:
            return i, i + 1
        if tprev + 2 <= mn:
            return tprev + 1, tprev + 2
        return 0, 0

    def enum_core(m, n, mode, s, shat, out_pairs, first_out):
        """Walk all canonical constraint chains for (m, n) in a fixed order.

        mode 0: count them; mode 1: also copy each into ``out_pairs``;
        mode 2: test each for rational consistency against weights ``s`` and
        stop at the first hit, copying it into ``first_out``.

        Returns the count (modes 0/1), or the index of the first consistent
        chain / -1 (mode 2).

        A chain is canonical when: every position k has factors i < j, neither
        equal to its own target m+k; no factor pair repeats and no triple
        {i, j, target} repeats as a set; all of 1..m and m+2..m+n appear as a
        factor somewhere; the running factor maximum tbar (seeded with m+1)
        satisfies max(tbar, j_k) >= m+k+1 for k < n; and each pair either stays
        within [1, tbar+1] or is exactly (tbar+1, tbar+2).  These rules admit
        exactly one representative per relabeling class of auxiliaries.
        """
        mn = m + n
        total = np.int64(0)
        pi = np.zeros(n, np.int64)
        pj = np.zeros(n, np.int64)
        tb = np.zeros(n + 1, np.int64)
        tb[0] = m + 1
        st = np.zeros((n, 3), np.int64)
        cnt = np.zeros(mn + 3, np.int64)
        pairs_buf = np.zeros((n, 2), np.int64)
        missing = np.int64(mn - 1)

        k = 0
        pi[0] = 0
        pj[0] = 0
        while k >= 0:
            tprev = tb[k]
            tv = m + k + 1
            i = pi[k]
            j = pj[k]
            a0 = np.int64(0)
            a1 = np.int64(0)
            a2 = np.int64(0)
            accepted = False
            while True:
                i, j = next_pair(i, j, tprev, mn)
                if i == 0:
                    break
                if i == tv or j == tv:
                    continue
                if k <= n - 2:
                    mx = tprev
                    if j > mx:
                        mx = j
                    if mx < m + k + 2:
                        continue
                dup = False
                for c in range(k):
                    if pi[c] == i and pj[c] == j:
                        dup = True
                        break
                if dup:
                    continue
                # sorted candidate triple for set-distinctness
                a0 = i
                a1 = j
                a2 = tv
                if a1 > a2:
                    tmp = a1
                    a1 = a2
                    a2 = tmp
                if a0 > a1:
                    tmp = a0
                    a0 = a1
                    a1 = tmp
                if a1 > a2:
                    tmp = a1
                    a1 = a2
                    a2 = tmp
                for c in range(k):
                    if st[c, 0] == a0 and st[c, 1] == a1 and st[c, 2] == a2:
                        dup = True
                        break
                if dup:
                    continue
                newcov = 0
                if i != m + 1 and cnt[i] == 0:
                    newcov += 1
                if j != m + 1 and cnt[j] == 0:
                    newcov += 1
                if missing - newcov > 2 * (n - k - 1):
                    continue
                accepted = True
                break
            if not accepted:
                k -= 1
                if k >= 0:
                    oi = pi[k]
                    oj = pj[k]
                    cnt[oi] -= 1
                    if cnt[oi] == 0 and oi != m + 1:
                        missing += 1
                    cnt[oj] -= 1
                    if cnt[oj] == 0 and oj != m + 1:
                        missing += 1
                continue
            pi[k] = i
            pj[k] = j
            st[k, 0] = a0
            st[k, 1] = a1
            st[k, 2] = a2
            cnt[i] += 1
            if cnt[i] == 1 and i != m + 1:
                missing -= 1
            cnt[j] += 1
            if cnt[j] == 1 and j != m + 1:
                missing -= 1
            if k == n - 1:
                if missing == 0:
                    if mode == MODE_COUNT:
                        total += 1
                    elif mode == MODE_FILL:
                        for q in range(n):
                            out_pairs[total, q, 0] = pi[q]
                            out_pairs[total, q, 1] = pj[q]
                        total += 1
                    else:
                        for q in range(n):
                            pairs_buf[q, 0] = pi[q]
                            pairs_buf[q, 1] = pj[q]
                        if consistent(pairs_buf, m, n, s, shat):
                            for q in range(n):
                                first_out[q, 0] = pi[q]
                                first_out[q, 1] = pj[q]
                            return total
                        total += 1
                cnt[i] -= 1
                if cnt[i] == 0 and i != m + 1:
                    missing += 1
                cnt[j] -= 1
                if cnt[j] == 0 and j != m + 1:
                    missing += 1
                continue
            tb[k + 1] = tprev if tprev > j else j
            k += 1
            pi[k] = 0
            pj[k] = 0
        if mode == MODE_FIRST_FEASIBLE:
            return np.int64(-1)
        return total

    def feas_batch(pairs, m, s, shat, out):
        """Consistency verdict for every stored chain; pairs is int16[count, n, 2]."""
        count = pairs.shape[0]
        n = pairs.shape[1]
        buf = np.zeros((n, 2), np.int64)
        for idx in range(count):
            for q in range(n):
                buf[q, 0] = pairs[idx, q, 0]
                buf[q, 1] = pairs[idx, q, 1]
            if consistent(buf, m, n, s, shat):
                out[idx] = 1
            else:
                out[idx] = 0
        return count

    def mediated_scan(p, k, out):
        """Mark every value that belongs to some size-k averaging-closed subset.

        A subset S of {1..p-1} qualifies when each member is the average of two
        distinct elements of S ∪ {0, p}.  For each qualifying S all members are
        flagged in ``out`` (uint8[p+1]).  Subsets are walked in lexicographic
        order with an incrementally maintained membership table.
        """
        nvals = p - 1
        if k < 1 or k > nvals:
            return np.int64(0)
        c = np.zeros(k, np.int64)
        in_set = np.zeros(2 * p + 2, np.uint8)
        for t in range(k):
            c[t] = t + 1
            in_set[t + 1] = 1
        in_set[0] = 1
        in_set[p] = 1
        checked = np.int64(0)
        while True:
            checked += 1
            ok = True
            for idx in range(k):
                a = c[idx]
                found = False
                v = 2 * a  # partner 0
                if v <= p and in_set[v] == 1 and v != 0:
                    found = True
                if not found:
                    v = 2 * a - p  # partner p
                    if v >= 0 and v != p and in_set[v] == 1:
                        found = True
                if not found:
                    for t in range(k):
                        u = c[t]
                        if u == a:
                            continue
                        v = 2 * a - u
                        if 0 <= v <= p and v != u and in_set[v] == 1:
                            found = True
                            break
                if not found:
                    ok = False
                    break
            if ok:
                for idx in range(k):
                    out[c[idx]] = 1
            pos = k - 1
            while pos >= 0 and c[pos] == nvals - k + 1 + pos:
                pos -= 1
            if pos < 0:
                break
            for t in range(pos, k):
                in_set[c[t]] = 0
            c[pos] += 1
            in_set[c[pos]] = 1
            for t in range(pos + 1, k):
                c[t] = c[t - 1] + 1
                in_set[c[t]] = 1
        return checked

    if jit is not None:
        consistent = jit(consistent)
        next_pair = jit(next_pair)
        enum_core = jit(enum_core)
        feas_batch = jit(feas_batch)
        mediated_scan = jit(mediated_scan)

    return SimpleNamespace(
        consistent=consistent,
        next_pair=next_pair,
        enum_core=enum_core,
        feas_batch=feas_batch,
        mediated_scan=mediated_scan,
    )


_PURE = build(None)
_NUMBA = None


def pure_requested() -> bool:
    return os.environ.get(ENV_FLAG, "").strip() not in {"", "0"}


def backend_name() -> str:
    """Backend the next kernel call will use: "numba" or "pure"."""
    return "pure" if pure_requested() or not HAS_NUMBA else "numba"


def get_kernels(pure: bool | None = None) -> SimpleNamespace:
    """Kernel namespace for the requested backend (default: per environment)."""
    global _NUMBA
    if pure is None:
        pure = pure_requested() or not HAS_NUMBA
    if pure:
        return _PURE
    if not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    if _NUMBA is None:
        _NUMBA = build(_njit)
    return _NUMBA
