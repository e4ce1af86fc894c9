"""Shared fixtures and independent checkers for the test suite."""

from __future__ import annotations

import pytest

from socrep import Configuration, WeightTuple, numeric_check, reconstruct


def sympy_feasible(w: WeightTuple, cfg: Configuration) -> bool:
    """Independent feasibility oracle via sympy's rational linear algebra.

    Builds the exponent-allocation system directly from its definition and
    decides consistency by comparing ranks, sharing no code with the package.
    """
    import sympy

    m, n = cfg.m, cfg.n
    A = sympy.zeros(m + n, n)
    for col, (i, j, t) in enumerate(cfg.triples):
        A[i - 1, col] += 1
        A[j - 1, col] += 1
        A[t - 1, col] -= 2
    b = sympy.zeros(m + n, 1)
    for v in range(m):
        b[v, 0] = w.s[v]
    b[m, 0] = -w.s_hat
    aug = A.row_join(b)
    return A.rank() == aug.rank()


def check_canonical_conditions(m: int, pair_rows: list[tuple[tuple[int, int], ...]]) -> None:
    """Assert every pair sequence satisfies the canonical-form conditions.

    Written straight from the definition, independent of the enumerator:
    (a) factors in range with i < j, never the constraint's own variable;
    (b) either both factors stay within the indices seen so far (plus one),
        or the pair is exactly the next two unseen indices;
    (c) pairs pairwise distinct and constraint variable-sets pairwise distinct;
    (d) the largest factor index must reach m+k+1 after step k (k < n);
    (e) every variable except m+1 appears as a factor somewhere.
    """
    for pairs in pair_rows:
        n = len(pairs)
        tbar = m + 1
        seen_pairs = set()
        seen_sets = set()
        factors = set()
        for k, (i, j) in enumerate(pairs, start=1):
            t = m + k
            assert 1 <= i < j <= m + n, f"factor out of range in {pairs}"
            assert i != t and j != t, f"constraint {k} uses its own variable in {pairs}"
            assert (i <= tbar and j <= tbar + 1) or (
                i == tbar + 1 and j == tbar + 2
            ), f"factors ({i},{j}) skip ahead of {tbar} in {pairs}"
            assert (i, j) not in seen_pairs, f"duplicate pair in {pairs}"
            seen_pairs.add((i, j))
            key = tuple(sorted((i, j, t)))
            assert key not in seen_sets, f"duplicate variable set in {pairs}"
            seen_sets.add(key)
            factors.update((i, j))
            tbar = max(tbar, j)
            if k <= n - 1:
                assert tbar >= m + k + 1, f"variable {m + k + 1} introduced late in {pairs}"
        required = set(range(1, m + 1)) | set(range(m + 2, m + n + 1))
        assert required <= factors, f"uncovered variables {required - factors} in {pairs}"


def assert_valid_chain(w: WeightTuple, cfg: Configuration) -> None:
    """A chain must survive both exact reconstruction and numeric sampling."""
    recon = reconstruct(w, cfg)
    assert recon.valid, f"reconstruction failed for {w.s}: {recon.reason}"
    num = numeric_check(w, cfg, trials=2)
    assert num.passed, f"numeric sampling failed for {w.s}: {num.failures[:3]}"


@pytest.fixture(scope="session")
def small_weight_tuples() -> list[WeightTuple]:
    """Every normalized nonincreasing tuple with 2 <= m <= 3 and s_hat <= 10."""
    from socrep import partitions

    out = []
    for m in (2, 3):
        for s_hat in range(2, 11):
            out.extend(WeightTuple(s) for s in partitions(s_hat, m))
    return out
