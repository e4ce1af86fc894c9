"""Independent validation of constraint chains.

:func:`reconstruct` places the original variables at the corners of a scaled
simplex (variable i at s_hat * e_i for i < m, variable m at the origin) and
solves the exact linear system that pins every chained variable at the
midpoint of its two factors.  A chain is valid when the system is uniquely
solvable, every solved point stays inside the closed simplex, and the bound
variable m+1 lands exactly at (s_1, ..., s_{m-1}) — the point whose
geometric-mean inequality the chain claims.

:func:`numeric_check` complements this with floating-point sampling: random
positive assignments propagate through the chain maximally (every defining
constraint tight) and the first constraint must hold when the bound variable
sits at or just below the weighted geometric mean, and fail when it sits
measurably above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    Configuration,
    InternalCheckError,
    InvalidInputError,
    WeightTuple,
)

REL_TOL = 1e-9


@dataclass(frozen=True)
class ReconstructedSet:
    valid: bool
    reason: str | None
    points: tuple[tuple[Fraction, ...], ...]
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "schema": "socrep-v1",
            "valid": self.valid,
            "reason": self.reason,
            "points": [[str(c) for c in pt] for pt in self.points],
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class NumericCheckResult:
    passed: bool
    trials: int
    failures: tuple[str, ...] = ()


def _solve_square(C: list[list[Fraction]], R: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Solve C X = R exactly; None when C is singular."""
    n = len(C)
    width = len(R[0]) if R else 0
    M = [C[r][:] + R[r][:] for r in range(n)]
    for c in range(n):
        pr = next((rr for rr in range(c, n) if M[rr][c] != 0), None)
        if pr is None:
            return None
        M[c], M[pr] = M[pr], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for rr in range(n):
            if rr != c and M[rr][c] != 0:
                f = M[rr][c]
                M[rr] = [x - f * y for x, y in zip(M[rr], M[c])]
    return [row[n : n + width] for row in M]


def reconstruct(w: WeightTuple, cfg: Configuration) -> ReconstructedSet:
    """Solve for the chained variables' simplex points and judge validity."""
    if cfg.m != w.m:
        raise InvalidInputError(f"configuration has m={cfg.m}, weights have m={w.m}")
    if w.m < 2:
        raise InvalidInputError("reconstruction needs at least two weights")
    m, n = cfg.m, cfg.n
    shat = w.s_hat
    dim = m - 1

    # corner(i) = shat * e_i for variables 1..m-1, origin for variable m
    def corner(v: int) -> list[Fraction]:
        pt = [Fraction(0)] * dim
        if v <= dim:
            pt[v - 1] = Fraction(shat)
        return pt

    C = [[Fraction(0)] * n for _ in range(n)]
    R = [[Fraction(0)] * dim for _ in range(n)]
    for k, (i, j, _) in enumerate(cfg.triples):
        C[k][k] += 2
        for ref in (i, j):
            if ref > m:
                C[k][ref - m - 1] -= 1
            else:
                base = corner(ref)
                for d in range(dim):
                    R[k][d] += base[d]
    X = _solve_square(C, R)
    if X is None:
        return ReconstructedSet(
            False,
            "cyclic-dependency",
            (),
            ("the chained variables' defining constraints are not independent",),
        )
    points = tuple(tuple(row) for row in X)

    designated = points[0]
    expected = tuple(Fraction(w.s[d]) for d in range(dim))
    if designated != expected:
        return ReconstructedSet(
            False,
            "designated-point-mismatch",
            points,
            (f"variable {m + 1} reconstructs to {designated}, expected {expected}",),
        )

    warnings: list[str] = []
    for k, pt in enumerate(points):
        coord_sum = sum(pt)
        if any(c < 0 for c in pt) or coord_sum > shat:
            return ReconstructedSet(
                False,
                "outside-simplex",
                points,
                (f"variable {m + 1 + k} reconstructs outside the simplex: {pt}",),
            )
        if any(c == 0 for c in pt) or coord_sum == shat:
            warnings.append(f"variable {m + 1 + k} lies on the simplex boundary")

    seen: dict[tuple[Fraction, ...], int] = {}
    for k, pt in enumerate(points):
        if pt in seen:
            warnings.append(
                f"variables {m + 1 + seen[pt]} and {m + 1 + k} reconstruct to the same point"
            )
        else:
            seen[pt] = k
    corners = {tuple(corner(v)): v for v in range(1, m + 1)}
    for k, pt in enumerate(points):
        if pt in corners:
            warnings.append(
                f"variable {m + 1 + k} coincides with original variable {corners[pt]}"
            )

    return ReconstructedSet(True, None, points, tuple(warnings))


def _propagate_log(
    cfg: Configuration, base_logs: np.ndarray
) -> np.ndarray | None:
    """Log-values of all variables with every chained constraint tight.

    base_logs covers variables 1..m+1; targets m+2..m+n follow from their
    defining constraints.  Acyclic reference structures propagate directly;
    otherwise the tight system is solved as linear equations.  Returns None
    when the system is singular (no maximal assignment exists).
    """
    m, n = cfg.m, cfg.n
    total = m + n
    logs = np.full(total, np.nan)
    logs[: m + 1] = base_logs
    aux = list(range(m + 2, total + 1))  # variable numbers defined by triples 2..n
    defs = {t: (i, j) for i, j, t in cfg.triples[1:]}

    pending = set(aux)
    progressed = True
    while pending and progressed:
        progressed = False
        for t in sorted(pending):
            i, j = defs[t]
            li = logs[i - 1]
            lj = logs[j - 1]
            if not (np.isnan(li) or np.isnan(lj)):
                logs[t - 1] = 0.5 * (li + lj)
                pending.discard(t)
                progressed = True
                break
    if pending:
        # cyclic references among the chained variables: solve the tight system
        order = sorted(pending)
        idx = {t: q for q, t in enumerate(order)}
        A = np.zeros((len(order), len(order)))
        rhs = np.zeros(len(order))
        for t in order:
            q = idx[t]
            A[q, q] = 2.0
            for ref in defs[t]:
                if ref in idx:
                    A[q, idx[ref]] -= 1.0
                else:
                    val = logs[ref - 1]
                    if np.isnan(val):
                        return None
                    rhs[q] += val
        try:
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            return None
        for t in order:
            logs[t - 1] = sol[idx[t]]
    return logs


def numeric_check(
    w: WeightTuple, cfg: Configuration, trials: int = 4, seed: int = 42
) -> NumericCheckResult:
    """Random positive sampling of the chain at and around the geometric mean.

    Per trial the original variables are drawn uniformly from [0.1, 10]; the
    bound variable is set to the weighted geometric mean scaled by (1 - eps)
    for eps in {0, 1e-6} (the first constraint must hold within relative
    1e-9) and by (1 + 1e-3) (it must fail beyond that tolerance).  All other
    constraints are made tight by construction and re-checked.
    """
    if cfg.m != w.m:
        raise InvalidInputError(f"configuration has m={cfg.m}, weights have m={w.m}")
    m = cfg.m
    shat = w.s_hat
    weights = np.asarray([float(e) / shat for e in w.s])
    failures: list[str] = []
    i1, j1, _ = cfg.triples[0]
    log_tol = np.log1p(-REL_TOL)

    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        x = rng.uniform(0.1, 10.0, m)
        gm_log = float(np.dot(weights, np.log(x)))
        for scale_log, must_hold in (
            (0.0, True),
            (np.log1p(-1e-6), True),
            (np.log1p(1e-3), False),
        ):
            base = np.empty(m + 1)
            base[:m] = np.log(x)
            base[m] = gm_log + scale_log
            logs = _propagate_log(cfg, base)
            if logs is None:
                raise InvalidInputError(
                    "malformed configuration: chained variables have no maximal assignment"
                )
            for i, j, t in cfg.triples[1:]:
                resid = logs[i - 1] + logs[j - 1] - 2 * logs[t - 1]
                if abs(resid) > 1e-7:
                    failures.append(
                        f"trial {trial}: constraint for variable {t} not tight (residual {resid:.3e})"
                    )
            margin = logs[i1 - 1] + logs[j1 - 1] - 2 * logs[m]
            holds = margin >= log_tol
            if holds != must_hold:
                failures.append(
                    f"trial {trial}: first constraint {'held' if holds else 'failed'} "
                    f"unexpectedly at offset {scale_log:+.2e} (margin {margin:.3e})"
                )
    return NumericCheckResult(not failures, trials, tuple(failures))
