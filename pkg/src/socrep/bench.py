"""Sweep heuristic algorithms across all normalized weight tuples of a given
total and arity, recording chain sizes and wall-clock time per tuple.

Every produced configuration is re-validated by exact reconstruction; a
sweep that silently produced a wrong chain would make its size totals
meaningless.
"""

from __future__ import annotations

import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import InternalCheckError, InvalidInputError, WeightTuple, partitions
from .heuristics import ALGORITHMS, run_algorithm
from .verify import reconstruct

DEFAULT_ALGORITHMS = (
    "greedy-power-two",
    "greedy-common-one",
    "traversal-power-two",
)


@dataclass(frozen=True)
class SweepRecord:
    s: tuple[int, ...]
    algorithm: str
    size: int
    micros: int

    @property
    def tuple_label(self) -> str:
        return "+".join(str(e) for e in self.s)


@dataclass(frozen=True)
class SweepSummary:
    s_hat: int
    m: int
    algorithms: tuple[str, ...]
    records: tuple[SweepRecord, ...]
    tuples: int

    def total_size(self, algorithm: str) -> int:
        return sum(r.size for r in self.records if r.algorithm == algorithm)

    def total_micros(self, algorithm: str) -> int:
        return sum(r.micros for r in self.records if r.algorithm == algorithm)

    def to_json(self) -> dict:
        return {
            "schema": "socrep-v1",
            "s_hat": self.s_hat,
            "m": self.m,
            "tuples": self.tuples,
            "algorithms": list(self.algorithms),
            "totals": {
                alg: {
                    "size": self.total_size(alg),
                    "micros": self.total_micros(alg),
                }
                for alg in self.algorithms
            },
        }


def _measure_tuple(args: tuple[tuple[int, ...], tuple[str, ...], int]) -> list[SweepRecord]:
    """Run every requested algorithm on one weight tuple (worker-safe)."""
    s, algorithms, budget = args
    w = WeightTuple(s)
    out = []
    for alg in algorithms:
        t0 = time.perf_counter_ns()
        cfg, _ = run_algorithm(alg, w, budget=budget)
        micros = (time.perf_counter_ns() - t0) // 1000
        recon = reconstruct(w, cfg)
        if not recon.valid:
            raise InternalCheckError(
                f"{alg} produced an invalid chain for {s}: {recon.reason}"
            )
        out.append(SweepRecord(s, alg, cfg.n, micros))
    return out


def sweep(
    s_hat: int = 83,
    m: int = 3,
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS,
    budget: int = 200_000,
    jobs: int = 1,
) -> SweepSummary:
    """Measure every algorithm on every normalized nonincreasing tuple."""
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise InvalidInputError(
                f"unknown algorithm {alg!r}; expected one of {sorted(ALGORITHMS)}"
            )
    work = [(s, tuple(algorithms), budget) for s in partitions(s_hat, m)]
    if not work:
        raise InvalidInputError(f"no normalized tuples with m={m} summing to {s_hat}")
    records: list[SweepRecord] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_measure_tuple, work, chunksize=16):
                records.extend(chunk)
    else:
        for item in work:
            records.extend(_measure_tuple(item))
    return SweepSummary(s_hat, m, tuple(algorithms), tuple(records), len(work))


def write_csv(summary: SweepSummary, stream: io.TextIOBase) -> None:
    stream.write("tuple,algorithm,size,micros\n")
    for r in summary.records:
        stream.write(f"{r.tuple_label},{r.algorithm},{r.size},{r.micros}\n")
