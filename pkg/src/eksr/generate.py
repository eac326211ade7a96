"""Planted random instance generation.

Clauses are drawn by rejection until both planted assignments satisfy them,
so the planted pair always works as the start/end endpoints.  All randomness
flows through ``rng.getrandbits`` (see ``eksr.rng``), keeping instances
byte-identical for a given seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import EksrError
from .formulas import Assignment, Clause, Formula, Instance, clause_satisfied
from .rng import randbelow

REJECTION_CAP = 10**6


@dataclass(frozen=True)
class PlantedGenerator:
    n: int
    m: int
    k: int
    seed: int
    plant_pair: tuple[Assignment, Assignment]

    def __post_init__(self):
        if self.k > self.n:
            raise EksrError(f"clause width {self.k} exceeds variable count {self.n}")
        if self.m < 1:
            raise EksrError("need at least one clause")
        for plant in self.plant_pair:
            if plant.n != self.n:
                raise EksrError(f"plant has length {plant.n}, expected {self.n}")


def _sample_clause(rng: random.Random, n: int, k: int) -> Clause:
    chosen: list[int] = []
    while len(chosen) < k:
        v = 1 + randbelow(rng, n)
        if v not in chosen:
            chosen.append(v)
    return tuple(v if rng.getrandbits(1) else -v for v in chosen)


def gen_random_instance(gen: PlantedGenerator) -> Instance:
    """Deterministic planted instance; endpoints are the planted pair."""
    rng = random.Random(gen.seed)
    a, b = gen.plant_pair
    clauses = []
    for _ in range(gen.m):
        for _attempt in range(REJECTION_CAP):
            clause = _sample_clause(rng, gen.n, gen.k)
            if clause_satisfied(clause, a) and clause_satisfied(clause, b):
                clauses.append(clause)
                break
        else:
            raise EksrError(f"no clause satisfied both plants after {REJECTION_CAP} attempts")
    formula = Formula(gen.n, gen.k, tuple(clauses))
    return Instance(formula, a, b)
