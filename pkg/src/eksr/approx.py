"""Approximation engine: random routed sequences and their derandomization.

A sequence from start to end is produced by routing through a waypoint
assignment rho: flip the variables where start and rho differ in some order,
then the variables where rho and end differ.  Sampling rho and both orders
uniformly satisfies each clause along the whole sequence with probability at
least the width-k closed-form bound, so the expected fraction of clauses that
survive every step is at least that bound.  The derandomization fixes rho one
bit at a time and then the two flip orders one variable at a time, never
letting the conditional expectation drop.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import EksrError
from .formulas import Assignment, Instance, ReconfSequence, diff_vars
from .rng import randbelow, shuffled
from .survival import _survive, literal_profile, survival_from_profiles


@dataclass(frozen=True)
class RoundingPlan:
    """A waypoint plus the two flip orders that define a routed sequence."""

    rho: Assignment
    phase1_order: tuple[int, ...]
    phase2_order: tuple[int, ...]


def plan_sequence(start: Assignment, end: Assignment, plan: RoundingPlan) -> ReconfSequence:
    """Materialize the routed sequence start -> rho -> end for a plan."""
    if set(plan.phase1_order) != diff_vars(start, plan.rho):
        raise EksrError("phase-1 order is not a permutation of the start/rho differences")
    if set(plan.phase2_order) != diff_vars(plan.rho, end):
        raise EksrError("phase-2 order is not a permutation of the rho/end differences")
    steps = [start]
    for v in plan.phase1_order + plan.phase2_order:
        steps.append(steps[-1].flipped(v))
    return ReconfSequence(tuple(steps))


def sample_plan(start: Assignment, end: Assignment, rng: random.Random) -> RoundingPlan:
    """Uniform waypoint and uniform flip orders from a seeded generator.

    Draw order is pinned: one bit per variable 1..n for rho, then a
    Fisher-Yates shuffle of each phase's differing variables in ascending
    order.
    """
    n = start.n
    bits = 0
    for v in range(n):
        bits |= rng.getrandbits(1) << v
    rho = Assignment(n, bits)
    order1 = tuple(shuffled(rng, sorted(diff_vars(start, rho))))
    order2 = tuple(shuffled(rng, sorted(diff_vars(rho, end))))
    return RoundingPlan(rho, order1, order2)


def randomized_round(instance: Instance, seed: int) -> ReconfSequence:
    """Sample a routed sequence; deterministic for a given seed."""
    rng = random.Random(seed)
    plan = sample_plan(instance.start, instance.end, rng)
    return plan_sequence(instance.start, instance.end, plan)


@lru_cache(maxsize=None)
def _avg_survival(s: int, e: int, k: int, decided_mask: int, decided_bits: int) -> Fraction:
    """Average of the two-phase survival over uniform completions of the
    waypoint's undecided clause positions."""
    free = [i for i in range(k) if not (decided_mask >> i) & 1]
    total = Fraction(0)
    for comp in range(1 << len(free)):
        r = decided_bits
        for idx, pos in enumerate(free):
            if (comp >> idx) & 1:
                r |= 1 << pos
        total += survival_from_profiles(s, r, e)
    return total / (1 << len(free))


def _clause_waypoint_profile(clause, rho_bits: int, prefix_len: int):
    """Decided-position mask and waypoint literal-truth bits for a clause,
    given waypoint values for variables 1..prefix_len."""
    mask = 0
    bits = 0
    for i, lit in enumerate(clause):
        v = abs(lit)
        if v <= prefix_len:
            mask |= 1 << i
            val = (rho_bits >> (v - 1)) & 1
            if val == (1 if lit > 0 else 0):
                bits |= 1 << i
    return mask, bits


def expected_sequence_value(instance: Instance, rho_prefix: Sequence[int] | str = ()) -> Fraction:
    """Expected fraction of clauses satisfied at every step of a random routed
    sequence, with the waypoint fixed on variables 1..len(rho_prefix) and
    uniform elsewhere.  This is the quantity the derandomization maximizes;
    the sequence value is never below it.
    """
    prefix = [int(b) for b in rho_prefix]
    if any(b not in (0, 1) for b in prefix):
        raise EksrError("waypoint prefix must consist of 0/1 values")
    t = len(prefix)
    if t > instance.n:
        raise EksrError(f"waypoint prefix length {t} exceeds n={instance.n}")
    rho_bits = 0
    for j, b in enumerate(prefix):
        rho_bits |= b << j
    f = instance.formula
    total = Fraction(0)
    for clause in f.clauses:
        s = literal_profile(clause, instance.start)
        e = literal_profile(clause, instance.end)
        mask, bits = _clause_waypoint_profile(clause, rho_bits, t)
        total += _avg_survival(s, e, len(clause), mask, bits)
    return total / f.m


@dataclass
class _ClauseTracker:
    """Mutable per-clause state threaded through the three greedy stages."""

    clause: tuple[int, ...]
    count: int  # multiplicity of this clause in the formula
    s: int
    e: int
    k: int
    mask: int = 0  # waypoint positions decided so far
    bits: int = 0  # decided waypoint literal-truth bits
    alive: bool = True
    cur: int = 0  # current true-literal count during a flip phase
    offs: int = 0
    ons: int = 0
    pending: dict | None = None  # var -> (position, +1/-1) for this phase
    tail: Fraction = Fraction(1)  # survival factor for the untouched phase 2

    def avg(self) -> Fraction:
        return _avg_survival(self.s, self.e, self.k, self.mask, self.bits)

    def contribution(self) -> Fraction:
        if not self.alive:
            return Fraction(0)
        return _survive(self.cur, self.offs, self.ons) * self.tail


def _greedy_phase(by_var, todo: list[int]) -> list[int]:
    """Fix one phase's flip order greedily, never decreasing the conditional
    expected number of clauses that survive every step.  Ties pick the
    smallest variable index."""
    order = []
    remaining = list(todo)
    while remaining:
        best_v = None
        best_delta = None
        for v in remaining:
            delta = Fraction(0)
            for tr in by_var.get(v, ()):
                if not tr.alive or v not in tr.pending:
                    continue
                old = tr.contribution()
                _, step = tr.pending[v]
                if step < 0:
                    new = (Fraction(0) if tr.cur - 1 <= 0
                           else _survive(tr.cur - 1, tr.offs - 1, tr.ons) * tr.tail)
                else:
                    new = _survive(tr.cur + 1, tr.offs, tr.ons - 1) * tr.tail
                delta += tr.count * (new - old)
            if best_delta is None or delta > best_delta:
                best_v, best_delta = v, delta
        order.append(best_v)
        remaining.remove(best_v)
        for tr in by_var.get(best_v, ()):
            if best_v not in tr.pending:
                continue
            _, step = tr.pending.pop(best_v)
            if step < 0:
                tr.cur -= 1
                tr.offs -= 1
                if tr.cur <= 0:
                    tr.alive = False
            else:
                tr.cur += 1
                tr.ons -= 1
    return order


def derandomize(instance: Instance) -> ReconfSequence:
    """Deterministic routed sequence whose value meets the closed-form bound.

    Stage 1 fixes the waypoint bit by bit in variable order (ties prefer 0),
    maximizing the expected surviving-clause fraction.  Stages 2 and 3 fix the
    two flip orders one variable at a time (ties prefer the smallest index).
    """
    start, end = instance.start, instance.end
    if start == end:
        return ReconfSequence((start,))
    n = instance.n

    groups: dict = {}
    for clause in instance.formula.clauses:
        if clause in groups:
            groups[clause].count += 1
        else:
            groups[clause] = _ClauseTracker(
                clause=clause,
                count=1,
                s=literal_profile(clause, start),
                e=literal_profile(clause, end),
                k=len(clause),
            )
    trackers = list(groups.values())
    by_var: dict[int, list[_ClauseTracker]] = {}
    for tr in trackers:
        for lit in tr.clause:
            by_var.setdefault(abs(lit), []).append(tr)

    # Stage 1: waypoint bits, in variable order, ties to 0.
    rho_bits = 0
    for var in range(1, n + 1):
        affected = [tr for tr in by_var.get(var, ())]
        deltas = {0: Fraction(0), 1: Fraction(0)}
        for tr in affected:
            pos = next(i for i, lit in enumerate(tr.clause) if abs(lit) == var)
            positive = tr.clause[pos] > 0
            old = tr.avg()
            for bit in (0, 1):
                new_bits = tr.bits | (1 << pos) if bit == (1 if positive else 0) else tr.bits
                new = _avg_survival(tr.s, tr.e, tr.k, tr.mask | (1 << pos), new_bits)
                deltas[bit] += tr.count * (new - old)
        bit = 1 if deltas[1] > deltas[0] else 0
        if bit:
            rho_bits |= 1 << (var - 1)
        for tr in affected:
            pos = next(i for i, lit in enumerate(tr.clause) if abs(lit) == var)
            positive = tr.clause[pos] > 0
            tr.mask |= 1 << pos
            if bit == (1 if positive else 0):
                tr.bits |= 1 << pos
    rho = Assignment(n, rho_bits)

    d1 = sorted(diff_vars(start, rho))
    d2 = sorted(diff_vars(rho, end))

    # Stage 2: phase-1 flip order.  Pending flips and the fixed phase-2 factor
    # come from the clause-local profiles.
    for tr in trackers:
        r = tr.bits
        assert tr.mask == (1 << tr.k) - 1
        tr.cur = tr.s.bit_count()
        tr.offs = (tr.s & ~r).bit_count()
        tr.ons = (r & ~tr.s).bit_count()
        tr.alive = tr.cur > 0
        c2 = r.bit_count()
        tr.tail = _survive(c2, (r & ~tr.e).bit_count(), (tr.e & ~r).bit_count())
        tr.pending = {}
        for i, lit in enumerate(tr.clause):
            v = abs(lit)
            if start.get(v) != rho.get(v):
                was_true = (tr.s >> i) & 1
                tr.pending[v] = (i, -1 if was_true else 1)
    order1 = _greedy_phase(by_var, d1)

    # Stage 3: phase-2 flip order; survivors carry over, no future factor.
    for tr in trackers:
        r = tr.bits
        tr.cur = r.bit_count()
        tr.offs = (r & ~tr.e).bit_count()
        tr.ons = (tr.e & ~r).bit_count()
        tr.alive = tr.alive and tr.cur > 0
        tr.tail = Fraction(1)
        tr.pending = {}
        for i, lit in enumerate(tr.clause):
            v = abs(lit)
            if rho.get(v) != end.get(v):
                was_true = (r >> i) & 1
                tr.pending[v] = (i, -1 if was_true else 1)
    order2 = _greedy_phase(by_var, d2)

    plan = RoundingPlan(rho, tuple(order1), tuple(order2))
    return plan_sequence(start, end, plan)
