"""Exact clause-survival probabilities under random flip orders.

The rounding scheme routes a reconfiguration sequence through a waypoint
assignment rho: first the variables where start and rho differ are flipped in
a uniformly random order, then the variables where rho and end differ.  For a
single clause, each phase is a lattice walk on the number of currently-true
literals: pending flips either turn a true literal false (a "-1" step) or a
false literal true (a "+1" step).  The clause survives a phase when the walk
never touches zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .formulas import Assignment, Clause


@dataclass(frozen=True)
class PhaseState:
    """Clause-local view of one phase: current true-literal count and pending flips."""

    true_count: int
    offs: int  # pending flips that turn a true literal false
    ons: int  # pending flips that turn a false literal true


@lru_cache(maxsize=None)
def _survive(c: int, a: int, b: int) -> Fraction:
    if c <= 0:
        return Fraction(0)
    if a == 0:
        return Fraction(1)  # the count never decreases
    if b == 0:
        # all remaining steps are -1; survives iff the count stays positive
        return Fraction(1) if c > a else Fraction(0)
    total = a + b
    return (Fraction(a, total) * _survive(c - 1, a - 1, b)
            + Fraction(b, total) * _survive(c + 1, a, b - 1))


def phase_survival(state: PhaseState) -> Fraction:
    """Probability that a uniformly random interleaving of the pending flips
    keeps the true-literal count positive throughout (endpoint included)."""
    return _survive(state.true_count, state.offs, state.ons)


def literal_profile(clause: Clause, assignment: Assignment) -> int:
    """Bitmask over clause positions: bit i set iff literal i is true."""
    profile = 0
    bits = assignment.bits
    for i, lit in enumerate(clause):
        if ((bits >> (abs(lit) - 1)) & 1) == (lit > 0):
            profile |= 1 << i
    return profile


@lru_cache(maxsize=None)
def survival_from_profiles(s: int, r: int, e: int) -> Fraction:
    """Clause survival through both phases, from literal-truth bitmasks.

    ``s``, ``r``, ``e`` are the clause-local profiles under the start,
    waypoint, and end assignments.  The two phases are independent given the
    waypoint, so the result is the product of the two phase survivals.
    """
    c1 = s.bit_count()
    a1 = (s & ~r).bit_count()
    b1 = (r & ~s).bit_count()
    p1 = _survive(c1, a1, b1)
    if not p1:
        return Fraction(0)
    c2 = r.bit_count()
    a2 = (r & ~e).bit_count()
    b2 = (e & ~r).bit_count()
    return p1 * _survive(c2, a2, b2)


def phase_states(clause: Clause, start: Assignment, rho: Assignment, end: Assignment) -> tuple[PhaseState, PhaseState]:
    """The two per-phase states a clause passes through when routed via rho."""
    s = literal_profile(clause, start)
    r = literal_profile(clause, rho)
    e = literal_profile(clause, end)
    first = PhaseState(s.bit_count(), (s & ~r).bit_count(), (r & ~s).bit_count())
    second = PhaseState(r.bit_count(), (r & ~e).bit_count(), (e & ~r).bit_count())
    return first, second


def clause_survival_given_rho(clause: Clause, start: Assignment, end: Assignment, rho: Assignment) -> Fraction:
    """Probability that a uniformly random routed sequence satisfies the clause
    at every step, conditioned on the waypoint rho."""
    return survival_from_profiles(
        literal_profile(clause, start),
        literal_profile(clause, rho),
        literal_profile(clause, end),
    )
