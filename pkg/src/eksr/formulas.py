"""Core types and value functions for E-k-SAT reconfiguration instances.

Representation notes:

- A literal is a nonzero signed int, DIMACS style: ``+v`` is the variable
  ``x_v`` and ``-v`` its negation.  Variables are numbered ``1..n``.
- An assignment is an n-bit integer; bit ``v-1`` holds the value of ``x_v``,
  so variable 1 is the lowest-index bit and Hamming operations are cheap.
- ``Formula`` enforces uniform clause width (exactly k literals, distinct
  variables).  ``MixedFormula`` drops the uniformity requirement; the gadget
  compilers need mixed widths for intermediates.
- All values are exact ``fractions.Fraction``; no floats on correctness paths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .errors import CapExceededError, EksrError

Rational = Fraction

Clause = tuple[int, ...]


@dataclass(frozen=True)
class Assignment:
    """Truth assignment for variables 1..n, packed into an int bit-vector."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise EksrError(f"negative variable count {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise EksrError(f"bit-vector {self.bits:#x} out of range for n={self.n}")

    @classmethod
    def from_string(cls, text: str) -> "Assignment":
        """Parse a bitstring like "0110"; character j gives the value of x_{j+1}."""
        bits = 0
        for j, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << j
            elif ch != "0":
                raise EksrError(f"invalid bitstring character {ch!r}")
        return cls(len(text), bits)

    @classmethod
    def zeros(cls, n: int) -> "Assignment":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "Assignment":
        return cls(n, (1 << n) - 1)

    def get(self, var: int) -> int:
        """Value of variable ``var`` (1-based)."""
        return (self.bits >> (var - 1)) & 1

    def flipped(self, var: int) -> "Assignment":
        return Assignment(self.n, self.bits ^ (1 << (var - 1)))

    def with_value(self, var: int, value: int) -> "Assignment":
        mask = 1 << (var - 1)
        return Assignment(self.n, (self.bits & ~mask) | (mask if value else 0))

    def extended(self, extra_bits: Sequence[int]) -> "Assignment":
        """Append values for fresh variables n+1, n+2, ... after the current ones."""
        bits = self.bits
        for j, b in enumerate(extra_bits):
            if b:
                bits |= 1 << (self.n + j)
        return Assignment(self.n + len(extra_bits), bits)

    def hamming(self, other: "Assignment") -> int:
        if self.n != other.n:
            raise EksrError(f"length mismatch: {self.n} vs {other.n}")
        return (self.bits ^ other.bits).bit_count()

    def to_string(self) -> str:
        return "".join("1" if self.get(v) else "0" for v in range(1, self.n + 1))

    def __str__(self) -> str:
        return self.to_string()


def _check_clause(clause: Clause, n: int, where: str) -> None:
    if not clause:
        raise EksrError(f"{where}: empty clause")
    seen = set()
    for lit in clause:
        if lit == 0:
            raise EksrError(f"{where}: literal 0 is not allowed")
        v = abs(lit)
        if v > n:
            raise EksrError(f"{where}: variable {v} out of range (n={n})")
        if v in seen:
            raise EksrError(f"{where}: duplicate variable {v}")
        seen.add(v)


@dataclass(frozen=True)
class Formula:
    """E-k CNF formula: every clause has exactly k literals over distinct variables.

    Duplicate clauses are permitted and counted with multiplicity; the gadget
    compilers emit copies on purpose.
    """

    n: int
    k: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.k < 1:
            raise EksrError(f"clause width must be positive, got {self.k}")
        if not self.clauses:
            raise EksrError("formula needs at least one clause")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for j, clause in enumerate(self.clauses, start=1):
            if len(clause) != self.k:
                raise EksrError(f"clause {j}: expected {self.k} literals, got {len(clause)}")
            _check_clause(clause, self.n, f"clause {j}")

    @property
    def m(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class MixedFormula:
    """CNF formula whose clause widths may differ (reduction intermediates)."""

    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if not self.clauses:
            raise EksrError("formula needs at least one clause")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for j, clause in enumerate(self.clauses, start=1):
            _check_clause(clause, self.n, f"clause {j}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(sorted({len(c) for c in self.clauses}))


CnfLike = Union[Formula, MixedFormula]


def clause_satisfied(clause: Clause, assignment: Assignment) -> bool:
    bits = assignment.bits
    for lit in clause:
        if ((bits >> (abs(lit) - 1)) & 1) == (lit > 0):
            return True
    return False


def count_satisfied(formula: CnfLike, assignment: Assignment) -> int:
    if assignment.n != formula.n:
        raise EksrError(f"length mismatch: assignment n={assignment.n}, formula n={formula.n}")
    return sum(1 for c in formula.clauses if clause_satisfied(c, assignment))


def value(formula: CnfLike, assignment: Assignment) -> Fraction:
    """Fraction of clauses satisfied by the assignment, as an exact rational."""
    return Fraction(count_satisfied(formula, assignment), formula.m)


@dataclass(frozen=True)
class ReconfSequence:
    """Non-empty sequence of assignments, adjacent ones differing in <= 1 bit."""

    steps: tuple[Assignment, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise EksrError("reconfiguration sequence must be non-empty")
        n = self.steps[0].n
        for t, (a, b) in enumerate(zip(self.steps, self.steps[1:]), start=1):
            if b.n != n:
                raise EksrError(f"step {t + 1}: length mismatch")
            if a.hamming(b) > 1:
                raise EksrError(f"steps {t} and {t + 1} differ in more than one variable")

    def __iter__(self) -> Iterator[Assignment]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    @property
    def start(self) -> Assignment:
        return self.steps[0]

    @property
    def end(self) -> Assignment:
        return self.steps[-1]

    @property
    def flips(self) -> tuple[int, ...]:
        """Variable flipped at each step; 0 marks a repeated assignment."""
        out = []
        for a, b in zip(self.steps, self.steps[1:]):
            d = a.bits ^ b.bits
            out.append(d.bit_length() if d else 0)
        return tuple(out)


Steps = Union[ReconfSequence, Sequence[Assignment]]


def _as_steps(s: Steps) -> tuple[Assignment, ...]:
    if isinstance(s, ReconfSequence):
        return s.steps
    return tuple(s)


def seq_value(formula: CnfLike, s: Steps) -> Fraction:
    """Minimum, over the sequence, of the fraction of satisfied clauses."""
    steps = _as_steps(s)
    if not steps:
        raise EksrError("empty sequence")
    for t, (a, b) in enumerate(zip(steps, steps[1:]), start=1):
        if a.hamming(b) > 1:
            raise EksrError(f"steps {t} and {t + 1} differ in more than one variable")
    return min(value(formula, a) for a in steps)


@dataclass(frozen=True)
class Instance:
    """A formula plus two satisfying endpoint assignments."""

    formula: CnfLike
    start: Assignment
    end: Assignment

    def __post_init__(self):
        for name, a in (("start", self.start), ("end", self.end)):
            if a.n != self.formula.n:
                raise EksrError(f"{name} assignment: bitstring length {a.n} != n={self.formula.n}")
            if count_satisfied(self.formula, a) != self.formula.m:
                raise EksrError(f"{name} assignment does not satisfy the formula")

    @property
    def n(self) -> int:
        return self.formula.n


@dataclass(frozen=True)
class SequenceReport:
    valid: bool
    value: Fraction | None = None
    reason: str | None = None


def check_sequence(instance: Instance, s: Steps) -> SequenceReport:
    """Validate a candidate sequence against an instance and report its value."""
    steps = _as_steps(s)
    if not steps:
        return SequenceReport(False, reason="empty sequence")
    for t, a in enumerate(steps, start=1):
        if a.n != instance.n:
            return SequenceReport(False, reason=f"step {t}: length {a.n} != n={instance.n}")
    if steps[0] != instance.start:
        return SequenceReport(False, reason="sequence does not start at the starting assignment")
    if steps[-1] != instance.end:
        return SequenceReport(False, reason="sequence does not end at the ending assignment")
    for t, (a, b) in enumerate(zip(steps, steps[1:]), start=1):
        if a.hamming(b) > 1:
            return SequenceReport(False, reason=f"steps {t} and {t + 1} differ in more than one variable")
    return SequenceReport(True, value=seq_value(instance.formula, steps))


def diff_vars(a: Assignment, b: Assignment) -> set[int]:
    """Set of variable indices at which two assignments differ."""
    if a.n != b.n:
        raise EksrError(f"length mismatch: {a.n} vs {b.n}")
    d = a.bits ^ b.bits
    out = set()
    while d:
        low = d & -d
        out.add(low.bit_length())
        d ^= low
    return out


def irredundant_sequences(start: Assignment, end: Assignment, cap: int = 8) -> Iterator[ReconfSequence]:
    """Yield every sequence that flips each differing variable exactly once.

    There are exactly ``d!`` of them, one per flip order, where d is the
    number of differing variables.  Raises if d exceeds ``cap``.
    """
    diff = sorted(diff_vars(start, end))
    if len(diff) > cap:
        raise CapExceededError(f"{len(diff)} differing variables exceeds cap {cap}")

    def gen() -> Iterator[ReconfSequence]:
        for order in itertools.permutations(diff):
            steps = [start]
            for v in order:
                steps.append(steps[-1].flipped(v))
            yield ReconfSequence(tuple(steps))

    return gen()
