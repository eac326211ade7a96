"""Instance file parsing and serialization.

File format (UTF-8, line oriented):

- ``c <comment>`` lines are ignored anywhere.
- Header ``p eksr <n> <m> <k>`` exactly once, first non-comment line.
- Exactly m clause lines: k nonzero integers (sign = polarity, magnitude =
  variable index <= n) terminated by ``0``, space separated.
- ``s <bitstring of length n>`` then ``t <bitstring of length n>`` after the
  clauses (start and end assignments).
"""

from __future__ import annotations

from typing import IO, Union

from .errors import EksrError, ParseError
from .formulas import Assignment, Formula, Instance

TextSource = Union[str, bytes, IO]


def _lines(source: TextSource):
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        yield line


def parse_instance(source: TextSource) -> Instance:
    """Parse an instance file; raises ParseError with a specific diagnostic."""
    lines = _lines(source)

    try:
        header = next(lines)
    except StopIteration:
        raise ParseError("malformed header: empty input") from None
    fields = header.split()
    if len(fields) != 5 or fields[0] != "p" or fields[1] != "eksr":
        raise ParseError(f"malformed header: {header!r} (expected 'p eksr <n> <m> <k>')")
    try:
        n, m, k = (int(x) for x in fields[2:])
    except ValueError:
        raise ParseError(f"malformed header: non-integer sizes in {header!r}") from None
    if n < 1 or m < 1 or k < 1:
        raise ParseError(f"malformed header: sizes must be positive in {header!r}")

    clauses = []
    for j in range(1, m + 1):
        try:
            line = next(lines)
        except StopIteration:
            raise ParseError(f"wrong clause count: header says {m}, found {j - 1}") from None
        if line.startswith(("s ", "t ")):
            raise ParseError(f"wrong clause count: header says {m}, found {j - 1}")
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"clause {j}: non-integer literal in {line!r}") from None
        if not nums or nums[-1] != 0:
            raise ParseError(f"clause {j}: missing terminating 0")
        lits = nums[:-1]
        if any(x == 0 for x in lits):
            raise ParseError(f"clause {j}: literal 0 before the terminator")
        if len(lits) != k:
            raise ParseError(f"clause {j}: expected {k} literals, got {len(lits)}")
        clauses.append(tuple(lits))

    def read_assignment(tag: str, name: str) -> Assignment:
        try:
            line = next(lines)
        except StopIteration:
            raise ParseError(f"missing {name} assignment ('{tag}' line)") from None
        fields = line.split()
        if len(fields) != 2 or fields[0] != tag:
            raise ParseError(f"expected '{tag} <bitstring>', got {line!r}")
        bitstring = fields[1]
        if len(bitstring) != n:
            raise ParseError(f"{name} assignment: bitstring length {len(bitstring)} != n={n}")
        try:
            return Assignment.from_string(bitstring)
        except EksrError as exc:
            raise ParseError(f"{name} assignment: {exc}") from None

    start = read_assignment("s", "start")
    end = read_assignment("t", "end")
    for extra in lines:
        raise ParseError(f"unexpected trailing line {extra!r}")

    try:
        formula = Formula(n, k, tuple(clauses))
        return Instance(formula, start, end)
    except EksrError as exc:
        raise ParseError(str(exc)) from None


def serialize_instance(instance: Instance) -> str:
    """Canonical text for an instance; parse(serialize(x)) == x."""
    f = instance.formula
    k = getattr(f, "k", None)
    if k is None:
        raise EksrError("only uniform-width formulas serialize to the instance format")
    out = [f"p eksr {f.n} {f.m} {k}"]
    for clause in f.clauses:
        out.append(" ".join(str(lit) for lit in clause) + " 0")
    out.append(f"s {instance.start.to_string()}")
    out.append(f"t {instance.end.to_string()}")
    return "\n".join(out) + "\n"


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh)


def save_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance))
