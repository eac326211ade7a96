"""Gap-preserving instance compilers.

Each reduction takes a small source instance (or formula) and emits a target
instance together with enough construction data to build a completeness
witness: a target sequence of value exactly 1, available whenever the source
side supplies a satisfying assignment (the fresh-variable gadgets) or a
value-1 reconfiguration sequence (padding, width conversion, the Horn clause
emulation).

Compilers provided:

- ``reduce_pad``: width 3 -> k by appending every possible clause over fresh
  variables; endpoints keep the fresh block at zero.
- ``reduce_horn_emulation``: width 3 -> 3*lambda; one clause per rejecting
  local view of the Horn check over each ordered variable-disjoint clause
  tuple.
- ``reduce_width``: width w -> k < w by chaining literal sets through fresh
  implication variables.
- ``reduce_np_gadget``: satisfiability gadgets for target widths 3, 4 and
  >= 5, with forced endpoint assignments and copy-count guards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapExceededError, EksrError
from .formulas import (
    Assignment,
    Clause,
    CnfLike,
    Formula,
    Instance,
    MixedFormula,
    ReconfSequence,
    check_sequence,
    count_satisfied,
)


@dataclass(frozen=True)
class ReductionOutput:
    kind: str
    instance: Instance
    witness: Optional[ReconfSequence]
    var_map: dict
    params: dict
    detail: object = field(default=None, repr=False, compare=False)
    e3: Optional["ReductionOutput"] = None  # width-3 companion (np3 only)


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _require_e3(formula: CnfLike, who: str) -> Formula:
    if not isinstance(formula, Formula) or formula.k != 3:
        raise EksrError(f"{who} requires a uniform width-3 source formula")
    return formula


def _check_source_sat(formula: CnfLike, source_sat: Assignment) -> None:
    if source_sat.n != formula.n:
        raise EksrError(f"satisfying assignment has length {source_sat.n}, formula n={formula.n}")
    if count_satisfied(formula, source_sat) != formula.m:
        raise EksrError("supplied assignment does not satisfy the source formula")


def _check_source_path(source: Instance, steps) -> tuple[Assignment, ...]:
    report = check_sequence(source, steps)
    if not report.valid:
        raise EksrError(f"source sequence invalid: {report.reason}")
    if report.value != 1:
        raise EksrError(f"source sequence has value {report.value}, need exactly 1")
    return tuple(steps)


def _flip_run(steps: list[Assignment], target_bits_of, variables) -> None:
    """Append one flip per variable whose current value differs from the target."""
    for v in variables:
        want = target_bits_of(v)
        if steps[-1].get(v) != want:
            steps.append(steps[-1].with_value(v, want))


# ---------------------------------------------------------------------------
# padding: width 3 -> k


def reduce_pad(source: Instance, k_target: int, source_path=None) -> ReductionOutput:
    """Append all 2^K clauses over K = k_target - 3 fresh variables to every
    source clause; endpoints keep the fresh block at 0, so a value-1 source
    sequence lifts unchanged."""
    f = _require_e3(source.formula, "reduce_pad")
    if k_target < 4:
        raise EksrError(f"k_target must be at least 4 for padding, got {k_target}")
    big_k = k_target - 3
    n_out = f.n + big_k
    fresh = list(range(f.n + 1, n_out + 1))
    clauses = []
    for clause in f.clauses:
        for t in range(1 << big_k):
            pad = tuple(y if not (t >> i) & 1 else -y for i, y in enumerate(fresh))
            clauses.append(clause + pad)
    formula = Formula(n_out, k_target, tuple(clauses))
    start = source.start.extended([0] * big_k)
    end = source.end.extended([0] * big_k)
    instance = Instance(formula, start, end)
    out = ReductionOutput(
        kind="pad",
        instance=instance,
        witness=None,
        var_map={v: v for v in range(1, f.n + 1)},
        params={"K": big_k, "k_target": k_target, "m_out": formula.m},
        detail=source,
    )
    if source_path is not None:
        out = _with_witness(out, build_witness(out, source_path=source_path))
    return out


# ---------------------------------------------------------------------------
# Horn-check emulation: width 3 -> 3*lambda


def _falsifying_view(clause: Clause) -> tuple[int, ...]:
    return tuple(0 if lit > 0 else 1 for lit in clause)


def _satisfying_views(clause: Clause):
    bad = _falsifying_view(clause)
    for pattern in itertools.product((0, 1), repeat=len(clause)):
        if pattern != bad:
            yield pattern


def reduce_horn_emulation(source: Instance, lam: int, width_cap: int = 12,
                          enumeration_cap: int = 10**7, source_path=None) -> ReductionOutput:
    """Compile the lambda-clause Horn check into clauses of width 3*lambda.

    For every ordered tuple of pairwise variable-disjoint clauses and every
    local view that falsifies the first clause while satisfying the rest
    (7^(lambda-1) views per tuple), emit one clause forbidding the view.
    Endpoints are unchanged.  Tuples sharing variables are skipped; their
    fraction is reported in params.
    """
    f = _require_e3(source.formula, "reduce_horn_emulation")
    if lam < 2:
        raise EksrError(f"lambda must be at least 2, got {lam}")
    width = 3 * lam
    if width > width_cap:
        raise EksrError(f"target width {width} exceeds the width cap {width_cap}")
    if f.m**lam > enumeration_cap:
        raise CapExceededError(f"m^lambda = {f.m}^{lam} exceeds the enumeration cap")

    clause_vars = [frozenset(abs(lit) for lit in c) for c in f.clauses]
    clauses = []
    discarded = 0
    for tup in itertools.product(range(f.m), repeat=lam):
        vars_seen: set[int] = set()
        disjoint = True
        for j in tup:
            if vars_seen & clause_vars[j]:
                disjoint = False
                break
            vars_seen |= clause_vars[j]
        if not disjoint:
            discarded += 1
            continue
        members = [f.clauses[j] for j in tup]
        positions = tuple(abs(lit) for c in members for lit in c)
        view_sets = [[_falsifying_view(members[0])]]
        view_sets += [list(_satisfying_views(c)) for c in members[1:]]
        for combo in itertools.product(*view_sets):
            view = tuple(b for part in combo for b in part)
            clauses.append(tuple(v if b == 0 else -v for v, b in zip(positions, view)))
    if not clauses:
        raise EksrError("no variable-disjoint clause tuple exists")

    formula = Formula(f.n, width, tuple(clauses))
    instance = Instance(formula, source.start, source.end)
    out = ReductionOutput(
        kind="horn",
        instance=instance,
        witness=None,
        var_map={v: v for v in range(1, f.n + 1)},
        params={
            "lambda": lam,
            "k_target": width,
            "m_out": formula.m,
            "discarded_fraction": str(Fraction(discarded, f.m**lam)),
        },
        detail=source,
    )
    if source_path is not None:
        out = _with_witness(out, build_witness(out, source_path=source_path))
    return out


# ---------------------------------------------------------------------------
# width conversion: width w -> k through implication chains


@dataclass(frozen=True)
class ChainInfo:
    """Implication chain replacing one wide clause."""

    source_index: int
    sets: tuple[tuple[int, ...], ...]  # literal sets S_1..S_Gamma
    fresh: tuple[int, ...]  # chain variables y_1..y_{Gamma-1}


def _build_chain(lits: Clause, k_target: int, source_index: int, first_fresh: int) -> tuple[ChainInfo, list[Clause]]:
    chunk = k_target - 2
    w = len(lits)
    gamma = -(-w // chunk)
    sets = [list(lits[i * chunk:(i + 1) * chunk]) for i in range(gamma)]
    # Top up a short last chunk, then grow the first and last set by one
    # literal each; always pick the earliest clause literal not already there.
    def top_up(target: list, size: int) -> None:
        for lit in lits:
            if len(target) >= size:
                return
            if lit not in target:
                target.append(lit)
        raise EksrError("clause too narrow to build the chain sets")

    top_up(sets[-1], chunk)
    top_up(sets[0], chunk + 1)
    top_up(sets[-1], chunk + 1)
    fresh = tuple(range(first_fresh, first_fresh + gamma - 1))
    out_clauses: list[Clause] = [(-fresh[0],) + tuple(sets[0])]
    for i in range(1, gamma - 1):
        out_clauses.append((-fresh[i], fresh[i - 1]) + tuple(sets[i]))
    out_clauses.append((fresh[-1],) + tuple(sets[-1]))
    info = ChainInfo(source_index, tuple(tuple(s) for s in sets), fresh)
    return info, out_clauses


def _set_satisfied(literals: Sequence[int], alpha: Assignment) -> bool:
    return any(alpha.get(abs(lit)) == (1 if lit > 0 else 0) for lit in literals)


def _chain_pointer(chain: ChainInfo, alpha: Assignment) -> int:
    """First chain set satisfied by the source-side assignment (1-based)."""
    for i, literals in enumerate(chain.sets, start=1):
        if _set_satisfied(literals, alpha):
            return i
    raise EksrError(f"assignment does not satisfy source clause {chain.source_index + 1}")


def _width_reduce_clauses(source_formula: CnfLike, k_target: int):
    """Split every clause wider than k_target; equal-width clauses pass through."""
    if k_target < 3:
        raise EksrError(f"k_target must be at least 3, got {k_target}")
    next_fresh = source_formula.n + 1
    clauses: list[Clause] = []
    chains: list[ChainInfo | None] = []
    passthrough: list[tuple[int, Clause]] = []
    for j, clause in enumerate(source_formula.clauses):
        if len(clause) == k_target:
            chains.append(None)
            passthrough.append((j, clause))
            clauses.append(clause)
            continue
        if len(clause) < k_target:
            raise EksrError(f"clause {j + 1} is narrower than the target width {k_target}")
        info, emitted = _build_chain(clause, k_target, j, next_fresh)
        next_fresh += len(info.fresh)
        chains.append(info)
        clauses.extend(emitted)
    return clauses, chains, next_fresh - 1


def _chain_extend(alpha: Assignment, chains: Sequence[ChainInfo | None], n_out: int) -> Assignment:
    """Extend a source-side assignment with the canonical chain values."""
    bits = alpha.bits
    for chain in chains:
        if chain is None:
            continue
        p = _chain_pointer(chain, alpha)
        for i, y in enumerate(chain.fresh, start=1):
            if i >= p:
                bits |= 1 << (y - 1)
    return Assignment(n_out, bits)


@dataclass(frozen=True)
class _WidthDetail:
    source: Instance
    chains: tuple
    n_out: int


def reduce_width(source: Instance, k_target: int, source_path=None) -> ReductionOutput:
    """Convert a uniform wide instance to width k_target via chain splitting."""
    f = source.formula
    if not isinstance(f, Formula):
        raise EksrError("reduce_width requires a uniform-width source formula")
    if k_target < 3:
        raise EksrError(f"k_target must be at least 3, got {k_target}")
    if f.k <= k_target:
        raise EksrError(f"source width {f.k} must exceed the target width {k_target}")
    clauses, chains, n_out = _width_reduce_clauses(f, k_target)
    formula = Formula(n_out, k_target, tuple(clauses))
    start = _chain_extend(source.start, chains, n_out)
    end = _chain_extend(source.end, chains, n_out)
    instance = Instance(formula, start, end)
    gamma = -(-f.k // (k_target - 2))
    out = ReductionOutput(
        kind="width",
        instance=instance,
        witness=None,
        var_map={v: v for v in range(1, f.n + 1)},
        params={"Gamma": gamma, "k_target": k_target, "fresh_per_clause": gamma - 1, "m_out": formula.m},
        detail=_WidthDetail(source, tuple(chains), n_out),
    )
    if source_path is not None:
        out = _with_witness(out, build_witness(out, source_path=source_path))
    return out


def _simulate_chain_witness(detail: _WidthDetail, steps: Sequence[Assignment]) -> ReconfSequence:
    """Replay a value-1 source sequence on the chain-split instance.

    Chain pointers move between satisfied sets before any source flip that
    would unsatisfy the currently pointed set.  Pointer moves fill (or clear)
    the block of chain bits between the two positions, endpoints first, so
    every intermediate assignment keeps all chain clauses satisfied.
    """
    chains = [c for c in detail.chains if c is not None]
    by_var: dict[int, list[ChainInfo]] = {}
    for chain in chains:
        for v in {abs(lit) for literals in chain.sets for lit in literals}:
            by_var.setdefault(v, []).append(chain)
    pointers = {chain: _chain_pointer(chain, steps[0]) for chain in chains}

    out = [_chain_extend(steps[0], detail.chains, detail.n_out)]

    def move_pointer(chain: ChainInfo, target: int) -> None:
        p = pointers[chain]
        if target == p:
            return
        if target < p:
            for i in range(target, p):  # set y_target .. y_{p-1}
                out.append(out[-1].with_value(chain.fresh[i - 1], 1))
        else:
            for i in range(target - 1, p - 1, -1):  # clear y_{target-1} .. y_p
                out.append(out[-1].with_value(chain.fresh[i - 1], 0))
        pointers[chain] = target

    cur = steps[0]
    for nxt in steps[1:]:
        if nxt == cur:
            continue
        v = (cur.bits ^ nxt.bits).bit_length()
        for chain in by_var.get(v, ()):
            if not _set_satisfied(chain.sets[pointers[chain] - 1], nxt):
                move_pointer(chain, _chain_pointer(chain, nxt))
        out.append(out[-1].with_value(v, nxt.get(v)))
        cur = nxt

    for chain in chains:  # settle on the canonical end pointers
        move_pointer(chain, _chain_pointer(chain, cur))
    return ReconfSequence(tuple(out))


# ---------------------------------------------------------------------------
# satisfiability gadgets for widths 3, 4 and >= 5


@dataclass(frozen=True)
class _NpDetail:
    source_formula: Formula
    k_target: int


def _np_k_clauses(f: Formula, big_k: int) -> list[Clause]:
    fresh = list(range(f.n + 1, f.n + big_k + 1))
    horn = []
    for i in range(big_k):
        horn.append(tuple(y if t == i else -y for t, y in enumerate(fresh)))
    return [clause + h for clause in f.clauses for h in horn]


def reduce_np_gadget(source, k_target: int, delta: Fraction | None = None,
                     source_sat: Assignment | None = None) -> ReductionOutput:
    """Fresh-variable gadgets turning satisfiability into reconfiguration.

    - k_target >= 5: every clause is extended by each of the K = k-3 single
      positive literal clauses over fresh variables; endpoints are all-ones
      and all-zeros.
    - k_target = 4: one guard variable on every clause plus three blocks of
      ceil(delta*m) guard-clause copies; endpoints pin the fresh block to
      (1,1,1,1) and (1,0,0,0).
    - k_target = 3: as for width 4 but with two guard blocks and mixed widths
      {3,4}; the returned instance is the raw mixed-width one and ``.e3``
      holds the chain-split uniform width-3 companion.
    """
    f = _require_e3(source.formula if isinstance(source, Instance) else source, "reduce_np_gadget")
    if source_sat is not None:
        _check_source_sat(f, source_sat)

    if k_target >= 5:
        big_k = k_target - 3
        clauses = _np_k_clauses(f, big_k)
        formula = Formula(f.n + big_k, k_target, tuple(clauses))
        instance = Instance(formula, Assignment.ones(formula.n), Assignment.zeros(formula.n))
        out = ReductionOutput(
            kind="npk",
            instance=instance,
            witness=None,
            var_map={v: v for v in range(1, f.n + 1)},
            params={"K": big_k, "k_target": k_target, "m_out": formula.m},
            detail=_NpDetail(f, k_target),
        )
    elif k_target == 4:
        if delta is None or Fraction(delta) <= 0:
            raise EksrError("width-4 gadget needs a positive delta")
        copies = _ceil_frac(Fraction(delta) * f.m)
        y, z1, z2, z3 = f.n + 1, f.n + 2, f.n + 3, f.n + 4
        clauses = [clause + (y,) for clause in f.clauses]
        clauses += [(-y, z1, -z2, -z3)] * copies
        clauses += [(-y, -z1, z2, -z3)] * copies
        clauses += [(-y, -z1, -z2, z3)] * copies
        formula = Formula(f.n + 4, 4, tuple(clauses))
        start = Assignment.ones(f.n).extended([1, 1, 1, 1])
        end = Assignment.zeros(f.n).extended([1, 0, 0, 0])
        instance = Instance(formula, start, end)
        out = ReductionOutput(
            kind="np4",
            instance=instance,
            witness=None,
            var_map={v: v for v in range(1, f.n + 1)},
            params={"k_target": 4, "m1": copies, "m2": copies, "m3": copies,
                    "delta": str(Fraction(delta)), "m_out": formula.m},
            detail=_NpDetail(f, k_target),
        )
    elif k_target == 3:
        if delta is None or Fraction(delta) <= 0:
            raise EksrError("width-3 gadget needs a positive delta")
        copies = _ceil_frac(Fraction(delta) * f.m)
        y, z1, z2 = f.n + 1, f.n + 2, f.n + 3
        clauses = [clause + (y,) for clause in f.clauses]
        clauses += [(-y, z1, -z2)] * copies
        clauses += [(-y, -z1, z2)] * copies
        raw_formula = MixedFormula(f.n + 3, tuple(clauses))
        start = Assignment.ones(f.n).extended([1, 1, 1])
        end = Assignment.zeros(f.n).extended([1, 0, 0])
        raw_instance = Instance(raw_formula, start, end)

        e3_clauses, chains, n_out = _width_reduce_clauses(raw_formula, 3)
        e3_formula = Formula(n_out, 3, tuple(e3_clauses))
        e3_instance = Instance(
            e3_formula,
            _chain_extend(start, chains, n_out),
            _chain_extend(end, chains, n_out),
        )
        e3_out = ReductionOutput(
            kind="np3_width3",
            instance=e3_instance,
            witness=None,
            var_map={v: v for v in range(1, f.n + 1)},
            params={"k_target": 3, "m1": copies, "m2": copies,
                    "delta": str(Fraction(delta)), "m_out": e3_formula.m},
            detail=_WidthDetail(raw_instance, tuple(chains), n_out),
        )
        out = ReductionOutput(
            kind="np3",
            instance=raw_instance,
            witness=None,
            var_map={v: v for v in range(1, f.n + 1)},
            params={"k_target": 3, "m1": copies, "m2": copies,
                    "delta": str(Fraction(delta)), "widths": "3,4", "m_out": raw_formula.m},
            detail=_NpDetail(f, k_target),
            e3=e3_out,
        )
    else:
        raise EksrError(f"invalid k_target {k_target}: must be 3, 4 or >= 5")

    if source_sat is not None:
        out = _with_witness(out, build_witness(out, source_sat=source_sat))
    return out


def _np_witness(kind: str, detail: _NpDetail, instance: Instance, source_sat: Assignment) -> ReconfSequence:
    f = detail.source_formula
    _check_source_sat(f, source_sat)
    steps = [instance.start]
    _flip_run(steps, lambda v: source_sat.get(v), range(1, f.n + 1))
    if kind == "npk":
        big_k = instance.n - f.n
        for y in range(f.n + 1, f.n + big_k + 1):
            steps.append(steps[-1].with_value(y, 0))
    elif kind == "np3":
        y, z1, z2 = f.n + 1, f.n + 2, f.n + 3
        for var, val in ((y, 0), (z1, 0), (z2, 0), (y, 1)):
            steps.append(steps[-1].with_value(var, val))
    elif kind == "np4":
        y, z1, z2, z3 = f.n + 1, f.n + 2, f.n + 3, f.n + 4
        for var, val in ((y, 0), (z1, 0), (z2, 0), (z3, 0), (y, 1)):
            steps.append(steps[-1].with_value(var, val))
    else:
        raise EksrError(f"no gadget witness for kind {kind!r}")
    _flip_run(steps, lambda v: instance.end.get(v), range(1, f.n + 1))
    return ReconfSequence(tuple(steps))


# ---------------------------------------------------------------------------
# witness dispatch


def _with_witness(out: ReductionOutput, witness: ReconfSequence) -> ReductionOutput:
    e3 = out.e3
    if e3 is not None:
        raw_witness = witness
        e3 = _with_witness(e3, _simulate_chain_witness(e3.detail, raw_witness.steps))
    return ReductionOutput(out.kind, out.instance, witness, out.var_map, out.params, out.detail, e3)


def build_witness(reduction: ReductionOutput, source_sat: Assignment | None = None,
                  source_path=None) -> ReconfSequence:
    """Construct the completeness witness for a reduction output.

    The fresh-variable gadgets (np3/np4/npk) need a satisfying assignment of
    the source formula; padding, Horn emulation and width conversion need a
    value-1 source sequence.
    """
    kind = reduction.kind
    if kind in ("np3", "np4", "npk"):
        if source_sat is None:
            raise EksrError(f"{kind} witness needs source_sat")
        return _np_witness(kind, reduction.detail, reduction.instance, source_sat)
    if source_path is None:
        raise EksrError(f"{kind} witness needs a value-1 source sequence (source_path)")
    if kind == "pad":
        source: Instance = reduction.detail
        steps = _check_source_path(source, source_path)
        big_k = reduction.params["K"]
        return ReconfSequence(tuple(a.extended([0] * big_k) for a in steps))
    if kind == "horn":
        source = reduction.detail
        steps = _check_source_path(source, source_path)
        return ReconfSequence(steps)
    if kind in ("width", "np3_width3"):
        detail: _WidthDetail = reduction.detail
        steps = _check_source_path(detail.source, source_path)
        return _simulate_chain_witness(detail, steps)
    raise EksrError(f"unknown reduction kind {kind!r}")
