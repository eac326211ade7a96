"""Finite randomized verifiers with exact acceptance probabilities.

A verifier is a finite weighted list of atoms.  Each atom queries a fixed
tuple of proof positions and applies a predicate given as a truth table.
Running the verifier means drawing an atom with its weight and accepting iff
the predicate accepts the queried local view, so the acceptance probability
of a proof is an exact rational: the weighted count of accepting atoms.

Truth-table convention: for an atom with queries (i_1, ..., i_q), the local
view of a proof maps to the integer with bit j-1 equal to the proof bit at
i_j, and the atom accepts iff that bit of ``table`` is set.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Sequence

from .errors import CapExceededError, EksrError, ParseError
from .formulas import Assignment, Clause, CnfLike, Formula

Q_CAP = 12
ATOM_CAP = 10**7
CLAUSE_CAP = 10**6


@dataclass(frozen=True)
class VerifierAtom:
    weight: Fraction
    queries: tuple[int, ...]
    table: int

    def arity(self) -> int:
        return len(self.queries)

    def local_view(self, proof: Assignment) -> int:
        view = 0
        for j, pos in enumerate(self.queries):
            view |= proof.get(pos) << j
        return view

    def accepts(self, proof: Assignment) -> bool:
        return bool((self.table >> self.local_view(proof)) & 1)

    def rejecting_views(self) -> list[int]:
        return [v for v in range(1 << self.arity()) if not (self.table >> v) & 1]


@dataclass(frozen=True)
class VerifierSpec:
    """Weighted atom list over a proof of ``proof_len`` bit positions."""

    proof_len: int
    atoms: tuple[VerifierAtom, ...]

    def __post_init__(self):
        if not self.atoms:
            raise EksrError("verifier needs at least one atom")
        if len(self.atoms) > ATOM_CAP:
            raise CapExceededError(f"{len(self.atoms)} atoms exceeds the atom cap")
        total = Fraction(0)
        for atom in self.atoms:
            if atom.weight <= 0:
                raise EksrError("atom weights must be positive")
            if atom.arity() > Q_CAP:
                raise CapExceededError(f"atom queries {atom.arity()} positions, cap is {Q_CAP}")
            for pos in atom.queries:
                if not 1 <= pos <= self.proof_len:
                    raise EksrError(f"query position {pos} out of range (proof length {self.proof_len})")
            total += atom.weight
        if total != 1:
            raise EksrError(f"atom weights sum to {total}, expected 1")


@dataclass(frozen=True)
class VerifierParams:
    """Mixture and repetition parameters for the combined and Horn verifiers."""

    q: int
    g: Fraction
    k: int
    lam: int
    mu: Fraction | None = None
    delta: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "g", Fraction(self.g))
        mu = Fraction(self.q, 2) if self.mu is None else Fraction(self.mu)
        object.__setattr__(self, "mu", mu)
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
        if self.lam < 2:
            raise EksrError(f"lambda must be at least 2, got {self.lam}")
        if not 0 < self.g:
            raise EksrError("soundness gap g must be positive")
        w = self.mixture_weight
        if not 0 < w < 1:
            raise EksrError(f"mixture weight {w} must lie strictly between 0 and 1")

    @property
    def mixture_weight(self) -> Fraction:
        return self.mu / (self.g * self.k)


def acceptance_probability(v: VerifierSpec, proof: Assignment) -> Fraction:
    """Exact probability that the verifier accepts the proof."""
    if proof.n != v.proof_len:
        raise EksrError(f"proof length {proof.n} != verifier proof length {v.proof_len}")
    return sum((a.weight for a in v.atoms if a.accepts(proof)), Fraction(0))


def query_probability(v: VerifierSpec, position: int) -> Fraction:
    """Total weight of atoms querying the given proof position."""
    if not 1 <= position <= v.proof_len:
        raise EksrError(f"position {position} out of range (proof length {v.proof_len})")
    return sum((a.weight for a in v.atoms if position in a.queries), Fraction(0))


def _clause_table(clause: Clause) -> int:
    table = 0
    for pattern in range(1 << len(clause)):
        for j, lit in enumerate(clause):
            if ((pattern >> j) & 1) == (lit > 0):
                table |= 1 << pattern
                break
    return table


def make_clause_verifier(formula: CnfLike) -> VerifierSpec:
    """One atom per clause, uniform weight; acceptance equals the clause value."""
    m = formula.m
    atoms = tuple(
        VerifierAtom(Fraction(1, m), tuple(abs(lit) for lit in clause), _clause_table(clause))
        for clause in formula.clauses
    )
    return VerifierSpec(formula.n, atoms)


def make_all_one(p: int, ell: int) -> VerifierSpec:
    """Query p distinct positions out of ell; accept only the all-ones view."""
    if not 1 <= p <= ell:
        raise EksrError(f"need 1 <= p <= ell, got p={p}, ell={ell}")
    count = comb(ell, p)
    if count > ATOM_CAP:
        raise CapExceededError(f"C({ell},{p}) = {count} atoms exceeds the atom cap")
    table = 1 << ((1 << p) - 1)
    atoms = tuple(
        VerifierAtom(Fraction(1, count), qs, table)
        for qs in itertools.combinations(range(1, ell + 1), p)
    )
    return VerifierSpec(ell, atoms)


def make_combined(base: VerifierSpec, allone: VerifierSpec, params: VerifierParams) -> VerifierSpec:
    """Run the base verifier on the first half of a doubled proof with the
    mixture weight, otherwise the all-one verifier on the second half."""
    w = params.mixture_weight
    shift = base.proof_len
    atoms = [VerifierAtom(w * a.weight, a.queries, a.table) for a in base.atoms]
    atoms += [
        VerifierAtom((1 - w) * a.weight, tuple(pos + shift for pos in a.queries), a.table)
        for a in allone.atoms
    ]
    return VerifierSpec(base.proof_len + allone.proof_len, atoms)


def _horn_product(components: Sequence[Sequence[VerifierAtom]], proof_len: int,
                  merge_overlaps: bool) -> VerifierSpec:
    """Product verifier accepting iff the first component accepts or any later
    component rejects.  Tuples with overlapping queries either early-accept
    (``merge_overlaps=False``) or are evaluated on the merged view."""
    total = 1
    for c in components:
        total *= len(c)
    if total > ATOM_CAP:
        raise CapExceededError(f"{total} product atoms exceed the atom cap")
    atoms = []
    for tup in itertools.product(*components):
        seen: set[int] = set()
        disjoint = True
        for a in tup:
            for pos in a.queries:
                if pos in seen:
                    disjoint = False
                    break
                seen.add(pos)
            if not disjoint:
                break
        weight = Fraction(1)
        for a in tup:
            weight *= a.weight
        if not disjoint and not merge_overlaps:
            atoms.append(VerifierAtom(weight, (), 1))
            continue
        if disjoint:
            queries = tuple(pos for a in tup for pos in a.queries)
            slot = {pos: j for j, pos in enumerate(queries)}
        else:
            merged: list[int] = []
            for a in tup:
                for pos in a.queries:
                    if pos not in merged:
                        merged.append(pos)
            queries = tuple(merged)
            slot = {pos: j for j, pos in enumerate(queries)}
        width = len(queries)
        if width > Q_CAP:
            raise CapExceededError(f"product atom queries {width} positions, cap is {Q_CAP}")
        table = 0
        for pattern in range(1 << width):
            accept = False
            for idx, a in enumerate(tup):
                view = 0
                for j, pos in enumerate(a.queries):
                    view |= ((pattern >> slot[pos]) & 1) << j
                ok = (a.table >> view) & 1
                if idx == 0:
                    accept = bool(ok)
                    if accept:
                        break
                elif not ok:
                    accept = True
                    break
            if accept:
                table |= 1 << pattern
        atoms.append(VerifierAtom(weight, queries, table))
    return VerifierSpec(proof_len, atoms)


def make_horn(w: VerifierSpec, allone_q: VerifierSpec, allone_rem: VerifierSpec, lam: int) -> VerifierSpec:
    """Horn-style combination: one combined-verifier check, lambda-1 all-one
    checks and one remainder all-one check, the latter addressing the second
    proof half.  Accepts when the first check accepts, any all-one check
    rejects, or the query tuples collide."""
    if lam < 2:
        raise EksrError(f"lambda must be at least 2, got {lam}")
    if allone_q.proof_len != allone_rem.proof_len:
        raise EksrError("both all-one verifiers must address the same proof half")
    shift = w.proof_len - allone_q.proof_len
    if shift < 0:
        raise EksrError("all-one proof half is longer than the combined proof")

    def shifted(spec: VerifierSpec) -> list[VerifierAtom]:
        return [VerifierAtom(a.weight, tuple(p + shift for p in a.queries), a.table) for a in spec.atoms]

    components = [list(w.atoms)] + [shifted(allone_q)] * (lam - 1) + [shifted(allone_rem)]
    return _horn_product(components, w.proof_len, merge_overlaps=False)


def make_overview_horn(base: VerifierSpec, lam: int, require_disjoint: bool = False) -> VerifierSpec:
    """Horn combination of lambda independent copies of one base verifier:
    accept iff the first copy accepts or any later copy rejects.

    With ``require_disjoint`` the overlapping tuples early-accept, mirroring
    ``make_horn``; otherwise they are evaluated on the merged local view
    (sampling with replacement).
    """
    if lam < 2:
        raise EksrError(f"lambda must be at least 2, got {lam}")
    components = [list(base.atoms)] * lam
    return _horn_product(components, base.proof_len, merge_overlaps=not require_disjoint)


def make_or_emulator(horn: VerifierSpec) -> VerifierSpec:
    """Split every atom into one atom per rejecting local view.

    Each produced atom rejects exactly one view (an OR predicate over its
    queries), carrying 1/R of the parent weight for R rejecting views;
    atoms that accept everything pass through unchanged.
    """
    atoms = []
    for atom in horn.atoms:
        if atom.table == 0:
            raise EksrError("atom rejects every view; OR emulation needs an accepting view")
        rejecting = atom.rejecting_views()
        if not rejecting:
            atoms.append(atom)
            continue
        share = atom.weight / len(rejecting)
        full = (1 << (1 << atom.arity())) - 1
        for view in rejecting:
            atoms.append(VerifierAtom(share, atom.queries, full ^ (1 << view)))
    return VerifierSpec(horn.proof_len, atoms)


def rejecting_mass(v: VerifierSpec) -> Fraction:
    """Total weight of atoms that reject at least one local view."""
    return sum((a.weight for a in v.atoms if a.rejecting_views()), Fraction(0))


def cnf_from_or_verifier(x: VerifierSpec, width_k: int, clause_cap: int = CLAUSE_CAP) -> Formula:
    """Emit one clause per rejecting atom, with multiplicity proportional to
    its weight; a proof fully satisfies the formula iff the verifier accepts
    it with probability 1."""
    rejecting = []
    for atom in x.atoms:
        views = atom.rejecting_views()
        if not views:
            continue
        if len(views) > 1:
            raise EksrError("atom rejects more than one view; not an OR-predicate verifier")
        if atom.arity() != width_k:
            raise EksrError(f"rejecting atom queries {atom.arity()} positions, expected width {width_k}")
        if len(set(atom.queries)) != atom.arity():
            raise EksrError("rejecting atom queries a position twice; cannot emit a clause")
        rejecting.append((atom, views[0]))
    if not rejecting:
        raise EksrError("verifier accepts everything; no clauses to emit")
    denom = lcm(*(atom.weight.denominator for atom, _ in rejecting))
    clauses = []
    for atom, view in rejecting:
        copies = atom.weight * denom
        assert copies.denominator == 1
        clause = tuple(
            pos if not (view >> j) & 1 else -pos for j, pos in enumerate(atom.queries)
        )
        clauses.extend([clause] * int(copies))
        if len(clauses) > clause_cap:
            raise CapExceededError(f"emitted clause count exceeds the cap {clause_cap}")
    return Formula(x.proof_len, width_k, tuple(clauses))


def lambda_zero(params: VerifierParams, epsilon: Fraction) -> int:
    """Smallest repetition count the Horn combination needs, from the gap,
    query count and target accuracy: ceil(mu*(mu+delta)/delta / (g*q)) with
    delta = epsilon/4."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise EksrError(f"epsilon must lie in (0,1), got {epsilon}")
    if not 0 < params.g < 1:
        raise EksrError(f"soundness gap must lie in (0,1), got {params.g}")
    delta = epsilon / 4
    val = params.mu * (params.mu + delta) / delta / (params.g * params.q)
    return -((-val.numerator) // val.denominator)


def horn_rejection_curve(lam: int, samples: Iterable[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Points (eps, eps*(1-eps)^(lambda-1)) of the non-monotone rejection curve."""
    if lam < 1:
        raise EksrError(f"lambda must be positive, got {lam}")
    out = []
    for eps in samples:
        eps = Fraction(eps)
        if not 0 <= eps <= 1:
            raise EksrError(f"curve points need eps in [0,1], got {eps}")
        out.append((eps, eps * (1 - eps) ** (lam - 1)))
    return out


# ---------------------------------------------------------------------------
# JSON serialization (weights as "num/den", truth tables as hex)


def spec_to_json(v: VerifierSpec) -> str:
    payload = {
        "proof_len": v.proof_len,
        "atoms": [
            {
                "weight": f"{a.weight.numerator}/{a.weight.denominator}",
                "queries": list(a.queries),
                "table": f"{a.table:x}",
            }
            for a in v.atoms
        ],
    }
    return json.dumps(payload, indent=1)


def spec_from_json(text: str) -> VerifierSpec:
    try:
        payload = json.loads(text)
        atoms = tuple(
            VerifierAtom(Fraction(a["weight"]), tuple(a["queries"]), int(a["table"], 16))
            for a in payload["atoms"]
        )
        return VerifierSpec(int(payload["proof_len"]), atoms)
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed verifier spec: {exc}") from None
