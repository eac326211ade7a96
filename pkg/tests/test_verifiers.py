from fractions import Fraction

import pytest

from eksr import Assignment, EksrError, Formula, value
from eksr.verifiers import (
    VerifierAtom,
    VerifierParams,
    VerifierSpec,
    acceptance_probability,
    cnf_from_or_verifier,
    horn_rejection_curve,
    lambda_zero,
    make_all_one,
    make_clause_verifier,
    make_combined,
    make_horn,
    make_or_emulator,
    make_overview_horn,
    query_probability,
    rejecting_mass,
    spec_from_json,
    spec_to_json,
)


def disjoint_formula():
    return Formula(9, 3, ((1, 2, 3), (4, 5, 6), (7, 8, 9)))


def test_spec_weights_must_sum_to_one():
    atom = VerifierAtom(Fraction(1, 2), (1,), 0b10)
    with pytest.raises(EksrError, match="sum"):
        VerifierSpec(1, (atom,))


def test_always_accepting_atom():
    spec = VerifierSpec(3, (VerifierAtom(Fraction(1), (1, 2), 0b1111),))
    for bits in range(8):
        assert acceptance_probability(spec, Assignment(3, bits)) == 1


def test_clause_verifier_equals_value(example1):
    cv = make_clause_verifier(example1.formula)
    assert len(cv.atoms) == 6
    assert acceptance_probability(cv, Assignment.from_string("0111")) == Fraction(4, 6)
    for bits in range(16):
        a = Assignment(4, bits)
        assert acceptance_probability(cv, a) == value(example1.formula, a)


def test_all_one_verifier():
    ao = make_all_one(2, 4)
    assert len(ao.atoms) == 6
    assert acceptance_probability(ao, Assignment.ones(4)) == 1
    one_zero = Assignment.from_string("1110")
    assert 1 - acceptance_probability(ao, one_zero) == Fraction(1, 2)
    full = make_all_one(4, 4)
    for bits in range(16):
        accepts = acceptance_probability(full, Assignment(4, bits)) == 1
        assert accepts == (bits == 15)


def test_all_one_rejection_monotone_in_p():
    sigma = Assignment.from_string("110101")
    rejects = [1 - acceptance_probability(make_all_one(p, 6), sigma) for p in range(1, 7)]
    assert all(a <= b for a, b in zip(rejects, rejects[1:]))


def test_all_one_validation():
    with pytest.raises(EksrError):
        make_all_one(5, 4)


def test_query_probability_all_one():
    ao = make_all_one(2, 4)
    for pos in range(1, 5):
        assert query_probability(ao, pos) == Fraction(2, 4)
    with pytest.raises(EksrError):
        query_probability(ao, 5)


def test_query_probability_clause_verifier(example1):
    cv = make_clause_verifier(example1.formula)
    # x1 appears in clauses 1,2,3,4,6
    assert query_probability(cv, 1) == Fraction(5, 6)


def test_combined_mixture(example1):
    params = VerifierParams(q=3, g=Fraction(1, 2), k=12, lam=2)
    base = make_clause_verifier(example1.formula)
    allone = make_all_one(3, 4)
    comb = make_combined(base, allone, params)
    assert comb.proof_len == 8
    # pi satisfying + all-ones sigma accepts with probability 1
    assert acceptance_probability(comb, Assignment.from_string("00001111")) == 1
    # base rejecting with r, sigma all ones: combined rejects with w*r
    pi = Assignment.from_string("01111111")
    r = 1 - acceptance_probability(base, Assignment.from_string("0111"))
    assert 1 - acceptance_probability(comb, pi) == params.mixture_weight * r
    # weight bound per mixture: every location within the decomposition bound
    w = params.mixture_weight
    for pos in range(1, 9):
        if pos <= 4:
            assert query_probability(comb, pos) == w * query_probability(base, pos)
        else:
            assert query_probability(comb, pos) == (1 - w) * query_probability(allone, pos - 4)


def test_params_validation():
    with pytest.raises(EksrError):
        VerifierParams(q=3, g=Fraction(1, 2), k=2, lam=2)  # mixture weight >= 1
    with pytest.raises(EksrError):
        VerifierParams(q=3, g=Fraction(1, 2), k=12, lam=1)


def test_overview_horn_rejection_law():
    f = disjoint_formula()
    cv = make_clause_verifier(f)
    for lam in (2, 3):
        horn = make_overview_horn(cv, lam)
        for bits in range(1 << 9):
            a = Assignment(9, bits)
            eps = 1 - value(f, a)
            expect = eps * (1 - eps) ** (lam - 1)
            assert 1 - acceptance_probability(horn, a) == expect


def test_structured_horn_acceptance():
    # combined verifier over a doubled proof, with room for disjoint queries
    f = Formula(6, 3, ((1, 2, 3), (4, 5, 6)))
    params = VerifierParams(q=3, g=Fraction(1, 2), k=24, lam=2)
    base = make_clause_verifier(f)
    allone = make_all_one(3, 6)
    w = make_combined(base, allone, params)
    horn = make_horn(w, allone, allone, params.lam)
    assert horn.proof_len == 12
    # start-style proof: satisfying pi, all-ones sigma
    good = Assignment.from_string("100100111111")
    assert acceptance_probability(w, good) == 1
    assert acceptance_probability(horn, good) == 1

    # brute force the product law on an arbitrary proof
    test = Assignment.from_string("000100110111")
    got = acceptance_probability(horn, test)
    expect = Fraction(0)
    for a1 in w.atoms:
        for a2 in allone.atoms:
            for a3 in allone.atoms:
                weight = a1.weight * a2.weight * a3.weight
                q2 = tuple(p + 6 for p in a2.queries)
                q3 = tuple(p + 6 for p in a3.queries)
                qs = [a1.queries, q2, q3]
                flat = [p for q in qs for p in q]
                if len(set(flat)) < len(flat):
                    expect += weight  # overlapping tuples accept outright
                    continue
                ok1 = a1.accepts(test)
                ok2 = (a2.table >> sum(test.get(p) << j for j, p in enumerate(q2))) & 1
                ok3 = (a3.table >> sum(test.get(p) << j for j, p in enumerate(q3))) & 1
                if ok1 or not ok2 or not ok3:
                    expect += weight
    assert got == expect


def test_or_emulator_splits_weights():
    f = disjoint_formula()
    horn = make_overview_horn(make_clause_verifier(f), 2, require_disjoint=True)
    x = make_or_emulator(horn)
    # every emitted atom rejects at most one view
    assert all(len(a.rejecting_views()) <= 1 for a in x.atoms)
    # rejection scales by exactly 1/7 for the clause-based check
    for bits in (0, 7, 56, 448, 511, 273):
        a = Assignment(9, bits)
        assert 7 * (1 - acceptance_probability(x, a)) == 1 - acceptance_probability(horn, a)


def test_or_emulator_preserves_probability_one_set():
    f = disjoint_formula()
    horn = make_overview_horn(make_clause_verifier(f), 2, require_disjoint=True)
    x = make_or_emulator(horn)
    for bits in range(1 << 9):
        a = Assignment(9, bits)
        assert (acceptance_probability(horn, a) == 1) == (acceptance_probability(x, a) == 1)


def test_cnf_emission_laws():
    f = disjoint_formula()
    horn = make_overview_horn(make_clause_verifier(f), 2, require_disjoint=True)
    x = make_or_emulator(horn)
    phi = cnf_from_or_verifier(x, 6)
    assert phi.k == 6 and phi.n == 9
    mass = rejecting_mass(x)
    for bits in range(1 << 9):
        a = Assignment(9, bits)
        assert 1 - value(phi, a) == (1 - acceptance_probability(x, a)) / mass
        assert (value(phi, a) == 1) == (acceptance_probability(x, a) == 1)


def test_cnf_emission_requires_rejecting_atom():
    trivial = VerifierSpec(2, (VerifierAtom(Fraction(1), (1, 2), 0b1111),))
    with pytest.raises(EksrError, match="accepts everything"):
        cnf_from_or_verifier(trivial, 2)


def test_cnf_emission_width_mismatch():
    spec = VerifierSpec(3, (VerifierAtom(Fraction(1), (1, 2), 0b1110),))
    with pytest.raises(EksrError, match="width"):
        cnf_from_or_verifier(spec, 3)


def test_lambda_zero():
    params = VerifierParams(q=3, g=Fraction(1, 2), k=100, lam=2)
    assert lambda_zero(params, Fraction(1, 2)) == 13
    # monotone: larger epsilon, no larger repetition count
    prev = None
    for num in range(1, 10):
        lz = lambda_zero(params, Fraction(num, 10))
        assert lz >= 1
        if prev is not None:
            assert lz <= prev
        prev = lz


def test_horn_rejection_curve():
    pts = dict(horn_rejection_curve(5, [Fraction(0), Fraction(1, 5), Fraction(1)]))
    assert pts[Fraction(0)] == 0 and pts[Fraction(1)] == 0
    assert pts[Fraction(1, 5)] == Fraction(256, 3125)
    grid = [Fraction(i, 20) for i in range(21)]
    curve = horn_rejection_curve(5, grid)
    best = max(curve, key=lambda p: p[1])
    assert best[0] == Fraction(1, 5)
    # symmetry for lam = 2
    two = dict(horn_rejection_curve(2, grid))
    assert all(two[e] == two[1 - e] for e in grid)


def test_spec_json_round_trip(example1):
    cv = make_clause_verifier(example1.formula)
    assert spec_from_json(spec_to_json(cv)) == cv
