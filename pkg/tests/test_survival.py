from fractions import Fraction

from eksr import Assignment, clause_survival_given_rho
from eksr.survival import PhaseState, literal_profile, phase_states, phase_survival, survival_from_profiles

from oracles import routed_survival_bruteforce, survival_bruteforce


def test_single_true_literal_factor():
    # one true literal, one pending off, j pending ons: survives iff the off
    # is not first, probability j/(j+1)
    for j in range(0, 7):
        assert phase_survival(PhaseState(1, 1, j)) == Fraction(j, j + 1)


def test_no_offs_always_survives():
    for c in range(1, 5):
        for b in range(0, 6):
            assert phase_survival(PhaseState(c, 0, b)) == 1


def test_zero_count_is_dead():
    assert phase_survival(PhaseState(0, 0, 0)) == 0
    assert phase_survival(PhaseState(0, 0, 3)) == 0


def test_recurrence_matches_enumeration_exhaustively():
    for c in range(0, 9):
        for a in range(0, 9):
            for b in range(0, 9 - a):
                assert phase_survival(PhaseState(c, a, b)) == survival_bruteforce(c, a, b)


def test_profile_survival_matches_enumeration_k4():
    for s in range(16):
        for r in range(16):
            for e in range(16):
                assert survival_from_profiles(s, r, e) == routed_survival_bruteforce(s, r, e, 4)


def test_clause_survival_examples(example1):
    c1 = example1.formula.clauses[0]  # -1 -2 3
    start, end = example1.start, example1.end
    # waypoint 1100 kills both negative literals with x3 still false
    assert clause_survival_given_rho(c1, start, end, Assignment.from_string("1100")) == 0
    # frozen from enumeration of all phase-order pairs
    assert clause_survival_given_rho(c1, start, end, Assignment.from_string("0100")) == Fraction(1, 2)
    assert clause_survival_given_rho(c1, start, end, Assignment.from_string("0010")) == 1


def test_literal_true_throughout_survives(example1):
    # waypoint keeps x3 true: clause -1 -2 3 holds at start only via the
    # negations, but a literal true in start, rho and end pins survival at 1
    clause = (3, -1, 4)
    start = Assignment.from_string("0011")
    end = Assignment.from_string("0111")
    rho = Assignment.from_string("1011")
    assert clause_survival_given_rho(clause, start, end, rho) == 1


def test_phase_states_consistency(example1):
    c1 = example1.formula.clauses[0]
    rho = Assignment.from_string("0100")
    ph1, ph2 = phase_states(c1, example1.start, rho, example1.end)
    assert ph1.true_count - ph1.offs + ph1.ons == ph2.true_count
    assert phase_survival(ph1) * phase_survival(ph2) == clause_survival_given_rho(
        c1, example1.start, example1.end, rho
    )
    s = literal_profile(c1, example1.start)
    assert ph1.true_count == s.bit_count()
