import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eksr import Assignment, ParseError, parse_instance, serialize_instance
from eksr.generate import PlantedGenerator, gen_random_instance


def test_round_trip(example1, example1_text):
    assert serialize_instance(example1) == example1_text
    assert parse_instance(serialize_instance(example1)) == example1


def test_parse_accepts_comments_and_bytes(example1_text):
    text = "c hello\n" + example1_text.replace("s 0000", "c mid comment\ns 0000")
    inst = parse_instance(text)
    assert inst.formula.m == 6
    assert parse_instance(example1_text.encode()) == inst


def test_parse_trivial_identity_endpoints():
    inst = parse_instance("p eksr 3 1 3\n1 2 3 0\ns 111\nt 111\n")
    assert inst.start == inst.end


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda t: t.replace("p eksr 4 6 3", "p cnf 4 6 3"), "malformed header"),
        (lambda t: t.replace("p eksr 4 6 3", "p eksr 4 6"), "malformed header"),
        (lambda t: t.replace("-1 -2 3 0", "-1 -2 3 4 0"), "expected 3 literals"),
        (lambda t: t.replace("-1 -2 3 0", "-1 -1 3 0"), "duplicate variable"),
        (lambda t: t.replace("-1 -2 3 0", "-1 -2 5 0"), "out of range"),
        (lambda t: t.replace("-1 -2 3 0", "-1 -2 3"), "missing terminating 0"),
        (lambda t: t.replace("s 0000", "s 000"), "bitstring length 3"),
        (lambda t: t.replace("s 0000", "s 0100"), "does not satisfy"),
        (lambda t: t.replace("t 1111\n", ""), "missing end assignment"),
        (lambda t: t + "extra\n", "trailing"),
        (lambda t: t.replace("p eksr 4 6 3", "p eksr 4 7 3"), "wrong clause count"),
    ],
)
def test_parse_diagnostics(example1_text, mutate, message):
    with pytest.raises(ParseError, match=message):
        parse_instance(mutate(example1_text))


@given(st.integers(0, 2**31 - 1), st.integers(4, 9), st.integers(1, 12))
@settings(max_examples=25, deadline=None)
def test_round_trip_on_generated_instances(seed, n, m):
    gen = PlantedGenerator(n, m, 3, seed, (Assignment.zeros(n), Assignment.ones(n)))
    inst = gen_random_instance(gen)
    assert parse_instance(serialize_instance(inst)) == inst
