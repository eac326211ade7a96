import pytest

from eksr import Assignment, EksrError, serialize_instance, value
from eksr.generate import PlantedGenerator, gen_random_instance


def test_planted_endpoints_satisfy():
    gen = PlantedGenerator(4, 6, 3, 0, (Assignment.zeros(4), Assignment.ones(4)))
    inst = gen_random_instance(gen)
    assert value(inst.formula, inst.start) == 1
    assert value(inst.formula, inst.end) == 1
    assert inst.start == Assignment.zeros(4)


def test_same_seed_same_bytes():
    gen = PlantedGenerator(8, 20, 3, 7, (Assignment.zeros(8), Assignment.ones(8)))
    a = serialize_instance(gen_random_instance(gen))
    b = serialize_instance(gen_random_instance(gen))
    assert a == b
    other = PlantedGenerator(8, 20, 3, 8, (Assignment.zeros(8), Assignment.ones(8)))
    assert serialize_instance(gen_random_instance(other)) != a


def test_validation_sweep():
    for seed in range(50):
        gen = PlantedGenerator(20, 100, 4, seed, (Assignment.zeros(20), Assignment.ones(20)))
        inst = gen_random_instance(gen)
        f = inst.formula
        assert f.n == 20 and f.m == 100 and f.k == 4
        for clause in f.clauses:
            assert len({abs(l) for l in clause}) == 4


def test_k_larger_than_n_rejected():
    with pytest.raises(EksrError):
        PlantedGenerator(2, 3, 3, 0, (Assignment.zeros(2), Assignment.ones(2)))
