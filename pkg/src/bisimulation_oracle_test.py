from fractions import Fraction
import pytest

from bisimulation_oracle import *
from functor_parser import parse_functor
from instance_generator import GenSpec, counter_chain, generate
from system_elements.coalgebra import Coalgebra
from system_elements.errors import *
from system_elements.partition import Partition
from system_elements.value import *


def test_distribution_system_is_one_block():
    coalg = generate(GenSpec('mc', 12, alphabet_size=1, seed=5))
    assert len(bisim_bruteforce(coalg)) == 1


def test_chain_is_all_singletons():
    assert bisim_bruteforce(counter_chain(3)).blocks == [[0], [1], [2]]


def test_isomorphic_components_share_blocks():
    # two copies of a 4-state LTS, states k and k + 4 correspond
    edges = {0: [('a', 1), ('b', 2)], 1: [('a', 3)], 2: [('a', 3)], 3: [('b', 0)]}
    F = parse_functor('P ({a,b} * X)')
    c = []
    for offset in (0, 4):
        for x in range(4):
            c.append(SetOf(TupleOf([Label(l), StateRef(y + offset)]) for l, y in edges[x]))
    partition = bisim_bruteforce(Coalgebra(F, c))
    assert partition.blocks == [[0, 4], [1, 2, 5, 6], [3, 7]]


def test_size_limit():
    F = parse_functor('D X')
    c = [DistOf([(StateRef(0), Fraction(1))])] * (MAX_ORACLE_STATES + 1)
    with pytest.raises(SizeLimitError):
        bisim_bruteforce(Coalgebra(F, c, validate=False))


def test_partitions_equal():
    p = Partition([0, 0, 1, 2])
    assert partitions_equal(p, p)
    assert partitions_equal(p, Partition.from_blocks([[3], [2], [1, 0]], 4))
    assert not partitions_equal(p, Partition([0, 1, 2, 3]))
    with pytest.raises(MalformedInputError):
        partitions_equal(p, Partition([0, 0, 1]))


def test_check_r_partitioning():
    relation = PairRelation.from_partition(Partition([0, 0, 0, 1]))
    assert check_r_partitioning(Partition([0, 0, 0, 1]), relation)
    # a block straddling two classes
    assert not check_r_partitioning(Partition([0, 0, 0, 0]), relation)
    # the class {0, 1, 2} split into {0, 1} and {2}
    assert not check_r_partitioning(Partition([0, 0, 1, 2]), relation)


def test_check_r_partitioning_needs_an_equivalence():
    relation = PairRelation.total(3)
    relation.rows[0][1] = 0
    assert not relation.is_equivalence()
    with pytest.raises(MalformedInputError):
        check_r_partitioning(Partition([0, 0, 0]), relation)


def test_pair_relation_classes():
    relation = PairRelation.total(4)
    relation.remove(0, 3)
    relation.remove(1, 3)
    relation.remove(2, 3)
    assert relation.classes().blocks == [[0, 1, 2], [3]]
    assert relation.is_equivalence()
    relation.remove(0, 1)
    # closure: 0 ~ 2 ~ 1
    assert relation.classes().blocks == [[0, 1, 2], [3]]
    assert not relation.is_equivalence()
