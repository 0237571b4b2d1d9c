from fractions import Fraction
import math
import time
import pytest

from bisimulation_oracle import PairRelation, bisim_bruteforce, check_r_partitioning, partitions_equal
from functor_parser import parse_functor
from instance_generator import GenSpec, counter_chain, generate
from partition_refinement import *
from refinement_tree import RefinementNode, WeightKind, block_weight
from system_elements.coalgebra import Coalgebra
from system_elements.errors import ConfigurationError
from system_elements.partition import Partition
from system_elements.value import *
from weighted_tree import audit_tree, validate_weight

# Run all tests with `poetry run pytest`.
# Annotate tests with `@skip` to skip them.
skip = pytest.mark.skip

FAMILIES = ['dfa', 'nfa', 'lts', 'mc', 'mdp']


def dfa(accepting, successors, letters='a'):
    F = parse_functor('{0,1} * X ^ {' + ','.join(letters) + '}')
    return Coalgebra(F, [TupleOf([Label('1' if x in accepting else '0'),
                                  Fun({l: StateRef(y) for l, y in zip(letters, ys)})])
                         for x, ys in enumerate(successors)])


def instances(count, max_states=50, seed=0):
    """
    `count` seeded instances of every family, of varying size and alphabet.
    """
    for family in FAMILIES:
        for i in range(count):
            s = seed + i
            yield generate(GenSpec(family, 1 + s * 7 % max_states, alphabet_size=1 + s % 3,
                                   out_degree=s % 3, support=1 + s % 3, denominator=4, seed=s))


def counterexamples(prop, cases):
    return [case for case in cases if not prop(case)]


def test_all_accepting_self_loops():
    coalg = dfa({0, 1, 2}, [[0], [1], [2]])
    assert refine_naive(coalg).partition.blocks == [[0, 1, 2]]
    result = refine_hopcroft(coalg)
    assert result.partition.blocks == [[0, 1, 2]]
    assert result.stats.splits == 0


def test_distribution_system_is_one_block():
    coalg = generate(GenSpec('mc', 20, alphabet_size=1, seed=4))
    assert len(refine_naive(coalg).partition) == 1
    for weight in WEIGHT_NAMES:
        assert len(refine_hopcroft(coalg, weight).partition) == 1


def test_chain_of_three():
    coalg = dfa({2}, [[1], [2], [2]])
    assert refine_naive(coalg).partition.blocks == [[0], [1], [2]]
    result = refine_hopcroft(coalg)
    assert result.partition.blocks == [[0], [1], [2]]
    assert result.stats.splits == 2


def test_single_state():
    result = refine_hopcroft(dfa(set(), [[0]]))
    assert result.partition.blocks == [[0]]
    assert len(result.tree.nodes) == 1
    assert result.stats.iterations == 1 and result.stats.splits == 0


def test_two_state_dfa():
    coalg = dfa({0, 1}, [[0], [1]])
    assert refine_hopcroft(coalg).partition.blocks == [[0, 1]]


def test_split_leaf_uses_a_clean_representative():
    # states 1, 2, 3 go to block {0, 4}, state 5 stays inside {1, 2, 3, 5}
    coalg = dfa({0, 4}, [[0], [0], [0], [0], [0], [1]])
    current = Partition.from_blocks([[0, 4], [1, 2, 3, 5]], 6)
    assert split_leaf({1, 2, 3, 5}, {1, 2}, coalg, current) == [[1, 2, 3], [5]]
    assert split_leaf({1, 2, 3, 5}, {1, 2, 3, 5}, coalg, current) == [[1, 2, 3, 5]]
    stats = RunStats()
    assert group_leaf([1, 2, 3], {1, 2, 3}, coalg, current.block_of, stats) == [[1, 2, 3]]
    assert stats.signatures_computed == 3
    stats = RunStats()
    group_leaf([1, 2, 3, 5], {3, 5}, coalg, current.block_of, stats)
    assert stats.signatures_computed == 3


def test_mark_dirty():
    F = parse_functor('P X')
    coalg = Coalgebra(F, [SetOf([StateRef(1), StateRef(2)]), SetOf([]), SetOf([])])
    heavy = RefinementNode(1, None, [0], {})
    light = RefinementNode(2, None, [1, 2], {})
    stats = RunStats()
    markings = mark_dirty([heavy, light], 0, coalg.pred_index, lambda x: heavy, stats)
    assert markings == {(1, 0)}
    assert heavy.dirty == {0}
    assert (stats.markdirty_touches, stats.dirty_markings) == (2, 1)
    stats = RunStats()
    assert mark_dirty([heavy, light], 1, coalg.pred_index, lambda x: heavy, stats) == set()
    assert stats.markdirty_touches == 0


def test_block_weights():
    # state 3 has four predecessors; only 1 and 3 are successors
    F = parse_functor('P X')
    coalg = Coalgebra(F, [SetOf([StateRef(3)]), SetOf([StateRef(3)]), SetOf([StateRef(3), StateRef(1)]),
                          SetOf([StateRef(3)]), SetOf([])])
    assert block_weight(WeightKind('card'), {0, 1, 2}) == 3
    assert block_weight(WeightKind.for_coalgebra('pred', coalg), {3}) == 4
    assert block_weight(WeightKind.for_coalgebra('reach', coalg), {0, 1, 2, 3, 4}) == 2
    with pytest.raises(ConfigurationError):
        block_weight(WeightKind('pred'), {3})
    with pytest.raises(ConfigurationError):
        WeightKind('size')


def test_pred_weight_picks_the_smaller_block():
    # {0} has four predecessors, {1, 2, 3} none
    F = parse_functor('{0,1} * P X')
    coalg = Coalgebra(F, [TupleOf([Label('1'), SetOf([StateRef(0)])])]
                      + [TupleOf([Label('0'), SetOf([StateRef(0)])])] * 3)
    card = refine_hopcroft(coalg, 'card')
    pred = refine_hopcroft(coalg, 'pred')
    assert card.partition == pred.partition == Partition([0, 1, 1, 1])
    heavy = [n.states for n in pred.tree.nodes if n.heavy]
    assert heavy == [[0]]
    assert [n.states for n in card.tree.nodes if n.heavy] == [[1, 2, 3]]
    assert (card.stats.dirty_markings, pred.stats.dirty_markings) == (4, 0)


def test_refinement_tree_weights_are_tight():
    coalg = generate(GenSpec('lts', 30, alphabet_size=2, seed=11))
    tree = refine_hopcroft(coalg, 'reach').tree
    for weight in WEIGHT_NAMES:
        t, w, _ = tree.to_weighted_tree(weight)
        assert validate_weight(t, w).tight
    doc = tree.to_json()
    assert doc['weight'] == 'reach'
    assert sorted(doc['states'][0]) == list(range(30))
    assert len(doc['heavy']) == len(doc['parent'])


def test_algorithms_agree_with_the_oracle():
    def prop(coalg):
        expected = bisim_bruteforce(coalg)
        return (partitions_equal(refine_naive(coalg).partition, expected)
                and all(partitions_equal(refine_hopcroft(coalg, w).partition, expected) for w in WEIGHT_NAMES))
    assert counterexamples(prop, instances(1000)) == []


def test_refinement_trees_pass_the_audit():
    def prop(coalg):
        for weight in WEIGHT_NAMES:
            tree, w, heavy = refine_hopcroft(coalg, weight).tree.to_weighted_tree()
            report = audit_tree(tree, w, heavy)
            if not (report.passed and report.tight):
                return False
        return True
    assert counterexamples(prop, instances(1000, seed=1000)) == []


def test_markdirty_touches_are_bounded():
    def prop(coalg):
        n = coalg.n_states
        if n < 2:
            return True
        M = coalg.pred_index.M
        stats = refine_hopcroft(coalg, 'card').stats
        return stats.markdirty_touches <= M * n * math.ceil(math.log2(n)) + M * n
    assert counterexamples(prop, instances(1000, seed=2000)) == []


def test_loop_invariants_hold():
    def prop(coalg):
        snapshots = []
        refine_hopcroft(coalg, 'card', check_invariants=True, on_iteration=snapshots.append)
        return all(check_r_partitioning(p, PairRelation.from_partition(p)) for p in snapshots)
    assert counterexamples(prop, instances(30, max_states=30, seed=3000)) == []


def test_refinement_is_monotone():
    def prop(coalg):
        snapshots = []
        refine_hopcroft(coalg, 'pred', on_iteration=snapshots.append)
        return all(b.block_of[x] != b.block_of[y] or a.block_of[x] == a.block_of[y]
                   for a, b in zip(snapshots, snapshots[1:])
                   for x in range(coalg.n_states) for y in range(coalg.n_states))
    assert counterexamples(prop, instances(20, max_states=20, seed=4000)) == []


def test_fixpoint_and_termination():
    def prop(coalg):
        result = refine_hopcroft(coalg)
        block_of = result.partition.block_of
        F, c = coalg.functor, coalg.c
        stable = all(F.signature(c[x], block_of) == F.signature(c[block[0]], block_of)
                     for block in result.partition.blocks for x in block)
        return stable and result.stats.splits < coalg.n_states
    assert counterexamples(prop, instances(50, seed=5000)) == []


def test_chain_needs_one_split_per_state():
    coalg = counter_chain(40)
    result = refine_hopcroft(coalg)
    assert result.stats.splits == 39
    assert len(result.partition) == 40
    assert refine_naive(coalg).stats.splits == 39


def test_hopcroft_computes_fewer_signatures_on_chains():
    ratios = []
    for k in range(6, 11):
        coalg = counter_chain(2 ** k)
        naive = refine_naive(coalg).stats.signatures_computed
        hopcroft = refine_hopcroft(coalg, 'card').stats.signatures_computed
        assert naive == 4 ** k
        assert hopcroft <= naive
        ratios.append(hopcroft / naive)
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))


def test_quotient():
    # 0 and 1 both accept nothing and move to 2
    coalg = dfa({2}, [[2], [2], [2]])
    partition = refine_hopcroft(coalg).partition
    assert partition.blocks == [[0, 1], [2]]
    q = quotient(coalg, partition)
    assert q.n_states == 2
    assert [str(v) for v in q.c] == ['(0, [a: #1])', '(1, [a: #1])']
    assert len(refine_naive(q).partition) == 2


def test_quotient_of_minimal_system():
    coalg = counter_chain(5)
    q = quotient(coalg, refine_hopcroft(coalg).partition)
    assert [str(v) for v in q.c] == [str(v) for v in coalg.c]


def test_quotient_of_distribution_system():
    coalg = generate(GenSpec('mc', 8, alphabet_size=1, seed=2))
    q = quotient(coalg, refine_naive(coalg).partition)
    assert q.n_states == 1
    assert str(q.c[0]) == 'D{#0: 1/1}'


def test_quotient_rejects_unstable_partitions():
    coalg = dfa({2}, [[1], [2], [2]])
    with pytest.raises(InternalError):
        quotient(coalg, Partition([0, 0, 1]))


def test_refine_dispatch():
    coalg = counter_chain(4)
    assert isinstance(refine(coalg, 'naive'), NaiveResult)
    assert isinstance(refine(coalg, 'hopcroft', 'reach'), HopcroftResult)
    assert refine(coalg, 'hopcroft', 'reach').tree.run_weight == 'reach'


@skip
def test_large_dfa():
    coalg = generate(GenSpec('dfa', 10 ** 5, alphabet_size=2, seed=1))
    start = time.perf_counter()
    result = refine_hopcroft(coalg, 'card')
    assert time.perf_counter() - start < 10
    small = generate(GenSpec('dfa', 10 ** 4, alphabet_size=2, seed=1))
    assert partitions_equal(refine_hopcroft(small).partition, refine_naive(small).partition)
    assert len(result.partition) <= coalg.n_states
