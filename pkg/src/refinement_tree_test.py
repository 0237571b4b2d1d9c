from textwrap import dedent

from functor_parser import parse_functor
from partition_refinement import refine_hopcroft
from refinement_tree import *
from system_elements.coalgebra import Coalgebra
from system_elements.value import *


def chain_of_three():
    # 0 -> 1 -> 2 -> 2, only 2 accepting
    F = parse_functor('{0,1} * X ^ {a}')
    return Coalgebra(F, [TupleOf([Label('1' if x == 2 else '0'), Fun({'a': StateRef(min(x + 1, 2))})])
                         for x in range(3)])


def test_split_history():
    result = refine_hopcroft(chain_of_three())
    assert str(result.tree) == dedent("""\
        {0, 1, 2} card=3 pred=3 reach=2
            *{0, 1} card=2 pred=1 reach=1
                *{0} card=1 pred=0 reach=0
                {1} card=1 pred=1 reach=1
            {2} card=1 pred=2 reach=1""")
    stats = result.stats
    assert (stats.iterations, stats.splits) == (4, 2)
    assert (stats.dirty_markings, stats.markdirty_touches, stats.signatures_computed) == (3, 3, 7)


def test_json():
    assert refine_hopcroft(chain_of_three()).tree.to_json() == {
        'parent': [0, 0, 0, 1, 1],
        'w': [3, 2, 1, 1, 1],
        'weight': 'card',
        'states': [[0, 1, 2], [0, 1], [2], [0], [1]],
        'heavy': [1, 3, None, None, None]}


def test_recorded_weights():
    tree = refine_hopcroft(chain_of_three(), 'pred').tree
    t, w, heavy = tree.to_weighted_tree()
    assert w == [3, 1, 2, 0, 1]
    assert t.children[0] == [1, 2]
    # under pred, {2} outweighs {0, 1}
    assert heavy[0] == 2
    assert tree.to_weighted_tree('card')[1] == [3, 2, 1, 1, 1]


def test_leaves_are_the_partition():
    tree = refine_hopcroft(chain_of_three()).tree
    assert sorted(leaf.states for leaf in tree.leaves()) == [[0], [1], [2]]
    assert all(leaf.clean == set(leaf.states) for leaf in tree.leaves())
