from typing import *

from system_elements.coalgebra import Coalgebra, PredIndex
from system_elements.errors import ConfigurationError
from weighted_tree import WeightedTree, HeavyChoice

"""
The history of block splits made by the Hopcroft-style refinement: every node is a block that existed
at some point, its children are the blocks it was split into, and the leaves are the current partition.
Leaves also carry their dirty states (states that may still be distinguished by the next split).
"""

WEIGHT_NAMES = ('card', 'pred', 'reach')


class WeightKind:
    """
    A block weight: `card` counts states, `pred` counts predecessor pairs (needs the predecessor index),
    `reach` counts states that are the successor of some state (needs that set of states).
    All three are additive over disjoint blocks.
    """

    def __init__(self, name: str, pred_index: Optional[PredIndex] = None,
                 targets: Optional[AbstractSet[int]] = None):
        if name not in WEIGHT_NAMES:
            raise ConfigurationError('unknown weight ' + repr(name) + ', expected one of ' + ', '.join(WEIGHT_NAMES))
        self.name = name
        self.pred_index = pred_index
        self.targets = targets

    @classmethod
    def for_coalgebra(cls, name: str, coalg: Coalgebra) -> 'WeightKind':
        if name == 'pred':
            return cls(name, pred_index=coalg.pred_index)
        if name == 'reach':
            return cls(name, targets=coalg.targets)
        return cls(name)

    def __call__(self, states: Collection[int]) -> int:
        return block_weight(self, states)

    def __str__(self):
        return self.name


def block_weight(kind: WeightKind, states: Collection[int]) -> int:
    if kind.name == 'card':
        return len(states)
    if kind.name == 'pred':
        if kind.pred_index is None:
            raise ConfigurationError('the pred weight needs a predecessor index')
        preds = kind.pred_index.preds
        return sum(len(preds[x]) for x in states)
    if kind.targets is None:
        raise ConfigurationError('the reach weight needs the set of successor states')
    targets = kind.targets
    return sum(1 for x in states if x in targets)


class RefinementNode:
    """
    One block in the split history. `states` is frozen at creation.
    While the node is a leaf, `block` is its live block id and `dirty` the states not known to be clean.
    """
    id: int
    parent: Optional['RefinementNode']
    states: List[int]
    children: List['RefinementNode']
    weights: Dict[str, int]
    heavy: bool
    block: Optional[int]
    dirty: Set[int]
    queued: bool

    def __init__(self, id: int, parent: Optional['RefinementNode'], states: List[int], weights: Dict[str, int]):
        self.id = id
        self.parent = parent
        self.states = states
        self.children = []
        self.weights = weights
        self.heavy = False
        self.block = None
        self.dirty = set()
        self.queued = False

    def is_leaf(self) -> bool:
        return len(self.children) == 0

    @property
    def clean(self) -> Set[int]:
        return set(self.states) - self.dirty

    def __str__(self, indent: str = ''):
        """
        Indented printing of the subtree, heavy children marked with `*`.
        """
        line = (indent + ('*' if self.heavy else '') + '{' + ', '.join(str(x) for x in sorted(self.states)) + '} '
                + ' '.join(k + '=' + str(v) for k, v in sorted(self.weights.items())))
        return '\n'.join([line] + [child.__str__(indent + '    ') for child in self.children])


class RefinementTree:
    nodes: List[RefinementNode]
    kinds: Dict[str, WeightKind]
    run_weight: str

    def __init__(self, kinds: Mapping[str, WeightKind], run_weight: str):
        self.nodes = []
        self.kinds = dict(kinds)
        self.run_weight = run_weight

    @property
    def root(self) -> RefinementNode:
        return self.nodes[0]

    def add_node(self, parent: Optional[RefinementNode], states: List[int]) -> RefinementNode:
        node = RefinementNode(len(self.nodes), parent,
                              states,
                              {name: kind(states) for name, kind in self.kinds.items()})
        self.nodes.append(node)
        if parent is not None:
            parent.children.append(node)
        return node

    def split(self, leaf: RefinementNode, groups: Sequence[List[int]]) -> List[RefinementNode]:
        return [self.add_node(leaf, group) for group in groups]

    def leaves(self) -> List[RefinementNode]:
        return [node for node in self.nodes if node.is_leaf()]

    def to_weighted_tree(self, weight: Optional[str] = None) -> Tuple[WeightedTree, List[int], HeavyChoice]:
        """
        The tree with the recorded weights of `weight` (default: the weight the run chose heavy children by)
        and the heavy children the run marked.
        """
        weight = weight or self.run_weight
        parent = [node.parent.id if node.parent is not None else node.id for node in self.nodes]
        w = [node.weights[weight] for node in self.nodes]
        heavy = {node.id: child.id for node in self.nodes for child in node.children if child.heavy}
        return WeightedTree(parent), w, heavy

    def to_json(self) -> Dict[str, Any]:
        tree, w, heavy = self.to_weighted_tree()
        return {'parent': tree.parent,
                'w': w,
                'weight': self.run_weight,
                'states': [sorted(node.states) for node in self.nodes],
                'heavy': [heavy.get(node.id) for node in self.nodes]}

    def __str__(self):
        return str(self.root)
