from typing import *
from collections import deque
from dataclasses import dataclass, asdict
import logging
import time

from bisimulation_oracle import PairRelation, check_r_partitioning
from refinement_tree import *
from system_elements.coalgebra import Coalgebra, PredIndex
from system_elements.errors import InternalError
from system_elements.functor import BlockOf
from system_elements.partition import Partition

"""
Minimization modulo bisimilarity by partition refinement, in two variants:

- `refine_naive` recomputes the signature of every state under the current partition and regroups,
  until no block splits.
- `refine_hopcroft` keeps the split history as a `RefinementTree`. Only dirty states of a leaf are
  re-examined; after a split, the child of maximal weight (the heavy child) keeps the block id of its
  parent, and only predecessors of the states in the other (light) children are marked dirty.

Both return the coarsest partition in which all states of a block have the same signature.
"""

log = logging.getLogger(__name__)


@dataclass
class RunStats:
    iterations: int = 0
    splits: int = 0
    dirty_markings: int = 0
    markdirty_touches: int = 0
    signatures_computed: int = 0
    wall_time: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)

    def __str__(self):
        return ', '.join(k + '=' + str(v) for k, v in asdict(self).items())


class NaiveResult(NamedTuple):
    partition: Partition
    stats: RunStats


class HopcroftResult(NamedTuple):
    partition: Partition
    tree: RefinementTree
    stats: RunStats


def refine_naive(coalg: Coalgebra) -> NaiveResult:
    F, c, n = coalg.functor, coalg.c, coalg.n_states
    stats = RunStats()
    start = time.perf_counter()
    current = Partition([0] * n)
    while True:
        stats.iterations += 1
        block_of = current.block_of
        # keying by the old block as well splits each block separately
        refined = Partition([(block_of[x], F.signature(c[x], block_of)) for x in range(n)])
        stats.signatures_computed += n
        if len(refined) == len(current):
            break
        stats.splits += len(refined) - len(current)
        current = refined
    stats.wall_time = time.perf_counter() - start
    log.info('naive refinement: %d states, %d blocks (%s)', n, len(current), stats)
    return NaiveResult(current, stats)


def group_leaf(states: Sequence[int], dirty: AbstractSet[int], coalg: Coalgebra,
               block_of: BlockOf, stats: Optional[RunStats] = None) -> List[List[int]]:
    """
    Groups the states of a leaf by signature, computing signatures only for the dirty states and
    one clean representative: clean states all share one signature.
    Groups are ordered by their least state. A single group means the leaf does not split.
    """
    if not dirty:
        return [list(states)]
    F, c = coalg.functor, coalg.c
    groups: Dict[Any, List[int]] = {}
    for x in dirty:
        groups.setdefault(F.signature(c[x], block_of), []).append(x)
    computed = len(dirty)
    if len(dirty) < len(states):
        representative = next(x for x in states if x not in dirty)
        computed += 1
        sig = F.signature(c[representative], block_of)
        groups.setdefault(sig, []).extend(x for x in states if x not in dirty)
    if stats is not None:
        stats.signatures_computed += computed
    if len(groups) == 1:
        return [list(states)]
    result = [sorted(g) for g in groups.values()]
    result.sort(key=lambda g: g[0])
    return result


def split_leaf(leafstates: Collection[int], clean: Collection[int], coalg: Coalgebra,
               current: Union[Partition, BlockOf]) -> List[List[int]]:
    block_of = current.block_of if isinstance(current, Partition) else current
    clean = set(clean)
    states = sorted(leafstates)
    return group_leaf(states, {x for x in states if x not in clean}, coalg, block_of)


def mark_dirty(children: Sequence[RefinementNode], k0: int, preds: PredIndex,
               leaf_of: Callable[[int], RefinementNode], stats: RunStats) -> Set[Tuple[int, int]]:
    """
    Marks dirty every predecessor of a state in a light child (every child except `k0`).
    Returns the (leaf id, state) pairs of states that were clean before.
    """
    markings: Set[Tuple[int, int]] = set()
    touches = 0
    for k, child in enumerate(children):
        if k == k0:
            continue
        for y in child.states:
            ys_preds = preds.preds[y]
            touches += len(ys_preds)
            for x in ys_preds:
                tau = leaf_of(x)
                if x not in tau.dirty:
                    tau.dirty.add(x)
                    markings.add((tau.id, x))
    stats.markdirty_touches += touches
    stats.dirty_markings += len(markings)
    return markings


def refine_hopcroft(coalg: Coalgebra,
                    kind: Union[str, WeightKind] = 'card',
                    check_invariants: bool = False,
                    on_iteration: Optional[Callable[[Partition], None]] = None) -> HopcroftResult:
    """
    The main loop:
        1. Take the next leaf with dirty states (FIFO).
        2. Group its states by signature under the current partition.
        3. If it does not split, all its states are clean now.
        4. Otherwise add the groups as children, pick the heaviest child (first one on ties)
           to keep the block id, give the others fresh block ids, and mark the predecessors
           of their states dirty.
    With `check_invariants`, the leaves are checked at every loop boundary (see `check_loop_invariants`);
    `on_iteration` receives the current partition at every loop boundary.
    """
    if isinstance(kind, str):
        kind = WeightKind.for_coalgebra(kind, coalg)
    kinds = {name: kind if name == kind.name else WeightKind.for_coalgebra(name, coalg) for name in WEIGHT_NAMES}
    n = coalg.n_states
    preds = coalg.pred_index
    stats = RunStats()
    start = time.perf_counter()

    tree = RefinementTree(kinds, kind.name)
    root = tree.add_node(None, list(range(n)))
    root.block = 0
    root.dirty = set(range(n))
    block_of = [0] * n
    leaf_of_block = [root]

    def leaf_of(x: int) -> RefinementNode:
        return leaf_of_block[block_of[x]]

    queue = deque([root])
    root.queued = True
    while queue:
        if check_invariants:
            check_loop_invariants(coalg, tree, block_of)
        if on_iteration is not None:
            on_iteration(Partition(block_of))
        rho = queue.popleft()
        rho.queued = False
        if not rho.dirty:
            continue
        stats.iterations += 1
        groups = group_leaf(rho.states, rho.dirty, coalg, block_of, stats)
        if len(groups) == 1:
            rho.dirty = set()
            continue

        stats.splits += 1
        children = tree.split(rho, groups)
        k0 = 0
        for k in range(1, len(children)):
            if children[k].weights[kind.name] > children[k0].weights[kind.name]:
                k0 = k
        children[k0].heavy = True
        children[k0].block = rho.block
        leaf_of_block[rho.block] = children[k0]
        for k, child in enumerate(children):
            if k != k0:
                child.block = len(leaf_of_block)
                leaf_of_block.append(child)
                for x in child.states:
                    block_of[x] = child.block
        rho.block = None
        rho.dirty = set()
        log.debug('split block of %d states into %s, heavy child %d',
                  len(rho.states), [len(g) for g in groups], k0)

        for leaf_id, _ in mark_dirty(children, k0, preds, leaf_of, stats):
            leaf = tree.nodes[leaf_id]
            if not leaf.queued:
                leaf.queued = True
                queue.append(leaf)

    if check_invariants:
        check_loop_invariants(coalg, tree, block_of)
    if on_iteration is not None:
        on_iteration(Partition(block_of))
    partition = Partition(block_of)
    stats.wall_time = time.perf_counter() - start
    log.info('hopcroft refinement (%s): %d states, %d blocks (%s)', kind.name, n, len(partition), stats)
    return HopcroftResult(partition, tree, stats)


def check_loop_invariants(coalg: Coalgebra, tree: RefinementTree, block_of: List[int]) -> None:
    """
    Raises `InternalError` unless
        - the leaves realize the relation they induce (nonempty, disjoint, covering, one block each),
        - the clean states of every leaf share one signature under the current partition.
    """
    leaves = tree.leaves()
    covered = sorted(x for leaf in leaves for x in leaf.states)
    if covered != list(range(coalg.n_states)):
        raise InternalError('leaves do not partition the states')
    for leaf in leaves:
        if any(block_of[x] != leaf.block for x in leaf.states):
            raise InternalError('block ids out of sync with leaf ' + str(leaf.id))
    partition = Partition(block_of)
    if not check_r_partitioning(partition, PairRelation.from_partition(partition)):
        raise InternalError('leaves are not a partitioning of the relation they induce')
    F, c = coalg.functor, coalg.c
    for leaf in leaves:
        signatures = {F.signature(c[x], block_of) for x in leaf.clean}
        if len(signatures) > 1:
            raise InternalError('clean states of leaf ' + str(leaf.id) + ' have different signatures')


def refine(coalg: Coalgebra, algo: str = 'hopcroft', weight: str = 'card') -> Union[NaiveResult, HopcroftResult]:
    if algo == 'naive':
        return refine_naive(coalg)
    return refine_hopcroft(coalg, weight)


def quotient(coalg: Coalgebra, partition: Partition) -> Coalgebra:
    """
    The minimized system: one state per block, whose value is that of the block's least state
    with states replaced by their blocks.
    """
    F, c = coalg.functor, coalg.c
    block_of = partition.block_of
    for block in partition.blocks:
        expected = F.signature(c[block[0]], block_of)
        for x in block[1:]:
            if F.signature(c[x], block_of) != expected:
                raise InternalError('states ' + str(block[0]) + ' and ' + str(x)
                                    + ' share a block but not a signature')
    return Coalgebra(F, [F.rename(c[block[0]], block_of) for block in partition.blocks])
