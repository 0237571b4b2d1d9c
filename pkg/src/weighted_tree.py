from typing import *
from dataclasses import dataclass, asdict
import logging
import math

from system_elements.errors import MalformedTreeError

"""
Rooted trees with natural-number weights, heavy child choices and executable checks of
Hopcroft's inequality

    sum of the weights of all light children  <=  w(r) log2 w(r) - sum over leaves l with w(l) > 0 of w(l) log2 w(l)

together with the lemmas it rests on. Refinement trees grown by `partition_refinement` are audited with these checks.

Weights are plain lists indexed by node id, heavy child choices are dicts from internal node to child.
"""

log = logging.getLogger(__name__)

WeightAssignment = Sequence[int]
HeavyChoice = Dict[int, int]
Edge = Tuple[int, int]

# Exact (big integer) verification is done only below these sizes; above them, floating point with relative tolerance.
EXACT_ROOT_LIMIT = 1000
EXACT_NODE_LIMIT = 1000
FLOAT_TOLERANCE = 1e-9


class WeightedTree:
    """
    A rooted finite tree over the nodes 0 .. node_count - 1, given by a parent array in which
    the root is its own parent. Children are ordered by ascending node id.
    Immutable after construction.
    """
    parent: List[int]
    children: List[List[int]]
    root: int
    order: List[int]

    def __init__(self, parent: Sequence[int]):
        n = len(parent)
        if n == 0:
            raise MalformedTreeError('a tree needs at least one node')
        roots = [v for v in range(n) if parent[v] == v]
        if len(roots) != 1:
            raise MalformedTreeError('expected exactly one root, found ' + str(len(roots)))
        self.parent = list(parent)
        self.root = roots[0]
        self.children = [[] for _ in range(n)]
        for v, p in enumerate(self.parent):
            if not isinstance(p, int) or not 0 <= p < n:
                raise MalformedTreeError('parent of node ' + str(v) + ' out of range: ' + repr(p))
            if v != self.root:
                self.children[p].append(v)
        # breadth-first order from the root; parents always come before their children
        self.order = [self.root]
        for v in self.order:
            self.order.extend(self.children[v])
        if len(self.order) != n:
            raise MalformedTreeError('tree contains a cycle unreachable from the root')

    @classmethod
    def from_parent_array(cls, parent: Sequence[int]) -> 'WeightedTree':
        return cls(parent)

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def is_leaf(self, v: int) -> bool:
        return len(self.children[v]) == 0

    def leaves(self) -> List[int]:
        return [v for v in range(self.node_count) if self.is_leaf(v)]

    def internal_nodes(self) -> List[int]:
        return [v for v in range(self.node_count) if not self.is_leaf(v)]

    def edges(self) -> Set[Edge]:
        return {(self.parent[v], v) for v in range(self.node_count) if v != self.root}


class WeightValidity(NamedTuple):
    valid: bool
    tight: bool


class EdgeSums(NamedTuple):
    lhs: int
    rhs: int


class BoundCheck(NamedTuple):
    ok: bool
    lhs: int
    bound_float: float
    exact_ok: Optional[bool]


@dataclass
class AuditReport:
    valid: bool = False
    tight: bool = False
    hcc_ok: bool = False
    edge_sum_ok: bool = False
    light_path_ok: bool = False
    tightening_ok: bool = False
    path_length_ok: bool = False
    bound_ok: bool = False
    light_sum: int = 0
    lpath_sum: int = 0
    bound_exact_ok: Optional[bool] = None
    bound_float: float = 0.0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return (self.error is None and self.valid and self.hcc_ok
                and self.edge_sum_ok and self.light_path_ok and self.tightening_ok and self.path_length_ok
                and self.bound_ok)

    def to_json(self) -> Dict[str, Any]:
        doc = asdict(self)
        doc['passed'] = self.passed
        return doc

    def __str__(self):
        if self.error is not None:
            return 'malformed: ' + self.error
        if not self.valid:
            return 'not a weight function'
        relation = '=' if self.light_sum == self.lpath_sum else '>'
        return ('light children ' + str(self.light_sum) + ' ' + relation + ' ' + str(self.lpath_sum)
                + ' light-path leaves; bound ' + format(self.bound_float, '.2f')
                + ('; all checks pass' if self.passed else '; CHECKS FAILED'))


def check_weights(tree: WeightedTree, w: WeightAssignment) -> None:
    if len(w) != tree.node_count:
        raise MalformedTreeError('expected ' + str(tree.node_count) + ' weights, got ' + str(len(w)))
    for v, x in enumerate(w):
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise MalformedTreeError('weight of node ' + str(v) + ' is not a natural number: ' + repr(x))


def validate_weight(tree: WeightedTree, w: WeightAssignment) -> WeightValidity:
    check_weights(tree, w)
    valid = True
    tight = True
    for v in tree.internal_nodes():
        below = sum(w[u] for u in tree.children[v])
        if below > w[v]:
            valid = False
        if below != w[v]:
            tight = False
    return WeightValidity(valid, valid and tight)


def choose_heavy(tree: WeightedTree, w: WeightAssignment) -> HeavyChoice:
    """
    Picks a maximum-weight child for every internal node; ties go to the first child.
    """
    h: HeavyChoice = {}
    for v in tree.internal_nodes():
        best = tree.children[v][0]
        for u in tree.children[v][1:]:
            if w[u] > w[best]:
                best = u
        h[v] = best
    return h


def is_heavy_choice(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int]) -> bool:
    internal = tree.internal_nodes()
    if not set(h) <= set(internal):
        return False
    for v in internal:
        if v not in h or h[v] not in tree.children[v]:
            return False
        if w[h[v]] != max(w[u] for u in tree.children[v]):
            return False
    return True


def light_children(tree: WeightedTree, h: Mapping[int, int], v: int) -> List[int]:
    return [u for u in tree.children[v] if u != h.get(v)]


def tighten(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int]) -> List[int]:
    tightened = list(w)
    for v in tree.order:
        if tree.is_leaf(v):
            continue
        light = sum(w[u] for u in light_children(tree, h, v))
        tightened[h[v]] = tightened[v] - light
    return tightened


def light_child_sum(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int]) -> int:
    return sum(w[u] for v in tree.internal_nodes() for u in light_children(tree, h, v))


def light_depths(tree: WeightedTree, h: Mapping[int, int]) -> List[int]:
    """
    For every node, the number of light edges on its path from the root.
    """
    depth = [0] * tree.node_count
    for v in tree.order[1:]:
        p = tree.parent[v]
        depth[v] = depth[p] + (0 if h.get(p) == v else 1)
    return depth


def lpath_weighted_leaf_sum(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int]) -> int:
    depth = light_depths(tree, h)
    return sum(depth[l] * w[l] for l in tree.leaves())


def general_edge_sum(tree: WeightedTree, w: WeightAssignment, S: Iterable[Edge]) -> EdgeSums:
    """
    For an arbitrary edge set S: the weights of all children reached by edges outside S,
    against the leaf weights multiplied by the number of edges outside S on their root paths.
    """
    S = set(S)
    edges = tree.edges()
    for e in S:
        if e not in edges:
            raise MalformedTreeError('edge ' + str(e) + ' is not in the tree')
    lhs = sum(w[v] for (_, v) in edges - S)
    outside = [0] * tree.node_count
    for v in tree.order[1:]:
        p = tree.parent[v]
        outside[v] = outside[p] + (0 if (p, v) in S else 1)
    rhs = sum(outside[l] * w[l] for l in tree.leaves())
    return EdgeSums(lhs, rhs)


def heavy_edges(h: Mapping[int, int]) -> Set[Edge]:
    return {(v, u) for v, u in h.items()}


def lpath_length_bound_check(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int]) -> bool:
    """
    Every node of nonzero weight is at most log2 w(r) - log2 w(v) light edges away from the root,
    checked as 2^|lpath| * w(v) <= w(r).
    """
    depth = light_depths(tree, h)
    w_root = w[tree.root]
    return all((w[v] << depth[v]) <= w_root for v in range(tree.node_count) if w[v] != 0)


def xlog2x(x: int) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def exact_check_feasible(tree: WeightedTree, w_root: int) -> bool:
    return w_root <= EXACT_ROOT_LIMIT and tree.node_count <= EXACT_NODE_LIMIT


def within_tolerance(lhs: float, bound: float, scale: float) -> bool:
    return lhs <= bound + FLOAT_TOLERANCE * max(1.0, abs(scale))


def hopcroft_bound_check(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int]) -> BoundCheck:
    lhs = light_child_sum(tree, w, h)
    w_root = w[tree.root]
    leaves = [w[l] for l in tree.leaves() if w[l] != 0]
    bound = xlog2x(w_root) - sum(xlog2x(x) for x in leaves)
    float_ok = within_tolerance(lhs, bound, xlog2x(w_root))
    exact_ok: Optional[bool] = None
    if exact_check_feasible(tree, w_root):
        product = 1
        for x in leaves:
            product *= x ** x
        exact_ok = (product << lhs) <= w_root ** w_root
    else:
        log.debug('tree of %d nodes with root weight %d: inequality checked in floating point only',
                  tree.node_count, w_root)
    ok = float_ok and exact_ok is not False
    return BoundCheck(ok, lhs, bound, exact_ok)


def time_estimate_check(tree: WeightedTree, w: WeightAssignment, h: Mapping[int, int],
                        t: Sequence[int], K: int) -> bool:
    """
    If t(v) <= K * (weights of the light children of v) everywhere, then sum of t <= K w(r) log2 w(r).
    Returns False when the premise does not hold.
    """
    for v in range(tree.node_count):
        if t[v] > K * sum(w[u] for u in light_children(tree, h, v)):
            return False
    total = sum(t)
    w_root = w[tree.root]
    if exact_check_feasible(tree, w_root):
        return (1 << total) <= w_root ** (K * w_root)
    return within_tolerance(total, K * xlog2x(w_root), K * xlog2x(w_root))


def audit_tree(tree: WeightedTree, w: WeightAssignment, heavy: Optional[Mapping[int, int]] = None) -> AuditReport:
    """
    Runs every check on one weighted tree:
        1. the edge-set lemma, for the heavy edges and for the empty edge set,
        2. the light-children / light-path inequality (equality when tight, and after tightening),
        3. the tightening properties (tight, root kept, dominating, heavy choice kept, idempotent),
        4. the light-path length bound,
        5. Hopcroft's inequality.
    With `heavy`, the given heavy child choice is checked and used instead of `choose_heavy`.
    """
    report = AuditReport()
    try:
        validity = validate_weight(tree, w)
    except MalformedTreeError as e:
        report.error = str(e)
        return report
    report.valid, report.tight = validity
    if not report.valid:
        return report

    h = dict(heavy) if heavy is not None else choose_heavy(tree, w)
    report.hcc_ok = is_heavy_choice(tree, w, h)
    if not report.hcc_ok:
        return report

    report.light_sum = light_child_sum(tree, w, h)
    report.lpath_sum = lpath_weighted_leaf_sum(tree, w, h)

    edge_sums = True
    for S in (heavy_edges(h), set()):
        sums = general_edge_sum(tree, w, S)
        edge_sums = edge_sums and sums.lhs >= sums.rhs and (sums.lhs == sums.rhs or not report.tight)
    report.edge_sum_ok = edge_sums

    tightened = tighten(tree, w, h)
    report.light_path_ok = (report.light_sum >= report.lpath_sum
                             and (report.light_sum == report.lpath_sum or not report.tight)
                             and light_child_sum(tree, tightened, h) == lpath_weighted_leaf_sum(tree, tightened, h))

    report.tightening_ok = (validate_weight(tree, tightened).tight
                            and is_heavy_choice(tree, tightened, h)
                            and tightened[tree.root] == w[tree.root]
                            and all(a <= b for a, b in zip(w, tightened))
                            and tighten(tree, tightened, h) == tightened)

    report.path_length_ok = lpath_length_bound_check(tree, w, h)

    bound = hopcroft_bound_check(tree, w, h)
    report.bound_ok = bound.ok
    report.bound_exact_ok = bound.exact_ok
    report.bound_float = bound.bound_float
    return report


def load_tree_json(doc: Mapping[str, Any]) -> Tuple[WeightedTree, List[int], Optional[HeavyChoice]]:
    """
    Reads `{"parent": [...], "w": [...]}`, optionally with a `"heavy"` array
    (heavy[v] is the heavy child of v, or null for leaves) as written for refinement trees.
    """
    if not isinstance(doc, Mapping) or 'parent' not in doc or 'w' not in doc:
        raise MalformedTreeError('tree documents need "parent" and "w"')
    tree = WeightedTree.from_parent_array(doc['parent'])
    w = list(doc['w'])
    check_weights(tree, w)
    heavy: Optional[HeavyChoice] = None
    if doc.get('heavy') is not None:
        if len(doc['heavy']) != tree.node_count:
            raise MalformedTreeError('expected ' + str(tree.node_count) + ' heavy entries')
        heavy = {v: u for v, u in enumerate(doc['heavy']) if u is not None}
    return tree, w, heavy


def tree_to_json(tree: WeightedTree, w: WeightAssignment) -> Dict[str, Any]:
    return {'parent': list(tree.parent), 'w': list(w)}
