from typing import *

from system_elements.coalgebra import Coalgebra
from system_elements.errors import MalformedInputError, SizeLimitError
from system_elements.partition import Partition

"""
A deliberately simple bisimilarity computation on pairs of states, sharing no code paths with
`partition_refinement` beyond signatures. Used to check the refinement algorithms.
"""

MAX_ORACLE_STATES = 10_000


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x


class PairRelation:
    """
    A reflexive, symmetric relation on states, one bytearray row per state.
    """
    rows: List[bytearray]

    def __init__(self, rows: List[bytearray]):
        self.rows = rows

    @classmethod
    def total(cls, n: int) -> 'PairRelation':
        return cls([bytearray([1]) * n for _ in range(n)])

    @classmethod
    def from_partition(cls, partition: Partition) -> 'PairRelation':
        n = partition.n_states
        rows = [bytearray(n) for _ in range(n)]
        for block in partition.blocks:
            for x in block:
                for y in block:
                    rows[x][y] = 1
        return cls(rows)

    @property
    def n_states(self) -> int:
        return len(self.rows)

    def related(self, x: int, y: int) -> bool:
        return bool(self.rows[x][y])

    def remove(self, x: int, y: int) -> None:
        if x != y:
            self.rows[x][y] = 0
            self.rows[y][x] = 0

    def is_equivalence(self) -> bool:
        n = self.n_states
        for x in range(n):
            if not self.rows[x][x]:
                return False
            for y in range(n):
                if self.rows[x][y] and (not self.rows[y][x] or self.rows[x] != self.rows[y]):
                    return False
        return True

    def classes(self) -> Partition:
        """
        The partition into the classes of the equivalence closure.
        """
        n = self.n_states
        uf = UnionFind(n)
        for x in range(n):
            row = self.rows[x]
            for y in range(x + 1, n):
                if row[y]:
                    uf.union(x, y)
        return Partition([uf.find(x) for x in range(n)])


def bisim_bruteforce(coalg: Coalgebra) -> Partition:
    """
    Starts from the total relation and removes every pair whose signatures differ under the
    partition induced by the current relation, until nothing changes.
    """
    n = coalg.n_states
    if n > MAX_ORACLE_STATES:
        raise SizeLimitError('the oracle handles at most ' + str(MAX_ORACLE_STATES) + ' states, got ' + str(n))
    F, c = coalg.functor, coalg.c
    relation = PairRelation.total(n)
    while True:
        partition = relation.classes()
        sigs = [F.signature(c[x], partition.block_of) for x in range(n)]
        changed = False
        for x in range(n):
            row = relation.rows[x]
            for y in range(x + 1, n):
                if row[y] and sigs[x] != sigs[y]:
                    relation.remove(x, y)
                    changed = True
        if not changed:
            return partition


def partitions_equal(p: Partition, q: Partition) -> bool:
    if p.n_states != q.n_states:
        raise MalformedInputError('partitions over ' + str(p.n_states) + ' and ' + str(q.n_states) + ' states')
    # both are canonical, so equal kernels means equal block_of
    return p.block_of == q.block_of


def check_r_partitioning(partition: Partition, relation: PairRelation) -> bool:
    """
    Whether the blocks of `partition` realize the equivalence `relation`:
        1. no block straddles two classes,
        2. the equivalence generated by the blocks is the whole relation (no class split over blocks),
        3. blocks are nonempty and pairwise disjoint.
    """
    if relation.n_states != partition.n_states:
        raise MalformedInputError('relation and partition over different state counts')
    if not relation.is_equivalence():
        raise MalformedInputError('relation is not an equivalence')
    seen: Set[int] = set()
    disjoint = True
    for block in partition.blocks:
        if len(block) == 0 or seen & set(block):
            disjoint = False
        seen |= set(block)
    not_too_coarse = all(relation.related(block[0], x) for block in partition.blocks for x in block)
    n = partition.n_states
    block_of = partition.block_of
    not_too_fine = all(not relation.related(x, y) or block_of[x] == block_of[y]
                       for x in range(n) for y in range(n))
    return not_too_coarse and not_too_fine and disjoint
