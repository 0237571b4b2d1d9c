from typing import *

from system_elements.errors import MalformedInputError


class Partition:
    """
    A partition of the states 0 .. n-1 into nonempty disjoint blocks.
    Block ids are canonical: block i is the block with the i-th smallest least member,
    and states inside a block are ascending.
    """
    block_of: List[int]
    blocks: List[List[int]]

    def __init__(self, labels: Sequence[Hashable]):
        """
        Builds the partition whose kernel is that of `labels` (state x is labelled `labels[x]`).
        """
        renumber: Dict[Hashable, int] = {}
        self.block_of = []
        self.blocks = []
        for x, label in enumerate(labels):
            if label not in renumber:
                renumber[label] = len(self.blocks)
                self.blocks.append([])
            b = renumber[label]
            self.block_of.append(b)
            self.blocks[b].append(x)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n_states: int) -> 'Partition':
        labels: List[Optional[int]] = [None] * n_states
        for i, block in enumerate(blocks):
            block = list(block)
            if len(block) == 0:
                raise MalformedInputError('empty block in partition')
            for x in block:
                if not 0 <= x < n_states:
                    raise MalformedInputError('state ' + str(x) + ' out of range')
                if labels[x] is not None:
                    raise MalformedInputError('state ' + str(x) + ' occurs in two blocks')
                labels[x] = i
        missing = [x for x, l in enumerate(labels) if l is None]
        if missing:
            raise MalformedInputError('states not covered by any block: ' + str(missing))
        return cls(labels)

    @property
    def n_states(self) -> int:
        return len(self.block_of)

    def __len__(self):
        return len(self.blocks)

    def to_json(self) -> Dict[str, Any]:
        return {'blocks': [list(b) for b in self.blocks]}

    def __str__(self):
        return ' | '.join('{' + ', '.join(str(x) for x in b) + '}' for b in self.blocks)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.block_of == other.block_of

    def __hash__(self):
        return hash(tuple(self.block_of))
