from typing import *

from system_elements.errors import MalformedInputError
from system_elements.functor import Functor, occurring_states
from system_elements.value import Value


class PredIndex:
    """
    For every state y, the sorted list of states x whose value mentions y.
    `m` is the total number of (x, y) predecessor pairs, `M` the largest in-degree.
    """
    preds: List[List[int]]
    m: int
    M: int

    def __init__(self, preds: List[List[int]]):
        self.preds = preds
        self.m = sum(len(p) for p in preds)
        self.M = max((len(p) for p in preds), default=0)

    def __getitem__(self, y: int) -> List[int]:
        return self.preds[y]

    def __len__(self):
        return len(self.preds)


class Coalgebra:
    """
    A finite system: a functor expression and one observation value per state.
    Immutable once built; the predecessor index and the set of successor states are computed on first use.
    """

    def __init__(self, functor: Functor, c: Sequence[Value], validate: bool = True):
        self.functor = functor
        self.c = list(c)
        self.n_states = len(self.c)
        if self.n_states < 1:
            raise MalformedInputError('a system needs at least one state')
        if validate:
            for x, v in enumerate(self.c):
                try:
                    functor.validate(v, self.n_states)
                except MalformedInputError as e:
                    raise e.within('state ' + str(x)) from e
        self._pred_index: Optional[PredIndex] = None
        self._targets: Optional[FrozenSet[int]] = None

    @property
    def pred_index(self) -> PredIndex:
        if self._pred_index is None:
            self._pred_index = build_pred_index(self)
        return self._pred_index

    @property
    def targets(self) -> FrozenSet[int]:
        if self._targets is None:
            self._targets = reachable_targets(self)
        return self._targets

    def successors(self, x: int) -> Set[int]:
        return occurring_states(self.functor, self.c[x])

    def to_json(self) -> Dict[str, Any]:
        return {'functor': str(self.functor),
                'states': self.n_states,
                'c': [v.to_json() for v in self.c]}

    def __str__(self):
        return '\n'.join(str(x) + ' ↦ ' + str(v) for x, v in enumerate(self.c))


def build_pred_index(coalg: Coalgebra) -> PredIndex:
    preds: List[List[int]] = [[] for _ in range(coalg.n_states)]
    # x ascends, so every list comes out sorted
    for x in range(coalg.n_states):
        for y in coalg.successors(x):
            preds[y].append(x)
    return PredIndex(preds)


def reachable_targets(coalg: Coalgebra) -> FrozenSet[int]:
    """
    The states that are a successor of some state.
    """
    targets: Set[int] = set()
    for x in range(coalg.n_states):
        targets |= coalg.successors(x)
    return frozenset(targets)
