from typing import *
from abc import abstractmethod
from fractions import Fraction
import functools

from system_elements.errors import *
from system_elements.value import *

"""
Functor expressions fix the type of a system:

    F ::= X | {l,...} | F * F | F + F | F ^ {l,...} | P F | D F

Each expression knows how to validate a value of its shape, which states a value mentions,
and how to turn a value into a signature once the states are replaced by their blocks.

Signatures are nested tuples of block ids (int), labels (str), summand indices (int) and
probabilities (Fraction). At every position the functor fixes which of these occurs, so any two
signatures of the same functor are comparable, and sorting them is deterministic.
"""

Signature = Any
BlockOf = Union[Sequence[int], Mapping[int, int]]


@functools.total_ordering
class Functor:
    """
    Common base of the functor expressions.
    `precedence` is used for printing with the minimal number of brackets:
    sums 0, products 1, prefix operators (P, D) 2, exponents 3, atoms 4.
    """
    precedence: int

    @abstractmethod
    def validate(self, v: Value, n_states: int) -> None:
        """
        Raises a `MalformedInputError` subclass if `v` is not a value of this functor
        over the states `0 .. n_states - 1`.
        """

    @abstractmethod
    def signature(self, v: Value, block_of: BlockOf) -> Signature:
        """
        The canonical form of `v` after replacing every state by its block.
        """

    @abstractmethod
    def collect_states(self, v: Value, into: Set[int]) -> None:
        """
        Adds all states mentioned in `v` to `into`.
        """

    @abstractmethod
    def rename(self, v: Value, mapping: BlockOf) -> Value:
        """
        Replaces every state `s` in `v` by `mapping[s]` and re-canonicalizes sets and distributions.
        """

    def bracketed(self, minimum: int) -> str:
        return str(self) if self.precedence >= minimum else '(' + str(self) + ')'

    def __eq__(self, other):
        return str(self) == str(other)

    def __lt__(self, other):
        return str(self) < str(other)

    def __hash__(self):
        return hash(str(self))

    def __repr__(self):
        return str(self)


def check_labels(labels: Sequence[str]) -> List[str]:
    labels = list(labels)
    if len(labels) == 0:
        raise EmptyLabelSetError('empty label set')
    if len(set(labels)) != len(labels):
        raise EmptyLabelSetError('duplicate labels in {' + ','.join(labels) + '}')
    return labels


def expect(v: Value, kind: type, functor: Functor) -> None:
    if not isinstance(v, kind):
        raise ValueShapeError('value ' + str(v) + ' does not match ' + str(functor))


class Identity(Functor):
    precedence = 4

    def __str__(self):
        return 'X'

    def validate(self, v, n_states):
        expect(v, StateRef, self)
        if not 0 <= v.index < n_states:
            raise StateRangeError('state ' + str(v.index) + ' out of range 0..' + str(n_states - 1))

    def signature(self, v, block_of):
        return block_of[v.index]

    def collect_states(self, v, into):
        into.add(v.index)

    def rename(self, v, mapping):
        return StateRef(mapping[v.index])


class ConstSet(Functor):
    precedence = 4

    def __init__(self, labels: Sequence[str]):
        self.labels = check_labels(labels)
        self.label_set = frozenset(self.labels)

    def __str__(self):
        return '{' + ','.join(self.labels) + '}'

    def validate(self, v, n_states):
        expect(v, Label, self)
        if v.name not in self.label_set:
            raise UnknownLabelError('label ' + repr(v.name) + ' not in ' + str(self))

    def signature(self, v, block_of):
        return v.name

    def collect_states(self, v, into):
        pass

    def rename(self, v, mapping):
        return v


class Product(Functor):
    precedence = 1

    def __init__(self, factors: Sequence[Functor]):
        self.factors = list(factors)

    def __str__(self):
        return ' * '.join(f.bracketed(2) for f in self.factors)

    def validate(self, v, n_states):
        expect(v, TupleOf, self)
        if len(v.values) != len(self.factors):
            raise ValueShapeError('expected ' + str(len(self.factors)) + ' components in '
                                  + str(v) + ' for ' + str(self))
        for f, x in zip(self.factors, v.values):
            f.validate(x, n_states)

    def signature(self, v, block_of):
        return tuple(f.signature(x, block_of) for f, x in zip(self.factors, v.values))

    def collect_states(self, v, into):
        for f, x in zip(self.factors, v.values):
            f.collect_states(x, into)

    def rename(self, v, mapping):
        return TupleOf([f.rename(x, mapping) for f, x in zip(self.factors, v.values)])


class Exponent(Product):
    """
    `base ^ {l1, ..., ln}`: a product of n copies of `base`, indexed by labels.
    Its values are `Fun`s; signatures list the components in declared label order.
    """
    precedence = 3

    def __init__(self, base: Functor, labels: Sequence[str]):
        self.labels = check_labels(labels)
        self.base = base
        super().__init__([base] * len(self.labels))

    def __str__(self):
        return self.base.bracketed(3) + ' ^ {' + ','.join(self.labels) + '}'

    def validate(self, v, n_states):
        expect(v, Fun, self)
        for l in v.mapping:
            if l not in self.labels:
                raise UnknownLabelError('label ' + repr(l) + ' not in {' + ','.join(self.labels) + '}')
        for l in self.labels:
            if l not in v.mapping:
                raise ValueShapeError('missing label ' + repr(l) + ' in ' + str(v))
            self.base.validate(v.mapping[l], n_states)

    def signature(self, v, block_of):
        base = self.base
        mapping = v.mapping
        return tuple(base.signature(mapping[l], block_of) for l in self.labels)

    def collect_states(self, v, into):
        for x in v.mapping.values():
            self.base.collect_states(x, into)

    def rename(self, v, mapping):
        return Fun({l: self.base.rename(x, mapping) for l, x in v.mapping.items()})


class Coproduct(Functor):
    precedence = 0

    def __init__(self, summands: Sequence[Functor]):
        self.summands = list(summands)

    def __str__(self):
        return ' + '.join(s.bracketed(1) for s in self.summands)

    def validate(self, v, n_states):
        expect(v, Inj, self)
        if not 0 <= v.index < len(self.summands):
            raise ValueShapeError('summand index ' + str(v.index) + ' out of range for ' + str(self))
        self.summands[v.index].validate(v.value, n_states)

    def signature(self, v, block_of):
        return (v.index, self.summands[v.index].signature(v.value, block_of))

    def collect_states(self, v, into):
        self.summands[v.index].collect_states(v.value, into)

    def rename(self, v, mapping):
        return Inj(v.index, self.summands[v.index].rename(v.value, mapping))


class Powerset(Functor):
    precedence = 2

    def __init__(self, inner: Functor):
        self.inner = inner

    def __str__(self):
        return 'P ' + self.inner.bracketed(2)

    def validate(self, v, n_states):
        expect(v, SetOf, self)
        for m in v.members:
            self.inner.validate(m, n_states)

    def signature(self, v, block_of):
        inner = self.inner
        return tuple(sorted({inner.signature(m, block_of) for m in v.members}))

    def collect_states(self, v, into):
        for m in v.members:
            self.inner.collect_states(m, into)

    def rename(self, v, mapping):
        return SetOf(self.inner.rename(m, mapping) for m in v.members)


class Distribution(Functor):
    precedence = 2

    def __init__(self, inner: Functor):
        self.inner = inner

    def __str__(self):
        return 'D ' + self.inner.bracketed(2)

    def validate(self, v, n_states):
        expect(v, DistOf, self)
        for m, p in v.entries:
            if not 0 < p <= 1:
                raise ProbabilitySumError('probability ' + format_probability(p) + ' outside (0,1] in ' + str(v))
            self.inner.validate(m, n_states)
        if v.total() != 1:
            raise ProbabilitySumError('probabilities sum to ' + format_probability(v.total()) + ' in ' + str(v))

    def signature(self, v, block_of):
        inner = self.inner
        merged: Dict[Signature, Fraction] = {}
        for m, p in v.entries:
            s = inner.signature(m, block_of)
            merged[s] = merged[s] + p if s in merged else p
        return tuple(sorted(merged.items()))

    def collect_states(self, v, into):
        for m, _ in v.entries:
            self.inner.collect_states(m, into)

    def rename(self, v, mapping):
        return DistOf((self.inner.rename(m, mapping), p) for m, p in v.entries)


# The operations on single values, as free functions:

def validate_value(functor: Functor, v: Value, n_states: int) -> None:
    functor.validate(v, n_states)


def signature_of(functor: Functor, v: Value, block_of: BlockOf) -> Signature:
    return functor.signature(v, block_of)


def occurring_states(functor: Functor, v: Value) -> Set[int]:
    states: Set[int] = set()
    functor.collect_states(v, states)
    return states


def rename_value(functor: Functor, v: Value, mapping: BlockOf) -> Value:
    return functor.rename(v, mapping)
