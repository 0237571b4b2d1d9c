from typing import *
from abc import abstractmethod
from fractions import Fraction
import functools

from system_elements.errors import MalformedInputError, ProbabilitySumError

"""
Observation values: what a single state of a system shows to the outside (labels, acceptance)
together with its successors (`StateRef`s).
The shape of a value is governed by a functor expression (see `functor.py`), which also
knows how to validate values and how to compute their signatures.
"""


@functools.total_ordering
class Value:
    """
    Common base of all observation values.
    Two values are equal iff their string representations are equal; the string representation
    is canonical (sets and distributions are printed in sorted order).
    """

    @abstractmethod
    def to_json(self) -> Any:
        """
        Returns the value in the coalg-json value encoding.
        """

    def __eq__(self, other):
        return str(self) == str(other)

    def __lt__(self, other):
        return str(self) < str(other)

    def __hash__(self):
        return hash(str(self))

    def __repr__(self):
        return str(self)


class StateRef(Value):
    def __init__(self, index: int):
        self.index = index

    def __str__(self):
        return '#' + str(self.index)

    def to_json(self):
        return {'x': self.index}


class Label(Value):
    def __init__(self, name: str):
        self.name = name

    def __str__(self):
        return self.name

    def to_json(self):
        return self.name


class TupleOf(Value):
    """
    Value of a product.
    """

    def __init__(self, values: Sequence[Value]):
        self.values = list(values)

    def __str__(self):
        return '(' + ', '.join(str(v) for v in self.values) + ')'

    def to_json(self):
        return [v.to_json() for v in self.values]


class Inj(Value):
    """
    Value of a coproduct: the summand index and the value inside that summand.
    """

    def __init__(self, index: int, value: Value):
        self.index = index
        self.value = value

    def __str__(self):
        return 'in' + str(self.index) + '(' + str(self.value) + ')'

    def to_json(self):
        return {'inj': self.index, 'val': self.value.to_json()}


class Fun(Value):
    """
    Value of an exponent `F ^ {a, b, ...}`: one value per label.
    """

    def __init__(self, mapping: Mapping[str, Value]):
        self.mapping = dict(mapping)

    def __str__(self):
        return '[' + ', '.join(l + ': ' + str(self.mapping[l]) for l in sorted(self.mapping)) + ']'

    def to_json(self):
        return {'fun': {l: self.mapping[l].to_json() for l in sorted(self.mapping)}}


class SetOf(Value):
    """
    Value of a powerset. Duplicates (by structural equality) are dropped on construction.
    """

    def __init__(self, members: Iterable[Value]):
        unique: Dict[str, Value] = {}
        for m in members:
            unique.setdefault(str(m), m)
        self.members = [unique[k] for k in sorted(unique)]

    def __str__(self):
        return '{' + ', '.join(str(m) for m in self.members) + '}'

    def to_json(self):
        return {'set': [m.to_json() for m in self.members]}


class DistOf(Value):
    """
    Value of a finitely supported distribution.
    Entries for structurally equal values are merged by summing, and zero-probability entries
    are removed, so that the support is exactly the set of values with positive probability.
    """

    def __init__(self, entries: Iterable[Tuple[Value, Fraction]]):
        merged: Dict[str, Tuple[Value, Fraction]] = {}
        for value, p in entries:
            p = Fraction(p)
            if p < 0:
                raise ProbabilitySumError('negative probability ' + str(p) + ' for ' + str(value))
            key = str(value)
            if key in merged:
                merged[key] = (value, merged[key][1] + p)
            else:
                merged[key] = (value, p)
        self.entries = [merged[k] for k in sorted(merged) if merged[k][1] != 0]

    def total(self) -> Fraction:
        return sum((p for _, p in self.entries), Fraction(0))

    def __str__(self):
        return 'D{' + ', '.join(str(v) + ': ' + format_probability(p) for v, p in self.entries) + '}'

    def to_json(self):
        return {'dist': [[v.to_json(), format_probability(p)] for v, p in self.entries]}


def format_probability(p: Fraction) -> str:
    return str(p.numerator) + '/' + str(p.denominator)


def parse_probability(text: Any) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ProbabilitySumError('not a probability: ' + repr(text))


def value_from_json(doc: Any) -> Value:
    """
    Reads a value in the coalg-json encoding:
    StateRef `{"x": i}`, Label `"a"`, Tuple `[...]`, Inj `{"inj": k, "val": v}`,
    Fun `{"fun": {"a": v}}`, SetOf `{"set": [...]}`, DistOf `{"dist": [[v, "num/den"], ...]}`.
    """
    if isinstance(doc, str):
        return Label(doc)
    if isinstance(doc, list):
        return TupleOf([value_from_json(d) for d in doc])
    if isinstance(doc, dict):
        if set(doc) == {'x'} and isinstance(doc['x'], int) and not isinstance(doc['x'], bool):
            return StateRef(doc['x'])
        if set(doc) == {'inj', 'val'} and isinstance(doc['inj'], int) and not isinstance(doc['inj'], bool):
            return Inj(doc['inj'], value_from_json(doc['val']))
        if set(doc) == {'fun'} and isinstance(doc['fun'], dict):
            return Fun({str(l): value_from_json(v) for l, v in doc['fun'].items()})
        if set(doc) == {'set'} and isinstance(doc['set'], list):
            return SetOf(value_from_json(m) for m in doc['set'])
        if set(doc) == {'dist'} and isinstance(doc['dist'], list):
            entries = []
            for entry in doc['dist']:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise MalformedInputError('distribution entries must be [value, "num/den"] pairs')
                entries.append((value_from_json(entry[0]), parse_probability(entry[1])))
            return DistOf(entries)
    raise MalformedInputError('cannot read value: ' + repr(doc))
