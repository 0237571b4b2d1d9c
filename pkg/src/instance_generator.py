from typing import *
from dataclasses import dataclass
from fractions import Fraction

from functor_parser import parse_functor
from system_elements.coalgebra import Coalgebra
from system_elements.errors import ConfigurationError
from system_elements.value import *
from weighted_tree import WeightedTree

"""
Seeded instance generators for the system families the refinement handles
(DFA, NFA, LTS, Markov chain, Markov decision process, counter chain) and for weighted trees.

Randomness comes from SplitMix64 with the published constants, so a (family, parameters, seed)
triple describes the same instance in any implementation.
"""

FAMILIES = ('dfa', 'nfa', 'lts', 'mc', 'mdp', 'chain')
MAX_DENOMINATOR = 2 ** 16

MASK64 = (1 << 64) - 1


class SplitMix64:
    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MIX1) & MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """
        Uniform integer in [0, bound), by rejection of the biased top range.
        """
        if bound <= 0:
            raise ValueError('bound must be positive')
        limit = (MASK64 + 1) - (MASK64 + 1) % bound
        while True:
            r = self.next_u64()
            if r < limit:
                return r % bound


@dataclass
class GenSpec:
    family: str
    n_states: int
    alphabet_size: int = 2
    out_degree: int = 2
    support: int = 3
    denominator: int = 12
    seed: int = 0

    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigurationError('unknown family ' + repr(self.family) + ', expected one of ' + ', '.join(FAMILIES))
        if self.n_states < 1:
            raise ConfigurationError('n_states must be at least 1')
        if self.alphabet_size < 1 and self.family not in ('mc',):
            raise ConfigurationError('alphabet_size must be at least 1')
        if self.out_degree < 0:
            raise ConfigurationError('out_degree must not be negative')
        if not 1 <= self.support <= self.denominator <= MAX_DENOMINATOR:
            raise ConfigurationError('need 1 <= support <= denominator <= ' + str(MAX_DENOMINATOR))
        if not 0 <= self.seed <= MASK64:
            raise ConfigurationError('seed must be a 64-bit unsigned integer')


def letter(i: int) -> str:
    return 'abcdefghijklmnopqrstuvwxyz'[i] if i < 26 else 'a' + str(i)


def letters(k: int) -> List[str]:
    return [letter(i) for i in range(k)]


def family_functor(spec: GenSpec) -> str:
    alphabet = '{' + ','.join(letters(max(spec.alphabet_size, 1))) + '}'
    return {
        'dfa': '{0,1} * X ^ ' + alphabet,
        'chain': '{0,1} * X ^ ' + alphabet,
        'nfa': '{0,1} * (P X) ^ ' + alphabet,
        'lts': 'P (' + alphabet + ' * X)',
        'mc': 'D X' if spec.alphabet_size <= 1 else alphabet + ' * D X',
        'mdp': 'P (' + alphabet + ' * D X)',
    }[spec.family]


def random_distribution(rng: SplitMix64, spec: GenSpec) -> DistOf:
    """
    A random composition of `denominator` into at most `support` positive parts, each part going to a random state.
    """
    d = spec.denominator
    k = 1 + rng.below(spec.support)
    cuts: Set[int] = set()
    while len(cuts) < k - 1:
        cuts.add(1 + rng.below(d - 1))
    bounds = [0] + sorted(cuts) + [d]
    return DistOf((StateRef(rng.below(spec.n_states)), Fraction(hi - lo, d))
                  for lo, hi in zip(bounds, bounds[1:]))


def random_acceptance(rng: SplitMix64) -> Label:
    return Label('1' if rng.below(2) else '0')


def state_value(rng: SplitMix64, spec: GenSpec, x: int) -> Value:
    n = spec.n_states
    alphabet = letters(max(spec.alphabet_size, 1))
    if spec.family == 'dfa':
        return TupleOf([random_acceptance(rng), Fun({l: StateRef(rng.below(n)) for l in alphabet})])
    if spec.family == 'chain':
        accept = Label('1' if x == n - 1 else '0')
        return TupleOf([accept, Fun({l: StateRef(min(x + 1, n - 1)) for l in alphabet})])
    if spec.family == 'nfa':
        return TupleOf([random_acceptance(rng),
                        Fun({l: SetOf(StateRef(rng.below(n)) for _ in range(rng.below(spec.out_degree + 1)))
                             for l in alphabet})])
    if spec.family == 'lts':
        return SetOf(TupleOf([Label(l), StateRef(rng.below(n))])
                     for l in alphabet for _ in range(rng.below(spec.out_degree + 1)))
    if spec.family == 'mc':
        if spec.alphabet_size <= 1:
            return random_distribution(rng, spec)
        return TupleOf([Label(alphabet[rng.below(len(alphabet))]), random_distribution(rng, spec)])
    return SetOf(TupleOf([Label(l), random_distribution(rng, spec)])
                 for l in alphabet for _ in range(rng.below(spec.out_degree + 1)))


def generate(spec: GenSpec) -> Coalgebra:
    spec.validate()
    rng = SplitMix64(spec.seed)
    functor = parse_functor(family_functor(spec))
    return Coalgebra(functor, [state_value(rng, spec, x) for x in range(spec.n_states)])


def counter_chain(n: int, alphabet_size: int = 1) -> Coalgebra:
    """
    The DFA 0 -> 1 -> ... -> n-1 -> n-1 on every letter with only n-1 accepting.
    All states are distinguishable, and refinement separates them one at a time.
    """
    return generate(GenSpec('chain', n, alphabet_size=alphabet_size))


def random_weighted_tree(rng: SplitMix64, max_nodes: int, max_weight: int,
                         tight: bool = False) -> Tuple[WeightedTree, List[int]]:
    """
    A random recursive tree with a weight function: the root weight is drawn first, and every node
    hands a random composition of (part of) its weight down to its children.
    With `tight`, every node hands down all of its weight.
    """
    n = 1 + rng.below(max_nodes)
    parent = [0] + [rng.below(v) for v in range(1, n)]
    tree = WeightedTree(parent)
    w = [0] * n
    w[tree.root] = rng.below(max_weight + 1)
    for v in tree.order:
        children = tree.children[v]
        if not children:
            continue
        budget = w[v] if tight else w[v] - rng.below(w[v] // 4 + 1)
        cuts = sorted(rng.below(budget + 1) for _ in range(len(children) - 1))
        bounds = [0] + cuts + [budget]
        for u, lo, hi in zip(children, bounds, bounds[1:]):
            w[u] = hi - lo
    return tree, w
