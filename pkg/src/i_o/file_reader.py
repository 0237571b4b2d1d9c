from typing import *
from fractions import Fraction
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput
import json
import logging
import os
import re

from functor_parser import parse_functor
from instance_generator import letters
from system_elements.coalgebra import Coalgebra
from system_elements.errors import *
from system_elements.value import *
from weighted_tree import HeavyChoice, WeightedTree, load_tree_json

log = logging.getLogger(__name__)

FORMATS = ('coalg-json', 'dfa-text', 'aut', 'mc-tsv')
SUFFIXES = {'.json': 'coalg-json', '.dfa': 'dfa-text', '.aut': 'aut', '.tsv': 'mc-tsv'}

# label of the functor of a transition-free .aut file, Aldebaran's name for the internal action
SILENT_LABEL = 'i'

aut_grammar = r"""
    start       : header transition*
    header      : "des" "(" INT "," INT "," INT ")"
    transition  : "(" INT "," label "," INT ")"
    label       : ESCAPED_STRING                     -> quoted
                | BARE                               -> bare
    BARE        : /[^",()\s]+/
    %import common.INT
    %import common.ESCAPED_STRING
    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class TreeToAut(Transformer):
    def start(self, header, *transitions):
        return header, list(transitions)

    def header(self, first, m, n):
        return int(first), int(m), int(n), first.line

    def transition(self, src, label, dst):
        return int(src), label, int(dst), src.line

    def quoted(self, token):
        return str(token)[1:-1].replace('\\"', '"').replace('\\\\', '\\')

    def bare(self, token):
        return str(token)


aut_parser = Lark(aut_grammar,
                  parser='lalr',
                  transformer=TreeToAut())


def label_token(label: str) -> str:
    """
    An injective renaming of arbitrary action names into functor labels:
    letters and digits are kept, every other character c becomes `_<hex code of c>_`.
    """
    return ''.join(c if re.fullmatch(r'[A-Za-z0-9]', c) else '_' + format(ord(c), 'x') + '_' for c in label)


def infer_format(path: str) -> str:
    suffix = os.path.splitext(path)[1].lower()
    if suffix not in SUFFIXES:
        raise ConfigurationError('cannot infer the format of ' + repr(path) + ', use --format')
    return SUFFIXES[suffix]


class SystemReader:
    """
    Reads systems from the supported file formats. All formats are UTF-8 text:

    - coalg-json: `{"functor": "...", "states": n, "c": [value, ...]}`
    - dfa-text: a header `dfa n k` and one line `accept succ_1 ... succ_k` per state
    - aut: Aldebaran `des (first, m, n)` followed by m lines `(src, "label", dst)`
    - mc-tsv: one row `src dst num/den` per transition of a Markov chain
    """

    def __init__(self, to_functor: Callable[[str], Any] = parse_functor):
        self.to_functor = to_functor

    def read_file(self, path: str, format: Optional[str] = None) -> Coalgebra:
        format = format or infer_format(path)
        with open(path, encoding='utf-8') as reader:
            text = reader.read()
        log.info('reading %s as %s', path, format)
        return self.parse_text(text, format)

    def parse_text(self, text: str, format: str) -> Coalgebra:
        if format == 'coalg-json':
            try:
                doc = json.loads(text)
            except json.JSONDecodeError as e:
                raise MalformedInputError(e.msg, line=e.lineno)
            return self.parse_coalgebra_json(doc)
        if format == 'dfa-text':
            return self.parse_dfa(text)
        if format == 'aut':
            return self.parse_aut(text)
        if format == 'mc-tsv':
            return self.parse_mc(text)
        raise ConfigurationError('unknown format ' + repr(format) + ', expected one of ' + ', '.join(FORMATS))

    def parse_coalgebra_json(self, doc: Any) -> Coalgebra:
        if not isinstance(doc, dict) or not {'functor', 'states', 'c'} <= set(doc):
            raise MalformedInputError('a system document needs "functor", "states" and "c"')
        if not isinstance(doc['functor'], str):
            raise MalformedInputError('"functor" must be a string')
        functor = self.to_functor(doc['functor'])
        if not isinstance(doc['c'], list) or doc['states'] != len(doc['c']):
            raise MalformedInputError('"states" is ' + repr(doc['states']) + ' but "c" has '
                                      + (str(len(doc['c'])) if isinstance(doc['c'], list) else 'no') + ' entries')
        values = []
        for x, v in enumerate(doc['c']):
            try:
                values.append(value_from_json(v))
            except MalformedInputError as e:
                raise e.within('state ' + str(x)) from e
        return Coalgebra(functor, values)

    def parse_dfa(self, text: str) -> Coalgebra:
        rows = [(i, line.split()) for i, line in enumerate(text.splitlines(), 1)
                if line.strip() and not line.lstrip().startswith('#')]
        if not rows:
            raise MalformedInputError('empty DFA file')
        line, header = rows[0]
        if len(header) != 3 or header[0] != 'dfa' or not all(t.isdigit() for t in header[1:]):
            raise MalformedInputError('expected header "dfa <states> <letters>"', line=line)
        n, k = int(header[1]), int(header[2])
        if k < 1:
            raise EmptyLabelSetError('a DFA needs at least one letter', line=line)
        if len(rows) - 1 != n:
            raise MalformedInputError('header announces ' + str(n) + ' states, found ' + str(len(rows) - 1),
                                      line=line)
        alphabet = letters(k)
        values: List[Value] = []
        for line, tokens in rows[1:]:
            if len(tokens) != k + 1 or not all(t.isdigit() for t in tokens):
                raise MalformedInputError('expected acceptance and ' + str(k) + ' successors', line=line)
            if tokens[0] not in ('0', '1'):
                raise UnknownLabelError('acceptance must be 0 or 1', line=line)
            successors = [int(t) for t in tokens[1:]]
            for y in successors:
                if y >= n:
                    raise StateRangeError('state ' + str(y) + ' out of range 0..' + str(n - 1), line=line)
            values.append(TupleOf([Label(tokens[0]), Fun({l: StateRef(y) for l, y in zip(alphabet, successors)})]))
        return Coalgebra(self.to_functor('{0,1} * X ^ {' + ','.join(alphabet) + '}'), values)

    def parse_aut(self, text: str) -> Coalgebra:
        try:
            (first, m, n, header_line), transitions = aut_parser.parse(text)
        except UnexpectedInput as e:
            line = getattr(e, 'line', None)
            raise MalformedInputError('cannot parse Aldebaran file', line=line if line and line > 0 else None)
        if n < 1:
            raise MalformedInputError('an LTS needs at least one state', line=header_line)
        if first >= n:
            raise StateRangeError('initial state ' + str(first) + ' out of range', line=header_line)
        if len(transitions) != m:
            raise MalformedInputError('header announces ' + str(m) + ' transitions, found ' + str(len(transitions)),
                                      line=header_line)
        outgoing: List[List[Value]] = [[] for _ in range(n)]
        labels: Set[str] = set()
        for src, label, dst, line in transitions:
            for x in (src, dst):
                if x >= n:
                    raise StateRangeError('state ' + str(x) + ' out of range 0..' + str(n - 1), line=line)
            token = label_token(label)
            labels.add(token)
            outgoing[src].append(TupleOf([Label(token), StateRef(dst)]))
        functor = self.to_functor('P ({' + ','.join(sorted(labels) or [SILENT_LABEL]) + '} * X)')
        return Coalgebra(functor, [SetOf(out) for out in outgoing])

    def parse_mc(self, text: str) -> Coalgebra:
        rows: List[Tuple[int, int, int, Fraction]] = []
        for line, row in enumerate(text.splitlines(), 1):
            tokens = row.split()
            if not tokens or tokens[0].startswith('#'):
                continue
            if len(tokens) != 3 or not tokens[0].isdigit() or not tokens[1].isdigit():
                raise MalformedInputError('expected "src dst num/den"', line=line)
            try:
                p = parse_probability(tokens[2])
            except ProbabilitySumError as e:
                raise ProbabilitySumError(str(e), line=line)
            if not 0 < p <= 1:
                raise ProbabilitySumError('probability ' + tokens[2] + ' outside (0,1]', line=line)
            rows.append((line, int(tokens[0]), int(tokens[1]), p))
        if not rows:
            raise MalformedInputError('empty Markov chain file')
        n = 1 + max(max(src, dst) for _, src, dst, _ in rows)
        entries: List[List[Tuple[Value, Fraction]]] = [[] for _ in range(n)]
        first_line: Dict[int, int] = {}
        for line, src, dst, p in rows:
            entries[src].append((StateRef(dst), p))
            first_line.setdefault(src, line)
        values = []
        for x in range(n):
            if x not in first_line:
                raise ProbabilitySumError('state ' + str(x) + ' has no outgoing rows')
            dist = DistOf(entries[x])
            if dist.total() != 1:
                raise ProbabilitySumError('probabilities of state ' + str(x) + ' sum to '
                                          + format_probability(dist.total()), line=first_line[x])
            values.append(dist)
        return Coalgebra(self.to_functor('D X'), values)

    def read_tree(self, path: str) -> Tuple[WeightedTree, List[int], Optional[HeavyChoice]]:
        with open(path, encoding='utf-8') as reader:
            try:
                doc = json.load(reader)
            except json.JSONDecodeError as e:
                raise MalformedTreeError(e.msg, line=e.lineno)
        return load_tree_json(doc)


def parse_input(path: str, format: Optional[str] = None) -> Coalgebra:
    return SystemReader().read_file(path, format)
