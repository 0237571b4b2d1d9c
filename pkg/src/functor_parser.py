from typing import *
from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from system_elements.errors import FunctorSyntaxError, RefinementError
from system_elements.functor import *

functor_grammar = r"""
    ?start       : sum
    ?sum         : product
                 | product ("+" product)+            -> coproduct
    ?product     : prefix
                 | prefix ("*" prefix)+              -> product
    ?prefix      : exponent
                 | "P" prefix                        -> powerset
                 | "D" prefix                        -> distribution
    ?exponent    : atom
                 | exponent "^" labels               -> exponent
    ?atom        : "X"                               -> identity
                 | labels                            -> constset
                 | "(" sum ")"
    labels       : "{" [LABEL ("," LABEL)*] "}"
    LABEL        : /[A-Za-z0-9_]+/
    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class TreeToFunctor(Transformer):
    """
    Builds the functor expression while parsing.
    Products and coproducts are n-ary: `A * B * C` is one product with three factors,
    while `A * (B * C)` keeps the bracketed product as a single factor.
    """

    def coproduct(self, *summands):
        return Coproduct(summands)

    def product(self, *factors):
        return Product(factors)

    def powerset(self, inner):
        return Powerset(inner)

    def distribution(self, inner):
        return Distribution(inner)

    def exponent(self, base, labels):
        return Exponent(base, labels)

    def identity(self):
        return Identity()

    def constset(self, labels):
        return ConstSet(labels)

    def labels(self, *tokens):
        return [str(t) for t in tokens if t is not None]


functor_parser = Lark(functor_grammar,
                      parser='lalr',
                      transformer=TreeToFunctor())


def parse_functor(text: str) -> Functor:
    try:
        return functor_parser.parse(text)
    except VisitError as e:
        if isinstance(e.orig_exc, RefinementError):
            raise e.orig_exc
        raise
    except UnexpectedInput as e:
        position = getattr(e, 'pos_in_stream', None)
        raise FunctorSyntaxError('cannot parse functor ' + repr(text), position=position)
