import pytest

from functor_parser import parse_functor
from system_elements.errors import *
from system_elements.functor import *


def test_dfa_functor():
    F = parse_functor('{0,1} * (X ^ {a,b})')
    assert isinstance(F, Product)
    assert isinstance(F.factors[0], ConstSet)
    assert isinstance(F.factors[1], Exponent)
    assert F.factors[1].labels == ['a', 'b']
    assert str(F) == '{0,1} * X ^ {a,b}'


def test_lts_functor():
    F = parse_functor('P ({a,b} * X)')
    assert isinstance(F, Powerset)
    assert isinstance(F.inner, Product)
    assert str(F) == 'P ({a,b} * X)'


def test_identity():
    assert isinstance(parse_functor('X'), Identity)
    assert isinstance(parse_functor('  ( X ) '), Identity)


def test_products_are_n_ary():
    assert len(parse_functor('X * X * X').factors) == 3
    nested = parse_functor('X * (X * X)')
    assert len(nested.factors) == 2
    assert str(nested) == 'X * (X * X)'


def test_precedence():
    assert isinstance(parse_functor('P X ^ {a}'), Powerset)
    assert str(parse_functor('P X ^ {a}')) == 'P X ^ {a}'
    assert isinstance(parse_functor('(P X) ^ {a}'), Exponent)
    assert str(parse_functor('(P X) ^ {a}')) == '(P X) ^ {a}'
    F = parse_functor('X + {a} * X')
    assert isinstance(F, Coproduct)
    assert [type(s) for s in F.summands] == [Identity, Product]
    assert isinstance(parse_functor('{a,b} * D X').factors[1], Distribution)


def test_labels_may_look_like_keywords():
    F = parse_functor('{X,P,D,a_1} * X')
    assert F.factors[0].labels == ['X', 'P', 'D', 'a_1']


def test_printing_reads_back():
    for text in ['{0,1} * X ^ {a,b}', '{0,1} * (P X) ^ {a,b}', 'P ({a,b} * X)', 'D X',
                 'P ({a} * D X)', '{a} + X * X + P (X + X)', '(X + X) ^ {a}', 'D (X * X)',
                 'P P X', '({a} * X) * X']:
        F = parse_functor(text)
        assert parse_functor(str(F)) == F
        assert str(F) == text


def test_empty_label_set():
    with pytest.raises(EmptyLabelSetError):
        parse_functor('{}')
    with pytest.raises(EmptyLabelSetError):
        parse_functor('X ^ {}')
    with pytest.raises(EmptyLabelSetError):
        parse_functor('{a,a}')


def test_syntax_errors():
    with pytest.raises(FunctorSyntaxError) as e:
        parse_functor('X * * X')
    assert e.value.position is not None
    with pytest.raises(FunctorSyntaxError):
        parse_functor('X *')
    with pytest.raises(FunctorSyntaxError):
        parse_functor('Q X')
    with pytest.raises(FunctorSyntaxError):
        parse_functor('X ^ X')
    with pytest.raises(MalformedInputError):
        parse_functor('(X')
