"""The element expression mini-syntax."""

from fractions import Fraction

import pytest

from hopfalg.algebra import Element, Monomial
from hopfalg.errors import HopfError
from hopfalg.exprparse import parse_element
from hopfalg.hopf import HopfAlgebra
from hopfalg.instances import ladder_schema, rooted_tree_schema
from hopfalg.rings import QQ


@pytest.fixture(scope="module")
def ladder():
    return HopfAlgebra(ladder_schema(), validate_to=6)


@pytest.fixture(scope="module")
def trees():
    return HopfAlgebra(rooted_tree_schema(3))


def term(ladder, spec, coeff=1):
    m = Monomial.from_powers(
        (ladder.schema.generator_by_name(name), e) for name, e in spec
    )
    return (m, Fraction(coeff))


def test_basic_expression(ladder):
    e = parse_element(ladder, "t1^2*t2 + 3*t3")
    assert e == Element.from_terms(
        QQ, [term(ladder, [("t1", 2), ("t2", 1)]), term(ladder, [("t3", 1)], 3)]
    )


def test_unary_minus_and_subtraction(ladder):
    e = parse_element(ladder, "-t2 + t1^2 - 2*t1")
    assert e == Element.from_terms(
        QQ,
        [
            term(ladder, [("t2", 1)], -1),
            term(ladder, [("t1", 2)]),
            term(ladder, [("t1", 1)], -2),
        ],
    )


def test_parentheses_expand(ladder):
    e = parse_element(ladder, "(t1 + t2) * t1")
    assert e == Element.from_terms(
        QQ, [term(ladder, [("t1", 2)]), term(ladder, [("t1", 1), ("t2", 1)])]
    )
    sq = parse_element(ladder, "(t1 + 1)^2")
    assert sq == Element.from_terms(
        QQ,
        [
            term(ladder, [("t1", 2)]),
            term(ladder, [("t1", 1)], 2),
            (Monomial.unit(), Fraction(1)),
        ],
    )


def test_rational_coefficients(ladder):
    e = parse_element(ladder, "3/2*t1")
    assert e.coefficient(Monomial.of(ladder.schema.generator(1))) == Fraction(3, 2)


def test_bare_number(ladder):
    e = parse_element(ladder, "5")
    assert e == Element.unit(QQ).scale_rational(Fraction(5))


def test_tree_tokens(trees):
    e = parse_element(trees, "[[][]] - 2*[]^2")
    cherry = trees.schema.generator_by_name("[[][]]")
    dot = trees.schema.generator_by_name("[]")
    assert e.coefficient(Monomial.of(cherry)) == 1
    assert e.coefficient(Monomial.of(dot, 2)) == -2


def test_tree_products(trees):
    e = parse_element(trees, "[]*[[]]")
    assert e.terms and all(m.poly_degree == 2 for m in e.terms)


def test_errors(ladder):
    for bad in ["", "t1 +", "t1 ^ t2", "t1^0", "(t1", "t1)", "t9 $", "2 t1"]:
        with pytest.raises(HopfError):
            parse_element(ladder, bad)


def test_unknown_generator_named(ladder):
    with pytest.raises(HopfError, match="q5"):
        parse_element(ladder, "q5")
