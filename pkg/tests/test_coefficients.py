"""Symbolic coefficient arithmetic and eigenvalue substitution rules."""

from fractions import Fraction

import pytest

from heckelab import (
    EPS_COEFF,
    Coefficient,
    CyclicRules,
    SubstitutionRule,
    eigenvalue_symbol,
    hecke_eigenvalue_rules,
    substitute,
)


def test_ring_laws_on_symbolic_values():
    a = Coefficient.symbol("a2") + 3
    b = EPS_COEFF * Coefficient.symbol("a3") - Fraction(1, 2)
    c = Coefficient.rational(Fraction(2, 5)) - Coefficient.symbol("a2")
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Coefficient.zero()
    assert a * Coefficient.one() == a
    assert (a * b) * c == a * (b * c)


def test_eps_squares_to_one():
    assert EPS_COEFF * EPS_COEFF == Coefficient.one()
    assert EPS_COEFF**5 == EPS_COEFF


def test_rational_value_and_evaluate():
    c = Coefficient.rational(Fraction(3, 4))
    assert c.is_rational() and c.rational_value() == Fraction(3, 4)
    x = Coefficient.symbol("a2") * 2 + 1
    assert not x.is_rational()
    with pytest.raises(ValueError):
        x.rational_value()
    assert x.evaluate({"a2": -2}) == -3
    with pytest.raises(KeyError):
        x.evaluate({})


def test_eigenvalue_rules_expand_composites():
    rules = hecke_eigenvalue_rules(15)
    a2 = Coefficient.symbol("a2")
    a3 = Coefficient.symbol("a3")
    a5 = Coefficient.symbol("a5")
    assert substitute(eigenvalue_symbol(4), rules) == a2 * a2 - 2
    assert substitute(eigenvalue_symbol(6), rules) == a2 * a3
    assert substitute(eigenvalue_symbol(15), rules) == a3 * a5
    assert substitute(eigenvalue_symbol(9), rules) == a3 * a3 - 3


def test_cyclic_rules_rejected():
    loop = [
        SubstitutionRule("x", Coefficient.symbol("y")),
        SubstitutionRule("y", Coefficient.symbol("x") + 1),
    ]
    with pytest.raises(CyclicRules):
        substitute(Coefficient.symbol("x"), loop)
