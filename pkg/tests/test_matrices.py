"""Projective matrix canonicalization, parsing, and classification."""

import random
from fractions import Fraction

import pytest

from heckelab import (
    MixedSurdEntries,
    NegativeDeterminant,
    ProjMatrix,
    ZeroDeterminant,
    canonicalize,
    classify,
    identity,
    in_gamma0,
    parse_matrix,
    tau,
)


def random_canonical(rng, bound=50):
    while True:
        raw = [[rng.randint(-bound, bound) for _ in range(2)] for _ in range(2)]
        try:
            return canonicalize(raw)
        except (ZeroDeterminant, NegativeDeterminant):
            continue


def test_canonical_representative_is_primitive_and_sign_fixed():
    m = canonicalize([[2, 4], [-6, 10]])
    assert m.entries() == (1, 2, -3, 5)
    m = canonicalize([[-1, 0], [0, -1]])
    assert m == identity()


def test_canonicalize_idempotent_and_scale_invariant():
    rng = random.Random(7)
    for _ in range(200):
        m = random_canonical(rng)
        a, b, c, d = m.entries()
        assert canonicalize([[a, b], [c, d]]) == m
        k = rng.choice([2, 3, -1, -5, Fraction(1, 7)])
        assert canonicalize([[k * a, k * b], [k * c, k * d]]) == m


def test_degenerate_matrices_rejected():
    with pytest.raises(ZeroDeterminant):
        canonicalize([[1, 2], [2, 4]])
    with pytest.raises(NegativeDeterminant):
        canonicalize([[0, 1], [1, 0]])


def test_multiplication_inverse_and_powers():
    rng = random.Random(11)
    for _ in range(100):
        m = random_canonical(rng, bound=9)
        assert m * m.inv() == identity()
        assert m**3 == m * m * m
        assert m**-2 == (m.inv()) ** 2
    assert identity() ** 0 == identity()


def test_parse_matrix_round_trip():
    rng = random.Random(13)
    for _ in range(100):
        m = random_canonical(rng)
        assert parse_matrix(str(m)) == m


def test_parse_matrix_surd_forms():
    # a global surd factor scales tau but not the projective class decision
    m = parse_matrix("[1 2; -3 7]*sqrt(5)")
    assert m == parse_matrix("[1 2; -3 7]")
    # per-entry surds on the off-diagonal, zeros elsewhere
    s = parse_matrix("[0 -1*sqrt(11); 1*sqrt(11) 0]", level=11)
    assert s.det > 0
    with pytest.raises(MixedSurdEntries):
        parse_matrix("[1 -1*sqrt(11); 1*sqrt(11) -1]")
    with pytest.raises(MixedSurdEntries):
        parse_matrix("[0 sqrt(7); sqrt(5) 0]")
    with pytest.raises(ValueError):
        parse_matrix("[1 2; 3")


def test_tau_and_classify_known_examples():
    assert tau(parse_matrix("[0 -1; 1 0]")) == 0
    assert classify(parse_matrix("[0 -1; 1 0]")).order == 2
    assert classify(parse_matrix("[0 -1; 1 1]")).order == 3
    assert classify(parse_matrix("[1 -1; 1 1]")).order == 4  # tau = 2
    assert classify(parse_matrix("[2 -1; 1 1]")).order == 6  # tau = 3
    assert classify(parse_matrix("[1 1; 0 1]")).kind == "parabolic"
    assert classify(parse_matrix("[2 0; 0 1]")).kind == "hyperbolic"
    assert classify(identity()).kind == "scalar"
    e = parse_matrix("[6 -4; 33 -16]")
    cls = classify(e)
    assert (cls.kind, cls.order, cls.tau) == ("elliptic", "infinite", Fraction(25, 9))


def test_in_gamma0():
    assert in_gamma0(parse_matrix("[3 -1; -11 4]"), 11)
    assert not in_gamma0(parse_matrix("[3 -1; -11 4]"), 13)
    assert not in_gamma0(parse_matrix("[2 1; 0 2]"), 11)  # det 4


def test_projmatrix_requires_positive_determinant():
    with pytest.raises(NegativeDeterminant):
        ProjMatrix(0, 1, 1, 0)
    with pytest.raises(NegativeDeterminant):
        ProjMatrix(1, 2, 2, 4)  # zero determinant is also rejected
