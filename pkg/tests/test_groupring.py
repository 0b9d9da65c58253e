"""Formal linear combinations of projective matrices: ring laws, JSON."""

import random

from heckelab import EPS_COEFF, Coefficient, GroupRingElement, identity

from test_matrices import random_canonical


def random_element(rng, n_terms=4, bound=9):
    x = GroupRingElement.zero()
    for _ in range(rng.randint(0, n_terms)):
        coeff = rng.choice(
            [
                Coefficient.one(),
                -Coefficient.one(),
                EPS_COEFF,
                Coefficient.symbol("a2") - 1,
                Coefficient.rational(rng.randint(-3, 3)),
            ]
        )
        x = x + GroupRingElement.of(random_canonical(rng, bound), coeff)
    return x


def test_ring_laws():
    rng = random.Random(23)
    one = GroupRingElement.one()
    for _ in range(60):
        x, y, z = (random_element(rng) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert x + y == y + x
        assert x - x == GroupRingElement.zero()
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (y + z) * x == y * x + z * x
        assert one * x == x * one == x


def test_of_merges_equal_matrices_projectively():
    m = random_canonical(random.Random(1))
    x = GroupRingElement.of(m) + GroupRingElement.of(m, -Coefficient.one())
    assert not x
    assert x == GroupRingElement.zero()


def test_coefficient_lookup_and_scale():
    rng = random.Random(5)
    m = random_canonical(rng)
    x = GroupRingElement.of(m, EPS_COEFF) + GroupRingElement.one()
    assert x.coefficient(m) == EPS_COEFF
    assert x.coefficient(identity()) == Coefficient.one()
    assert x.scale(EPS_COEFF).coefficient(m) == Coefficient.one()


def test_json_round_trip():
    rng = random.Random(42)
    for _ in range(20):
        x = random_element(rng)
        assert GroupRingElement.from_json(x.to_json()) == x


def test_symbols():
    rng = random.Random(3)
    x = GroupRingElement.of(random_canonical(rng), Coefficient.symbol("a7"))
    x = x + GroupRingElement.one().scale(EPS_COEFF)
    assert x.symbols() == {"a7", "eps"}
