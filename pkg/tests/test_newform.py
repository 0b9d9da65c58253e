"""The numeric ground truth: eta-product newform at level 11."""

import pytest

from heckelab import (
    DEFAULT_POINTS,
    GroupRingElement,
    PointTooLow,
    UnresolvedSymbol,
    check_relation,
    eta_square_11,
    hecke_residual,
    measure_fricke_sign,
    parse_matrix,
    slash_eval,
    truncation_tail,
)
from heckelab.coefficients import Coefficient


def test_known_coefficients():
    f = eta_square_11()
    assert f.coefficients[:13] == (1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4)
    assert f.level == 11 and f.weight == 2


def test_multiplicativity():
    f = eta_square_11()
    assert f.a(4) == f.a(2) ** 2 - 2
    assert f.a(6) == f.a(2) * f.a(3)
    assert f.a(9) == f.a(3) ** 2 - 3
    assert f.a(12) == f.a(3) * f.a(4)
    with pytest.raises(UnresolvedSymbol):
        f.a(f.n_max + 1)


def test_truncation_tail_controls_error():
    assert truncation_tail(4000, 0.5) < 1e-12
    assert truncation_tail(10, 0.01) > 1.0


def test_slash_eval_guards():
    f = eta_square_11()
    with pytest.raises(PointTooLow):
        slash_eval(f, parse_matrix("[1 0; 0 1]"), 0.1 + 0.1j)
    small = eta_square_11(40)
    # 40 series terms cannot certify 1e-12 at a transformed point near the axis
    with pytest.raises(PointTooLow):
        slash_eval(small, parse_matrix("[0 -1; 1 0]"), 3.0 + 0.5j)


def test_fricke_sign_measured():
    f = eta_square_11()
    sign, dev = measure_fricke_sign(f)
    assert sign == -1
    assert dev < 1e-10


def test_hecke_residuals():
    f = eta_square_11()
    for ell in (2, 3, 5, 7):
        assert hecke_residual(f, ell) < 1e-10


def test_gamma0_invariance():
    f = eta_square_11()
    one = GroupRingElement.one()
    for s in ("[1 0; 11 1]", "[2 -1; -11 6]", "[3 -1; -11 4]"):
        x = one - GroupRingElement.of(parse_matrix(s))
        assert check_relation(f, x, DEFAULT_POINTS) < 1e-10


def test_unresolved_symbol_rejected():
    f = eta_square_11()
    x = GroupRingElement.one().scale(Coefficient.symbol("mystery"))
    with pytest.raises(UnresolvedSymbol):
        check_relation(f, x)


def test_explicit_values_override():
    f = eta_square_11()
    x = GroupRingElement.one().scale(Coefficient.symbol("c"))
    assert check_relation(f, x, values={"c": 0.0}) == 0.0
