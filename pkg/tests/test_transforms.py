"""Pairing, chaining, factorization, and cancellation transforms."""

import pytest

from heckelab import (
    EPS_COEFF,
    Coefficient,
    EpsilonFiniteOrder,
    GroupRingElement,
    HypothesisSet,
    NoAdmissiblePairing,
    build_D,
    chain_combine,
    classify,
    factor_1ABC,
    group_orbit_scan,
    identity,
    involution_transform,
    m2,
    pair_terms,
    parse_matrix,
    reduce_element,
    right_normalize,
    w_matrix,
    weil_cancel,
)
from heckelab.transforms import BadPivot, BNotInvolution


def _of(s, coeff=None):
    m = parse_matrix(s)
    return GroupRingElement.of(m) if coeff is None else GroupRingElement.of(m, coeff)


def test_pairing_reproduces_m2_relation():
    hyp = HypothesisSet.initial(5)
    red = reduce_element(build_D(2, 5), hyp, mode="merge")
    choice = pair_terms(red, 5)[0]
    rel = choice.relation()
    assert len(rel) == 1
    gamma, mu = rel[0]
    assert gamma == m2(5)
    assert mu == parse_matrix("[2 1; 0 2]")
    # the relation is an exact identity: sum (1 - gamma) * mu == red * diag(2,1)
    total = GroupRingElement.zero()
    one = GroupRingElement.one()
    for g, m in rel:
        total = total + (one - GroupRingElement.of(g)) * GroupRingElement.of(m)
    assert total in (
        red * GroupRingElement.of(parse_matrix("[2 0; 0 1]")),
        -(red * GroupRingElement.of(parse_matrix("[2 0; 0 1]"))),
    )


def test_pairing_rejects_wrong_shape():
    with pytest.raises(NoAdmissiblePairing):
        pair_terms(GroupRingElement.one(), 5)
    with pytest.raises(NoAdmissiblePairing):
        pair_terms(GroupRingElement.zero(), 5)


def test_exhaustive_pairing_enumerates_all_matchings():
    hyp = HypothesisSet.initial(11).with_invariant(w_matrix(11), "W")
    red = reduce_element(build_D(3, 11), hyp)
    choices = pair_terms(red, 11, strategy="exhaustive")
    assert len(choices) == 2  # 2 uppers x 2 lowers -> 2! matchings
    best = pair_terms(red, 11)[0]
    assert best.gamma0_count == max(c.gamma0_count for c in choices)


def test_chain_combine_produces_second_order_relation():
    hyp = HypothesisSet.initial(13).with_invariant(w_matrix(13), "W")
    red = reduce_element(build_D(3, 13), hyp)
    rel = pair_terms(red, 13)[0].relation()
    target = parse_matrix("[3 1; -13 -4]")
    chain = chain_combine(rel, None, hyp, target)
    assert chain.eps_matrix == parse_matrix("[39 14; -117 -39]")
    assert chain.eps_class.order == 2
    one = GroupRingElement.one()
    expected = (one - GroupRingElement.of(target)) * (
        one - GroupRingElement.of(chain.eps_matrix, chain.eps_coeff)
    )
    assert chain.element == expected


def test_factor_1ABC_synthetic():
    b = parse_matrix("[0 -1; 1 0]")
    a = parse_matrix("[3 1; 2 1]")
    c = (a * b.inv())  # then A = C B
    one = GroupRingElement.one()
    x = one + GroupRingElement.of(a) - GroupRingElement.of(b) - GroupRingElement.of(c)
    facs = factor_1ABC(x)
    assert facs, "the A = CB factorization must be found"
    for f in facs:
        assert f.expand() == x


def test_involution_transform_identity_and_vacuity():
    b = parse_matrix("[0 -1; 1 0]")
    a = parse_matrix("[3 1; 2 1]")
    c = a * b.inv()
    one = GroupRingElement.one()
    x = one + GroupRingElement.of(a) - GroupRingElement.of(b) - GroupRingElement.of(c)
    res = involution_transform(x, b)
    assert res.element == x * (one + GroupRingElement.of(b))
    assert res.vacuous == (not res.element)
    with pytest.raises(BNotInvolution):
        involution_transform(x, parse_matrix("[1 1; 0 1]"))


def test_right_normalize():
    a = parse_matrix("[3 1; 2 1]")
    x = GroupRingElement.of(a, EPS_COEFF) + GroupRingElement.one()
    y = right_normalize(x, a)
    assert y.coefficient(identity()) == Coefficient.one()
    with pytest.raises(BadPivot):
        right_normalize(x, parse_matrix("[5 1; 4 1]"))


def test_weil_cancel_requires_infinite_order_elliptic():
    hyp = HypothesisSet.initial(11)
    one = GroupRingElement.one()
    g = parse_matrix("[3 -1; -11 4]")
    eps = parse_matrix("[6 -4; 33 -16]")  # elliptic, infinite order
    left = one - GroupRingElement.of(g)
    x = left * (one - GroupRingElement.of(eps))
    assert weil_cancel(x, hyp, left, eps) == left
    finite = parse_matrix("[0 -1; 1 0]")  # order 2
    x2 = left * (one - GroupRingElement.of(finite))
    with pytest.raises(EpsilonFiniteOrder):
        weil_cancel(x2, hyp, left, finite)


def test_group_orbit_scan_counts_order_2_generator():
    g = parse_matrix("[0 -1; 1 0]")
    scan = group_orbit_scan([g], 5)
    assert len(scan) == 2  # identity and g
    kinds = {classify(m).kind for _, m, _ in scan}
    assert kinds == {"scalar", "elliptic"}
