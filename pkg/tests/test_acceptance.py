"""End-to-end acceptance suite: each test locks one headline behavior of
the workbench against exact expected values."""

import random
from fractions import Fraction

from heckelab import (
    DEFAULT_POINTS,
    GroupRingElement,
    HypothesisSet,
    build_D,
    canonicalize,
    chain_combine,
    check_relation,
    classify,
    diag,
    eta_square_11,
    evaluate_word,
    expand_certificate,
    group_orbit_scan,
    identity,
    m2,
    pair_terms,
    parse_matrix,
    reduce_element,
    reduce_matrix,
    run_case,
    tau,
    w_matrix,
    word_search,
)
from heckelab.cases import hyp_with_m2, hyp_with_w
from heckelab.hypotheses import DerivationLog

from test_matrices import random_canonical


def _assert_case(name):
    report = run_case(name)
    assert report.passed, "\n".join(
        f"{r.label}: expected {r.expected}, got {r.actual}"
        for r in report.rows
        if not r.ok
    )
    return report


# 1. M2 invariance at levels 5, 7, 9 -----------------------------------------


def test_m2_invariance_levels_5_7_9():
    for level in (5, 7, 9):
        _assert_case(f"lemma-M2-{level}")
        # the derived matrix is exactly [[2,-1],[-N,(N+1)/2]]
        expected = canonicalize([[2, -1], [-level, Fraction(level + 1, 2)]])
        assert m2(level) == expected
        red = reduce_element(build_D(2, level), HypothesisSet.initial(level), mode="merge")
        rel = pair_terms(red, level)[0].relation()
        assert [g for g, _ in rel] == [expected]
        # every eigenvalue and eps symbol cancels in the combination
        assert build_D(2, level).symbols() == set()


# 2. Level 11 end-to-end ------------------------------------------------------


def test_level_11_end_to_end():
    _assert_case("gamma11")
    hyp = hyp_with_w(HypothesisSet.initial(11))
    rel3 = pair_terms(reduce_element(build_D(3, 11), hyp), 11)[0].relation()
    rel4 = pair_terms(
        reduce_element(build_D(4, 11, [(2, diag(2, 1)), (2, diag(1, 2))]), hyp), 11
    )[0].relation()
    assert [(str(g), str(u)) for g, u in rel3] == [
        ("[3 1; 11 4]", "[3 -1; 0 3]"),
        ("[3 -1; -11 4]", "[3 1; 0 3]"),
    ]
    assert [(str(g), str(u)) for g, u in rel4] == [
        ("[4 1; 11 3]", "[4 -1; 0 4]"),
        ("[4 -1; -11 3]", "[4 1; 0 4]"),
    ]
    target = parse_matrix("[3 -1; -11 4]")
    chain = chain_combine(rel3, rel4, hyp, target)
    # the printed fractional epsilon, exactly, in canonical integer form
    assert chain.eps_matrix == canonicalize(
        [[1, Fraction(-2, 3)], [Fraction(11, 2), Fraction(-8, 3)]]
    )
    assert tau(chain.eps_matrix) == Fraction(25, 9)
    assert (chain.eps_class.kind, chain.eps_class.order) == ("elliptic", "infinite")
    # the chained element factors as (1 - target)(1 - eps) symbolically
    one = GroupRingElement.one()
    assert chain.element == (one - GroupRingElement.of(target)) * (
        one - GroupRingElement.of(chain.eps_matrix, chain.eps_coeff)
    )


# 3. Level 13 obstruction -----------------------------------------------------


def test_level_13_obstruction():
    _assert_case("t13-T3")
    _assert_case("t13-T4")
    _assert_case("t13-combine")
    hyp = hyp_with_w(HypothesisSet.initial(13))
    target = parse_matrix("[3 1; -13 -4]")

    def eps_of(n, corr):
        red = reduce_element(build_D(n, 13, corr), hyp)
        rel = pair_terms(red, 13)[0].relation()
        return chain_combine(rel, None, hyp, target)

    c3 = eps_of(3, [])
    c4 = eps_of(4, [(2, diag(2, 1)), (2, diag(1, 2))])
    assert c3.eps_matrix == parse_matrix("[39 14; -117 -39]")
    assert c4.eps_matrix == parse_matrix("[26 8; -91 -26]")
    for c in (c3, c4):
        assert tau(c.eps_matrix) == 0
        assert c.eps_class.order == 2
    prod = c3.eps_matrix * c4.eps_matrix
    assert tau(prod) == Fraction(49, 9)
    assert classify(prod).kind == "hyperbolic"
    scan = group_orbit_scan([c3.eps_matrix, c4.eps_matrix], 20)
    assert not any(
        cls.kind == "elliptic" and cls.order == "infinite" for _, _, cls in scan
    )


# 4. T_6 collapse at level 13 -------------------------------------------------


def test_t6_collapse():
    _assert_case("t13-T6")
    hyp = HypothesisSet.initial(13)
    corr = [(2, diag(3, 1)), (2, diag(1, 3)), (3, diag(2, 1)), (3, diag(1, 2))]
    red = reduce_element(build_D(6, 13, corr), hyp, mode="merge")
    assert len(red.terms) == 4
    hyp2 = hyp_with_m2(hyp)
    gens = list(zip(hyp2.invariant_names, hyp2.invariants)) + [
        ("H", hyp2.fricke_matrix)
    ]
    for s in ("[6 -1; -65 11]", "[6 -5; -13 11]"):
        target = parse_matrix(s)
        word = word_search(target, gens, max_len=8)
        assert word is not None
        assert evaluate_word(word) == target  # the certificate verifies exactly
        red_m = reduce_matrix(target, hyp2)
        assert red_m.matrix == identity() and red_m.eps_power == 0


# 5. Factorizations at level 13 ----------------------------------------------


def test_factorizations_t7_t9_t10_t15():
    for name in ("t13-T7", "t13-T9", "t13-T10", "t13-T15"):
        report = _assert_case(name)
        by_label = {r.label: r for r in report.rows}
        assert by_label["factorization count"].actual == "2"
        assert by_label["B has order 2"].actual == "True"
        assert by_label["order-2 transform vacuous"].actual == "True"


# 6. Curiosity cases at level 11 ---------------------------------------------


def test_curiosity_cases():
    for name in ("curiosity-T3", "curiosity-T4", "curiosity-T6"):
        _assert_case(name)
    report = run_case("curiosity-T6")
    assert any("discrepancy" in note for note in report.notes)


# 7. Classification oracle equivalence ----------------------------------------


def test_classification_matches_brute_force_powering():
    rng = random.Random(2024)
    checked = 0
    while checked < 1000:
        m = random_canonical(rng, bound=50)
        cls = classify(m)
        brute = next((k for k in range(1, 61) if (m**k).is_identity()), None)
        if brute is not None:
            assert cls.kind in ("elliptic", "scalar")
            if cls.kind == "elliptic":
                assert cls.order == brute
            else:
                assert brute == 1
        else:
            assert cls.kind != "elliptic" or cls.order == "infinite"
        checked += 1


# 8. Numeric annihilation -----------------------------------------------------


def test_numeric_annihilation():
    f = eta_square_11()
    assert f.a(4) == f.a(2) ** 2 - 2
    assert f.a(6) == f.a(2) * f.a(3)
    assert all(0.5 <= z.imag <= 2.0 for z in DEFAULT_POINTS)
    one = GroupRingElement.one()
    # translation invariance and three level-11 group elements
    for s in ("[1 1; 0 1]", "[1 0; 11 1]", "[2 -1; -11 6]", "[3 -1; -11 4]"):
        x = one - GroupRingElement.of(parse_matrix(s))
        assert check_relation(f, x, DEFAULT_POINTS) < 1e-8
    # the engine's wrong-pairing second-order relation (1 - gamma)(1 - eps)
    hyp = hyp_with_w(HypothesisSet.initial(11))
    red = reduce_element(build_D(3, 11), hyp, mode="coset")
    target = parse_matrix("[9 -3; 33 -10]")
    wrong = next(
        ch
        for ch in pair_terms(red, 11, strategy="exhaustive")
        if not all(p.integral for p in ch.pairs)
        and target in [p.gamma for p in ch.pairs]
    )
    chain = chain_combine(wrong.relation(), None, hyp, target)
    assert check_relation(f, chain.element, DEFAULT_POINTS) < 1e-8


# 9. Soundness spot-proofs -----------------------------------------------------


def test_certificate_spot_proofs():
    rng = random.Random(99)
    configs = [
        (5, 2, [], None),
        (7, 2, [], None),
        (9, 2, [], None),
        (11, 3, [], "W"),
        (11, 4, [(2, diag(2, 1)), (2, diag(1, 2))], "W"),
        (13, 3, [], "W"),
        (13, 4, [(2, diag(2, 1)), (2, diag(1, 2))], "W"),
        (13, 7, [], "M2"),
        (13, 9, [(3, diag(3, 1)), (3, diag(1, 3))], "M2"),
    ]
    for level, n, corr, extra in configs:
        hyp = HypothesisSet.initial(level)
        if extra == "W":
            hyp = hyp.with_invariant(w_matrix(level), "W")
        elif extra == "M2":
            hyp = hyp.with_invariant(m2(level), "M2")
        base = build_D(n, level, corr)
        # three spot checks per case: the combination itself plus two
        # randomized right-translates of it
        samples = [base]
        for _ in range(2):
            samples.append(base * GroupRingElement.of(random_canonical(rng, bound=5)))
        for x in samples:
            log = DerivationLog(level)
            out = reduce_element(x, hyp, log=log)
            cert = log.steps[-1].certificate
            assert expand_certificate(cert, hyp) == x - out
