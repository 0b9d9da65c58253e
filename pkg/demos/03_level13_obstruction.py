"""Why the same strategy stalls at level 13.

At level 13 the T_3 and T_4 combinations each produce a second-order
relation (1 - gamma)(1 - eps_i) = 0, but both eps_1 and eps_2 are
elliptic of ORDER 2 (tau = 0), so the infinite-order cancellation lemma
does not apply.  Their product is hyperbolic, and scanning the group
they generate up to word length 20 finds no elliptic element of
infinite order at all -- the obstruction is structural, not an accident
of one pairing.

The larger indices fare no better:
  * T_6 collapses to matrices already expressible over {T, M2, H};
  * T_7, T_9, T_10 and T_15 all normalize to 1 + A - B - C which
    factors both as (1 - CB')(1 - B) and (1 - A')(1 - B) with B^2 = 1,
    and multiplying by (1 + B) annihilates the element outright -- the
    transform carries no information.

Run:  python3 demos/03_level13_obstruction.py
"""

from heckelab import (
    HypothesisSet,
    build_D,
    chain_combine,
    classify,
    common_left_factor,
    diag,
    factor_1ABC,
    group_orbit_scan,
    involution_transform,
    m2,
    pair_terms,
    parse_matrix,
    reduce_element,
    right_normalize,
    tau,
    w_matrix,
)
from heckelab.cases import _unit_pivot

level = 13
hyp = HypothesisSet.initial(level).with_invariant(w_matrix(level), "W")
target = parse_matrix("[3 1; -13 -4]")

print("--- second-order relations from T_3 and T_4")
eps = {}
for n, corr in ((3, []), (4, [(2, diag(2, 1)), (2, diag(1, 2))])):
    red = reduce_element(build_D(n, level, corr), hyp)
    rel = pair_terms(red, level)[0].relation()
    chain = chain_combine(rel, None, hyp, target)
    eps[n] = chain.eps_matrix
    print(f"T_{n}: (1 - {target})(1 - {chain.eps_coeff}*{chain.eps_matrix}) = 0")
    print(f"      eps is {classify(chain.eps_matrix)} -- no cancellation")

prod = eps[3] * eps[4]
print(f"product eps_1*eps_2 = {prod}: {classify(prod)} (tau = {tau(prod)})")
scan = group_orbit_scan([eps[3], eps[4]], 20)
bad = [s for s in scan if s[2].kind == "elliptic" and s[2].order == "infinite"]
print(f"orbit scan to word length 20: {len(scan)} elements, "
      f"{len(bad)} elliptic of infinite order\n")

print("--- T_7: the 1 + A - B - C shape and its two factorizations")
hyp2 = HypothesisSet.initial(level).with_invariant(m2(level), "M2")
red = reduce_element(build_D(7, level), hyp2, mode="merge")
print(f"collapsed display ({len(red.terms)} terms): {red}")
choice = pair_terms(red, level)[0]
s = common_left_factor(choice.relation(), target, hyp2, max_moves=6)
x = right_normalize(s, _unit_pivot(s))
print(f"normalized: {x}")
for f in factor_1ABC(x):
    print(f"  factors as {f}")
b = factor_1ABC(x)[0].second[1]
res = involution_transform(x, b)
print(f"B = {b} squares to 1; x*(1+B) = {res.element or 0}")
print(f"vacuous: {res.vacuous} -- the order-2 involution kills the relation")
