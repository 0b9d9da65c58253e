"""The full level-11 derivation: a final generator of Gamma_0(11).

Gamma_0(11) with the Fricke involution is generated by T, W = [1 0; 11 1],
H, and one more matrix.  The workbench derives that final generator from
the T_3 and T_4 combinations:

  1. D(3) and D(4) (the latter needs two D(2) corrections) reduce to
     four-term sums which pair into relations sum (1 - gamma_i) mu_i = 0.
  2. Solving one relation for (1 - [3 -1; -11 4]) and transporting the
     other side with the second relation yields
         (1 - [3 -1; -11 4]) (1 - eps) = 0
     with eps = [6 -4; 33 -16], an elliptic element of INFINITE order
     (tau = 25/9 is rational but not in {0,1,2,3}).
  3. A holomorphic function invariant under an infinite-order elliptic
     element is constant; cusp vanishing rules out constants, so the
     (1 - eps) factor cancels and [3 -1; -11 4] fixes f.

Run:  python3 demos/02_level11_final_generator.py
"""

from heckelab import (
    HypothesisSet,
    build_D,
    chain_combine,
    classify,
    diag,
    pair_terms,
    parse_matrix,
    reduce_element,
    tau,
    w_matrix,
)
from heckelab.cases import _script_path
from heckelab.scripts import run_script_file

level = 11
hyp = HypothesisSet.initial(level).with_invariant(w_matrix(level), "W")

print("--- T_3 combination")
red3 = reduce_element(build_D(3, level), hyp)
print(f"reduced: {red3}")
rel3 = pair_terms(red3, level)[0].relation()
for g, mu in rel3:
    print(f"  (1 - {g}) * {mu}")

print("--- T_4 combination (with D(2) corrections on both sides)")
corr = [(2, diag(2, 1)), (2, diag(1, 2))]
red4 = reduce_element(build_D(4, level, corr), hyp)
print(f"reduced: {red4}")
rel4 = pair_terms(red4, level)[0].relation()
for g, mu in rel4:
    print(f"  (1 - {g}) * {mu}")

print("--- chaining the two relations")
target = parse_matrix("[3 -1; -11 4]")
chain = chain_combine(rel3, rel4, hyp, target)
print(f"(1 - {target}) (1 - {chain.eps_coeff}*{chain.eps_matrix}) = 0")
print(f"eps has tau = {tau(chain.eps_matrix)}: {classify(chain.eps_matrix)}")
print(f"moves used: {', '.join(chain.moves)}")

print("\n--- the same derivation replayed by the script verifier")
log = run_script_file(_script_path("gamma11.toml"))
print(log.to_text())
