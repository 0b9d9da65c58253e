"""Structural moves on group-ring relations.

These are the manipulations that drive every derivation: combining the
terms of a reduced Hecke combination into (1-gamma)*mu pairs, chaining
two-term relations into a (1-gamma)(1-epsilon) product, detecting
(1-X)(1-Y) factorizations of four-term elements, the order-2 transform,
and cancellation of elliptic factors of infinite order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .coefficients import EPS_COEFF, Coefficient
from .groupring import GroupRingElement
from .hypotheses import DerivationLog, HypothesisSet, size_metric
from .matrices import MatrixClass, ProjMatrix, canonicalize, classify, identity, in_gamma0
from .operators import beta


class NoAdmissiblePairing(ValueError):
    pass


class ChainStepMismatch(ValueError):
    pass


class NotFourTermShape(ValueError):
    pass


class BNotInvolution(ValueError):
    pass


class BadPivot(ValueError):
    pass


class EpsilonFiniteOrder(ValueError):
    pass


class NoSuchFactorization(ValueError):
    pass


_ONE = Coefficient.one()
_MINUS_ONE = -Coefficient.one()


def _is_unit(c: Coefficient) -> bool:
    return c in (_ONE, _MINUS_ONE, EPS_COEFF, -EPS_COEFF)


# -- pairing ------------------------------------------------------------------


@dataclass(frozen=True)
class Pair:
    gamma: ProjMatrix  # the (1 - gamma) factor
    right: ProjMatrix  # right factor beta(a/p)
    a: Fraction
    b: int
    integral: bool  # whether (-N a b + 1)/p is an integer


@dataclass(frozen=True)
class PairingChoice:
    pairs: tuple[Pair, ...]

    @property
    def gamma0_count(self) -> int:
        return sum(p.integral for p in self.pairs)

    def relation(self) -> list[tuple[ProjMatrix, ProjMatrix]]:
        """The pairing as a relation sum (1 - gamma_i) * right_i = 0."""
        return [(p.gamma, p.right) for p in self.pairs]


def pair_terms(
    x: GroupRingElement, level: int, strategy: str = "prefer_gamma0"
) -> list[PairingChoice]:
    """All ways to combine a reduced Hecke combination into pairs.

    Expects a signed sum of terms [[1,a],[0,p]] (coefficient -1) and
    [[p,0],[N*b,1]] (coefficient +1), all of determinant p.  Each matching
    of the two groups yields pairs (1 - [[p,-a],[Nb,(-Nab+1)/p]]) * beta(a/p);
    the identity is exact over the rationals for every matching, and the
    "right" choices are the ones whose gamma lands in Gamma_0(level).
    """
    if not x:
        raise NoAdmissiblePairing("empty element")
    # allow the globally negated convention
    first = next(iter(x.sorted_terms()))
    if first[0].c == 0 and first[1] == _ONE:
        x = -x
    upper = []  # (a as Fraction, matrix)
    lower = []  # (b as int, matrix)
    dets = set()
    for mat, coeff in x.sorted_terms():
        dets.add(mat.det)
        if mat.c == 0 and mat.a == 1 and coeff == _MINUS_ONE:
            upper.append((Fraction(mat.b), mat))
        elif mat.b == 0 and mat.d == 1 and mat.c % level == 0 and coeff == _ONE:
            lower.append((mat.c // level, mat))
        else:
            raise NoAdmissiblePairing(f"term {coeff}*{mat} has unexpected shape")
    if len(dets) != 1:
        raise NoAdmissiblePairing(f"mixed determinants {dets}")
    p = dets.pop()
    if len(upper) != len(lower):
        raise NoAdmissiblePairing(
            f"{len(upper)} upper vs {len(lower)} lower terms cannot be matched"
        )
    choices = []
    for perm in permutations(range(len(lower))):
        pairs = []
        for (a, umat), j in zip(upper, perm):
            b, lmat = lower[j]
            entry = Fraction(-level * a * b + 1, p)
            gamma = canonicalize([[p, -a], [level * b, entry]])
            # exactness check: gamma * [[1,a],[0,p]] must be the lower term
            if gamma * umat != lmat:
                raise NoAdmissiblePairing("pairing identity failed to verify")
            pairs.append(
                Pair(gamma, beta(Fraction(a, p)), Fraction(a, p), b, entry.denominator == 1)
            )
        choices.append(PairingChoice(tuple(pairs)))
    if strategy == "prefer_gamma0":
        choices.sort(key=lambda ch: (-ch.gamma0_count, [p.gamma.entries() for p in ch.pairs]))
    elif strategy != "exhaustive":
        raise ValueError(f"unknown strategy {strategy!r}")
    return choices


# -- the shared left-factor transformer --------------------------------------

# A pair state encodes the claim value = coeff * (1 - gamma) * right, held
# up to the hypothesis ideal.  Moves preserve the claim:
#   flip:   c(1-g)r       = -c(1-g^-1) g r          (exact)
#   hconj:  c(1-g)r       = c*eps (1-HgH) Hr        (mod ideal)
#   invleft c(1-g)r       = c(1-wg)r for w = 1      (mod ideal)
#   rel:    (1-g_j)       = -(1-g_i) mu_i mu_j^-1   (mod ideal, from a relation)


@dataclass(frozen=True)
class PairState:
    gamma: ProjMatrix
    coeff: Coefficient
    right: ProjMatrix
    moves: tuple[str, ...] = ()


def _neighbor_states(state: PairState, hyp: HypothesisSet, relations):
    g, c, r = state.gamma, state.coeff, state.right
    h = hyp.fricke_matrix
    yield PairState(g.inv(), -c, g * r, state.moves + ("flip",))
    yield PairState(h * g * h, c * EPS_COEFF, h * r, state.moves + ("fricke-conj",))
    for mat, name in zip(hyp.invariants, hyp.invariant_names):
        yield PairState(mat * g, c, r, state.moves + (f"left*{name}",))
        yield PairState(mat.inv() * g, c, r, state.moves + (f"left*{name}^-1",))
        # peel an invariant off gamma into the right factor:
        #   c(1-g)r = c(1-g w^-1)(w r) - c(1-w)r, the last term in the ideal
        yield PairState(g * mat.inv(), c, mat * r, state.moves + (f"peel*{name}",))
        yield PairState(g * mat, c, mat.inv() * r, state.moves + (f"peel*{name}^-1",))
    for ridx, rel in enumerate(relations):
        for i, (gi, mi) in enumerate(rel):
            if gi != g:
                continue
            for j, (gj, mj) in enumerate(rel):
                if j == i:
                    continue
                yield PairState(
                    gj,
                    -c,
                    mj * mi.inv() * r,
                    state.moves + (f"relation[{ridx}] term {i}->{j}",),
                )


def _search_pair_transform(
    start: PairState,
    target: ProjMatrix,
    hyp: HypothesisSet,
    relations,
    max_moves: int,
    require_moves: bool = True,
    accept=None,
    smallest: bool = False,
):
    """First (or, with smallest=True, minimal) state reaching the target.

    smallest mode finds the fewest-move level at which the target is
    reachable and, among the hits on that level, keeps the one whose right
    factor has the smallest entries (prefer the simplest form).
    """
    if accept is None:
        accept = lambda state: True  # noqa: E731
    if start.gamma == target and not require_moves and accept(start):
        return start
    hits = []
    cap = max_moves
    seen = {(start.gamma, start.coeff, start.right)}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if len(state.moves) >= cap:
            continue
        for nxt in _neighbor_states(state, hyp, relations):
            key = (nxt.gamma, nxt.coeff, nxt.right)
            if key in seen:
                continue
            seen.add(key)
            if nxt.gamma == target and accept(nxt):
                if not smallest:
                    return nxt
                hits.append(nxt)
                cap = len(nxt.moves)  # finish this level, go no deeper
            # a rejected (or recorded) hit may still extend further
            queue.append(nxt)
    if hits:
        return min(hits, key=lambda s: (size_metric(s.right), s.moves))
    return None


# -- chaining -----------------------------------------------------------------


@dataclass
class ChainResult:
    target: ProjMatrix
    eps_matrix: ProjMatrix
    eps_coeff: Coefficient  # coefficient carried by the (1 - c*eps) factor
    element: GroupRingElement  # (1 - target)(1 - c*eps_matrix), expanded
    eps_class: MatrixClass
    moves: tuple[str, ...]


def chain_combine(
    rel_a,
    rel_b,
    hyp: HypothesisSet,
    target: ProjMatrix,
    max_moves: int = 6,
    log: DerivationLog | None = None,
) -> ChainResult:
    """Chain pairing relations into (1 - target)(1 - epsilon) = 0.

    rel_a and rel_b are lists of (gamma, mu) with sum (1-gamma_i)mu_i = 0;
    rel_b may equal rel_a or be None.  The chain starts by solving rel_a
    for (1 - target) and transforms the other side until its left factor
    is again (1 - target); the accumulated right product is epsilon.
    """
    relations = [list(rel_a)]
    if rel_b is not None and list(rel_b) != list(rel_a):
        relations.append(list(rel_b))
    starts = []
    for i, (gi, mi) in enumerate(rel_a):
        for j, (gj, mj) in enumerate(rel_a):
            if i == j:
                continue
            if gi == target:
                starts.append(
                    PairState(gj, _MINUS_ONE, mj * mi.inv(), (f"solve rel_a for term {i}",))
                )
            if gj.inv() == target:
                starts.append(
                    PairState(
                        gi,
                        _ONE,
                        mi * mj.inv() * gj.inv(),
                        (f"solve rel_a for inverse of term {j}",),
                    )
                )
    use_second = len(relations) > 1

    def accept(state):
        if state.right == identity():
            return False
        # chaining two relations means the second must actually enter
        if use_second and not any("relation[1]" in m for m in state.moves):
            return False
        return True

    best = None
    for start in starts:
        found = _search_pair_transform(
            start, target, hyp, relations, max_moves, accept=accept
        )
        if found is not None:
            if best is None or len(found.moves) < len(best.moves):
                best = found
    if best is None:
        raise ChainStepMismatch(f"no chain reaches (1 - {target}) within {max_moves} moves")
    one = GroupRingElement.one()
    left = one - GroupRingElement.of(target)
    element = left * (one - GroupRingElement.of(best.right, best.coeff))
    result = ChainResult(
        target=target,
        eps_matrix=best.right,
        eps_coeff=best.coeff,
        element=element,
        eps_class=classify(best.right),
        moves=best.moves,
    )
    if log is not None:
        log.add(
            "chain",
            f"relations {[str(g) for g, _ in rel_a]}",
            f"(1 - {target})(1 - ({best.coeff})*{best.right}) = 0",
            "; ".join(best.moves),
        )
    return result


def common_left_factor(
    pairs,
    target: ProjMatrix,
    hyp: HypothesisSet,
    max_moves: int = 6,
    log: DerivationLog | None = None,
) -> GroupRingElement:
    """Rewrite each (1-gamma_i)*mu_i pair to share the left factor (1-target).

    Returns S with (1 - target) * S equivalent to the original sum; the
    individual transports use flips, Fricke conjugation and left products
    by known invariants, all sound modulo the hypothesis ideal.
    """
    total = GroupRingElement.zero()
    for gamma, mu in pairs:
        start = PairState(gamma, _ONE, mu)
        found = _search_pair_transform(
            start, target, hyp, [], max_moves, require_moves=False, smallest=True
        )
        if found is None:
            raise ChainStepMismatch(f"cannot transport (1 - {gamma}) onto (1 - {target})")
        total = total + GroupRingElement.of(found.right, found.coeff)
        if log is not None:
            log.add(
                "transport",
                f"(1 - {gamma})*{mu}",
                f"({found.coeff})*(1 - {target})*{found.right}",
                "; ".join(found.moves) or "already at target",
            )
    return total


# -- four-term factorizations -------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    first: tuple[Coefficient, ProjMatrix]  # (u, X) for the (1 - u*X) factor
    second: tuple[Coefficient, ProjMatrix]
    involution_flags: tuple[bool, bool]  # X^2 = 1, Y^2 = 1 projectively

    def expand(self) -> GroupRingElement:
        one = GroupRingElement.one()
        u, xm = self.first
        v, ym = self.second
        return (one - GroupRingElement.of(xm, u)) * (one - GroupRingElement.of(ym, v))

    def __str__(self):
        u, xm = self.first
        v, ym = self.second
        return f"(1 - ({u})*{xm})(1 - ({v})*{ym})"


def factor_1ABC(x: GroupRingElement) -> list[Factorization]:
    """All (1 - uX)(1 - vY) factorizations of a four-term unit element.

    The element must contain the identity with coefficient 1 and three
    further terms with unit coefficients.  Every returned factorization
    re-expands to x exactly.
    """
    if len(x) != 4 or x.coefficient(identity()) != _ONE:
        raise NotFourTermShape(f"need identity + 3 unit terms, got {x}")
    rest = [(m, c) for m, c in x.sorted_terms() if m != identity()]
    if any(not _is_unit(c) for _, c in rest):
        raise NotFourTermShape(f"non-unit coefficients in {x}")
    out = []
    for (xm, cx), (ym, cy) in permutations(rest, 2):
        u, v = -cx, -cy
        cand = Factorization(
            (u, xm), (v, ym), (xm * xm == identity(), ym * ym == identity())
        )
        if cand.expand() == x:
            out.append(cand)
    return out


@dataclass
class InvolutionResult:
    element: GroupRingElement  # x * (1 + v*B)
    vacuous: bool
    inner_left: ProjMatrix  # C A^-1
    inner_right: ProjMatrix  # A B A^-1


def involution_transform(
    x: GroupRingElement, b_matrix: ProjMatrix
) -> InvolutionResult:
    """Multiply a 1 + A - B - C element by (1 + B) for an order-2 B.

    The product equals (1 - CA^-1)(1 + ABA^-1)A as a ring identity.  When
    CA^-1 = ABA^-1 (both of order 2) the product collapses to zero and the
    transform carries no information; that case is flagged.
    """
    if b_matrix * b_matrix != identity() or b_matrix == identity():
        raise BNotInvolution(f"{b_matrix} is not a projective involution")
    cb = x.coefficient(b_matrix)
    if len(x) != 4 or x.coefficient(identity()) != _ONE or not _is_unit(cb):
        raise NotFourTermShape(f"need identity + 3 unit terms with a B term, got {x}")
    rest = {m: c for m, c in x.terms.items() if m not in (identity(), b_matrix)}
    (a_mat, ca), (c_mat, cc) = sorted(rest.items(), key=lambda kv: kv[0].entries())
    if ca == _ONE and cc != _ONE:
        pass
    elif cc == _ONE and ca != _ONE:
        a_mat, c_mat = c_mat, a_mat
    # pick A as the +1 coefficient term when there is one; ties keep sorted order
    one = GroupRingElement.one()
    product = x * (one + GroupRingElement.of(b_matrix, -cb))
    inner_left = c_mat * a_mat.inv()
    inner_right = a_mat * b_matrix * a_mat.inv()
    return InvolutionResult(
        element=product,
        vacuous=not product,
        inner_left=inner_left,
        inner_right=inner_right,
    )


def right_normalize(x: GroupRingElement, pivot: ProjMatrix) -> GroupRingElement:
    """Multiply by pivot^-1 (and a unit) so the pivot becomes identity with +1."""
    c = x.coefficient(pivot)
    if not c:
        raise BadPivot(f"{pivot} does not occur in {x}")
    if not _is_unit(c):
        raise BadPivot(f"pivot coefficient {c} is not a unit")
    return x.scale(c) * GroupRingElement.of(pivot.inv())  # c^-1 = c for these units


# -- Weil cancellation ---------------------------------------------------------


def weil_cancel(
    x: GroupRingElement,
    hyp: HypothesisSet,
    left: GroupRingElement,
    eps_matrix: ProjMatrix,
    eps_coeff: Coefficient = _ONE,
    log: DerivationLog | None = None,
) -> GroupRingElement:
    """Cancel a (1 - eps) factor for elliptic eps of infinite order.

    Verifies x = left * (1 - eps_coeff*eps_matrix) by expansion, then
    returns left.  Holomorphy and the exclusion of constants (cusp
    vanishing) are analytic side conditions recorded as an axiom in the
    log, not computed.
    """
    one = GroupRingElement.one()
    if left * (one - GroupRingElement.of(eps_matrix, eps_coeff)) != x:
        raise NoSuchFactorization(f"{x} does not factor through (1 - {eps_matrix})")
    cls = classify(eps_matrix)
    if cls.kind != "elliptic":
        raise EpsilonFiniteOrder(f"{eps_matrix} is {cls.kind}; lemma needs elliptic")
    if cls.order != "infinite":
        raise EpsilonFiniteOrder(
            f"{eps_matrix} is elliptic of finite order {cls.order}; no cancellation"
        )
    if log is not None:
        log.add(
            "weil_cancel",
            x,
            left,
            f"eps = {eps_matrix} is elliptic of infinite order (tau = {cls.tau})",
            axiom="holomorphic f invariant under an infinite-order elliptic element "
            "is constant; constants are excluded by cusp vanishing",
        )
    return left


# -- orbit scan ----------------------------------------------------------------


def group_orbit_scan(eps_list, word_len: int):
    """Classify all words in the given matrices up to the length bound.

    Returns (word, matrix, MatrixClass) tuples, one per distinct projective
    element, shortest word first.  Useful for checking whether a generated
    group contains an elliptic element of infinite order.
    """
    gens = []
    for i, g in enumerate(eps_list):
        gens.append((f"g{i + 1}", g))
        if g.inv() != g:
            gens.append((f"g{i + 1}^-1", g.inv()))
    seen = {identity(): ""}
    frontier = [(identity(), "")]
    for _ in range(word_len):
        nxt = []
        for mat, word in frontier:
            for name, g in gens:
                prod = mat * g
                if prod in seen:
                    continue
                nword = f"{word}*{name}" if word else name
                seen[prod] = nword
                nxt.append((prod, nword))
        frontier = nxt
    out = [(word, mat, classify(mat)) for mat, word in seen.items()]
    out.sort(key=lambda t: (len(t[0]), t[0], t[1].entries()))
    return out


def gamma0_membership(m: ProjMatrix, level: int) -> bool:
    return in_gamma0(m, level)
