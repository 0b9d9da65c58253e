"""Hypothesis sets and the left-multiplication reduction engine.

A hypothesis set fixes what "congruent to 1" means: the level, the list
of matrices already known invariant, the Fricke relation H = eps, and
the Hecke eigenvalue substitutions.  Reduction walks the ball of left
products by invariant words (Fricke uses multiply the coefficient by
eps) and keeps the representative with the smallest entries.

Every rewrite carries an ideal-membership certificate: an explicit
combination of the generators (1 - M), (H - eps), (T_n - a_n) that
re-expands to the difference between the old and new elements.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, replace

from .coefficients import (
    EPS_COEFF,
    Coefficient,
    SubstitutionRule,
    eigenvalue_symbol,
    substitute,
)
from .groupring import GroupRingElement
from .matrices import ProjMatrix, identity, in_gamma0
from .operators import T_composite, fricke, translation


def size_metric(m: ProjMatrix):
    """Total order on representatives: entry size first, then lexicographic."""
    a, b, c, d = m.entries()
    return (a * a + b * b + c * c + d * d, (a, b, c, d))


@dataclass(frozen=True)
class HypothesisSet:
    level: int
    invariants: tuple[ProjMatrix, ...] = ()
    invariant_names: tuple[str, ...] = ()
    hecke_indices: frozenset[int] = frozenset()
    rules: tuple[SubstitutionRule, ...] = ()
    search_depth: int = 6
    weight: int = 2

    @classmethod
    def initial(cls, level: int, **kw) -> "HypothesisSet":
        """The starting point of every derivation: only T is known invariant."""
        return cls(
            level=level,
            invariants=(translation(),),
            invariant_names=("T",),
            **kw,
        )

    @property
    def fricke_matrix(self) -> ProjMatrix:
        return fricke(self.level)

    def with_invariant(self, m: ProjMatrix, name: str) -> "HypothesisSet":
        if m in self.invariants:
            return self
        if not in_gamma0(m, self.level):
            raise ValueError(f"{m} is not in Gamma0({self.level}); flag explicitly")
        return replace(
            self,
            invariants=self.invariants + (m,),
            invariant_names=self.invariant_names + (name,),
        )

    def with_hecke(self, *indices: int) -> "HypothesisSet":
        return replace(self, hecke_indices=self.hecke_indices | set(indices))

    def name_of(self, m: ProjMatrix) -> str:
        for mat, name in zip(self.invariants, self.invariant_names):
            if mat == m:
                return name
        return str(m)

    def letters(self):
        """Deterministic alphabet for left reduction words."""
        out = []
        for mat, name in zip(self.invariants, self.invariant_names):
            out.append((name, mat, 0))
            inv = mat.inv()
            if inv != mat:
                out.append((name + "^-1", inv, 0))
        h = self.fricke_matrix
        out.append(("H", h, 1))
        return out


# -- certificates -----------------------------------------------------------

# generator kinds for ideal membership
INVARIANT = "invariant"
FRICKE = "fricke"
HECKE = "hecke"


@dataclass(frozen=True)
class CertTerm:
    kind: str
    payload: object  # ProjMatrix for invariant, None for fricke, int for hecke
    right: GroupRingElement

    def generator(self, hyp: HypothesisSet) -> GroupRingElement:
        if self.kind == INVARIANT:
            return GroupRingElement.one() - GroupRingElement.of(self.payload)
        if self.kind == FRICKE:
            return GroupRingElement.of(hyp.fricke_matrix) - GroupRingElement.one().scale(
                EPS_COEFF
            )
        if self.kind == HECKE:
            return T_composite(self.payload, hyp.level) - GroupRingElement.one().scale(
                eigenvalue_symbol(self.payload)
            )
        raise ValueError(self.kind)


def expand_certificate(cert: list[CertTerm], hyp: HypothesisSet) -> GroupRingElement:
    total = GroupRingElement.zero()
    for term in cert:
        total = total + term.generator(hyp) * term.right
    return total


# -- derivation logs --------------------------------------------------------


@dataclass
class LogStep:
    rule: str
    inputs: str
    output: str
    justification: str
    certificate: list[CertTerm] | None = None
    axiom: str | None = None


@dataclass
class DerivationLog:
    level: int
    steps: list[LogStep] = field(default_factory=list)

    def add(self, rule, inputs, output, justification, certificate=None, axiom=None):
        self.steps.append(
            LogStep(rule, str(inputs), str(output), justification, certificate, axiom)
        )

    def to_text(self) -> str:
        lines = [f"derivation at level {self.level}"]
        for i, s in enumerate(self.steps, 1):
            lines.append(f"{i:3d}. [{s.rule}] {s.inputs}")
            lines.append(f"      -> {s.output}")
            note = s.justification if s.axiom is None else f"{s.justification} (axiom: {s.axiom})"
            lines.append(f"      because: {note}")
        return "\n".join(lines)

    def to_json(self, **kw) -> str:
        return json.dumps(
            {
                "level": self.level,
                "steps": [
                    {
                        "rule": s.rule,
                        "inputs": s.inputs,
                        "output": s.output,
                        "justification": s.justification,
                        "axiom": s.axiom,
                        "has_certificate": s.certificate is not None,
                    }
                    for s in self.steps
                ],
            },
            **kw,
        )


# -- reduction --------------------------------------------------------------


@dataclass(frozen=True)
class ReducedTerm:
    matrix: ProjMatrix
    eps_power: int  # 0 or 1
    word: tuple[tuple[str, ProjMatrix, int], ...]  # letters applied, left to right


def _off_coset(m: ProjMatrix) -> int:
    """0 for triangular (Hecke coset shaped) matrices, 1 otherwise."""
    return 0 if (m.c == 0 or m.b == 0) else 1


def reduce_matrix(
    gamma: ProjMatrix, hyp: HypothesisSet, prefer_triangular: bool = False
) -> ReducedTerm:
    """Smallest representative of gamma under left products of length <= L.

    Deterministic minimum over the whole depth-L ball: primary key is the
    entry-size metric, ties broken by eps parity (even preferred) and then
    by the first word found in breadth-first, letter-lexicographic order.
    With prefer_triangular, coset-shaped (triangular) representatives beat
    all others regardless of size.
    """
    letters = hyp.letters()

    def rank(m, par):
        if prefer_triangular:
            return (_off_coset(m), size_metric(m), par)
        return (size_metric(m), par)

    start = (gamma, 0)
    best = (rank(gamma, 0), ReducedTerm(gamma, 0, ()))
    seen = {start: 0}
    queue = deque([(gamma, 0, ())])
    while queue:
        mat, par, word = queue.popleft()
        if len(word) >= hyp.search_depth:
            continue
        for name, lmat, dpar in letters:
            nmat = lmat * mat
            npar = (par + dpar) % 2
            state = (nmat, npar)
            if state in seen:
                continue
            seen[state] = len(word) + 1
            nword = word + ((name, lmat, dpar),)
            key = rank(nmat, npar)
            if key < best[0]:
                best = (key, ReducedTerm(nmat, npar, nword))
            queue.append((nmat, npar, nword))
    return best[1]


def reduction_certificate(
    gamma: ProjMatrix, coeff: Coefficient, reduced: ReducedTerm, hyp: HypothesisSet
) -> list[CertTerm]:
    """Certificate for coeff*gamma - coeff*eps^k*(w*gamma) as an ideal element."""
    cert: list[CertTerm] = []
    cur = gamma
    par = 0
    eps = EPS_COEFF
    for name, lmat, dpar in reduced.word:
        carried = coeff * (eps**par)
        if dpar == 0:
            cert.append(
                CertTerm(INVARIANT, lmat, GroupRingElement.of(cur, carried))
            )
        else:
            cert.append(
                CertTerm(FRICKE, None, GroupRingElement.of(cur, -(coeff * (eps ** (par + 1)))))
            )
        cur = lmat * cur
        par = (par + dpar) % 2
        del name
    return cert


def reduce_element(
    x: GroupRingElement,
    hyp: HypothesisSet,
    mode: str = "minimize",
    log: DerivationLog | None = None,
) -> GroupRingElement:
    """Reduce every term and merge projectively equivalent ones.

    mode="minimize" replaces each matrix by its smallest representative;
    mode="coset" does the same but prefers triangular (Hecke coset shaped)
    representatives; mode="merge" keeps the original representatives and
    only cancels groups of terms whose reductions coincide with zero
    coefficient sum, mirroring how printed derivations cancel terms.
    """
    if mode not in ("minimize", "coset", "merge"):
        raise ValueError(f"unknown mode {mode!r}")
    rules = list(hyp.rules)
    eps = EPS_COEFF
    classes: dict[ProjMatrix, list[tuple[ProjMatrix, Coefficient, ReducedTerm]]] = {}
    for mat, coeff in x.sorted_terms():
        red = reduce_matrix(mat, hyp, prefer_triangular=(mode == "coset"))
        classes.setdefault(red.matrix, []).append((mat, coeff, red))
    out = GroupRingElement.zero()
    cert: list[CertTerm] = []
    for rep in sorted(classes, key=lambda m: m.entries()):
        members = classes[rep]
        total = Coefficient.zero()
        for mat, coeff, red in members:
            total = total + coeff * (eps**red.eps_power)
        total = substitute(total, rules)
        if mode in ("minimize", "coset") or not total or len(members) > 1:
            for mat, coeff, red in members:
                cert.extend(reduction_certificate(mat, coeff, red, hyp))
            if total:
                out = out + GroupRingElement.of(rep, total)
        else:
            mat, coeff, red = members[0]
            out = out + GroupRingElement.of(mat, substitute(coeff, rules))
    if log is not None:
        log.add(
            "reduce",
            x,
            out,
            f"left words of length <= {hyp.search_depth} over "
            f"{{{', '.join(hyp.invariant_names)}, H}} ({mode})",
            certificate=cert,
        )
    return out
