"""Finite formal sums of projective matrices with polynomial coefficients.

These are elements of the group ring that carries every derivation: the
relations T_n = a_n, H = eps and gamma = 1 all live here, and "x = y mod
the annihilator ideal" is manipulated by the hypothesis engine.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coefficients import Coefficient, Monomial, SubstitutionRule, substitute
from .matrices import ProjMatrix, identity


def _coerce_coeff(c) -> Coefficient:
    if isinstance(c, Coefficient):
        return c
    return Coefficient.rational(c)


class GroupRingElement:
    """Immutable sparse map {canonical matrix -> Coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for mat, coeff in dict(terms).items():
                coeff = _coerce_coeff(coeff)
                if coeff:
                    cleaned[mat] = coeff
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    @classmethod
    def of(cls, mat: ProjMatrix, coeff=1) -> "GroupRingElement":
        return cls({mat: coeff})

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls.of(identity())

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        terms = dict(self.terms)
        for mat, coeff in other.terms.items():
            terms[mat] = terms.get(mat, Coefficient.zero()) + coeff
        return GroupRingElement(terms)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def scale(self, coeff) -> "GroupRingElement":
        coeff = _coerce_coeff(coeff)
        return GroupRingElement({m: coeff * c for m, c in self.terms.items()})

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, ProjMatrix):
            other = GroupRingElement.of(other)
        terms: dict[ProjMatrix, Coefficient] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, Coefficient.zero()) + c1 * c2
        return GroupRingElement(terms)

    def __rmul__(self, other):
        if isinstance(other, ProjMatrix):
            return GroupRingElement.of(other) * self
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, ProjMatrix):
            other = GroupRingElement.of(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def support(self):
        return set(self.terms)

    def coefficient(self, mat: ProjMatrix) -> Coefficient:
        return self.terms.get(mat, Coefficient.zero())

    def substitute(self, rules: list[SubstitutionRule]) -> "GroupRingElement":
        return GroupRingElement(
            {m: substitute(c, rules) for m, c in self.terms.items()}
        )

    def symbols(self) -> set[str]:
        out = set()
        for c in self.terms.values():
            out |= c.symbols()
        return out

    def coefficient_sum(self) -> Coefficient:
        total = Coefficient.zero()
        for c in self.terms.values():
            total = total + c
        return total

    def sorted_terms(self):
        # deterministic term order: lexicographic on canonical tuples
        return sorted(self.terms.items(), key=lambda kv: kv[0].entries())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mat, coeff in self.sorted_terms():
            if coeff == Coefficient.one():
                parts.append(f"{mat}")
            elif coeff == -Coefficient.one():
                parts.append(f"-{mat}")
            else:
                parts.append(f"({coeff})*{mat}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"GroupRingElement({self})"

    # -- JSON round trip -----------------------------------------------------
    def to_obj(self):
        out = []
        for mat, coeff in self.sorted_terms():
            cobj = [
                {"vars": dict(mono.exps), "q": f"{q.numerator}/{q.denominator}"}
                for mono, q in coeff.sorted_terms()
            ]
            out.append({"coeff": cobj, "matrix": list(mat.entries())})
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_obj(), **kw)

    @classmethod
    def from_obj(cls, obj) -> "GroupRingElement":
        terms = {}
        for entry in obj:
            mat = ProjMatrix(*entry["matrix"])
            coeff = Coefficient(
                {
                    Monomial.of({k: int(v) for k, v in t["vars"].items()}): Fraction(t["q"])
                    for t in entry["coeff"]
                }
            )
            terms[mat] = coeff
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "GroupRingElement":
        return cls.from_obj(json.loads(text))
