"""Sparse multivariate polynomials over Q in Hecke eigenvalue symbols.

Symbols are the formal eigenvalues "a2", "a3", ... plus the Fricke sign
"eps" which satisfies eps^2 = 1.  Coefficients of group-ring elements
live in this ring, so sign bookkeeping through Fricke conjugations is
exact rather than case-split.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

EPS = "eps"


class CyclicRules(ValueError):
    pass


def _reduce_exponents(exps: dict[str, int]) -> tuple[tuple[str, int], ...]:
    out = {}
    for sym, e in exps.items():
        if e < 0:
            raise ValueError(f"negative exponent for {sym}")
        if sym == EPS:
            e %= 2
        if e:
            out[sym] = e
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class Monomial:
    exps: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, exps: dict[str, int]) -> "Monomial":
        return cls(_reduce_exponents(exps))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def sort_key(self):
        # graded lexicographic: total degree first, then variable/exponent order
        return (self.degree, self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        exps = dict(self.exps)
        for sym, e in other.exps:
            exps[sym] = exps.get(sym, 0) + e
        return Monomial(_reduce_exponents(exps))

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(s if e == 1 else f"{s}^{e}" for s, e in self.exps)


_ONE_MONO = Monomial()


class Coefficient:
    """Immutable sparse sum of rational multiples of monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        if terms:
            for mono, q in dict(terms).items():
                q = Fraction(q)
                if q:
                    cleaned[mono] = q
        object.__setattr__(self, "terms", cleaned)

    # -- constructors ------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "Coefficient":
        return cls({_ONE_MONO: Fraction(q)})

    @classmethod
    def symbol(cls, name: str) -> "Coefficient":
        return cls({Monomial.of({name: 1}): Fraction(1)})

    @classmethod
    def zero(cls) -> "Coefficient":
        return cls()

    @classmethod
    def one(cls) -> "Coefficient":
        return cls.rational(1)

    # -- ring structure ----------------------------------------------------
    def __add__(self, other) -> "Coefficient":
        other = _coerce(other)
        terms = dict(self.terms)
        for mono, q in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + q
        return Coefficient(terms)

    def __radd__(self, other):
        return self + other

    def __neg__(self) -> "Coefficient":
        return Coefficient({m: -q for m, q in self.terms.items()})

    def __sub__(self, other) -> "Coefficient":
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other) -> "Coefficient":
        other = _coerce(other)
        terms = {}
        for m1, q1 in self.terms.items():
            for m2, q2 in other.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, Fraction(0)) + q1 * q2
        return Coefficient(terms)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int) -> "Coefficient":
        result = Coefficient.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return self.terms == _coerce(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------
    def symbols(self) -> set[str]:
        return {s for m in self.terms for s, _ in m.exps}

    def is_rational(self) -> bool:
        return all(m == _ONE_MONO for m in self.terms)

    def rational_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self} is not a pure rational")
        return self.terms[_ONE_MONO]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def evaluate(self, values: dict[str, complex]) -> complex:
        """Numeric value of the polynomial; KeyError on a missing symbol."""
        total = 0j
        for mono, q in self.terms.items():
            factor = complex(q)
            for sym, e in mono.exps:
                factor *= values[sym] ** e
            total += factor
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, q in self.sorted_terms():
            if mono == _ONE_MONO:
                parts.append(str(q))
            elif q == 1:
                parts.append(str(mono))
            elif q == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{q}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Coefficient({self})"


def _coerce(x) -> Coefficient:
    if isinstance(x, Coefficient):
        return x
    return Coefficient.rational(x)


ONE = Coefficient.one()
EPS_COEFF = Coefficient.symbol(EPS)


@dataclass(frozen=True)
class SubstitutionRule:
    lhs: str
    rhs: Coefficient


def _check_acyclic(rules: list[SubstitutionRule]):
    graph = {r.lhs: r.rhs.symbols() for r in rules}
    if len(graph) != len(rules):
        raise CyclicRules("duplicate left-hand sides")
    state: dict[str, int] = {}

    def visit(sym):
        if state.get(sym) == 1:
            raise CyclicRules(f"cycle through {sym}")
        if state.get(sym) == 2 or sym not in graph:
            return
        state[sym] = 1
        for dep in graph[sym]:
            visit(dep)
        state[sym] = 2

    for sym in graph:
        visit(sym)


def eigenvalue_symbol(n: int) -> Coefficient:
    return Coefficient.symbol(f"a{n}")


def hecke_eigenvalue_rules(n_max: int, weight: int = 2) -> list[SubstitutionRule]:
    """Rewrite a_n for composite n in terms of prime-index eigenvalues.

    Uses a_{mn} = a_m a_n for coprime m, n and the prime-power recursion
    a_{p^(j+1)} = a_p a_{p^j} - p^(weight-1) a_{p^(j-1)} (trivial character).
    """
    rules = []
    reduced: dict[int, Coefficient] = {1: Coefficient.one()}

    def expand(n: int) -> Coefficient:
        if n in reduced:
            return reduced[n]
        p = min(_prime_factors(n))
        pk = p
        while n % (pk * p) == 0:
            pk *= p
        m = n // pk
        if m > 1:
            out = expand(pk) * expand(m)
        else:
            # n = p^j: recursion downward
            prev2, prev1 = Coefficient.one(), eigenvalue_symbol(p)
            j = 1
            while pk > p**j:
                j += 1
                prev2, prev1 = prev1, (
                    eigenvalue_symbol(p) * prev1
                    - Coefficient.rational(p ** (weight - 1)) * prev2
                )
            out = prev1
        reduced[n] = out
        return out

    for n in range(2, n_max + 1):
        if len(_prime_factors(n)) > 1 or not _is_prime(n):
            rules.append(SubstitutionRule(f"a{n}", expand(n)))
    return rules


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == {n}


def substitute(x: Coefficient, rules: list[SubstitutionRule]) -> Coefficient:
    """Apply the rule set to fixpoint.  Rules must be acyclic."""
    _check_acyclic(rules)
    by_lhs = {r.lhs: r.rhs for r in rules}
    current = x
    while True:
        terms = Coefficient.zero()
        changed = False
        for mono, q in current.terms.items():
            factor = Coefficient.rational(q)
            for sym, e in mono.exps:
                if sym in by_lhs:
                    factor = factor * (by_lhs[sym] ** e)
                    changed = True
                else:
                    factor = factor * (Coefficient.symbol(sym) ** e)
            terms = terms + factor
        current = terms
        if not changed:
            return current
