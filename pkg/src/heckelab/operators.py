"""Constructors for the named operators and their standard combinations.

Hecke operators are realized as formal coset sums with unit coefficients:
T_n = sum of [[a,b],[0,d]] over ad = n, 0 <= b < d, gcd(a, N) = 1.  This
convention reproduces every printed 4-term combination (checked in the
test suite) and pushes all weight dependence into the eigenvalue
substitution rules.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import Coefficient, eigenvalue_symbol
from .groupring import GroupRingElement
from .matrices import ProjMatrix, canonicalize, identity


class NotPrime(ValueError):
    pass


class EvenLevelForM2(ValueError):
    pass


class EigenvalueResidue(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def fricke(level: int) -> ProjMatrix:
    return canonicalize([[0, -1], [level, 0]])


def translation() -> ProjMatrix:
    return ProjMatrix(1, 1, 0, 1)


def w_matrix(level: int) -> ProjMatrix:
    return canonicalize([[1, 0], [level, 1]])


def beta(x) -> ProjMatrix:
    return canonicalize([[1, Fraction(x)], [0, 1]])


def m2(level: int) -> ProjMatrix:
    if level % 2 == 0:
        raise EvenLevelForM2(f"M2 needs odd level, got {level}")
    return canonicalize([[2, -1], [-level, Fraction(level + 1, 2)]])


def diag(a: int, d: int) -> ProjMatrix:
    return canonicalize([[a, 0], [0, d]])


def T_prime(ell: int, level: int) -> GroupRingElement:
    """Hecke operator T_ell for prime ell (Atkin-Lehner U_ell when ell | N)."""
    if not _is_prime(ell):
        raise NotPrime(f"{ell} is not prime")
    return T_composite(ell, level)


def T_composite(n: int, level: int) -> GroupRingElement:
    """Coset sum over upper-triangular determinant-n representatives."""
    if n < 2:
        raise ValueError("need n >= 2")
    element = GroupRingElement.zero()
    for a in range(1, n + 1):
        if n % a:
            continue
        d = n // a
        if _gcd(a, level) != 1:
            continue
        for b in range(d):
            element = element + GroupRingElement.of(canonicalize([[a, b], [0, d]]))
    return element


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def conjugate_by_fricke(x: GroupRingElement, level: int) -> GroupRingElement:
    h = GroupRingElement.of(fricke(level))
    return h * x * h


def build_D(
    n: int,
    level: int,
    corrections: list[tuple[int, ProjMatrix]] = (),
) -> GroupRingElement:
    """The standard eigenvalue-free combination extracted from T_n.

    Returns H (T_n - a_n) H - (T_n - a_n) minus the listed corrections,
    each correction being the same combination for a smaller index m,
    right-multiplied by a side matrix.  The a-symbols cancel identically
    because H^2 is a positive scalar; this is verified before returning.
    """
    out = _single_D(n, level)
    for m, side in corrections:
        out = out - _single_D(m, level) * GroupRingElement.of(side)
    residue = out.symbols()
    if residue:
        raise EigenvalueResidue(f"surviving symbols {residue} in D({n}, {level})")
    return out


def _single_D(n: int, level: int) -> GroupRingElement:
    t = T_composite(n, level) - GroupRingElement.one().scale(eigenvalue_symbol(n))
    return conjugate_by_fricke(t, level) - t


# named constructor registry for expression parsing / CLI use
def named_matrix(name: str, level: int) -> ProjMatrix:
    name = name.strip()
    if name == "T":
        return translation()
    if name == "H":
        return fricke(level)
    if name == "W":
        return w_matrix(level)
    if name == "M2":
        return m2(level)
    if name == "I":
        return identity()
    if name.startswith("beta(") and name.endswith(")"):
        return beta(Fraction(name[5:-1]))
    raise ValueError(f"unknown matrix name {name!r}")
