"""Exact projective 2x2 matrices with positive determinant.

Everything downstream (Hecke operators, group-ring sums, word searches)
works with a single canonical representative per projective class:
integer entries, primitive, det > 0, first nonzero entry positive.
Identifying m with q*m for q > 0 and with -m is valid for even weight
under the determinant-normalized slash action.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction


class ZeroDeterminant(ValueError):
    pass


class NegativeDeterminant(ValueError):
    pass


class MixedSurdEntries(ValueError):
    pass


def _canonical_tuple(a: Fraction, b: Fraction, c: Fraction, d: Fraction):
    det = a * d - b * c
    if det == 0:
        raise ZeroDeterminant(f"matrix [{a} {b}; {c} {d}] is singular")
    if det < 0:
        raise NegativeDeterminant(
            f"matrix [{a} {b}; {c} {d}] has negative determinant"
        )
    lcm = 1
    for x in (a, b, c, d):
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in (a, b, c, d)]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


@dataclass(frozen=True, order=True)
class ProjMatrix:
    """Canonical representative of a rational 2x2 matrix up to scaling."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det <= 0:
            raise NegativeDeterminant(f"{self} must have positive determinant")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "ProjMatrix") -> "ProjMatrix":
        return canonicalize(
            [
                [self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d],
                [self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d],
            ]
        )

    def inv(self) -> "ProjMatrix":
        # adjugate; the 1/det scalar is projectively irrelevant
        return canonicalize([[self.d, -self.b], [-self.c, self.a]])

    def __pow__(self, n: int) -> "ProjMatrix":
        if n < 0:
            return self.inv() ** (-n)
        result = identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __str__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


def canonicalize(raw, surd_scale: bool = False) -> ProjMatrix:
    """Reduce a 2x2 rational matrix to its canonical projective form.

    With surd_scale=True the entries are read as rational coefficients of
    sqrt(N) for the session level; the sqrt(N) factor is a positive scalar
    and drops out projectively, so only the coefficients matter.
    """
    (a, b), (c, d) = raw
    fracs = [Fraction(x) for x in (a, b, c, d)]
    # surd_scale only relabels the entries by a common positive factor
    del surd_scale
    return ProjMatrix(*_canonical_tuple(*fracs))


def identity() -> ProjMatrix:
    return ProjMatrix(1, 0, 0, 1)


def tau(x: ProjMatrix) -> Fraction:
    """Scale-invariant trace functional trace^2/det deciding conjugacy type."""
    return Fraction(x.trace * x.trace, x.det)


# finite projective orders of rational elliptic elements, by tau (Niven)
_FINITE_ORDER_BY_TAU = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class MatrixClass:
    kind: str  # scalar | elliptic | parabolic | hyperbolic
    order: int | str | None = None  # elliptic only; int or "infinite"
    tau: Fraction = Fraction(0)

    def __str__(self):
        if self.kind == "elliptic":
            return f"elliptic (order {self.order}, tau={self.tau})"
        return f"{self.kind} (tau={self.tau})"


def classify(x: ProjMatrix) -> MatrixClass:
    """Conjugacy type of x, and exact finite/infinite order when elliptic."""
    t = tau(x)
    if x.is_identity():
        return MatrixClass("scalar", tau=t)
    if t == 4:
        return MatrixClass("parabolic", tau=t)
    if t > 4:
        return MatrixClass("hyperbolic", tau=t)
    order = _FINITE_ORDER_BY_TAU.get(t, "infinite")
    return MatrixClass("elliptic", order=order, tau=t)


def in_gamma0(x: ProjMatrix, level: int) -> bool:
    """Whether the canonical representative lies in Gamma_0(level)."""
    return x.det == 1 and x.c % level == 0


_ENTRY = r"-?\d+(?:/\d+)?"
_SURD = rf"(-)?(?:({_ENTRY})\*)?sqrt\((\d+)\)"


def parse_matrix(text: str, level: int | None = None) -> ProjMatrix:
    """Parse "[a b; c d]" with integer/rational entries.

    A global suffix "*sqrt(N)" or per-entry "q*sqrt(N)" factors are allowed;
    mixing surd and plain nonzero entries is rejected.
    """
    text = text.strip()
    m = re.fullmatch(r"\[(.+?)\](?:\s*\*\s*sqrt\((\d+)\))?", text)
    if not m:
        raise ValueError(f"cannot parse matrix: {text!r}")
    body, global_surd = m.group(1), m.group(2)
    rows = body.split(";")
    if len(rows) != 2:
        raise ValueError(f"expected 2 rows in {text!r}")
    entries = []
    surd_flags = []
    surd_levels = set()
    for row in rows:
        cells = row.split()
        if len(cells) != 2:
            raise ValueError(f"expected 2 entries per row in {text!r}")
        for cell in cells:
            sm = re.fullmatch(_SURD, cell)
            if sm:
                q = Fraction(sm.group(2)) if sm.group(2) else Fraction(1)
                if sm.group(1):
                    q = -q
                entries.append(q)
                surd_flags.append(True)
                surd_levels.add(int(sm.group(3)))
            else:
                entries.append(Fraction(cell))
                surd_flags.append(False)
    if global_surd is not None:
        surd_levels.add(int(global_surd))
        surd_flags = [True] * 4
    if any(surd_flags):
        if any(not s and e != 0 for s, e in zip(surd_flags, entries)):
            raise MixedSurdEntries(f"mixed rational and surd entries in {text!r}")
        if len(surd_levels) > 1:
            raise MixedSurdEntries(f"inconsistent surd levels in {text!r}")
        if level is not None and surd_levels and surd_levels != {level}:
            raise MixedSurdEntries(
                f"surd level {surd_levels} does not match session level {level}"
            )
        return canonicalize([entries[:2], entries[2:]], surd_scale=True)
    return canonicalize([entries[:2], entries[2:]])
