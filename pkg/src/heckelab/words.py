"""Bounded word search: express a target matrix in given generators.

Words are searched projectively (scaling and sign identified), matching
how all identities in even weight hold.  A returned word always verifies
by exact multiplication; absence of a word is a completeness certificate
for the given length bound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .hypotheses import HypothesisSet
from .matrices import MatrixClass, ProjMatrix, classify, identity, in_gamma0


@dataclass(frozen=True)
class Letter:
    name: str
    matrix: ProjMatrix


def _alphabet(gens: list[tuple[str, ProjMatrix]]) -> list[Letter]:
    letters = []
    for name, mat in gens:
        letters.append(Letter(name, mat))
        inv = mat.inv()
        if inv != mat:
            letters.append(Letter(f"{name}^-1", inv))
    return letters


def evaluate_word(word: list[Letter]) -> ProjMatrix:
    out = identity()
    for letter in word:
        out = out * letter.matrix
    return out


def word_search(
    target: ProjMatrix, gens: list[tuple[str, ProjMatrix]], max_len: int
) -> list[Letter] | None:
    """Shortest word in the generators equal to the target, or None.

    Ties are broken lexicographically in the order the generators were
    given (inverses immediately after their generator).  The search is
    complete: None means no word of length <= max_len exists.
    """
    if not gens:
        raise ValueError("need at least one generator")
    letters = _alphabet(gens)
    if target == identity():
        return []
    # breadth-first over left-to-right products; first hit is shortest and
    # lexicographically least because letters expand in alphabet order
    seen = {identity()}
    queue = deque([(identity(), [])])
    while queue:
        mat, word = queue.popleft()
        if len(word) >= max_len:
            continue
        for letter in letters:
            nmat = mat * letter.matrix
            if nmat in seen:
                continue
            nword = word + [letter]
            if nmat == target:
                return nword
            seen.add(nmat)
            queue.append((nmat, nword))
    return None


def word_to_str(word: list[Letter] | None) -> str:
    if word is None:
        return "(none)"
    if not word:
        return "(empty word)"
    return "*".join(letter.name for letter in word)


@dataclass
class MembershipReport:
    target: ProjMatrix
    in_gamma0: bool
    word: list[Letter] | None
    matrix_class: MatrixClass

    def __str__(self):
        return (
            f"{self.target}: in Gamma0 = {self.in_gamma0}, "
            f"word = {word_to_str(self.word)}, class = {self.matrix_class}"
        )


def membership_report(
    target: ProjMatrix, level: int, hyp: HypothesisSet, max_len: int = 8
) -> MembershipReport:
    """Gamma_0 membership, a word certificate over the known invariants
    plus Fricke (if one exists within the bound), and the conjugacy class."""
    gens = list(zip(hyp.invariant_names, hyp.invariants))
    gens.append(("H", hyp.fricke_matrix))
    return MembershipReport(
        target=target,
        in_gamma0=in_gamma0(target, level),
        word=word_search(target, gens, max_len),
        matrix_class=classify(target),
    )
