"""Script-driven verification: check a claimed derivation step by step.

A script is an ordered list of steps (loaded from TOML).  Each step
either rewrites the working element by a move that is sound modulo the
hypothesis ideal, or records a verified structural fact (a pairing, a
factorization).  The run succeeds only if the final working element is
exactly zero; every step is logged with its justification.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .coefficients import EPS
from .groupring import GroupRingElement
from .hypotheses import DerivationLog, HypothesisSet, reduce_element, size_metric
from .matrices import ProjMatrix, parse_matrix
from .operators import build_D, diag, named_matrix
from .transforms import (
    chain_combine,
    common_left_factor,
    factor_1ABC,
    involution_transform,
    pair_terms,
    right_normalize,
    weil_cancel,
)

STEP_KINDS = (
    "reduce",
    "build_D",
    "subtract_correction",
    "pair",
    "chain",
    "transport",
    "factor",
    "involution_transform",
    "weil_cancel",
    "right_normalize",
    "conclude_invariant",
)


class StepFailed(Exception):
    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"step {index}: {reason}")


class ScriptParseError(ValueError):
    pass


def parse_matrix_expr(text: str, level: int) -> ProjMatrix:
    """A matrix literal "[a b; c d]" or a named matrix (T, H, W, M2,
    beta(p/q), diag(a,d), I)."""
    text = text.strip()
    if text.startswith("["):
        return parse_matrix(text, level)
    if text.startswith("diag(") and text.endswith(")"):
        a, d = text[5:-1].split(",")
        return diag(int(a), int(d))
    return named_matrix(text, level)


def _parse_corrections(raw, level: int):
    out = []
    for item in raw or []:
        m, side = item
        out.append((int(m), parse_matrix_expr(side, level)))
    return out


def load_script(path) -> dict:
    """Load and structurally validate a TOML script file."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    meta = data.get("meta", {})
    if "level" not in meta:
        raise ScriptParseError(f"{path}: [meta] must set level")
    steps = data.get("step", [])
    for i, step in enumerate(steps):
        kind = step.get("kind")
        if kind not in STEP_KINDS:
            raise ScriptParseError(f"{path}: step {i} has unknown kind {kind!r}")
    return {"meta": meta, "steps": steps}


@dataclass
class ScriptState:
    hyp: HypothesisSet
    x: GroupRingElement
    relations: dict = field(default_factory=dict)
    last_chain: object = None
    last_factorizations: list = field(default_factory=list)
    # whether the working element is already known to lie in the hypothesis
    # ideal (zero starts and engine-built combinations are; a caller's claim
    # is not until the script rewrites it to zero)
    certified: bool = True

    def replace_x(self, index: int, new_x: GroupRingElement):
        """Discard the working element for a new ideal member.

        Only allowed when the current element is itself certified to lie in
        the ideal; otherwise the step would silently drop an undischarged
        claim and the final zero check would prove nothing about it.
        """
        if self.x and not self.certified:
            raise StepFailed(
                index,
                "working element would be discarded before being discharged: "
                f"{self.x}",
            )
        self.x = new_x
        self.certified = True


def _unit_pivot(x: GroupRingElement) -> ProjMatrix:
    """Default pivot: smallest term among those carrying an odd eps power.

    When no eps-carrying term exists, the smallest unit-coefficient term
    is used instead.
    """
    odd = [m for m, c in x.terms.items() if EPS in c.symbols()]
    pool = odd or [m for m, c in x.terms.items()]
    return min(pool, key=size_metric)


def run_step(state: ScriptState, index: int, step: dict, log: DerivationLog):
    kind = step["kind"]
    level = state.hyp.level
    if kind == "reduce":
        state.x = reduce_element(state.x, state.hyp, step.get("mode", "minimize"), log)
        return
    if kind == "build_D":
        corrections = _parse_corrections(step.get("corrections"), level)
        x = build_D(int(step["n"]), level, corrections)
        state.replace_x(index, x)
        log.add(
            "build_D",
            f"n={step['n']}, corrections={step.get('corrections', [])}",
            x,
            "H(T_n - a_n)H - (T_n - a_n) minus corrections lies in the "
            "hypothesis ideal; eigenvalue symbols cancel (checked)",
        )
        return
    if kind == "subtract_correction":
        side = parse_matrix_expr(step["side"], level)
        corr = build_D(int(step["m"]), level) * GroupRingElement.of(side)
        state.x = state.x - corr
        log.add(
            "subtract_correction",
            f"m={step['m']}, side={side}",
            state.x,
            "subtracted D(m) * side, itself an element of the hypothesis ideal",
        )
        return
    if kind == "pair":
        choices = pair_terms(state.x, level, step.get("strategy", "prefer_gamma0"))
        choice = choices[int(step.get("choice", 0))]
        rel = choice.relation()
        total = GroupRingElement.zero()
        one = GroupRingElement.one()
        for gamma, mu in rel:
            total = total + (one - GroupRingElement.of(gamma)) * GroupRingElement.of(mu)
        # the beta-form right factors carry a common diag(p,1) relative to
        # the raw coset terms; right multiplication preserves ideal
        # membership, so rescaling the working element by it is sound
        p = next(iter(state.x.terms)).det
        scaled = state.x * GroupRingElement.of(diag(p, 1))
        if total not in (scaled, state.x, -scaled, -state.x):
            raise StepFailed(index, "pairing does not re-expand to the element")
        # global negation is an exact rewrite; keep the paired form
        state.x = total
        name = step.get("save", "rel")
        state.relations[name] = rel
        log.add(
            "pair",
            state.x,
            " + ".join(f"(1 - {g})*{m}" for g, m in rel),
            "each pair verified by exact expansion; sum equals the element",
        )
        return
    if kind == "chain":
        rel_a = state.relations[step["rel_a"]]
        rel_b = state.relations[step["rel_b"]] if "rel_b" in step else None
        target = parse_matrix_expr(step["target"], level)
        result = chain_combine(
            rel_a, rel_b, state.hyp, target, int(step.get("max_moves", 6)), log
        )
        state.replace_x(index, result.element)
        state.last_chain = result
        return
    if kind == "transport":
        rel = state.relations[step["rel"]]
        target = parse_matrix_expr(step["target"], level)
        s = common_left_factor(
            rel, target, state.hyp, int(step.get("max_moves", 6)), log
        )
        one = GroupRingElement.one()
        state.replace_x(index, (one - GroupRingElement.of(target)) * s)
        return
    if kind == "factor":
        facs = factor_1ABC(state.x)
        if not facs:
            raise StepFailed(index, f"no (1 - uX)(1 - vY) factorization of {state.x}")
        state.last_factorizations = facs
        log.add(
            "factor",
            state.x,
            "; ".join(str(f) for f in facs),
            "every factorization re-expands to the element exactly",
        )
        expect = step.get("expect_count")
        if expect is not None and len(facs) != int(expect):
            raise StepFailed(index, f"expected {expect} factorizations, found {len(facs)}")
        return
    if kind == "involution_transform":
        b = parse_matrix_expr(step["b"], level)
        result = involution_transform(state.x, b)
        log.add(
            "involution_transform",
            state.x,
            result.element,
            f"x*(1+B) = (1 - {result.inner_left})(1 + {result.inner_right})*A; "
            f"vacuous = {result.vacuous}",
        )
        if not step.get("allow_vacuous", True) and result.vacuous:
            raise StepFailed(index, "involution transform is vacuous")
        state.x = result.element
        return
    if kind == "weil_cancel":
        chain = state.last_chain
        if chain is None:
            raise StepFailed(index, "weil_cancel needs a preceding chain step")
        one = GroupRingElement.one()
        left = one - GroupRingElement.of(chain.target)
        state.x = weil_cancel(
            state.x, state.hyp, left, chain.eps_matrix, chain.eps_coeff, log
        )
        return
    if kind == "right_normalize":
        if "pivot" in step:
            pivot = parse_matrix_expr(step["pivot"], level)
        else:
            pivot = _unit_pivot(state.x)
        state.x = right_normalize(state.x, pivot)
        log.add(
            "right_normalize",
            f"pivot {pivot}",
            state.x,
            "multiplied by a unit and the pivot inverse; an exact rewrite",
        )
        return
    if kind == "conclude_invariant":
        gamma = parse_matrix_expr(step["matrix"], level)
        name = step.get("name", str(gamma))
        one = GroupRingElement.one()
        factor = one - GroupRingElement.of(gamma)
        if "rel" in step:
            rel = state.relations[step["rel"]]
            if len(rel) != 1 or rel[0][0] != gamma:
                raise StepFailed(
                    index, f"relation does not isolate (1 - {gamma}) times a unit"
                )
            consumed = factor * GroupRingElement.of(rel[0][1])
        else:
            consumed = factor
        residual = state.x - consumed
        if residual:
            raise StepFailed(
                index,
                f"element is not (1 - {gamma}) times the claimed factor; "
                f"residual {residual}",
            )
        state.x = residual
        state.hyp = state.hyp.with_invariant(gamma, name)
        log.add(
            "conclude_invariant",
            factor,
            f"{name} = {gamma} == 1 added to hypotheses",
            "the working element is exactly (1 - gamma) times an invertible "
            "factor, so gamma acts trivially",
        )
        return
    raise StepFailed(index, f"unknown step kind {kind!r}")


def assert_equiv_zero(
    x: GroupRingElement, hyp: HypothesisSet, script: list[dict]
) -> DerivationLog:
    """Run the script against x; succeed iff the final element is exactly 0.

    Every step is either an exact rewrite or a move sound modulo the right
    ideal generated by (1 - gamma) for invariants, (H - eps), and
    (T_n - a_n); failures raise StepFailed with the offending index.
    """
    log = DerivationLog(level=hyp.level)
    state = ScriptState(hyp=hyp, x=x, certified=not x)
    for index, step in enumerate(script):
        try:
            run_step(state, index, step, log)
        except StepFailed:
            raise
        except Exception as exc:  # noqa: BLE001 - report the step context
            raise StepFailed(index, f"{type(exc).__name__}: {exc}") from exc
    if state.x:
        raise StepFailed(len(script), f"final element is nonzero: {state.x}")
    log.add("done", x, "0", "final element is exactly zero")
    return log


def run_script_file(path) -> DerivationLog:
    """Convenience wrapper: load a TOML script and verify from the zero start."""
    data = load_script(path)
    meta = data["meta"]
    hyp = HypothesisSet.initial(int(meta["level"]))
    for name in meta.get("invariants", []):
        if name == "T":
            continue
        hyp = hyp.with_invariant(parse_matrix_expr(name, hyp.level), name)
    depth = meta.get("search_depth")
    if depth is not None:
        from dataclasses import replace

        hyp = replace(hyp, search_depth=int(depth))
    start = meta.get("start")
    x = (
        GroupRingElement.zero()
        if start is None
        else GroupRingElement.one() - GroupRingElement.of(parse_matrix_expr(start, hyp.level))
    )
    return assert_equiv_zero(x, hyp, data["steps"])
