"""Exact group-ring workbench for Hecke-operator relation derivations."""

from .coefficients import (
    EPS,
    EPS_COEFF,
    Coefficient,
    CyclicRules,
    Monomial,
    SubstitutionRule,
    eigenvalue_symbol,
    hecke_eigenvalue_rules,
    substitute,
)
from .groupring import GroupRingElement
from .hypotheses import (
    DerivationLog,
    HypothesisSet,
    expand_certificate,
    reduce_element,
    reduce_matrix,
    size_metric,
)
from .matrices import (
    MatrixClass,
    MixedSurdEntries,
    NegativeDeterminant,
    ProjMatrix,
    ZeroDeterminant,
    canonicalize,
    classify,
    identity,
    in_gamma0,
    parse_matrix,
    tau,
)
from .operators import (
    EvenLevelForM2,
    NotPrime,
    T_composite,
    T_prime,
    beta,
    build_D,
    diag,
    fricke,
    m2,
    named_matrix,
    translation,
    w_matrix,
)
from .transforms import (
    ChainStepMismatch,
    EpsilonFiniteOrder,
    Factorization,
    NoAdmissiblePairing,
    NotFourTermShape,
    PairingChoice,
    chain_combine,
    common_left_factor,
    factor_1ABC,
    group_orbit_scan,
    involution_transform,
    pair_terms,
    right_normalize,
    weil_cancel,
)
from .words import Letter, evaluate_word, membership_report, word_search, word_to_str
from .scripts import (
    ScriptParseError,
    StepFailed,
    assert_equiv_zero,
    load_script,
    parse_matrix_expr,
    run_script_file,
)
from .newform import (
    DEFAULT_POINTS,
    PointTooLow,
    QExpansion,
    UnresolvedSymbol,
    check_relation,
    eta_square_11,
    hecke_residual,
    measure_fricke_sign,
    slash_eval,
    truncation_tail,
)
from .cases import (
    CASE_NAMES,
    CaseReport,
    load_fixture,
    report_json,
    report_text,
    run_all,
    run_case,
)

__version__ = "0.1.0"
