"""
Verification Harness
====================

Registers every theorem, lemma, classical and informational check with a
``CheckRegistry`` and runs the selection a ``SuiteConfig`` asks for, in
registration order. Relation sets, X-products and membership bases are
memoized at module level, so later checks reuse what earlier ones built.

Usage:
    from src.harness import run_suite, emit_report
    from src.protocol import SuiteConfig

    report = run_suite(SuiteConfig(rank=2, degree=4))
    print(emit_report(report, "text"))
"""

import logging
import time
from itertools import combinations, product
from typing import Any, Dict, List, Optional, Tuple, Union

from src import __version__
from src.bosonic import boson_fermion_check, classical_check, inclusion_exclusion_check, master_verify
from src.checks import CheckRegistry, check
from src.opcalc import (
    annihilation_check,
    b_right_quantum_check,
    detq_B_annihilates_G_check,
    detq_B_expansion_check,
    lemma1_check,
    lemma2_check,
)
from src.protocol import (
    CHECK_GROUPS,
    LEMMA_NAMES,
    ArithMode,
    CheckOutcome,
    CheckRecord,
    DegreeCertificate,
    Flavor,
    OutputFormat,
    SuiteConfig,
    Verb,
    VerificationReport,
)
from src.qdet import column_expansion_check, column_swap_check, equal_column_vanishing_check
from src.relations import graded_dimension, relation_set, sorted_word_count

logger = logging.getLogger(__name__)

CheckResult = Optional[Tuple[Dict[str, Any], CheckOutcome]]

VERB_GROUPS = {
    Verb.VERIFY: ["theorem"],
    Verb.LEMMAS: ["lemma"],
    Verb.CLASSICAL: ["classical"],
    Verb.ALL: list(CHECK_GROUPS),
}

LEMMA2_MAX_M = 3


def _mode_args(config: SuiteConfig) -> Dict[str, Any]:
    return {"mode": config.arith, "evals": config.evals, "seed": config.seed}


def _combine(outcomes: List[CheckOutcome]) -> CheckOutcome:
    combined = CheckOutcome(True)
    for outcome in outcomes:
        combined = combined.merge(outcome)
    return combined


# ---------------------------------------------------------------------------
# Theorem checks
# ---------------------------------------------------------------------------

@check("master_theorem", "theorem", "Ferm(A) Bos(A) = Bos(A) Ferm(A) = 1 through degree N")
def run_master_theorem(config: SuiteConfig) -> CheckResult:
    params = {"rank": config.rank, "degree": config.degree, "flavor": config.flavor.value}
    return params, master_verify(config.rank, config.degree, config.flavor, **_mode_args(config))


@check("inclusion_exclusion", "theorem", "sum_J (-1)^|J| Ferm(A_J) S_J vanishes through degree N")
def run_inclusion_exclusion(config: SuiteConfig) -> CheckResult:
    params = {"rank": config.rank, "degree": config.degree}
    return params, inclusion_exclusion_check(config.rank, config.degree, **_mode_args(config))


@check("boson_fermion", "theorem", "Trace-series form of the identity")
def run_boson_fermion(config: SuiteConfig) -> CheckResult:
    params = {"rank": config.rank, "degree": config.degree, "flavor": config.flavor.value}
    return params, boson_fermion_check(config.rank, config.degree, config.flavor, **_mode_args(config))


# ---------------------------------------------------------------------------
# Classical limit
# ---------------------------------------------------------------------------

@check("classical", "classical", "Commutative q = 1 series against 1/det(I - A)", exact=True)
def run_classical(config: SuiteConfig) -> CheckResult:
    return {"rank": config.rank, "degree": config.degree}, classical_check(config.rank, config.degree)


# ---------------------------------------------------------------------------
# Lemmas
# ---------------------------------------------------------------------------

@check("lemma1", "lemma", "X_j X_i = q X_i X_j for i < j")
def run_lemma1(config: SuiteConfig) -> CheckResult:
    if config.rank < 2:
        return None
    return {"rank": config.rank}, lemma1_check(config.rank, **_mode_args(config))


@check("lemma2", "lemma", "x_i^-m X_j = X_j' x_i^-m in the quantum plane", exact=True)
def run_lemma2(config: SuiteConfig) -> CheckResult:
    r = config.rank
    outcomes = [
        lemma2_check(r, i, j, m)
        for i, j in product(range(1, r + 1), repeat=2)
        for m in range(1, LEMMA2_MAX_M + 1)
    ]
    return {"rank": r, "max_m": LEMMA2_MAX_M}, _combine(outcomes)


@check("column_expansion", "lemma", "Last-column expansion of det_q in the free algebra", exact=True)
def run_column_expansion(config: SuiteConfig) -> CheckResult:
    sizes = list(range(1, config.expansion_bound + 1))
    certificates = [
        DegreeCertificate(degree=n, verdict=column_expansion_check(n, max_rank=config.expansion_bound),
                          method="exact", component=f"n={n}")
        for n in sizes
    ]
    return {"sizes": sizes}, CheckOutcome.from_certificates(certificates)


@check("column_swap", "lemma", "Swapping columns i < j scales det_q by (-q)^-(2(j-i)-1)")
def run_column_swap(config: SuiteConfig) -> CheckResult:
    r = config.rank
    if r < 2:
        return None
    outcomes = []
    exponents = {}
    for i, j in combinations(range(1, r + 1), 2):
        outcome = column_swap_check(r, i, j, **_mode_args(config))
        exponents[f"{i},{j}"] = outcome.info.pop("exponent")
        outcomes.append(outcome)
    combined = _combine(outcomes)
    combined.info["exponents"] = exponents
    return {"rank": r}, combined


@check("equal_column_vanishing", "lemma", "Expansion along a repeated column vanishes")
def run_equal_column_vanishing(config: SuiteConfig) -> CheckResult:
    r = config.rank
    if r < 2:
        return None
    outcomes = [equal_column_vanishing_check(r, j, **_mode_args(config)) for j in range(1, r)]
    return {"rank": r}, _combine(outcomes)


@check("b_right_quantum", "lemma", "The operator matrix B is right-quantum")
def run_b_right_quantum(config: SuiteConfig) -> CheckResult:
    if config.rank < 2:
        return None
    return {"rank": config.rank}, b_right_quantum_check(config.rank, **_mode_args(config))


@check("detq_b_expansion", "lemma", "det_q(B) = sum_J (-1)^|J| det_q(A_J) M_J', and at M = 1 equals Ferm(A)")
def run_detq_b_expansion(config: SuiteConfig) -> CheckResult:
    if config.rank > config.detq_b_bound:
        return None
    outcome = detq_B_expansion_check(config.rank, max_rank=config.detq_b_bound, **_mode_args(config))
    return {"rank": config.rank}, outcome


@check("annihilation", "lemma", "P_i H = 0 at every multi-index inside the bound")
def run_annihilation(config: SuiteConfig) -> CheckResult:
    r = config.rank
    bound = config.effective_annihilation_bound()
    outcomes = [
        annihilation_check(r, m, i, **_mode_args(config))
        for m in product(range(bound + 1), repeat=r)
        for i in range(1, r + 1)
    ]
    combined = _combine(outcomes)
    combined.info = {"cases": len(outcomes), "exact_zero": sum(1 for o in outcomes if o.info["exact_zero"])}
    return {"rank": r, "bound": bound}, combined


@check("detq_b_annihilates_g", "lemma", "det_q(B) applied to m -> G(m) vanishes")
def run_detq_b_annihilates_g(config: SuiteConfig) -> CheckResult:
    r = config.rank
    bound = config.effective_annihilation_bound()
    max_degree = max(config.degree, r)
    outcome = detq_B_annihilates_G_check(r, bound, max_degree=max_degree, **_mode_args(config))
    return {"rank": r, "bound": bound, "max_degree": max_degree}, outcome


# ---------------------------------------------------------------------------
# Informational
# ---------------------------------------------------------------------------

HILBERT_MAX_DEGREE = 3


@check("hilbert_probe", "informational", "Graded dimensions of the quotient algebra")
def run_hilbert_probe(config: SuiteConfig) -> CheckResult:
    r = config.rank
    rs = relation_set(r, config.flavor)
    degrees = list(range(min(config.degree, HILBERT_MAX_DEGREE) + 1))
    dimensions = {str(d): graded_dimension(rs, d, **_mode_args(config)) for d in degrees}
    sorted_words = {str(d): sorted_word_count(r, d) for d in degrees}
    certificates = []
    if config.flavor == Flavor.FULL_QUANTUM:
        # sorted monomials form a basis
        certificates = [
            DegreeCertificate(degree=int(d), verdict=dimensions[d] == sorted_words[d], method="graded-dimension")
            for d in dimensions
        ]
    outcome = CheckOutcome.from_certificates(certificates, dimensions=dimensions, sorted_words=sorted_words)
    return {"rank": r, "flavor": config.flavor.value}, outcome


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def build_registry() -> CheckRegistry:
    registry = CheckRegistry()
    for func in (
        run_master_theorem,
        run_inclusion_exclusion,
        run_boson_fermion,
        run_classical,
        run_lemma1,
        run_lemma2,
        run_column_expansion,
        run_column_swap,
        run_equal_column_vanishing,
        run_b_right_quantum,
        run_detq_b_expansion,
        run_annihilation,
        run_detq_b_annihilates_g,
        run_hilbert_probe,
    ):
        registry.add_check(func)
    assert tuple(registry.names("lemma")) == LEMMA_NAMES
    return registry


_global_registry: Optional[CheckRegistry] = None


def get_registry() -> CheckRegistry:
    """Get the process-wide check registry."""
    global _global_registry
    if _global_registry is None:
        _global_registry = build_registry()
    return _global_registry


def _select(config: SuiteConfig, registry: CheckRegistry):
    selected = registry.select(VERB_GROUPS[config.verb])
    if config.lemmas:
        selected = [info for info in selected if info.group != "lemma" or info.name in config.lemmas]
    return selected


def run_suite(config: SuiteConfig, registry: Optional[CheckRegistry] = None) -> VerificationReport:
    """
    Run the checks selected by ``config`` and assemble the report.

    A failing check never raises; it becomes a record with ``verdict=False``
    whose certificates carry the offending degree and residual.

    Args:
        config: validated run configuration
        registry: check registry, the process-wide one by default

    Returns:
        VerificationReport whose ``overall`` is the conjunction of all verdicts
    """
    registry = registry or get_registry()
    records: List[CheckRecord] = []
    for info in _select(config, registry):
        start = time.perf_counter()
        result = info.function(config)
        if result is None:
            logger.debug("check %s does not apply to rank %d", info.name, config.rank)
            continue
        params, outcome = result
        elapsed = round((time.perf_counter() - start) * 1000.0, 3)
        records.append(CheckRecord(
            name=info.name,
            params=params,
            verdict=outcome.verdict,
            mode=ArithMode.EXACT.value if info.exact else config.arith.value,
            degree_certificates=outcome.certificates,
            elapsed_ms=elapsed,
            info=outcome.info,
        ))
        logger.info("%s: %s (%d certificates)", info.name, "pass" if outcome.verdict else "FAIL",
                    len(outcome.certificates))

    report = VerificationReport(
        config=config.echo(),
        config_hash=config.config_hash(),
        checks=records,
        version=__version__,
    )
    return report if config.timings else report.without_timings()


def emit_report(report: VerificationReport, fmt: Union[OutputFormat, str] = OutputFormat.JSON) -> str:
    """Serialize a report as JSON, or as a one-line-per-check summary table."""
    fmt = OutputFormat(fmt)
    if fmt == OutputFormat.JSON:
        return report.to_json()

    lines = [f"quantum-macmahon {report.version}  config {report.config_hash}"]
    for record in report.checks:
        status = "PASS" if record.verdict else "FAIL"
        elapsed = "" if record.elapsed_ms is None else f"  {record.elapsed_ms:.1f} ms"
        lines.append(f"  {status}  {record.name:<24} {len(record.degree_certificates):>4} certificates{elapsed}")
        if not record.verdict:
            failed = next((c for c in record.degree_certificates if not c.verdict), None)
            if failed is not None:
                lines.append(f"        degree {failed.degree}: {failed.residual_terms}")
    lines.append(f"overall: {'PASS' if report.overall else 'FAIL'}")
    return "\n".join(lines) + "\n"
