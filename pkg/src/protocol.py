"""
Verification Protocol
=====================

Configuration and report schema shared by the verification harness and the
CLI. Reports are plain pydantic models so they serialize to stable JSON.

The protocol covers:
1. Relation flavors and arithmetic modes
2. ``SuiteConfig``, the validated run configuration, with a config hash
3. Membership certificates per degree and per check
4. ``VerificationReport``, the document emitted by ``main.py``

Usage:
    from src.protocol import SuiteConfig, Flavor, ArithMode

    config = SuiteConfig(rank=3, degree=4, flavor=Flavor.RIGHT_QUANTUM,
                         arith=ArithMode.PROBABILISTIC, evals=3, seed=42)
    config.config_hash()    # 16 hex digits, stable for equal configs
"""

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import semver
from pydantic import BaseModel, Field, model_validator

DEFAULT_SEED = 42

MAX_EVALS = 64

CHECK_GROUPS = ("theorem", "lemma", "classical", "informational")

LEMMA_NAMES = (
    "lemma1",
    "lemma2",
    "column_expansion",
    "column_swap",
    "equal_column_vanishing",
    "b_right_quantum",
    "detq_b_expansion",
    "annihilation",
    "detq_b_annihilates_g",
)


class Flavor(str, Enum):
    """Which quadratic relations the matrix entries satisfy."""
    RIGHT_QUANTUM = "right-quantum"
    LEFT_QUANTUM = "left-quantum"
    FULL_QUANTUM = "full-quantum"


class ArithMode(str, Enum):
    """Coefficient field used by the linear-algebra decisions."""
    EXACT = "exact"
    PROBABILISTIC = "probabilistic"


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


class Verb(str, Enum):
    VERIFY = "verify"
    LEMMAS = "lemmas"
    CLASSICAL = "classical"
    ALL = "all"


class SuiteConfig(BaseModel):
    """Validated configuration of one verification run."""

    verb: Verb = Verb.ALL
    rank: int = Field(default=2, ge=1)
    degree: int = Field(default=4, ge=0)
    flavor: Flavor = Flavor.RIGHT_QUANTUM
    arith: ArithMode = ArithMode.PROBABILISTIC
    evals: int = Field(default=3, ge=0, le=MAX_EVALS)
    seed: int = DEFAULT_SEED
    lemmas: List[str] = Field(default_factory=list)
    output_format: OutputFormat = OutputFormat.JSON
    annihilation_bound: Optional[int] = Field(default=None, ge=0)
    expansion_bound: int = Field(default=4, ge=1)
    detq_b_bound: int = Field(default=3, ge=1)
    timings: bool = False

    @model_validator(mode="after")
    def _check_evals(self) -> "SuiteConfig":
        if self.arith == ArithMode.PROBABILISTIC and self.evals < 1:
            raise ValueError("probabilistic arithmetic needs evals >= 1")
        if self.flavor == Flavor.LEFT_QUANTUM:
            raise ValueError("left-quantum relations are generated but not verified")
        unknown = sorted(set(self.lemmas) - set(LEMMA_NAMES))
        if unknown:
            raise ValueError(f"unknown lemma checks: {', '.join(unknown)}")
        return self

    def effective_annihilation_bound(self) -> int:
        if self.annihilation_bound is not None:
            return self.annihilation_bound
        return 2 if self.rank <= 2 else 1

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def config_hash(self) -> str:
        """Hash of the configuration, stable across runs."""
        config_str = json.dumps(self.echo(), sort_keys=True)
        return hashlib.md5(config_str.encode()).hexdigest()[:16]


class MembershipCertificate(BaseModel):
    """Outcome of one fixed-degree ideal membership decision."""

    degree: int
    mode: ArithMode
    verdict: bool
    matrix_rows: int = 0
    matrix_cols: int = 0
    eval_points: List[str] = Field(default_factory=list)
    elapsed_ms: Optional[float] = None
    soundness: str = "decisive"


class DegreeCertificate(BaseModel):
    """One graded (or per x-monomial) piece of a check."""

    degree: int
    verdict: bool
    method: str
    order: Optional[str] = None
    component: Optional[str] = None
    membership: Optional[MembershipCertificate] = None
    residual_terms: Optional[str] = None


class CheckRecord(BaseModel):
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)
    verdict: bool
    mode: Optional[str] = None
    degree_certificates: List[DegreeCertificate] = Field(default_factory=list)
    elapsed_ms: Optional[float] = None
    info: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    config: Dict[str, Any] = Field(default_factory=dict)
    config_hash: str = ""
    checks: List[CheckRecord] = Field(default_factory=list)
    overall: bool = True
    version: str = "0.0.0"

    @model_validator(mode="after")
    def _check_overall(self) -> "VerificationReport":
        self.overall = all(record.verdict for record in self.checks)
        semver.Version.parse(self.version)
        return self

    def without_timings(self) -> "VerificationReport":
        """Copy with every elapsed time cleared, for byte-identical reports."""
        stripped = self.model_copy(deep=True)
        for record in stripped.checks:
            record.elapsed_ms = None
            for certificate in record.degree_certificates:
                if certificate.membership is not None:
                    certificate.membership.elapsed_ms = None
        return stripped

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"


@dataclass
class CheckOutcome:
    """Result of a single lemma or theorem check; truthy when the check passed."""

    verdict: bool
    certificates: List[DegreeCertificate] = field(default_factory=list)
    info: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict

    @classmethod
    def from_certificates(cls, certificates: List[DegreeCertificate], **info: Any) -> "CheckOutcome":
        return cls(all(c.verdict for c in certificates), list(certificates), dict(info))

    def merge(self, other: "CheckOutcome") -> "CheckOutcome":
        return CheckOutcome(
            self.verdict and other.verdict,
            self.certificates + other.certificates,
            {**self.info, **other.info},
        )
