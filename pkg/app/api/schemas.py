"""Pydantic models for input files and machine-readable reports."""
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator


# ---------------------------------------------------------------------------
# Input files
# ---------------------------------------------------------------------------

class AlgebraFile(BaseModel):
    """A Lie algebra, given either by structure constants or by operators.

    Structure form::

        {"basis": ["x", "y", "z"], "brackets": {"0,1": [["z", "1"]]}}

    Bracket keys are 0-based basis indices "i,j" with i < j; each value lists
    (basis name, rational) terms of [b_i, b_j].

    Operator form::

        {"space_basis": ["a", "b"], "operators": {"x": [["a", "b", "1"]]},
         "construction": "lie-closure-semidirect"}

    Each operator lists (from, to, rational) entries: ``from`` is sent to
    ``rational * to``. ``lie-closure`` builds the Lie algebra generated by the
    operators; ``lie-closure-semidirect`` adds the space as an abelian ideal.
    """
    model_config = ConfigDict(extra="forbid")

    basis: Optional[List[str]] = None
    brackets: Optional[Dict[str, List[Tuple[str, str]]]] = None
    space_basis: Optional[List[str]] = None
    operators: Optional[Dict[str, List[Tuple[str, str, str]]]] = None
    construction: Optional[Literal["lie-closure-semidirect", "lie-closure"]] = None

    @model_validator(mode="after")
    def check_form(self):
        structure = self.basis is not None
        operator = self.operators is not None
        if structure == operator:
            raise ValueError("give either 'basis'/'brackets' or 'space_basis'/'operators'")
        if structure and (self.space_basis is not None or self.construction is not None):
            raise ValueError("'space_basis' and 'construction' belong to the operator form")
        if operator and self.space_basis is None:
            raise ValueError("the operator form needs 'space_basis'")
        if operator and self.brackets is not None:
            raise ValueError("'brackets' belongs to the structure form")
        return self

    @property
    def is_operator_form(self) -> bool:
        return self.operators is not None


class GradingFile(BaseModel):
    """``{"fine": true}`` or ``{"labels": {label: [coordinate vectors]}}``."""
    model_config = ConfigDict(extra="forbid")

    fine: Optional[bool] = None
    labels: Optional[Dict[str, List[List[str]]]] = None

    @model_validator(mode="after")
    def check_form(self):
        if bool(self.fine) == (self.labels is not None):
            raise ValueError("give either 'fine': true or 'labels'")
        return self


class RelationsFile(BaseModel):
    """Property-(P) relations: each triple [g, g', g''] asks for g + g' = g''."""
    model_config = ConfigDict(extra="forbid")

    labels: List[str]
    triples: List[Tuple[str, str, str]] = []


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

class RelationCheckModel(BaseModel):
    """One claimed operator identity and its verdict."""
    claim: str
    holds: bool


class RelationReport(BaseModel):
    """Result of checking a list of operator identities."""
    checks: List[RelationCheckModel]
    all_hold: bool


class AxiomReport(BaseModel):
    """Alternating-law and Jacobi check of a Lie algebra."""
    passed: bool
    dimension: int
    triples_checked: int
    first_violation: Optional[str] = None
    violation_triple: Optional[List[str]] = None


class GradingViolation(BaseModel):
    """A failing label pair (or single label) with the reason."""
    labels: List[str]
    reason: str


class GradingReport(BaseModel):
    """Outcome of checking the grading conditions."""
    valid: bool
    component_count: int
    violations: List[GradingViolation]
    relation_count: int


class ClosureModel(BaseModel):
    """Dimension and spanning words of a generated span."""
    kind: str
    dimension: int
    words: List[str]


class CertificateStepModel(BaseModel):
    """One application of an input relation inside a certificate chain."""
    relation: Tuple[str, str, str]
    direction: Literal["forward", "backward"]


class CertificateModel(BaseModel):
    """A replayable chain proving two labels equal in the universal quotient."""
    labels: Tuple[str, str]
    chain: List[str]
    steps: List[CertificateStepModel]


class OracleModel(BaseModel):
    """Brute-force search outcome up to a degree bound."""
    max_degree: int
    vectors_enumerated: int
    collision: Optional[Tuple[str, str]] = None
    conclusive: bool
    agrees_with_decision: Optional[bool] = None


class DecisionModel(BaseModel):
    """Embeddability verdict with its payload."""
    verdict: Literal["EMBEDDABLE", "NOT_EMBEDDABLE"]
    labels: List[str]
    rule_count: int
    normal_forms: Optional[Dict[str, str]] = None
    collision: Optional[Tuple[str, str]] = None
    certificate: Optional[CertificateModel] = None
    rendered_certificate: Optional[str] = None
    oracle: Optional[OracleModel] = None


class ClaimModel(BaseModel):
    """One checked claim of the counterexample report."""
    name: str
    passed: bool
    detail: str = ""


class PaperReportModel(BaseModel):
    """Everything the counterexample construction claims, checked."""
    dim_A: int
    dim_g: int
    dim_L: int
    relation_checks: Dict[str, bool]
    bracket_evaluations: Dict[str, str]
    grading_valid: bool
    claims: List[ClaimModel]
    decision: DecisionModel
    all_passed: bool
