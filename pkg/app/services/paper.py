"""The nine-dimensional construction: a fine Lie grading with no property-(P) semigroup.

x, y, z act on V = <a, b1, b2, b3, c1, c2, c3, d1, d2>; the Lie algebra they
generate is 7-dimensional and L = g ⊕ V is 16-dimensional. Its basis is a fine
grading, yet [y,[z,[x,a]]] = d1 and [x,[y,[z,a]]] = d2 force d1 = d2 in any
abelian semigroup with property (P).
"""
from __future__ import annotations

from typing import Optional

from app.api.schemas import ClaimModel, PaperReportModel
from app.config import settings
from app.services import lie, operators
from app.services.exponents import ExponentVector
from app.services.grading import Grading, fine_grading_from_basis, relation_set, verify_grading
from app.services.linalg import BasedSpace, LinearMap, Subspace, rref
from app.services.oracle import bfs_oracle, oracle_to_model
from app.services.semigroup import Verdict, decide, decision_to_model
from app.utils.logger import get_logger

logger = get_logger(__name__)

SPACE_BASIS = ("a", "b1", "b2", "b3", "c1", "c2", "c3", "d1", "d2")

# basis element -> image; every other basis element is annihilated
ACTIONS = {
    "x": {"a": "b1", "b2": "c2", "c3": "d2"},
    "y": {"a": "b2", "b3": "c3", "c1": "d1"},
    "z": {"a": "b3", "b1": "c1", "b2": "c3", "c2": "d2"},
}

ASSOCIATIVE_SPANNING_SET = ("x", "y", "z", "xy", "xz", "zx", "yz", "zy", "yzx", "xyz")
LIE_SPANNING_SET = ("x", "y", "z", "[x,y]", "[x,z]", "[y,z]", "[[y,z],x]")

OPERATOR_RELATIONS = (
    "yx=0=x^2=y^2=z^2",
    "xyz=xzy=zxy",
    "[x,y]=xy",
    "[[x,y],z]=0",
    "[[y,z],x]=yzx",
    "[[z,x],y]=-yzx",
)

NESTED_BRACKETS = {
    "[y,[z,[x,a]]]": "d1",
    "[x,[y,[z,a]]]": "d2",
}

# (left, right, target) triples of the two chains from a to d1 and to d2
D1_CHAIN = (("x", "a", "b1"), ("z", "b1", "c1"), ("y", "c1", "d1"))
D2_CHAIN = (("z", "a", "b3"), ("y", "b3", "c3"), ("x", "c3", "d2"))

PAPER_ORACLE_DEGREE = 4


def build_operators() -> operators.OperatorSet:
    space = BasedSpace(SPACE_BASIS)
    return operators.OperatorSet(
        space,
        {name: LinearMap.from_images(space, {src: {dst: 1} for src, dst in images.items()})
         for name, images in ACTIONS.items()},
    )


def build_L() -> tuple[lie.LieAlgebra, Grading]:
    """L = g ⊕ V with its fine grading by the basis B."""
    gens = build_operators()
    g = lie.from_operators(operators.lie_closure(gens))
    algebra = lie.semidirect_sum(g, gens.space)
    return algebra, fine_grading_from_basis(algebra)


class _Claims:
    def __init__(self) -> None:
        self.items: list[ClaimModel] = []

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        passed = bool(passed)
        self.items.append(ClaimModel(name=name, passed=passed, detail=detail))
        if not passed:
            logger.warning(f"Claim failed: {name} {detail}".rstrip())
        return passed


def _constraint_rows(maps: list[LinearMap], space: BasedSpace, name: str) -> Subspace:
    return operators.independence_constraints(maps, space.basis_vector(name))


def _alphas(*groups: tuple[int, ...]) -> Subspace:
    """Equations on alpha_1..alpha_10; each group of 1-based indices sums to zero."""
    rows = []
    for group in groups:
        row = [0] * len(ASSOCIATIVE_SPANNING_SET)
        for index in group:
            row[index - 1] = 1
        rows.append(row)
    return rref(rows, len(ASSOCIATIVE_SPANNING_SET))


def run_full_report(max_rules: Optional[int] = None) -> PaperReportModel:
    """Rebuild the construction and check every claim made about it."""
    claims = _Claims()
    gens = build_operators()
    space = gens.space

    # associative algebra A
    A = operators.associative_closure(gens)
    claims.add("dim A = 10", A.dim == 10, f"closure dimension {A.dim}")
    claims.add(
        "A is spanned by x,y,z,xy,xz,zx,yz,zy,yzx,xyz",
        sorted(A.word_names) == sorted(ASSOCIATIVE_SPANNING_SET),
        ", ".join(A.word_names),
    )
    spanning_maps = [
        operators.word_map(gens, tuple(word), "associative") for word in ASSOCIATIVE_SPANNING_SET
    ]
    independent = rref(spanning_maps, space.dim ** 2)
    claims.add("the ten spanning words are linearly independent", independent.dim == 10, f"rank {independent.dim}")

    on_a = _constraint_rows(spanning_maps, space, "a")
    claims.add(
        "applied to a: alpha_1=alpha_2=alpha_3=alpha_4=alpha_6=alpha_9=alpha_10=0 and alpha_7+alpha_8=0",
        on_a == _alphas((1,), (2,), (3,), (4,), (6,), (9,), (10,), (7, 8)),
    )
    on_b2 = rref(on_a.basis + _constraint_rows(spanning_maps, space, "b2").basis, len(spanning_maps))
    claims.add("then applied to b2: alpha_5=0", on_b2 == _alphas((1,), (2,), (3,), (4,), (5,), (6,), (9,), (10,), (7, 8)))
    on_b1 = rref(on_b2.basis + _constraint_rows(spanning_maps, space, "b1").basis, len(spanning_maps))
    claims.add("then applied to b1: alpha_7=0, so all alphas vanish", on_b1.dim == len(spanning_maps))

    relation_report = operators.check_relations(gens, OPERATOR_RELATIONS)
    for check in relation_report.checks:
        claims.add(check.claim, check.holds)
    relation_checks = {check.claim: check.holds for check in relation_report.checks}

    for name in gens.names:
        sandwich = operators.sandwich(gens[name], A)
        relation_checks[f"{name}A{name}=0"] = sandwich.is_zero()
        claims.add(f"{name}A{name} = 0", sandwich.is_zero(), f"dimension {sandwich.dim}")
    fourth = operators.span_power(A, 4)
    relation_checks["A^4=0"] = fourth.is_zero()
    claims.add("A^4 = 0", fourth.is_zero(), f"dimension {fourth.dim}")

    # Lie algebras g and L
    g_span = operators.lie_closure(gens)
    g = lie.from_operators(g_span)
    claims.add("dim g = 7", g.dim == 7, f"closure dimension {g.dim}")
    claims.add("g has basis x,y,z,[x,y],[x,z],[y,z],[[y,z],x]", tuple(g.basis_names) == LIE_SPANNING_SET,
               ", ".join(g.basis_names))
    g_series = lie.lower_central_series(g)
    claims.add("g is nilpotent", g_series.nilpotent, f"lower central series {g_series.dimensions}")

    algebra = lie.semidirect_sum(g, space)
    grading = fine_grading_from_basis(algebra)
    claims.add("dim L = 16", algebra.dim == 16, f"dimension {algebra.dim}")
    axioms = lie.check_axioms(algebra)
    claims.add("L satisfies the Jacobi identity", axioms.passed, axioms.first_violation or "")
    l_series = lie.lower_central_series(algebra)
    claims.add("L is nilpotent", l_series.nilpotent, f"lower central series {l_series.dimensions}")

    bracket_evaluations = {}
    for expression, expected in NESTED_BRACKETS.items():
        value = lie.evaluate(algebra, expression)
        bracket_evaluations[expression] = str(value)
        claims.add(f"{expression} = {expected}", value == algebra.basis_vector(expected), str(value))

    # grading and relations
    grading_report = verify_grading(grading)
    claims.add("the basis B gives a Lie grading", grading_report.valid,
               "; ".join(v.reason for v in grading_report.violations))
    claims.add("the grading has 16 components", grading_report.component_count == 16)
    relations = relation_set(grading)
    present = {tuple(triple) for triple in relations}
    claims.add("relations contain x+a=b1, z+b1=c1, y+c1=d1", set(D1_CHAIN) <= present)
    claims.add("relations contain z+a=b3, y+b3=c3, x+c3=d2", set(D2_CHAIN) <= present)
    d1_components = grading.components_of(algebra.basis_vector("d1"))
    d2_components = grading.components_of(algebra.basis_vector("d2"))
    claims.add("d1 and d2 lie in different homogeneous components", d1_components != d2_components,
               f"{d1_components} vs {d2_components}")

    # the semigroup question
    decision = decide(relations, max_rules=max_rules)
    claims.add("B embeds in no abelian semigroup with (P)", decision.verdict is Verdict.NOT_EMBEDDABLE,
               decision.verdict.value)
    collision = set(decision.collision or ())
    claims.add("the colliding labels are d1 and d2", collision == {"d1", "d2"}, str(sorted(collision)))
    peak = ExponentVector.of(relations.labels, ("x", "y", "z", "a"))
    claims.add(
        "the certificate passes through x+y+z+a",
        decision.certificate is not None and decision.certificate.passes_through(peak),
    )
    oracle = bfs_oracle(relations, PAPER_ORACLE_DEGREE, settings.max_oracle_vectors)
    claims.add(
        f"brute force up to degree {PAPER_ORACLE_DEGREE} finds d1 = d2",
        set(oracle.collision or ()) == {"d1", "d2"},
        f"{oracle.vectors_enumerated} vectors",
    )

    report = PaperReportModel(
        dim_A=A.dim,
        dim_g=g.dim,
        dim_L=algebra.dim,
        relation_checks=relation_checks,
        bracket_evaluations=bracket_evaluations,
        grading_valid=grading_report.valid,
        claims=claims.items,
        decision=decision_to_model(decision, "text", oracle_to_model(oracle, decision.embeddable)),
        all_passed=all(claim.passed for claim in claims.items),
    )
    logger.info(f"Report: {sum(c.passed for c in claims.items)}/{len(claims.items)} claims hold")
    return report


def render_report(report: PaperReportModel) -> str:
    """Plain-text report; the last line states the verdict."""
    lines = [
        f"dim A = {report.dim_A}",
        f"dim g = {report.dim_g}",
        f"dim L = {report.dim_L}",
        "",
    ]
    for claim in report.claims:
        mark = "ok  " if claim.passed else "FAIL"
        detail = f"  ({claim.detail})" if claim.detail else ""
        lines.append(f"[{mark}] {claim.name}{detail}")
    decision = report.decision
    lines.append("")
    if report.bracket_evaluations:
        lines.append(", while ".join(
            f"{expression} = {value}" for expression, value in report.bracket_evaluations.items()
        ))
    if decision.rendered_certificate:
        lines.append(decision.rendered_certificate)
    if decision.verdict == "NOT_EMBEDDABLE" and decision.collision is not None:
        first, second = decision.collision
        lines.append(f"NOT EMBEDDABLE: {first} = {second}")
    else:
        lines.append("EMBEDDABLE")
    return "\n".join(lines)
