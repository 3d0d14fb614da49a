"""Command implementations behind the CLI: load inputs, run a service, render, pick the exit code."""
from typing import NamedTuple, Optional

from pydantic import ValidationError

from app.api.schemas import ClosureModel, DecisionModel, GradingReport
from app.config import Settings
from app.exceptions import GradingError, InputError, ToolkitError
from app.services import operators
from app.services.grading import RelationSet, relation_set, verify_grading
from app.services.oracle import bfs_oracle, oracle_to_model
from app.services.paper import render_report, run_full_report
from app.services.semigroup import Decision, decide, decision_to_model
from app.services.storage import storage_service
from app.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1


class CommandResult(NamedTuple):
    exit_code: int
    output: str


def build_settings(**flags) -> Settings:
    """Settings from explicit flags; flags left as None keep their defaults."""
    try:
        return Settings(**{name: value for name, value in flags.items() if value is not None})
    except ValidationError as e:
        raise InputError(f"Invalid option: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}") from e


def _write(output: Optional[str], content: str) -> None:
    if output:
        storage_service.save_report(content, output)


def cmd_paper_demo(fmt: str = "text", output: Optional[str] = None, config: Optional[Settings] = None) -> CommandResult:
    """Rebuild the counterexample and check every claim; exit 0 iff all of them hold."""
    config = config or Settings()
    report = run_full_report(max_rules=config.max_rules)
    as_json = report.model_dump_json(indent=2)
    _write(output, as_json)
    exit_code = EXIT_OK if report.all_passed else EXIT_NEGATIVE
    if not report.all_passed:
        failed = [claim.name for claim in report.claims if not claim.passed]
        logger.error(f"{len(failed)} claim(s) failed: {failed}")
    return CommandResult(exit_code, as_json if fmt == "json" else render_report(report))


def _render_grading_report(report: GradingReport) -> str:
    lines = [
        f"{'VALID' if report.valid else 'INVALID'} grading: {report.component_count} component(s), "
        f"{report.relation_count} relation(s)"
    ]
    for violation in report.violations:
        lines.append(f"  {', '.join(violation.labels)}: {violation.reason}")
    return "\n".join(lines)


def cmd_verify_grading(algebra_path: str, grading_path: str, fmt: str = "text") -> CommandResult:
    algebra = storage_service.load_algebra(algebra_path)
    grading = storage_service.load_grading(algebra, grading_path)
    report = verify_grading(grading)
    exit_code = EXIT_OK if report.valid else GradingError.exit_code
    output = report.model_dump_json(indent=2) if fmt == "json" else _render_grading_report(report)
    return CommandResult(exit_code, output)


def _load_relations(input_path: str, grading_path: Optional[str]) -> RelationSet:
    if grading_path is None:
        return storage_service.load_relations(input_path)
    algebra = storage_service.load_algebra(input_path)
    return relation_set(storage_service.load_grading(algebra, grading_path))


def _render_decision(decision: Decision, model: DecisionModel, certificate: bool) -> str:
    lines = []
    if decision.embeddable:
        lines.append(f"EMBEDDABLE: {len(decision.labels)} label(s) with distinct normal forms")
        width = max((len(label) for label in decision.labels), default=0)
        for label, form in model.normal_forms.items():
            lines.append(f"  {label.ljust(width)}  ->  {form}")
    else:
        first, second = model.collision
        lines.append(f"NOT EMBEDDABLE: {first} = {second}")
        if certificate:
            lines.append(model.rendered_certificate)
            for position, step in enumerate(model.certificate.steps, start=1):
                left, right, target = step.relation
                lines.append(
                    f"  {position}. {model.certificate.chain[position - 1]} -> {model.certificate.chain[position]}"
                    f"  by ({left}, {right}, {target}) {step.direction}"
                )
    if model.oracle is not None:
        oracle = model.oracle
        if oracle.conclusive:
            lines.append(
                f"oracle: {oracle.collision[0]} = {oracle.collision[1]} within degree {oracle.max_degree} "
                f"({oracle.vectors_enumerated} vectors)"
            )
        else:
            lines.append(
                f"oracle: no collision up to degree {oracle.max_degree} "
                f"({oracle.vectors_enumerated} vectors, inconclusive)"
            )
        lines.append(f"oracle agrees: {'yes' if oracle.agrees_with_decision else 'NO'}")
    lines.append(f"{model.rule_count} rewrite rule(s) after completion")
    return "\n".join(lines)


def cmd_decide(
    input_path: str,
    grading_path: Optional[str] = None,
    max_degree: Optional[int] = None,
    certificate: bool = False,
    oracle: bool = False,
    style: str = "text",
    fmt: str = "text",
    output: Optional[str] = None,
    config: Optional[Settings] = None,
) -> CommandResult:
    """Exit 0 when the labels embed, 1 when two of them collide."""
    config = config or Settings()
    relations = _load_relations(input_path, grading_path)
    decision = decide(
        relations,
        max_rules=config.max_rules,
        max_certificate_steps=config.max_certificate_steps,
        max_certificate_vectors=config.max_certificate_vectors,
        certificate_degree=max(max_degree or 0, config.default_oracle_degree),
    )

    oracle_model = None
    if oracle:
        degree = max_degree if max_degree is not None else config.default_oracle_degree
        result = bfs_oracle(relations, degree, config.max_oracle_vectors)
        oracle_model = oracle_to_model(result, decision.embeddable)
        if not oracle_model.agrees_with_decision:
            raise ToolkitError(
                f"Oracle found {result.collision} within degree {degree} but completion says EMBEDDABLE"
            )

    model = decision_to_model(decision, style if certificate else None, oracle_model)
    as_json = model.model_dump_json(indent=2)
    _write(output, as_json)
    exit_code = EXIT_OK if decision.embeddable else EXIT_NEGATIVE
    return CommandResult(exit_code, as_json if fmt == "json" else _render_decision(decision, model, certificate))


def cmd_closure(operators_path: str, kind: str = "lie", fmt: str = "text") -> CommandResult:
    gens = storage_service.load_operators(operators_path)
    span = operators.lie_closure(gens) if kind == "lie" else operators.associative_closure(gens)
    model = ClosureModel(kind=kind, dimension=span.dim, words=span.word_names)
    if fmt == "json":
        return CommandResult(EXIT_OK, model.model_dump_json(indent=2))
    lines = [f"{kind} closure of {', '.join(gens.names)}: dimension {span.dim}"]
    lines.extend(f"  {word}" for word in span.word_names)
    return CommandResult(EXIT_OK, "\n".join(lines))


def cmd_relations(algebra_path: str, grading_path: str) -> CommandResult:
    relations = _load_relations(algebra_path, grading_path)
    return CommandResult(EXIT_OK, storage_service.relations_to_file(relations).model_dump_json(indent=2))
