"""Command-line entry point: ``python -m app.main <command>``."""
from enum import Enum
from typing import Callable, Optional

import typer

from app.api import commands
from app.config import Settings
from app.exceptions import ToolkitError
from app.utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

app = typer.Typer(
    name="lie-grading",
    help="Exact Lie gradings and the property-(P) semigroup embedding problem.",
    add_completion=False,
    no_args_is_help=True,
)


class OutputFormat(str, Enum):
    text = "text"
    json = "json"


class CertificateStyle(str, Enum):
    text = "text"
    bracket = "bracket"


class ClosureKind(str, Enum):
    lie = "lie"
    associative = "associative"


def _run(command: Callable[[], commands.CommandResult]) -> None:
    try:
        result = command()
    except ToolkitError as e:
        logger.debug("Command failed", exc_info=True)
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(e.exit_code)
    except Exception as e:
        logger.exception("Internal error")
        typer.echo(f"internal error: {e}", err=True)
        raise typer.Exit(ToolkitError.exit_code)
    typer.echo(result.output)
    raise typer.Exit(result.exit_code)


@app.callback()
def main(
    log_level: str = typer.Option("WARNING", "--log-level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL."),
    log_file: Optional[str] = typer.Option(None, "--log-file", help="Also log everything to a rotating file."),
):
    """Logging goes to stderr; reports go to stdout."""
    config = Settings(log_level=log_level, log_file=log_file)
    try:
        setup_logging(log_level=config.log_level, log_file=config.log_file)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--log-level")


@app.command("paper-demo")
def paper_demo(
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format", help="Report format."),
    output: Optional[str] = typer.Option(None, "--output", help="Also write the JSON report here."),
    max_rules: Optional[int] = typer.Option(None, "--max-rules", help="Completion rule cap."),
):
    """Rebuild the nine-dimensional counterexample and check every claim about it."""
    _run(lambda: commands.cmd_paper_demo(
        fmt.value, output, commands.build_settings(max_rules=max_rules),
    ))


@app.command("verify-grading")
def verify_grading(
    algebra: str = typer.Argument(..., help="Algebra file (structure constants or operators)."),
    grading: str = typer.Argument(..., help="Grading file."),
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format"),
):
    """Exit 0 for a valid grading, 3 for an invalid one."""
    _run(lambda: commands.cmd_verify_grading(algebra, grading, fmt.value))


@app.command("decide")
def decide(
    input_path: str = typer.Argument(..., metavar="INPUT", help="Relations file, or an algebra file with GRADING."),
    grading: Optional[str] = typer.Argument(None, help="Grading file when INPUT is an algebra."),
    max_degree: Optional[int] = typer.Option(None, "--max-degree", min=2, help="Oracle degree bound (default 6)."),
    certificate: bool = typer.Option(False, "--certificate", help="Print the collision certificate."),
    oracle: bool = typer.Option(False, "--oracle", help="Cross-check with the brute-force oracle."),
    style: CertificateStyle = typer.Option(CertificateStyle.text, "--style", help="Certificate rendering."),
    max_rules: Optional[int] = typer.Option(None, "--max-rules", help="Completion rule cap."),
    max_vectors: Optional[int] = typer.Option(None, "--max-vectors", help="Oracle enumeration cap."),
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format"),
    output: Optional[str] = typer.Option(None, "--output", help="Also write the JSON decision here."),
):
    """Exit 0 when the labels embed in a semigroup with (P), 1 when two labels are forced equal."""
    _run(lambda: commands.cmd_decide(
        input_path,
        grading,
        max_degree=max_degree,
        certificate=certificate,
        oracle=oracle,
        style=style.value,
        fmt=fmt.value,
        output=output,
        config=commands.build_settings(max_rules=max_rules, max_oracle_vectors=max_vectors),
    ))


@app.command("closure")
def closure(
    operators_path: str = typer.Argument(..., metavar="OPERATORS", help="Operator-form algebra file."),
    kind: ClosureKind = typer.Option(ClosureKind.lie, "--kind"),
    fmt: OutputFormat = typer.Option(OutputFormat.text, "--format"),
):
    """Dimension and spanning words of the algebra the operators generate."""
    _run(lambda: commands.cmd_closure(operators_path, kind.value, fmt.value))


@app.command("relations")
def relations(
    algebra: str = typer.Argument(..., help="Algebra file."),
    grading: str = typer.Argument(..., help="Grading file."),
):
    """Print the property-(P) relations of a grading as a relations file."""
    _run(lambda: commands.cmd_relations(algebra, grading))


if __name__ == "__main__":
    app()
