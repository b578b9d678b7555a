"""
Completeness Analyzer CLI
트레이스 의미론 위 추상 해석 완전성 분석 명령행 진입점

    python -m src.main analyze fixtures/traffic_light.ts
    python -m src.main check fixtures/two_state.ts --formula "G p | F G q"
    python -m src.main shellcore fixtures/sign_plus.lat sq SignPlus core
    python -m src.main witness neg --window 8
    python -m src.main paper-examples

종료 코드: 0 성공, 1 판정 불일치(또는 내부 교차 검증 실패), 2 입력 오류
"""

import sys
from functools import wraps
from typing import Callable, List, Optional, Tuple

import click
from loguru import logger
from pydantic import ValidationError

from src.config.env import EnvConfig
from src.controllers import analyze, check, collect_formulas, paper_examples, shellcore, witness
from src.dto.run_config import RunConfig
from src.exceptions import (
    CompletenessError,
    ConfigurationError,
    FormulaSyntaxError,
    LatticeError,
    MonotonicityViolationError,
    ParseError,
    ShellNotExistError,
    SubsetCapError,
    UniverseTooSmallError,
)
from src.services.shell_service import OPS

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2

INPUT_ERRORS = (
    ConfigurationError,
    FormulaSyntaxError,
    LatticeError,
    MonotonicityViolationError,
    ParseError,
    ShellNotExistError,
    SubsetCapError,
    UniverseTooSmallError,
)


def setup_logging(verbose: bool) -> None:
    """stderr 단일 sink (EnvConfig.LOG_LEVEL, --verbose면 DEBUG)"""
    logger.remove()
    level = "DEBUG" if verbose else EnvConfig.LOG_LEVEL.upper()
    logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> | {name}:{line} - {message}")


def _parse_bounds(ctx, param, value: Optional[str]) -> Optional[Tuple[int, int, int, int]]:
    if value is None:
        return None
    try:
        return EnvConfig.parse_bounds(value)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def common_options(func: Callable) -> Callable:
    """모든 하위 명령 공통 옵션"""
    options = [
        click.option("--bounds", callback=_parse_bounds, default=None, help="universe bounds L,B,O,I"),
        click.option("--slack", type=int, default=None, help="U⁺ slack Δ (≥ 1)"),
        click.option("--depth", type=int, default=None, help="past depth K (default I + O + L)"),
        click.option("--cap", type=int, default=None, help="state subset enumeration cap"),
        click.option("--format", "fmt", type=click.Choice(["text", "structured"]), default="text"),
        click.option("--verbose", is_flag=True, help="debug logging"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_config(subcommand: str, inputs: List[str], **options) -> RunConfig:
    """None이 아닌 옵션만 RunConfig에 넘겨 나머지는 기본값을 쓴다"""
    values = {k: v for k, v in options.items() if v is not None}
    return RunConfig(subcommand=subcommand, inputs=inputs, **values)


def run_command(func: Callable) -> Callable:
    """오류를 종료 코드로 옮긴다"""

    @wraps(func)
    def wrapper(*args, **kwargs):
        setup_logging(kwargs.get("verbose", False))
        problems = EnvConfig.validate()
        if problems:
            logger.warning(f"⚠️  Environment problems: {'; '.join(problems)}")
        try:
            code = func(*args, **kwargs)
        except ValidationError as e:
            click.echo(f"error: invalid options: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except INPUT_ERRORS as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except ValueError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except CompletenessError as e:
            click.echo(f"internal check failed: {e}", err=True)
            sys.exit(EXIT_MISMATCH)
        sys.exit(code or EXIT_OK)

    return wrapper


@click.group()
def cli():
    """Completeness of abstract domains over trace semantics."""


@cli.command("analyze")
@click.argument("system", type=click.Path())
@click.option("--ops", default=None, help=f"comma-separated operator set for a shell, from {','.join(OPS)}")
@common_options
@run_command
def analyze_cmd(system, ops, bounds, slack, depth, cap, fmt, verbose):
    """Structural verdicts and cores of a transition system."""
    config = build_config("analyze", [system], bounds=bounds, slack=slack, depth=depth, cap=cap, format=fmt)
    requested = [op.strip() for op in ops.split(",") if op.strip()] if ops else None
    click.echo(analyze(config, requested).render(config.format))


@cli.command("check")
@click.argument("system", type=click.Path())
@click.option("--formula", "formulas", multiple=True, help="formula text (repeatable)")
@click.option("--formula-file", "formula_files", multiple=True, type=click.Path(), help="one formula per line")
@common_options
@run_command
def check_cmd(system, formulas, formula_files, bounds, slack, depth, cap, fmt, verbose):
    """Trace and state semantics, branchability and LTL_det membership."""
    config = build_config("check", [system], bounds=bounds, slack=slack, depth=depth, cap=cap, format=fmt)
    report = check(config, collect_formulas(formulas, formula_files))
    click.echo(report.render(config.format))


@cli.command("shellcore")
@click.argument("lattice", type=click.Path())
@click.argument("functions")
@click.argument("domain")
@click.argument("mode", type=click.Choice(["shell", "core"]))
@common_options
@run_command
def shellcore_cmd(lattice, functions, domain, mode, bounds, slack, depth, cap, fmt, verbose):
    """Complete shell or core of a named domain for comma-separated functions."""
    config = build_config("shellcore", [lattice], bounds=bounds, slack=slack, depth=depth, cap=cap, format=fmt)
    names = [name.strip() for name in functions.split(",") if name.strip()]
    click.echo(shellcore(config, names, domain, mode).render(config.format))


@cli.command("witness")
@click.argument("operator", type=click.Choice(["neg", "F"]))
@click.option("--window", type=int, default=None, help="window W of the single-state universe")
@common_options
@run_command
def witness_cmd(operator, window, bounds, slack, depth, cap, fmt, verbose):
    """Witness report for the missing ¬ or F shell of ρ∀."""
    config = build_config(
        "witness", [], bounds=bounds, slack=slack, depth=depth, cap=cap, format=fmt, window=window
    )
    click.echo(witness(config, operator).render(config.format))


@cli.command("paper-examples")
@click.option("--window", type=int, default=None, help="window W for the witness item")
@click.option("--only", multiple=True, type=int, help="run only these item numbers")
@common_options
@run_command
def paper_examples_cmd(window, only, bounds, slack, depth, cap, fmt, verbose):
    """Run every reproduction item; exit 1 on any mismatch."""
    config = build_config(
        "paper-examples", [], bounds=bounds, slack=slack, depth=depth, cap=cap, format=fmt, window=window
    )
    report = paper_examples(config, list(only) or None)
    click.echo(report.render(config.format))
    return EXIT_OK if report.passed else EXIT_MISMATCH


if __name__ == "__main__":
    cli()
