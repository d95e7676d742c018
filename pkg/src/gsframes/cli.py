"""
CLI module for gsframes.

This module provides the command-line interface using Click. `gsframes run JOB`
parses a JSON job (or stdin when JOB is "-"), runs the named check and writes
its reports to stdout. Diagnostics go to stderr.

Exit codes: 0 when no report failed, 1 when a check failed or a precondition
was violated while running, 2 for configuration errors.
"""

import sys
from pathlib import Path

import click
import yaml

from . import __version__
from .commands import RUNTIME_ERRORS, UnknownCommand, list_commands, run_command
from .config_loader import ConfigError, get_config, load_config
from .job_config import ConfigValidationError, ParseError, parse_config
from .logging_config import get_logger, setup_logging
from .pusf import PreconditionFailed
from .reporting import emit_report, exit_status

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2


def _print_commands(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    width = max(len(cmd.name) for cmd in list_commands())
    for cmd in list_commands():
        click.echo(f"{cmd.name.ljust(width)}  {cmd.description}")
    ctx.exit(EXIT_OK)


@click.group()
@click.version_option(version=__version__, prog_name='gsframes')
@click.help_option('--help', '-h')
@click.option('--list-commands', is_flag=True, is_eager=True, expose_value=False, callback=_print_commands,
              help='List the available check commands and exit')
@click.option('--settings', type=click.Path(exists=True, dir_okay=False),
              help='Settings YAML file (default: the packaged config.yaml)')
@click.option('--log-file', type=click.Path(), help='Path to log file (default: from settings, none)')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              default=None, help='Set the logging level (default: from settings)')
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output (DEBUG level)')
@click.pass_context
def main(ctx, settings, log_file, log_level, verbose):
    """
    gsframes: group-generated Schauder frames and finite Gabor-Schauder frames.

    Runs executable checks of frame identities on finite groups and reports
    residuals and witnesses.
    """
    try:
        load_config(settings)
    except (ConfigError, yaml.YAMLError, FileNotFoundError) as e:
        click.echo(f"Error: invalid settings: {e}", err=True)
        ctx.exit(EXIT_CONFIG_ERROR)

    if verbose:
        log_level = 'DEBUG'
    if log_level is None:
        log_level = get_config('logging.level')
    if log_file is None:
        log_file = get_config('logging.file_path')

    setup_logging(log_file=str(Path(log_file)) if log_file else None, log_level=log_level,
                  log_format=get_config('logging.format'))

    ctx.ensure_object(dict)
    ctx.obj['logger'] = get_logger('gsframes')


@main.command()
@click.pass_context
def version(ctx):
    """Show version information."""
    ctx.obj['logger'].debug("Version command called")
    click.echo(f"gsframes v{__version__}")


@main.command(name='commands')
def commands_cmd():
    """List the available check commands."""
    for cmd in list_commands():
        click.echo(cmd.name)


def _read_job(path: str) -> bytes:
    if path == '-':
        return click.get_binary_stream('stdin').read()
    with open(path, 'rb') as f:
        return f.read()


@main.command()
@click.argument('job', type=str)
@click.option('--tolerance', type=click.FloatRange(min=0, min_open=True),
              help='Override the residual and exact tolerances')
@click.option('--seed', type=click.IntRange(min=0), help='Seed for seeded-random pairs')
@click.option('--output', '-o', type=click.Choice(['text', 'machine']), default=None,
              help='Report format (default: from settings)')
@click.option('--verify-adjoint-by-matrices', is_flag=True,
              help='Cross-check adjoint lattices by explicit matrix commutation')
@click.pass_context
def run(ctx, job, tolerance, seed, output, verify_adjoint_by_matrices):
    """
    Run the check named in a JSON job file.

    JOB is a path to the job file, or "-" to read it from stdin.
    """
    logger = ctx.obj['logger']
    fmt = output or get_config('output.format')
    digits = int(get_config('output.float_digits'))

    try:
        cfg = parse_config(_read_job(job))
    except OSError as e:
        click.echo(f"Error: cannot read job: {e}", err=True)
        ctx.exit(EXIT_CONFIG_ERROR)
    except (ParseError, ConfigValidationError) as e:
        click.echo(f"Error: invalid job: {e}", err=True)
        ctx.exit(EXIT_CONFIG_ERROR)

    try:
        reports = run_command(cfg, tolerance=tolerance, seed=seed,
                              verify_adjoint_by_matrices=verify_adjoint_by_matrices)
    except (UnknownCommand, ConfigValidationError) as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_CONFIG_ERROR)
    except RUNTIME_ERRORS as e:
        logger.error(f"Command '{cfg.command}' stopped: {e}")
        click.echo(f"Error: {e}", err=True)
        if isinstance(e, PreconditionFailed) and e.report is not None:
            click.echo(emit_report([e.report], fmt, digits), nl=False)
        ctx.exit(EXIT_CHECK_FAILED)

    click.echo(emit_report(reports, fmt, digits), nl=False)
    ctx.exit(exit_status(reports))


if __name__ == '__main__':
    sys.exit(main())
