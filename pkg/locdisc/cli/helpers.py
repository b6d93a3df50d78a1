import importlib
import logging
import logging.config
import math
import os
import sys
from functools import partial, update_wrapper
from typing import Any, Optional, Sequence

import click

from locdisc.defaults import (
    DEFAULT_LOGGING_DATE_FORMAT,
    DEFAULT_LOGGING_FORMAT,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_RESTARTS,
    DEFAULT_SDP_TOL,
    DEFAULT_SEED,
    DEFAULT_SEESAW_MAX_ITERATIONS,
    DEFAULT_SERIALIZER_FORMAT,
    DEFAULT_SOLVER_CLASS,
    OUTPUT_DIR_ENVVAR,
    POLICY,
)
from locdisc.exceptions import (
    BoundViolationError,
    GridSpecError,
    IdentityCheckError,
    ParameterRangeError,
    SolverError,
)
from locdisc.logutils import setup_loghandlers
from locdisc.serializers import SERIALIZERS, Table, resolve_serializer
from locdisc.utils import atomic_write, import_attribute
from locdisc.version import VERSION

red = partial(click.style, fg='red')
green = partial(click.style, fg='green')

CONFIG_ERROR_EXIT = 2
SOLVER_ERROR_EXIT = 3

logger = logging.getLogger('locdisc.cli')


def read_config_file(module):
    """Reads all UPPERCASE variables defined in the given module file."""
    settings = importlib.import_module(module)
    return dict([(k, v) for k, v in settings.__dict__.items() if k.upper() == k])


def setup_loghandlers_from_args(verbose, quiet, date_format, log_format):
    if verbose and quiet:
        raise RuntimeError('Flags --verbose and --quiet are mutually exclusive.')

    if verbose:
        level = 'DEBUG'
    elif quiet:
        level = 'WARNING'
    else:
        level = 'INFO'
    setup_loghandlers(level, date_format=date_format, log_format=log_format)


class CliConfig:
    """A helper class to be used with click commands, to handle shared options.

    Options left unset on the command line are taken from the UPPERCASE
    variables of the `--config` module, then from `locdisc.defaults`.
    """

    def __init__(
        self,
        config=None,
        solver_class=None,
        seed=None,
        restarts=None,
        tol=None,
        max_iterations=None,
        format=None,
        out=None,
        output_dir=None,
        workers=None,
        path=None,
        verbose=False,
        quiet=False,
        log_format=DEFAULT_LOGGING_FORMAT,
        date_format=DEFAULT_LOGGING_DATE_FORMAT,
        *args,
        **kwargs,
    ):
        if path:
            for pth in path:
                sys.path.append(pth)

        self.config = config
        try:
            self.settings = read_config_file(config) if config else {}
        except ImportError as exc:
            raise click.BadParameter(str(exc), param_hint='--config')

        try:
            setup_loghandlers_from_args(verbose, quiet, date_format, log_format)
        except RuntimeError as exc:
            raise click.BadParameter(str(exc), param_hint='--verbose/--quiet')
        dict_config = self.settings.get('DICT_CONFIG')
        if dict_config:
            logging.config.dictConfig(dict_config)

        solver_path = self._pick(solver_class, 'SOLVER_CLASS', DEFAULT_SOLVER_CLASS)
        try:
            self.solver_class = import_attribute(solver_path)
        except (ImportError, AttributeError, ValueError) as exc:
            raise click.BadParameter(str(exc), param_hint='--solver-class')
        self.solver_path: str = solver_path

        self.seed: int = int(self._pick(seed, 'SEED', DEFAULT_SEED))
        if not 0 <= self.seed < 2**64:
            raise click.BadParameter(f'{self.seed} is not a 64-bit unsigned integer', param_hint='--seed')
        self.restarts: int = int(self._pick(restarts, 'RESTARTS', DEFAULT_RESTARTS))
        if self.restarts < 1:
            raise click.BadParameter('at least one restart is needed', param_hint='--restarts')
        self.tol: float = float(self._pick(tol, 'TOL', DEFAULT_SDP_TOL))
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise click.BadParameter(f'{self.tol} is not a positive tolerance', param_hint='--tol')
        self.max_iterations: int = int(self._pick(max_iterations, 'MAX_ITERATIONS', DEFAULT_SEESAW_MAX_ITERATIONS))
        if self.max_iterations < 1:
            raise click.BadParameter('must be positive', param_hint='--max-iterations')
        self.format: str = self._pick(format, 'FORMAT', DEFAULT_SERIALIZER_FORMAT)
        if self.format not in SERIALIZERS:
            raise click.BadParameter(f'unknown format {self.format!r}', param_hint='--format')
        self.workers: int = int(self._pick(workers, 'WORKERS', 1))
        if self.workers < 1:
            raise click.BadParameter('must be positive', param_hint='--workers')
        self.out: Optional[str] = out
        self.output_dir: str = self._pick(output_dir, 'OUTPUT_DIR', DEFAULT_OUTPUT_DIR)

    def _pick(self, value, setting: str, default):
        if value is not None:
            return value
        return self.settings.get(setting, default)

    def grid(self, value: Optional[str], setting: str, default: str) -> str:
        return self._pick(value, setting, default)

    @property
    def solver(self):
        """The SDP backend; a dotted path when it has to cross process boundaries."""
        if self.workers > 1:
            return self.solver_path
        return self.solver_class()

    def output_path(self, command: str) -> str:
        if self.out:
            return self.out
        return os.path.join(self.output_dir, f'{command}.{self.format}')

    def header(self, command: str, parameters: dict[str, Any]) -> dict[str, Any]:
        header: dict[str, Any] = {'locdisc_version': VERSION, 'command': command}
        header.update(parameters)
        header.update({'tol': self.tol, 'solver': self.solver_path, 'seed': self.seed})
        return header


def check_identities(table: Table, residual_columns: Sequence[str], tol: float = 1e-10):
    for name in residual_columns:
        for row_index, residual in enumerate(table.column(name)):
            if not abs(residual) <= tol:
                raise IdentityCheckError(
                    f'Column {name!r} row {row_index} has residual {residual!r} above {tol!r}; nothing was written'
                )


def check_gap(gap: float, what: str, tol: float = 1e-8):
    """A lower bound may not exceed the upper bound it is compared with."""
    if gap < -tol:
        raise BoundViolationError(f'{what}: lower bound exceeds the upper bound by {-gap!r}; nothing was written')


def emit(
    cli_config: CliConfig,
    command: str,
    parameters: dict[str, Any],
    columns: list[str],
    rows: list[list[Any]],
    residual_columns: Sequence[str] = (),
    gap_columns: Sequence[str] = (),
) -> str:
    """Checks the residual and gap columns, then writes the table atomically."""
    table = Table(cli_config.header(command, parameters), columns, rows)
    check_identities(table, residual_columns, tol=POLICY.identity_tol)
    for name in gap_columns:
        for row_index, gap in enumerate(table.column(name)):
            check_gap(gap, f'Column {name!r} row {row_index}', tol=POLICY.bound_tol)
    data = resolve_serializer(cli_config.format).dumps(table)
    path = cli_config.output_path(command)
    atomic_write(path, data)
    logger.info('Wrote %d rows to %s', len(rows), path)
    click.echo(green(path))
    return path


shared_options = [
    click.option('--config', '-c', envvar='LOCDISC_CONFIG', help='Module containing locdisc settings.'),
    click.option(
        '--solver-class',
        envvar='LOCDISC_SOLVER_CLASS',
        default=None,
        help=f'SDP backend class to use, defaults to {DEFAULT_SOLVER_CLASS}',
    ),
    click.option('--seed', type=int, default=None, help='Master seed for see-saw restarts'),
    click.option('--restarts', type=int, default=None, help='Number of see-saw restarts'),
    click.option('--tol', type=float, default=None, help='SDP tolerance'),
    click.option('--max-iterations', type=int, default=None, help='Cap on see-saw sweeps per restart'),
    click.option('--format', type=click.Choice(sorted(SERIALIZERS)), default=None, help='Output format'),
    click.option('--out', '-o', type=click.Path(dir_okay=False), default=None, help='Output file path'),
    click.option('--output-dir', envvar=OUTPUT_DIR_ENVVAR, default=None, help='Directory for output files'),
    click.option('--workers', type=int, default=None, help='Worker processes for grid points and restarts'),
    click.option('--path', '-P', default=['.'], help='Specify the import path.', multiple=True),
    click.option('--verbose', '-v', is_flag=True, help='Show more output'),
    click.option('--quiet', '-q', is_flag=True, help='Show less output'),
    click.option('--log-format', type=str, default=DEFAULT_LOGGING_FORMAT, help='Set the format of the logs'),
    click.option(
        '--date-format', type=str, default=DEFAULT_LOGGING_DATE_FORMAT, help='Set the date format of the logs'
    ),
]


def pass_cli_config(func):
    # add all the shared options to the command
    for option in shared_options:
        func = option(func)

    # pass the cli config object into the command and map library errors to exit codes
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        cli_config = CliConfig(**kwargs)
        try:
            return ctx.invoke(func, cli_config, *args[1:], **kwargs)
        except (GridSpecError, ParameterRangeError) as exc:
            click.echo(red(f'Error: {exc}'), err=True)
            sys.exit(CONFIG_ERROR_EXIT)
        except (SolverError, IdentityCheckError) as exc:
            click.echo(red(f'Error: {exc}'), err=True)
            sys.exit(SOLVER_ERROR_EXIT)

    return update_wrapper(wrapper, func)
