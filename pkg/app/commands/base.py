"""Exit-code contract shared by every command"""

from enum import IntEnum
from typing import Iterable, Optional

import click
from flask import current_app


class ExitCode(IntEnum):
    OK = 0
    VERIFICATION_FAILED = 1
    ABORTED = 2
    INVALID_MSP = 3
    RESOURCE_CAP = 4
    USAGE = 64


class ContractUsageError(click.UsageError):
    """A usage error that exits with the contract's usage code."""

    exit_code = ExitCode.USAGE


class ContractCommand(click.Command):
    """
    click command whose option-parsing errors exit with code 64.

    click reports bad flags with exit code 2, which the contract reserves
    for aborted runs.
    """

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            if isinstance(e, ContractUsageError):
                raise
            raise ContractUsageError(e.format_message(), ctx=e.ctx)


def seed_option(func):
    """--seed, falling back to QMSS_SEED and then to the app default."""
    return click.option(
        '--seed', type=int, envvar='QMSS_SEED', default=None,
        help='Root seed for every random stream (env: QMSS_SEED).'
    )(func)


def resolve_seed(flag: Optional[int], document_seed: Optional[int] = None) -> int:
    if flag is not None:
        return flag
    if document_seed is not None:
        return document_seed
    return int(current_app.config.get('DEFAULT_SEED', 0))


def echo_errors(errors: Iterable[str]):
    for error in errors:
        click.echo(f"error: {error}", err=True)
