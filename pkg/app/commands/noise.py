"""noise-sweep: fidelity tables for the three channels"""

import io
import logging

import click
from flask import Blueprint, current_app
from sympy import isprime

from app.commands.base import ContractCommand, ContractUsageError, ExitCode, echo_errors
from app.models.field import MAX_MODULUS
from app.models.noise import NoiseScenario
from app.models.quantum import ChannelKind
from app.services.noise_service import NoiseService
from app.utils.errors import ResourceCapExceeded

logger = logging.getLogger(__name__)

bp = Blueprint('noise', __name__, cli_group=None)

KIND_CHOICES = [kind.value for kind in ChannelKind] + ['all']


@bp.cli.command('noise-sweep', cls=ContractCommand)
@click.option('--kind', type=click.Choice(KIND_CHOICES), default='df', show_default=True,
              help='Channel to sweep.')
@click.option('--d', 'd', type=int, default=2, show_default=True, help='Qudit dimension (prime).')
@click.option('--t', 't', type=int, default=5, show_default=True, help='Number of participants (>= 2).')
@click.option('--mu-steps', type=click.IntRange(min=1), default=11, show_default=True,
              help='Evenly spaced noise strengths from 0 to 1.')
@click.option('--simulate', is_flag=True, help='Check every row against the density-matrix simulation.')
@click.option('--figure', is_flag=True, help='Formula-only grid over t in {5, 12} and seven dimensions.')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Write the CSV here instead of stdout.')
def noise_sweep(kind, d, t, mu_steps, simulate, figure, out_path):
    """Tabulate closed-form (and optionally simulated) fidelities."""
    ctx = click.get_current_context()
    if figure and simulate:
        raise ContractUsageError("--figure rows are formula-only and cannot be simulated")
    if not figure:
        if d < 2 or not isprime(d):
            raise ContractUsageError(f"--d must be a prime, got {d}")
        if d > MAX_MODULUS:
            raise ContractUsageError(f"--d must be at most {MAX_MODULUS}, got {d}")
        if t < 2:
            raise ContractUsageError(f"--t must be at least 2, got {t}")

    tolerance = current_app.config['FIDELITY_TOLERANCE']
    workers = current_app.config['SWEEP_WORKERS']
    cap = current_app.config['DENSITY_MATRIX_CAP']

    if figure:
        rows = NoiseService.figure_grid(mu_steps)
    else:
        grid = tuple(NoiseService.mu_grid(mu_steps))
        kinds = list(ChannelKind) if kind == 'all' else [ChannelKind(kind)]
        rows = []
        try:
            for channel in kinds:
                rows.extend(NoiseService.sweep(NoiseScenario(channel, d, t, grid), simulate, workers, cap))
        except ResourceCapExceeded as e:
            echo_errors([str(e)])
            ctx.exit(ExitCode.RESOURCE_CAP)

    if out_path:
        with open(out_path, 'w', encoding='utf-8', newline='') as handle:
            NoiseService.write_csv(rows, handle)
    else:
        buffer = io.StringIO()
        NoiseService.write_csv(rows, buffer)
        click.echo(buffer.getvalue(), nl=False)

    if simulate:
        worst = NoiseService.max_delta(rows)
        if worst > tolerance:
            click.echo(f"formula and simulation disagree by {worst:.3e} (> {tolerance:g})", err=True)
            ctx.exit(ExitCode.VERIFICATION_FAILED)
        logger.info(f"Simulation agrees with the closed forms within {worst:.3e}")
    ctx.exit(ExitCode.OK)
