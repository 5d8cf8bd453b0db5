"""Commands that run the sharing protocol: demo, run, validate-msp"""

import json
import logging

import click
from flask import Blueprint, current_app

from app.commands.base import ContractCommand, ExitCode, echo_errors, resolve_seed, seed_option
from app.models.access import format_set
from app.services.access_service import AccessService
from app.services.protocol_service import ProtocolService
from app.services.scenario_loader import ScenarioLoader
from app.services.worked_example import SECRETS, run_worked_example
from app.utils.errors import (
    InvalidMsp, RandomSearchExhausted, ResourceCapExceeded, ScenarioConfigError, SingularMatrix,
    TooManyParticipants
)

logger = logging.getLogger(__name__)

bp = Blueprint('protocol', __name__, cli_group=None)


def _vector(values):
    return '(' + ', '.join(str(v) for v in values) + ')'


def _print_transcript(transcript):
    members = format_set(transcript.requested_set)
    click.echo(f"secret {transcript.secret_index} via {members}")
    verdicts = []
    for verdict in transcript.cheat_report.verdicts:
        status = 'honest' if verdict.accepted else f'cheater ({verdict.reason.value})'
        verdicts.append(f"P{verdict.participant} {status}")
    click.echo(f"  cheat report: {', '.join(verdicts)}")
    if transcript.aborted:
        click.echo("  aborted: honest participants are not authorized")
        return
    click.echo(f"  recombination vector: {_vector(transcript.recombination)}")
    click.echo(f"  phase exponents: {_vector(transcript.recovery.exponents)}")
    click.echo(f"  recovered s{transcript.secret_index} = {transcript.recovered}")
    click.echo(f"  hash check: {'ok' if transcript.hash_ok else 'MISMATCH'}")


@bp.cli.command('demo', cls=ContractCommand)
@seed_option
@click.option('--json', 'as_json', is_flag=True, help='Print the transcripts as JSON.')
def demo(seed, as_json):
    """Run the four-participant example over Z_7 for both secrets."""
    seed = resolve_seed(seed)
    results = run_worked_example(seed)
    ok = all(
        t.outcome == 'verified' and t.recovered == SECRETS[i - 1]
        for i, t in results
    )

    if as_json:
        click.echo(json.dumps({'runs': [t.to_dict() for _, t in results]}, indent=2))
    else:
        first = results[0][1]
        click.echo(f"Worked example over Z_{first.d}")
        click.echo(f"shares: sh = {_vector(first.shares)}")
        click.echo("shadows:")
        for p, pair in sorted(first.shadows.items()):
            click.echo(f"  P{p}: y1 = {_vector(pair.y1.to_list())}, y2 = {_vector(pair.y2.to_list())}")
        click.echo("commitments:")
        for i, digest in enumerate(first.commitment.to_hex(), start=1):
            click.echo(f"  H{i} = {digest}")
        for _, transcript in results:
            _print_transcript(transcript)

    if not ok:
        logger.error("Worked example did not reproduce both secrets")
    click.get_current_context().exit(ExitCode.OK if ok else ExitCode.VERIFICATION_FAILED)


@bp.cli.command('run', cls=ContractCommand)
@click.argument('config_path', type=click.Path(dir_okay=False))
@seed_option
@click.option('--out', 'out_path', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Write the transcript JSON here instead of stdout.')
@click.option('--timings', is_flag=True, help='Include per-phase timings in the transcript.')
@click.option('--strict', is_flag=True,
              help='Refuse an MSP that lets an unauthorized set compute a secret.')
def run(config_path, seed, out_path, timings, strict):
    """Execute the scenario described by a JSON config file."""
    ctx = click.get_current_context()
    max_participants = current_app.config['MAX_PARTICIPANTS']
    try:
        doc, text = ScenarioLoader.read(config_path)
        scenario = ScenarioLoader.build_run(
            doc, resolve_seed(seed, doc.get('seed')), config_path, text, max_participants
        )
        transcript = ProtocolService.run_scenario(
            scenario.cfg,
            scenario.secret_index,
            scenario.authorized_set,
            scenario.behaviors,
            scenario.eavesdropper,
            collect_timings=timings,
            max_participants=max_participants,
            max_attempts=current_app.config['RANDOM_INVERTIBLE_ATTEMPTS'],
            strict=strict,
            state_cap=current_app.config['STATE_VECTOR_CAP']
        )
    except ScenarioConfigError as e:
        echo_errors(e.errors)
        ctx.exit(ExitCode.USAGE)
    except SingularMatrix as e:
        echo_errors([f"{config_path}: y_matrix: {e}"])
        ctx.exit(ExitCode.USAGE)
    except InvalidMsp as e:
        echo_errors(e.report.format_lines())
        ctx.exit(ExitCode.INVALID_MSP)
    except (TooManyParticipants, ResourceCapExceeded, RandomSearchExhausted) as e:
        echo_errors([str(e)])
        ctx.exit(ExitCode.RESOURCE_CAP)

    if out_path:
        with open(out_path, 'w', encoding='utf-8') as handle:
            handle.write(transcript.to_json() + '\n')
    else:
        click.echo(transcript.to_json())

    if transcript.aborted:
        cheaters = ', '.join(f"P{p} ({r.value})" for p, r in sorted(transcript.cheat_report.cheaters().items()))
        click.echo(f"aborted: cheaters {cheaters}", err=True)
        ctx.exit(ExitCode.ABORTED)
    if not transcript.hash_ok:
        click.echo(f"hash mismatch: recovered {transcript.recovered} for secret {transcript.secret_index}", err=True)
        ctx.exit(ExitCode.VERIFICATION_FAILED)
    ctx.exit(ExitCode.OK)


@bp.cli.command('validate-msp', cls=ContractCommand)
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON.')
def validate_msp(config_path, as_json):
    """Check both span program conditions across every access structure."""
    ctx = click.get_current_context()
    max_participants = current_app.config['MAX_PARTICIPANTS']
    try:
        doc, text = ScenarioLoader.read(config_path)
        msp = ScenarioLoader.build_msp(doc, config_path, text, max_participants)
        report = AccessService.validate_msp(msp, max_participants)
    except ScenarioConfigError as e:
        echo_errors(e.errors)
        ctx.exit(ExitCode.USAGE)

    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for line in report.format_lines():
            click.echo(line)
    ctx.exit(ExitCode.OK if report.is_valid else ExitCode.INVALID_MSP)
