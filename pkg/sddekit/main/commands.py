"""Command line entry points: ``run <config>`` and ``list-models``."""
import click
from flask import current_app

from . import main
from .errors import handle_experiment_error
from .forms.experiment_forms import load_experiment
from .views import EXPERIMENT_VIEWS
from ..catalog import list_models
from ..errors import SddeError


@main.cli.command('run')
@click.argument('config_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--seed', type=int, default=None, help='Override seeds.master.')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
              help='Directory for the result file.')
@click.option('--workers', type=click.IntRange(min=1), default=None, help='Worker processes for path batches.')
@click.pass_context
def run_experiment(ctx, config_file, seed, out_dir, workers):
    """Run the experiment described by CONFIG_FILE and write its CSV."""
    if workers is not None:
        current_app.config['SDDE_WORKERS'] = workers
    try:
        experiment = load_experiment(config_file).with_overrides(master_seed=seed)
        path = EXPERIMENT_VIEWS[experiment.kind](experiment, out_dir)
    except SddeError as e:
        status, message = handle_experiment_error(e)
        click.echo(message, err=True)
        ctx.exit(status)

    click.echo(path)


@main.cli.command('list-models')
def list_catalog_models():
    """Print the model catalog with the Hölder exponents of each entry."""
    for model_id, description, alpha, beta in list_models():
        click.echo('{}\t{}\talpha={:g}\tbeta={:g}'.format(model_id, description, alpha, beta))
