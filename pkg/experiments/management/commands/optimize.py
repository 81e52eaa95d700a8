"""
Run the (n, m, seed) optimization grid of a configuration.
"""
from argparse import BooleanOptionalAction
from pathlib import Path

from django.core.management.base import CommandError

from experiments.management.base import EXIT_PARTIAL_FAILURE, UNITS_HELP, SimulationCommand
from experiments.services import ExperimentService


class Command(SimulationCommand):
    help = (
        'Optimize the entangler for every instance of a run configuration, writing one JSON '
        f'record per instance plus aggregate.csv and summary.csv. {UNITS_HELP}'
    )

    def add_arguments(self, parser):
        parser.add_argument('--config', type=Path, required=True, help='TOML run configuration')
        parser.add_argument('--out', help='Output directory (overrides run.out)')
        parser.add_argument('--workers', type=int, help='Worker processes (overrides run.workers)')
        parser.add_argument('--seed', type=int, help='Master seed (overrides configuration.master_seed)')
        parser.add_argument(
            '--resume', action=BooleanOptionalAction, default=True,
            help='Skip instances that already have a completed record',
        )

    def run(self, **options):
        config = ExperimentService.load_config(options['config'])
        config = ExperimentService.with_overrides(
            config, seed=options['seed'], out=options['out'], workers=options['workers'],
        )
        summary = ExperimentService.run(config, resume=options['resume'])
        self.stdout.write(
            f'{summary.config_hash[:12]}: {summary.completed} completed, '
            f'{summary.skipped} skipped, {summary.failed} failed -> {config.run.out}'
        )
        if summary.failed:
            raise CommandError(f'{summary.failed} instance(s) failed', returncode=EXIT_PARTIAL_FAILURE)
