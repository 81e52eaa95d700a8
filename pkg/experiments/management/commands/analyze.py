"""
Characterize a recorded optimum or a reference state.
"""
from pathlib import Path

from django.conf import settings
from django.core.management.base import CommandError

from analysis.dto import ReferenceStateKind
from experiments.management.base import UNITS_HELP, SimulationCommand
from experiments.services import ReportService, ResultStore
from experiments.services.reports import ANALYSES


class Command(SimulationCommand):
    help = (
        'Re-simulate a record (or build a reference state) and write wigner.csv, entropy.csv, '
        f'clusters.json, squeezing.json and cutoff.csv as requested. {UNITS_HELP}'
    )

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--record', help='Record JSON file or instance key')
        source.add_argument('--state', choices=[k.value for k in ReferenceStateKind], help='Reference state')
        parser.add_argument('--n', type=int, help='Spin count of the reference state')
        parser.add_argument('--phase', type=float, help='Relative phase of a GHZ reference (rad)')
        parser.add_argument('--results', type=Path, default=settings.RESULTS_DIR,
                            help='Output directory of the run that holds the record')
        parser.add_argument('--analyses', help='Comma-separated subset of ' + ', '.join(ANALYSES) + '; default all that apply')
        parser.add_argument('--resolution', help='Wigner grid as polar,azimuthal point counts')
        self.add_out_argument(parser, default='analysis')

    def run(self, **options):
        resolution = None
        if options['resolution']:
            resolution = tuple(int(part) for part in options['resolution'].split(','))

        result = None
        if options['record']:
            result = ResultStore(options['results']).load_record(options['record'])
            _, state = ReportService.resimulate(result)
            defaults = list(ANALYSES)
        else:
            if options['n'] is None:
                raise CommandError('--state needs --n', returncode=1)
            state = ReportService.reference(options['state'], options['n'], options['phase'])
            # the cutoff study needs an optimized circuit
            defaults = [name for name in ANALYSES if name != 'cutoff']

        analyses = defaults
        if options['analyses']:
            analyses = [name.strip() for name in options['analyses'].split(',') if name.strip()]

        written = ReportService.analyze(state, analyses, options['out'], result=result, resolution=resolution)
        for name, path in written.items():
            self.stdout.write(f'{name}: {path}')
