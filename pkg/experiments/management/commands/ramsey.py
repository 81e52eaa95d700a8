"""
Ramsey SNR curves of a recorded optimum or a reference state.
"""
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management.base import CommandError

from analysis.dto import ReferenceStateKind
from experiments.management.base import UNITS_HELP, SimulationCommand, float_list
from experiments.services import ReportService, ResultStore
from metrology.dto import MeasurementBasis


class Command(SimulationCommand):
    help = (
        'Write ramsey.csv (t_s, cfi_omega, snr2, snr2_overhead) and ramsey_summary.json '
        f'with the overhead optimum and the closed-form CSS and GHZ references. {UNITS_HELP}'
    )

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--record', help='Record JSON file or instance key')
        source.add_argument('--state', choices=[k.value for k in ReferenceStateKind], help='Reference state')
        parser.add_argument('--n', type=int, help='Spin count of the reference state')
        parser.add_argument('--phase', type=float, help='Relative phase of a GHZ reference (rad)')
        parser.add_argument('--results', type=Path, default=settings.RESULTS_DIR,
                            help='Output directory of the run that holds the record')
        parser.add_argument('--t2', type=float, required=True, help='Coherence time T2 (s)')
        parser.add_argument('--stretch', type=float, default=1.0, help='Stretch factor nu >= 1')
        parser.add_argument('--t-grid', type=float_list,
                            help='Comma-separated sensing times (s); default 60 points up to 2 T2')
        parser.add_argument('--t-oh', type=float, default=0.0, help='Preparation and readout overhead (s)')
        parser.add_argument('--basis', choices=[b.value for b in MeasurementBasis], default='full-z')
        parser.add_argument('--readout-fidelity', type=float, default=1.0)
        self.add_out_argument(parser, default='ramsey')

    def run(self, **options):
        if options['record']:
            result = ResultStore(options['results']).load_record(options['record'])
            _, state = ReportService.resimulate(result)
        else:
            if options['n'] is None:
                raise CommandError('--state needs --n', returncode=1)
            state = ReportService.reference(options['state'], options['n'], options['phase'])

        t_grid = options['t_grid']
        if t_grid is None:
            t_grid = list(np.linspace(2 * options['t2'] / 60, 2 * options['t2'], 60))
        written = ReportService.ramsey(
            state,
            options['t2'],
            options['stretch'],
            t_grid,
            options['t_oh'],
            options['out'],
            basis=options['basis'],
            readout_fidelity=options['readout_fidelity'],
        )
        for name, path in written.items():
            self.stdout.write(f'{name}: {path}')
