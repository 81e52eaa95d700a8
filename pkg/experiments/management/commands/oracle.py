"""
Single-qubit Ramsey closed forms against the simulated pipeline.
"""
from pathlib import Path

from experiments.management.base import UNITS_HELP, SimulationCommand, float_list
from experiments.services import ReportService
from experiments.services.reports import write_rows

COLUMNS = ('gamma', 't_s', 'p0', 'cfi_omega', 'p0_simulated', 'cfi_omega_simulated')


class Command(SimulationCommand):
    help = (
        'Tabulate P0 = 1/2 + exp(-2 gamma t) sin(omega t)/2 and CFI_omega for one spin next to '
        f'the simulated values (nu = 1, T2 = 1/(2 gamma)). {UNITS_HELP}'
    )

    def add_arguments(self, parser):
        parser.add_argument('--omega', type=float, default=1.0, help='Signal (rad/s)')
        parser.add_argument('--gamma', type=float_list, default=[0.0, 0.1, 0.2], help='Dephasing rates (1/s)')
        parser.add_argument('--t', type=float_list, default=[0.5, 1.0, 2.0], help='Sensing times (s)')
        parser.add_argument('--out', type=Path, help='Directory for oracle.csv; stdout when absent')

    def run(self, **options):
        rows = ReportService.oracle_rows(options['omega'], options['gamma'], options['t'])
        worst = max(
            max(abs(r['p0'] - r['p0_simulated']), abs(r['cfi_omega'] - r['cfi_omega_simulated']))
            for r in rows
        )
        if options['out'] is not None:
            path = write_rows(options['out'] / 'oracle.csv', COLUMNS, rows)
            self.stdout.write(f'oracle: {path}')
        else:
            self.stdout.write(','.join(COLUMNS))
            for row in rows:
                self.stdout.write(','.join(repr(row[c]) for c in COLUMNS))
        self.stdout.write(f'max deviation {worst:.3e}')
