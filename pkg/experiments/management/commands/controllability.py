"""
Dynamical Lie algebra dimension and controllability verdict.
"""
import json
from pathlib import Path

from controllability.dto import ControlSystem
from experiments.management.base import SimulationCommand
from experiments.services import ReportService


class Command(SimulationCommand):
    help = 'Compute the Lie closure of a control system with global rotations and report its class (N <= 5).'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True, help='Number of spins')
        parser.add_argument('--system', choices=[s.value for s in ControlSystem], default='dipolar')
        parser.add_argument('--out', type=Path, help='Directory for the JSON report; stdout only when absent')

    def run(self, **options):
        document = ReportService.controllability(options['n'], options['system'], options['out'])
        self.stdout.write(json.dumps(document, indent=2, sort_keys=True))
