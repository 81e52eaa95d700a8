"""
Print or write a complete run configuration.
"""
from pathlib import Path

from ensemble.presets import PLATFORM_PRESETS
from experiments.management.base import UNITS_HELP, SimulationCommand
from experiments.services import ExperimentService


class Command(SimulationCommand):
    help = f'Write a TOML run configuration with every key at its default. {UNITS_HELP}'

    def add_arguments(self, parser):
        parser.add_argument('--preset', choices=sorted(PLATFORM_PRESETS), help='Seed model and noise from a platform')
        parser.add_argument('--output', type=Path, help='File to write; stdout when absent')

    def run(self, **options):
        text = ExperimentService.config_template(options['preset'])
        if options['output'] is None:
            self.stdout.write(text, ending='')
            return
        options['output'].parent.mkdir(parents=True, exist_ok=True)
        options['output'].write_text(text)
        self.stdout.write(f'Wrote {options["output"]}')
