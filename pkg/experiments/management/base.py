"""
Shared behaviour of the experiment commands.
"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from dipolarvqe.exceptions import ConfigError, InvalidParameterError, RecordNotFoundError, SimulationError

logger = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 1
EXIT_PARTIAL_FAILURE = 2
EXIT_INTERNAL_ERROR = 3

UNITS_HELP = 'Units: lengths nm, frequencies Hz, times s, angles rad.'


def float_list(text: str) -> list[float]:
    """'1e-6,2e-6,4e-6' -> [1e-06, 2e-06, 4e-06]"""
    return [float(part) for part in text.split(',') if part.strip()]


class SimulationCommand(BaseCommand):
    """
    Base class that maps simulation errors onto exit codes.

    Subclasses implement run(**options) instead of handle().
    """

    def add_out_argument(self, parser, default='.'):
        parser.add_argument('--out', type=Path, default=Path(default), help='Output directory')

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except CommandError:
            raise
        except (ConfigError, InvalidParameterError, RecordNotFoundError) as e:
            raise CommandError(f'{e.error_code}: {e.message}', returncode=EXIT_CONFIG_ERROR) from e
        except SimulationError as e:
            raise CommandError(f'{e.error_code}: {e.message}', returncode=EXIT_INTERNAL_ERROR) from e
        except Exception as e:
            logger.exception(f'{self.__module__} crashed')
            raise CommandError(f'INTERNAL_ERROR: {e}', returncode=EXIT_INTERNAL_ERROR) from e

    def run(self, **options):
        raise NotImplementedError
