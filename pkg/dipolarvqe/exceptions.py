"""
Coded simulation errors shared by every app.
"""


class SimulationError(Exception):
    """
    Base exception for simulation errors.

    Usage:
        raise SimulationError('COINCIDENT_SPINS', 'Spins 0 and 1 share a position')
    """
    def __init__(self, error_code: str, message: str):
        self.error_code = error_code
        self.message = message
        super().__init__(message)

    def to_dict(self) -> dict:
        return {'error_code': self.error_code, 'message': self.message}


# Ensemble errors
class InvalidConfigurationError(SimulationError):
    """Configuration request cannot be satisfied."""
    def __init__(self, message: str):
        super().__init__('INVALID_CONFIGURATION', message)


class CoincidentSpinsError(SimulationError):
    """Two spins share a position."""
    def __init__(self, i: int, j: int):
        super().__init__(
            'COINCIDENT_SPINS',
            f'Spins {i} and {j} are at the same position'
        )


class ConfigurationSamplingError(SimulationError):
    """Random configuration could not be drawn within the retry budget."""
    def __init__(self, n: int, retries: int):
        super().__init__(
            'CONFIGURATION_SAMPLING_FAILED',
            f'No admissible random configuration of {n} spins after {retries} draws'
        )


class UndefinedCouplingError(SimulationError):
    """Nearest-neighbour coupling is undefined for a single spin."""
    def __init__(self):
        super().__init__(
            'UNDEFINED_COUPLING',
            'Mean nearest-neighbour coupling needs at least two spins'
        )


# Engine errors
class InvalidParameterError(SimulationError):
    """A numeric argument is outside its allowed range."""
    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__('INVALID_PARAMETER', f'{name}: {message}')


class DimensionMismatchError(SimulationError):
    """State and operator dimensions disagree."""
    def __init__(self, expected: int, actual: int):
        super().__init__(
            'DIMENSION_MISMATCH',
            f'Expected Hilbert dimension {expected}, got {actual}'
        )


class NotADensityMatrixError(SimulationError):
    """Operation needs a density-matrix state."""
    def __init__(self):
        super().__init__(
            'NOT_A_DENSITY_MATRIX',
            'Operation requires a density-matrix state'
        )


class IntegrationError(SimulationError):
    """Master-equation integrator failed."""
    def __init__(self, t: float, message: str):
        self.t = t
        super().__init__(
            'INTEGRATION_FAILED',
            f'Integration to t={t:.6g} s failed: {message}'
        )


# Metrology errors
class ZeroProbabilityError(SimulationError):
    """Vanishing outcome probability with a derivative too large to be consistent."""
    def __init__(self, outcome: int, probability: float, derivative: float):
        super().__init__(
            'ZERO_PROBABILITY',
            f'Outcome {outcome} has P={probability:.3e} but dP/dphi={derivative:.3e}'
        )


class NonIdentifiableError(SimulationError):
    """Likelihood is flat around the operating point."""
    def __init__(self, phi0: float):
        super().__init__(
            'NON_IDENTIFIABLE',
            f'Outcome distribution carries no information about the phase near {phi0:.6g}'
        )


# Optimizer errors
class NonFiniteCostError(SimulationError):
    """Cost stayed non-finite after resampling."""
    def __init__(self, retries: int):
        super().__init__(
            'NON_FINITE_COST',
            f'Cost was non-finite for {retries} consecutive resamples'
        )


# Analysis errors
class UndefinedSqueezingError(SimulationError):
    """Mean spin along x vanishes."""
    def __init__(self, mean_jx: float):
        super().__init__(
            'UNDEFINED_SQUEEZING',
            f'Squeezing parameter is undefined for <Jx>={mean_jx:.3e}'
        )


class InvalidSubsetError(SimulationError):
    """Spin subset is empty, full or out of range."""
    def __init__(self, message: str):
        super().__init__('INVALID_SUBSET', message)


# Controllability errors
class NonHermitianGeneratorError(SimulationError):
    """Generator is not Hermitian."""
    def __init__(self, index: int):
        super().__init__(
            'NON_HERMITIAN_GENERATOR',
            f'Generator {index} is not Hermitian'
        )


# Experiment harness errors
class ConfigError(SimulationError):
    """Experiment configuration is invalid."""
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__('CONFIG_ERROR', f'{field}: {message}')


class RecordNotFoundError(SimulationError):
    """Requested result record does not exist."""
    def __init__(self, reference: str):
        super().__init__(
            'RECORD_NOT_FOUND',
            f'No result record matches {reference}'
        )
