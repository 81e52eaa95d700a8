"""
Preparation Time Service - entangler duration accounting.
"""
from analysis.dto import PreparationTime
from dipolarvqe.exceptions import InvalidParameterError


class PreparationTimeService:
    """Service for preparation times in seconds and in units of 1/f_dd."""

    @staticmethod
    def preparation_time(theta, f_dd_hz: float) -> PreparationTime:
        """
        T = sum(tau_i + tau'_i); angle entries do not contribute.

        Args:
            theta: (tau_1, angle_1, tau'_1, ...) in seconds and radians
            f_dd_hz: Mean nearest-neighbour coupling in Hz

        Returns:
            PreparationTime: T and the dimensionless f_dd * T

        Raises:
            InvalidParameterError: Length not a multiple of 3 or f_dd <= 0
        """
        values = [float(x) for x in theta]
        if len(values) % 3:
            raise InvalidParameterError('theta', 'length must be a multiple of 3')
        if f_dd_hz <= 0:
            raise InvalidParameterError('f_dd_hz', f'must be positive, got {f_dd_hz}')
        seconds = sum(v for k, v in enumerate(values) if k % 3 != 1)
        return PreparationTime(seconds=seconds, fdd_t=f_dd_hz * seconds, f_dd_hz=f_dd_hz)

    @staticmethod
    def from_fdd_t(fdd_t: float, f_dd_hz: float) -> PreparationTime:
        """Duration in seconds of a dimensionless preparation time."""
        if f_dd_hz <= 0:
            raise InvalidParameterError('f_dd_hz', f'must be positive, got {f_dd_hz}')
        return PreparationTime(seconds=fdd_t / f_dd_hz, fdd_t=fdd_t, f_dd_hz=f_dd_hz)

    @staticmethod
    def speedup_over(reference_seconds: float, preparation: PreparationTime) -> float:
        """How many times faster this preparation is than a reference protocol."""
        if preparation.seconds <= 0:
            raise InvalidParameterError('preparation', 'duration must be positive')
        return reference_seconds / preparation.seconds
