"""
Squeezing Service - Wineland parameter of x-polarized states.
"""
import logging

from analysis.dto import SqueezingReport
from dipolarvqe.exceptions import UndefinedSqueezingError
from engine.dto import QuantumState
from ensemble.operators import SpinOperators

logger = logging.getLogger(__name__)

MIN_MEAN_SPIN = 1e-9


class SqueezingService:
    """Service for spin-squeezing figures of merit."""

    @staticmethod
    def squeezing_parameter(state: QuantumState) -> SqueezingReport:
        """
        xi^2 = N Var(J_y) / <J_x>^2.

        Args:
            state: State polarized along x

        Returns:
            SqueezingReport: xi^2 together with <J_x>, Var(J_y) and the
            CFI it certifies for an optimal squeezed state

        Raises:
            UndefinedSqueezingError: |<J_x>| <= 1e-9
        """
        n = state.n_spins
        jx = SpinOperators.collective('x', n)
        jy = SpinOperators.collective('y', n)

        mean_jx = state.expectation(jx)
        if abs(mean_jx) <= MIN_MEAN_SPIN:
            raise UndefinedSqueezingError(mean_jx)
        variance_jy = state.expectation(jy @ jy) - state.expectation(jy) ** 2
        xi_squared = n * variance_jy / mean_jx ** 2

        return SqueezingReport(
            xi_squared=xi_squared,
            mean_jx=mean_jx,
            variance_jy=variance_jy,
            cfi_bound=SqueezingService.cfi_bound(xi_squared, n),
        )

    @staticmethod
    def cfi_bound(xi_squared: float, n: int) -> float:
        """N / xi^2, the CFI reached by an optimal squeezed state."""
        if xi_squared <= 0:
            return float('inf')
        return n / xi_squared
