"""
Ramsey Service - frequency sensing under stretched-exponential dephasing.

The prepared state is mapped into the sensing frame by W = R_x(pi/2), where
the y-generated signal becomes a z rotation. There it accumulates the signal
omega and dephases, and W^dagger maps it back before readout:

    rho' = W^dagger Lambda_t(W rho W^dagger) W

An extra frequency shift d omega then acts on rho' as exp(-i d omega t J_y),
so CFI_omega = t^2 CFI_phi(rho') at any operating frequency.
"""
import logging
import math
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from dipolarvqe.exceptions import InvalidParameterError
from engine.dto import QuantumState
from engine.services.gates import GateService
from engine.services.master_equation import MasterEquationService
from metrology.dto import MeasurementBasis, RamseyCurve, ReferenceOptima
from metrology.services.fisher import FisherInformationService

logger = logging.getLogger(__name__)

FRAME_ANGLE = math.pi / 2


class RamseyService:
    """Service for Ramsey CFI, SNR curves and their closed-form optima."""

    @staticmethod
    def _check_grid(t_grid: Sequence[float]) -> list[float]:
        times = [float(t) for t in t_grid]
        if not times or times[0] <= 0 or any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidParameterError('t_grid', 'times must be positive and strictly ascending')
        return times

    @staticmethod
    def readout_state(
        state: QuantumState,
        t: float,
        t2: float,
        stretch: float = 1.0,
        omega: float = 0.0,
    ) -> QuantumState:
        """State reaching the readout after a Ramsey window of length t."""
        return RamseyService.readout_trajectory(state, [t], t2, stretch, omega)[0]

    @staticmethod
    def readout_trajectory(
        state: QuantumState,
        times: Sequence[float],
        t2: float,
        stretch: float = 1.0,
        omega: float = 0.0,
    ) -> list[QuantumState]:
        framed = GateService.global_rotation(state, 'x', FRAME_ANGLE)
        trajectory = MasterEquationService.nonmarkovian_trajectory(framed, omega, t2, stretch, times)
        return [GateService.global_rotation(rho, 'x', -FRAME_ANGLE) for rho in trajectory]

    @staticmethod
    def ramsey_cfi_omega(
        state: QuantumState,
        t: float,
        t2: float,
        stretch: float = 1.0,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
        omega: float = 0.0,
    ) -> float:
        """
        CFI with respect to the signal frequency after one Ramsey window.

        Args:
            state: Prepared state
            t: Sensing time t_R (s)
            t2: Coherence time (s)
            stretch: nu >= 1
            basis: Readout basis
            readout_fidelity: RF in [0.5, 1]
            omega: Operating signal frequency (rad/s)

        Returns:
            float: CFI_omega in s^2
        """
        rho = RamseyService.readout_state(state, t, t2, stretch, omega)
        cfi = FisherInformationService.cfi_phi(rho, basis, readout_fidelity)
        return FisherInformationService.cfi_omega(cfi, t)

    @staticmethod
    def ramsey_snr_curve(
        state: QuantumState,
        t2: float,
        stretch: float,
        t_grid: Sequence[float],
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
    ) -> RamseyCurve:
        """
        CFI_omega / t_R over a time grid.

        Returns:
            RamseyCurve: Per-time values plus the grid maximum

        Raises:
            InvalidParameterError: Grid not positive and ascending
            IntegrationError: Integrator failed, carrying the offending time
        """
        times = RamseyService._check_grid(t_grid)
        states = RamseyService.readout_trajectory(state, times, t2, stretch)
        cfi_omega = [
            FisherInformationService.cfi_omega(
                FisherInformationService.cfi_phi(rho, basis, readout_fidelity), t
            )
            for rho, t in zip(states, times)
        ]
        snr = [c / t for c, t in zip(cfi_omega, times)]
        best = int(np.argmax(snr))
        logger.debug(f'SNR curve over {len(times)} times peaks at t={times[best]:.4g} s')
        return RamseyCurve(
            times=tuple(times),
            cfi_omega=tuple(cfi_omega),
            snr=tuple(snr),
            best_time=times[best],
            best_value=snr[best],
        )

    @staticmethod
    def snr_with_overhead(
        state: QuantumState,
        t2: float,
        stretch: float,
        t_overhead: float,
        t_grid: Sequence[float],
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
        refine: bool = True,
    ) -> RamseyCurve:
        """
        SNR^2 proportional to CFI_omega / (t_R + t_oh).

        The grid maximum is refined by a bounded scalar search between its
        neighbours. Closed-form CSS and GHZ optima for the state's spin count
        are attached as reference values.

        Args:
            state: Prepared state
            t2: Coherence time (s)
            stretch: nu >= 1
            t_overhead: Preparation and readout overhead t_oh >= 0 (s)
            t_grid: Positive ascending sensing times (s)
            refine: Refine the optimum off the grid

        Returns:
            RamseyCurve: Curve with snr_overhead and the optimum
        """
        if t_overhead < 0:
            raise InvalidParameterError('t_oh', f'must be non-negative, got {t_overhead}')
        curve = RamseyService.ramsey_snr_curve(state, t2, stretch, t_grid, basis, readout_fidelity)
        times = curve.times
        overhead = [c / (t + t_overhead) for c, t in zip(curve.cfi_omega, times)]
        best = int(np.argmax(overhead))
        best_time, best_value = times[best], overhead[best]

        if refine and len(times) > 2:
            lower = times[max(best - 1, 0)]
            upper = times[min(best + 1, len(times) - 1)]

            def negative_snr(t):
                cfi = RamseyService.ramsey_cfi_omega(state, t, t2, stretch, basis, readout_fidelity)
                return -cfi / (t + t_overhead)

            result = minimize_scalar(
                negative_snr, bounds=(lower, upper), method='bounded',
                options={'xatol': 1e-6 * (upper - lower)},
            )
            if result.success and -result.fun > best_value:
                best_time, best_value = float(result.x), float(-result.fun)

        n = state.n_spins
        reference = ReferenceOptima(
            css_time=RamseyService.optimal_time_css(t2, stretch),
            ghz_time=RamseyService.optimal_time_ghz(t2, stretch, n),
            ghz_css_ratio=RamseyService.ghz_css_ratio(n, stretch),
        )
        logger.info(
            f'Ramsey optimum with t_oh={t_overhead:.3g} s: t_R={best_time:.4g} s, '
            f'SNR^2={best_value:.4g}'
        )
        return curve.model_copy(update={
            't_overhead': t_overhead,
            'snr_overhead': tuple(overhead),
            'best_time': best_time,
            'best_value': best_value,
            'reference': reference,
        })

    @staticmethod
    def optimal_time_css(t2: float, stretch: float) -> float:
        """argmax_t t^2 exp(-2 (t/T2)^nu) = T2 / nu^(1/nu)."""
        return t2 / stretch ** (1.0 / stretch)

    @staticmethod
    def optimal_time_ghz(t2: float, stretch: float, n: int) -> float:
        """argmax_t n^2 t^2 exp(-2 n (t/T2)^nu) = T2 / (n nu)^(1/nu)."""
        return t2 / (n * stretch) ** (1.0 / stretch)

    @staticmethod
    def ghz_css_ratio(n: int, stretch: float) -> float:
        """Peak GHZ over peak CSS SNR^2 when the overhead dominates: n^(1 - 2/nu)."""
        return n ** (1.0 - 2.0 / stretch)

    @staticmethod
    def single_qubit_oracle(omega: float, gamma: float, t: float) -> tuple[float, float]:
        """
        Closed-form single-qubit Ramsey values.

        Args:
            omega: Signal (rad/s)
            gamma: Dephasing rate, coherence decays as exp(-2 gamma t)
            t: Sensing time (s)

        Returns:
            tuple: (P0, CFI_omega) with P0 = 1/2 + exp(-2 gamma t) sin(omega t)/2
            the probability of the ground state |down>
        """
        if gamma < 0:
            raise InvalidParameterError('gamma', f'must be non-negative, got {gamma}')
        decay = math.exp(-2.0 * gamma * t)
        p0 = 0.5 + 0.5 * decay * math.sin(omega * t)
        if gamma == 0.0:
            return p0, t * t
        cfi = t * t * math.cos(omega * t) ** 2 / (math.exp(4.0 * gamma * t) - math.sin(omega * t) ** 2)
        return p0, cfi
