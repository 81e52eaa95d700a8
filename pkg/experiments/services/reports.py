"""
Report Service - analysis, Ramsey, oracle and controllability output files.
"""
import csv
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

from analysis.services import (
    ClusterService,
    CutoffService,
    EntropyService,
    ReferenceStateService,
    SqueezingService,
    WignerService,
)
from controllability.services import LieAlgebraService
from dipolarvqe.exceptions import InvalidParameterError, UndefinedSqueezingError
from engine.dto import QuantumState
from engine.services import GateService
from ensemble.dto import SpinConfiguration
from experiments.dto import InstanceResult, NoiseSection
from metrology.dto import MeasurementBasis
from metrology.services import RamseyService
from optimizer.services import EntanglerOptimizationService

logger = logging.getLogger(__name__)

ANALYSES = ('wigner', 'entropy', 'clusters', 'squeezing', 'cutoff')

# cutoff sweep in units of the mean nearest-neighbour coupling
CUTOFF_MULTIPLES = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)


def write_rows(path: Path, columns: Sequence[str], rows: Iterable[dict]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns))
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_json(path: Path, document: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=True))
    return path


class ReportService:
    """Service for the files behind every figure-style output."""

    @staticmethod
    def resimulate(result: InstanceResult) -> tuple[SpinConfiguration, QuantumState]:
        """
        Rebuild the recorded state from its configuration and theta.

        Raises:
            InvalidParameterError: Record of a failed instance
        """
        if not result.ok:
            raise InvalidParameterError('record', f'instance {result.instance_key[:12]} did not complete')
        configuration = SpinConfiguration.from_document(result.configuration)
        noise = NoiseSection.model_validate(result.config['noise']).prep_noise()
        state = EntanglerOptimizationService.prepare_state(configuration, result.record.theta, noise)
        return configuration, state

    @staticmethod
    def reference(kind: str, n: int, phase: Optional[float] = None) -> QuantumState:
        return ReferenceStateService.reference_state(kind, n, phase=phase)

    @staticmethod
    def analyze(
        state: QuantumState,
        analyses: Sequence[str],
        out: Path,
        result: Optional[InstanceResult] = None,
        resolution: Optional[tuple[int, int]] = None,
        cutoffs: Optional[Sequence[float]] = None,
    ) -> dict[str, Path]:
        """
        Write the requested analyses of one state.

        Args:
            state: State to characterize
            analyses: Any of wigner, entropy, clusters, squeezing, cutoff
            out: Output directory
            result: Source record, required by the cutoff study
            resolution: Wigner (polar, azimuthal) points
            cutoffs: Cutoff frequencies in Hz, default multiples of f_dd

        Returns:
            dict: Analysis name -> file written
        """
        unknown = sorted(set(analyses) - set(ANALYSES))
        if unknown:
            raise InvalidParameterError('analyses', f'unknown analyses {unknown}, choose from {list(ANALYSES)}')
        if 'cutoff' in analyses and result is None:
            raise InvalidParameterError('analyses', 'the cutoff study needs an optimized record')

        written = {}
        if 'wigner' in analyses:
            grid = WignerService.wigner_distribution(state, resolution)
            written['wigner'] = write_rows(out / 'wigner.csv', ('theta', 'phi', 'w'), grid.rows())
            written['wigner_meta'] = write_json(out / 'wigner_meta.json', {
                'projection': 'symmetric-subspace',
                'symmetric_weight': grid.symmetric_weight,
                'resolution': [len(grid.theta), len(grid.phi)],
                'integral': grid.integral(),
            })
        if 'entropy' in analyses:
            entropies = EntropyService.single_spin_entropies(state)
            written['entropy'] = write_rows(
                out / 'entropy.csv', ('spin', 'entropy'),
                ({'spin': i, 'entropy': s} for i, s in enumerate(entropies)),
            )
        if 'clusters' in analyses:
            partition = ClusterService.cluster_partition(state)
            written['clusters'] = write_json(out / 'clusters.json', {
                'blocks': [list(block) for block in partition.blocks],
                'sizes': partition.sizes,
                'entropies': list(partition.entropies),
                'threshold': partition.threshold,
            })
        if 'squeezing' in analyses:
            try:
                report = SqueezingService.squeezing_parameter(state)
                document = {'defined': True, **report.model_dump()}
            except UndefinedSqueezingError as e:
                document = {'defined': False, **e.to_dict()}
            written['squeezing'] = write_json(out / 'squeezing.json', document)
        if 'cutoff' in analyses:
            configuration = SpinConfiguration.from_document(result.configuration)
            f_dd = result.record.f_dd_hz
            frequencies = list(cutoffs) if cutoffs is not None else [k * f_dd for k in CUTOFF_MULTIPLES]
            sweep = CutoffService.cutoff_sweep(configuration, result.record.theta, frequencies)
            written['cutoff'] = write_rows(
                out / 'cutoff.csv', ('f_cutoff_hz', 'fidelity'),
                ({'f_cutoff_hz': f, 'fidelity': value} for f, value in sweep),
            )
        logger.info(f'Wrote {", ".join(written)} for N={state.n_spins} to {out}')
        return written

    @staticmethod
    def ramsey(
        state: QuantumState,
        t2: float,
        stretch: float,
        t_grid: Sequence[float],
        t_overhead: float,
        out: Path,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
    ) -> dict[str, Path]:
        """
        SNR curves with and without overhead plus the optimum summary.

        Raises:
            InvalidParameterError: stretch < 1 or a bad grid
            IntegrationError: Integrator failed at the reported time
        """
        if stretch < 1:
            raise InvalidParameterError('stretch', f'must be at least 1, got {stretch}')
        curve = RamseyService.snr_with_overhead(
            state, t2, stretch, t_overhead, t_grid, basis, readout_fidelity,
        )
        summary = {
            'n': state.n_spins,
            't2_s': t2,
            'stretch': stretch,
            't_overhead_s': t_overhead,
            'best_time_s': curve.best_time,
            'best_snr2': curve.best_value,
            'css_time_s': curve.reference.css_time,
            'ghz_time_s': curve.reference.ghz_time,
            'ghz_css_ratio': curve.reference.ghz_css_ratio,
        }
        return {
            'curve': write_rows(out / 'ramsey.csv', ('t_s', 'cfi_omega', 'snr2', 'snr2_overhead'), curve.rows()),
            'summary': write_json(out / 'ramsey_summary.json', summary),
        }

    @staticmethod
    def oracle_rows(omega: float, gammas: Sequence[float], times: Sequence[float]) -> list[dict]:
        """
        Closed-form single-qubit Ramsey values next to the simulated pipeline.

        The pipeline runs the +x spin with nu = 1 and T2 = 1/(2 gamma).
        """
        plus = GateService.initial_state(1)
        rows = []
        for gamma in gammas:
            t2 = math.inf if gamma == 0 else 1.0 / (2.0 * gamma)
            for t in times:
                p0, cfi = RamseyService.single_qubit_oracle(omega, gamma, t)
                rho = RamseyService.readout_state(plus, t, t2, 1.0, omega)
                rows.append({
                    'gamma': gamma,
                    't_s': t,
                    'p0': p0,
                    'cfi_omega': cfi,
                    'p0_simulated': float(rho.probabilities()[1]),
                    'cfi_omega_simulated': RamseyService.ramsey_cfi_omega(plus, t, t2, 1.0, omega=omega),
                })
        return rows

    @staticmethod
    def controllability(n: int, system: str, out: Optional[Path] = None) -> dict:
        document = LieAlgebraService.controllability_report(n, system).to_document()
        if out is not None:
            write_json(out / f'controllability-{system}-n{n}.json', document)
        return document
