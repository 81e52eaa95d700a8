"""
Result Store - per-instance JSON files, database rows and CSV aggregates.
"""
import csv
import logging
import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
from pydantic import ValidationError

from dipolarvqe.exceptions import RecordNotFoundError
from experiments.dto import InstanceResult
from experiments.models import ResultRecord

logger = logging.getLogger(__name__)

AGGREGATE_COLUMNS = ('n', 'm', 'seed', 'cfi', 'fdd_T', 'generations', 'wall_s')
SUMMARY_COLUMNS = ('n', 'm', 'count', 'cfi_mean', 'cfi_se', 'fdd_T_mean', 'fdd_T_se')


def standard_error(values: list[float]) -> float:
    """Sample standard deviation over sqrt(k); zero for a single value."""
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


class ResultStore:
    """
    Results of one output directory.

    Completed instances are written to <out>/records/<instance key>.json and
    inserted into the ResultRecord table; failed ones go to
    <out>/records/failed/ so that a rerun retries them.
    """

    def __init__(self, out: Path | str):
        self.out = Path(out)
        self.records_dir = self.out / 'records'
        self.failed_dir = self.records_dir / 'failed'

    @property
    def aggregate_path(self) -> Path:
        return self.out / 'aggregate.csv'

    @property
    def summary_path(self) -> Path:
        return self.out / 'summary.csv'

    def record_path(self, instance_key: str) -> Path:
        return self.records_dir / f'{instance_key}.json'

    def is_complete(self, instance_key: str) -> bool:
        return self.record_path(instance_key).exists()

    def save(self, result: InstanceResult) -> Path:
        """
        Persist one instance result.

        Returns:
            Path: JSON file written
        """
        if result.ok:
            path = self.record_path(result.instance_key)
        else:
            stamp = result.created_at.strftime('%Y%m%dT%H%M%S%f')
            path = self.failed_dir / f'{result.instance_key}-{stamp}.json'
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(result.model_dump_json(indent=2))

        ResultRecord.objects.create(
            config_hash=result.config_hash,
            instance_key=result.instance_key,
            n=result.n,
            m=result.m,
            seed=str(result.seed),
            status=result.status,
            payload=result.model_dump(mode='json'),
            error_message=(result.error or {}).get('message'),
            version=result.version,
        )
        logger.debug(f'Stored {result.status} record {result.instance_key[:12]} at {path}')
        return path

    @staticmethod
    def read(path: Path) -> InstanceResult:
        try:
            return InstanceResult.model_validate_json(Path(path).read_text())
        except (OSError, ValidationError) as e:
            raise RecordNotFoundError(str(path)) from e

    def load_record(self, reference: str) -> InstanceResult:
        """
        Load a record by file path or instance key.

        Keys are looked up in this directory first, then in the database
        (latest completed row).

        Raises:
            RecordNotFoundError: Nothing matches the reference
        """
        path = Path(reference)
        if path.is_file():
            return self.read(path)
        if self.is_complete(reference):
            return self.read(self.record_path(reference))

        row = (
            ResultRecord.objects
            .filter(instance_key=reference, status=ResultRecord.STATUS_OK)
            .order_by('-created_at', '-id')
            .first()
        )
        if row is None:
            raise RecordNotFoundError(reference)
        return InstanceResult.model_validate(row.payload)

    def completed(self, instance_keys: Iterable[str]) -> list[InstanceResult]:
        """Completed results in the given key order; missing keys are skipped."""
        return [
            self.read(self.record_path(key))
            for key in instance_keys
            if self.is_complete(key)
        ]

    def write_aggregate(self, results: list[InstanceResult], path: Optional[Path] = None) -> Path:
        """One row per completed instance, columns in AGGREGATE_COLUMNS order."""
        path = path or self.aggregate_path
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='') as handle:
            writer = csv.DictWriter(handle, fieldnames=AGGREGATE_COLUMNS)
            writer.writeheader()
            for result in results:
                writer.writerow(result.aggregate_row())
        return path

    def write_summary(self, results: list[InstanceResult], path: Optional[Path] = None) -> Path:
        """Mean and standard error across seeds for every (n, m)."""
        groups = defaultdict(list)
        for result in results:
            groups[(result.n, result.m)].append(result)

        path = path or self.summary_path
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='') as handle:
            writer = csv.DictWriter(handle, fieldnames=SUMMARY_COLUMNS)
            writer.writeheader()
            for (n, m), group in sorted(groups.items()):
                cfi = [r.metrics.cfi for r in group]
                fdd_t = [r.metrics.fdd_t for r in group]
                writer.writerow({
                    'n': n,
                    'm': m,
                    'count': len(group),
                    'cfi_mean': float(np.mean(cfi)),
                    'cfi_se': standard_error(cfi),
                    'fdd_T_mean': float(np.mean(fdd_t)),
                    'fdd_T_se': standard_error(fdd_t),
                })
        return path

    @staticmethod
    def read_csv(path: Path) -> list[dict]:
        with open(path, newline='') as handle:
            return list(csv.DictReader(handle))
