"""
Tests for the experiment management commands.
"""
import json
import math
import shutil
import tempfile
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from io import StringIO
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from analysis.services import EntropyService
from dipolarvqe.exceptions import NonFiniteCostError
from experiments.services import ReportService, ResultStore
from experiments.services.reports import CUTOFF_MULTIPLES
from metrology.services import RamseyService

RUN_CONFIG = """\
[configuration]
kind = "chain"
n = 3
seed_count = 1

[circuit]
m = 1

[cmaes]
max_generations = 30
"""


def read_rows(path):
    return ResultStore.read_csv(path)


@pytest.mark.django_db
class TestOptimizeCommand(TestCase):
    """Tests for generate_config and optimize."""

    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)
        self.config_path = self.tmp / 'run.toml'
        self.config_path.write_text(RUN_CONFIG)

    def test_generate_config_to_stdout(self):
        out = StringIO()
        call_command('generate_config', stdout=out)
        document = tomllib.loads(out.getvalue())
        assert document['configuration']['kind'] == 'chain'

    def test_generate_config_with_preset(self):
        target = self.tmp / 'nv.toml'
        call_command('generate_config', preset='nv-ensemble', output=target, stdout=StringIO())
        document = tomllib.loads(target.read_text())
        assert document['configuration']['model'] == 'nv-effective'
        assert document['noise']['stretch'] == 2.0

    def test_optimize_writes_results(self):
        out = StringIO()
        call_command('optimize', config=self.config_path, out=str(self.tmp / 'results'), stdout=out)
        assert '1 completed' in out.getvalue()
        assert len(read_rows(self.tmp / 'results' / 'aggregate.csv')) == 1

    def test_seed_flag_changes_instances(self):
        call_command('optimize', config=self.config_path, out=str(self.tmp / 'a'), seed=1, stdout=StringIO())
        call_command('optimize', config=self.config_path, out=str(self.tmp / 'b'), seed=2, stdout=StringIO())
        a = read_rows(self.tmp / 'a' / 'aggregate.csv')[0]['seed']
        b = read_rows(self.tmp / 'b' / 'aggregate.csv')[0]['seed']
        assert a != b

    def test_resume_flag(self):
        call_command('optimize', config=self.config_path, out=str(self.tmp / 'r'), stdout=StringIO())
        out = StringIO()
        call_command('optimize', config=self.config_path, out=str(self.tmp / 'r'), stdout=out)
        assert '0 completed, 1 skipped' in out.getvalue()
        out = StringIO()
        call_command('optimize', config=self.config_path, out=str(self.tmp / 'r'), resume=False, stdout=out)
        assert '1 completed, 0 skipped' in out.getvalue()

    def test_invalid_config_exits_with_one(self):
        bad = self.tmp / 'bad.toml'
        bad.write_text('[circuit]\nlayers = 3\n')
        with pytest.raises(CommandError) as raised:
            call_command('optimize', config=bad, stdout=StringIO())
        assert raised.value.returncode == 1
        assert 'circuit.layers' in str(raised.value)

    def test_partial_failure_exits_with_two(self):
        with patch(
            'optimizer.services.costs.EntanglerOptimizationService.optimize_entangler',
            side_effect=NonFiniteCostError(10),
        ):
            with pytest.raises(CommandError) as raised:
                call_command('optimize', config=self.config_path, out=str(self.tmp / 'f'), stdout=StringIO())
        assert raised.value.returncode == 2

    def test_internal_error_exits_with_three(self):
        with patch('experiments.services.runner.ExperimentService.run', side_effect=RuntimeError('boom')):
            with pytest.raises(CommandError) as raised:
                call_command('optimize', config=self.config_path, stdout=StringIO())
        assert raised.value.returncode == 3


@pytest.mark.django_db
class TestAnalyzeCommand(TestCase):
    """Tests for the analysis files."""

    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)
        config_path = self.tmp / 'run.toml'
        config_path.write_text(RUN_CONFIG)
        self.results = self.tmp / 'results'
        call_command('optimize', config=config_path, out=str(self.results), stdout=StringIO())
        self.record_path = next((self.results / 'records').glob('*.json'))

    def test_record_analyses(self):
        out = self.tmp / 'analysis'
        call_command('analyze', record=str(self.record_path), out=out, resolution='16,32', stdout=StringIO())

        assert len(read_rows(out / 'wigner.csv')) == 16 * 32
        meta = json.loads((out / 'wigner_meta.json').read_text())
        assert meta['projection'] == 'symmetric-subspace'
        assert meta['resolution'] == [16, 32]
        assert meta['integral'] == pytest.approx(meta['symmetric_weight'], abs=1e-6)

        result = ResultStore.read(self.record_path)
        _, state = ReportService.resimulate(result)
        entropies = [float(row['entropy']) for row in read_rows(out / 'entropy.csv')]
        assert entropies == EntropyService.single_spin_entropies(state)

        assert len(read_rows(out / 'cutoff.csv')) == len(CUTOFF_MULTIPLES)
        clusters = json.loads((out / 'clusters.json').read_text())
        assert sorted(i for block in clusters['blocks'] for i in block) == [0, 1, 2]
        assert 'defined' in json.loads((out / 'squeezing.json').read_text())

    def test_record_by_key(self):
        key = self.record_path.stem
        out = self.tmp / 'by-key'
        call_command('analyze', record=key, results=self.results, out=out, analyses='entropy', stdout=StringIO())
        assert len(read_rows(out / 'entropy.csv')) == 3
        assert not (out / 'wigner.csv').exists()

    def test_cat_state_is_one_cluster(self):
        out = self.tmp / 'ghz'
        call_command('analyze', state='ghz-x', n=3, analyses='clusters', out=out, stdout=StringIO())
        assert json.loads((out / 'clusters.json').read_text())['blocks'] == [[0, 1, 2]]

    def test_missing_record(self):
        with pytest.raises(CommandError) as raised:
            call_command('analyze', record='0' * 64, results=self.results, stdout=StringIO())
        assert raised.value.returncode == 1

    def test_cutoff_needs_record(self):
        with pytest.raises(CommandError) as raised:
            call_command('analyze', state='css', n=2, analyses='cutoff', out=self.tmp / 'x', stdout=StringIO())
        assert raised.value.returncode == 1


class TestRamseyCommand(SimpleTestCase):
    """Tests for the Ramsey curve files."""

    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)

    def ramsey(self, name, **options):
        out = self.tmp / name
        call_command('ramsey', out=out, stdout=StringIO(), **options)
        return read_rows(out / 'ramsey.csv'), json.loads((out / 'ramsey_summary.json').read_text())

    def test_single_spin_matches_oracle(self):
        times = [0.1, 0.3, 0.6, 1.0, 1.5]
        rows, _ = self.ramsey('css1', state='css', n=1, t2=1.0, stretch=1.0, t_grid=times)
        assert [float(r['t_s']) for r in rows] == times
        for row, t in zip(rows, times):
            _, cfi = RamseyService.single_qubit_oracle(0.0, 0.5, t)
            assert abs(float(row['cfi_omega']) - cfi) < 1e-6

    def test_overhead_optimum(self):
        grid = list(np.linspace(0.02, 2.0, 100))
        _, summary = self.ramsey('oh', state='css', n=1, t2=1.0, stretch=2.0, t_grid=grid, t_oh=1e4)
        assert summary['best_time_s'] == pytest.approx(1 / math.sqrt(2), rel=0.01)
        assert summary['css_time_s'] == pytest.approx(1 / math.sqrt(2))

    def test_cat_beats_css_under_non_markovian_noise(self):
        grid = list(np.linspace(0.02, 1.5, 40))
        _, css = self.ramsey('css4', state='css', n=4, t2=1.0, stretch=4.0, t_grid=grid)
        _, ghz = self.ramsey('ghz4', state='ghz-y', n=4, t2=1.0, stretch=4.0, t_grid=grid)
        assert ghz['best_snr2'] > css['best_snr2']

    def test_rejects_stretch_below_one(self):
        with pytest.raises(CommandError) as raised:
            call_command('ramsey', state='css', n=1, t2=1.0, stretch=0.5, out=self.tmp / 'x', stdout=StringIO())
        assert raised.value.returncode == 1


class TestSmallCommands(SimpleTestCase):
    """Tests for oracle and controllability."""

    def test_oracle_agrees_with_pipeline(self):
        out = StringIO()
        call_command('oracle', gamma=[0.0, 0.1, 0.3], t=[0.4, 1.2], stdout=out)
        lines = out.getvalue().strip().splitlines()
        assert len(lines) == 1 + 6 + 1
        assert float(lines[-1].split()[-1]) < 1e-6

    def test_oracle_file(self):
        tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, tmp)
        call_command('oracle', out=tmp, stdout=StringIO())
        assert len(read_rows(tmp / 'oracle.csv')) == 9

    def test_controllability_reports(self):
        cases = ((2, 'dipolar', 8, 9), (3, 'symmetric-ising', 19, 20), (1, 'global-only', 3, 4))
        for n, system, dimension, with_identity in cases:
            out = StringIO()
            call_command('controllability', n=n, system=system, stdout=out)
            document = json.loads(out.getvalue())
            assert (document['dimension'], document['dimension_with_identity']) == (dimension, with_identity)

    def test_controllability_file(self):
        tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, tmp)
        call_command('controllability', n=2, system='dipolar', out=tmp, stdout=StringIO())
        document = json.loads((tmp / 'controllability-dipolar-n2.json').read_text())
        assert document['verdict'] == 'subspace'

    def test_controllability_rejects_large_systems(self):
        with pytest.raises(CommandError) as raised:
            call_command('controllability', n=6, system='symmetric-ising', stdout=StringIO())
        assert raised.value.returncode == 1
