import json
import math
import os
from unittest import mock

import pytest
from click.testing import CliRunner

from locdisc.cli import main
from locdisc.cli.helpers import CONFIG_ERROR_EXIT, SOLVER_ERROR_EXIT
from locdisc.seesaw import SeesawResult
from locdisc.serializers import CsvSerializer
from tests import LocdiscTestCase, slow


class CLITestCase(LocdiscTestCase):
    @pytest.fixture(autouse=True)
    def set_tmpdir(self, tmpdir):
        self.tmpdir = tmpdir

    def assert_normal_execution(self, result):
        if result.exit_code == 0:
            return True
        else:
            print('Non normal execution')
            print(f'Exit Code: {result.exit_code}')
            print(f'Output: {result.output}')
            print(f'Exception: {result.exception}')
            self.assertEqual(result.exit_code, 0)

    def path(self, name: str) -> str:
        return os.path.join(str(self.tmpdir), name)

    def invoke(self, *args: str):
        return CliRunner().invoke(main, list(args))

    def load_csv(self, name: str):
        with open(self.path(name), 'rb') as fh:
            return CsvSerializer.loads(fh.read())


class TestLocdiscCli(CLITestCase):
    """Test the locdisc command line tool"""

    def test_help_and_version(self):
        self.assert_normal_execution(self.invoke('--help'))
        result = self.invoke('--version')
        self.assert_normal_execution(result)
        self.assertIn('version', result.output)

    def test_tradeoff(self):
        result = self.invoke('tradeoff', '--delta-grid', '0:0.5:1', '-o', self.path('tradeoff.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('tradeoff.csv')
        self.assertEqual(table.header['command'], 'tradeoff')
        self.assertEqual(table.columns, ['delta', 'ps_n', 'chsh_bound', 'chsh_from_ps', 'identity_residual'])
        last = dict(zip(table.columns, table.rows[-1]))
        self.assertEqual(last['delta'], 1.0)
        self.assertAlmostEqual(last['ps_n'], 0.5, places=14)
        self.assertAlmostEqual(last['chsh_bound'], 0.853553, places=6)
        self.assertAlmostEqual(last['chsh_from_ps'], last['chsh_bound'], places=12)

    def test_tradeoff_four_states(self):
        result = self.invoke('tradeoff', '--n', '4', '--delta-grid', '0', '-o', self.path('four.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('four.csv')
        row = dict(zip(table.columns, table.rows[0]))
        self.assertEqual(row['chsh_bound'], 0.5)
        self.assertTrue(math.isnan(row['chsh_from_ps']))

    def test_tradeoff_json_is_strict(self):
        result = self.invoke(
            'tradeoff', '--n', '4', '--delta-grid', '0', '--format', 'json', '-o', self.path('four.json')
        )
        self.assert_normal_execution(result)
        with open(self.path('four.json')) as fh:
            text = fh.read()
        self.assertNotIn('NaN', text)
        document = json.loads(text)
        row = dict(zip(document['columns'], document['rows'][0]))
        self.assertIsNone(row['chsh_from_ps'])

    def test_tradeoff_three_state_gap(self):
        result = self.invoke('tradeoff', '--n', '3', '--delta-grid', '0.5,0.57', '-o', self.path('three.csv'))
        self.assert_normal_execution(result)
        bounds = self.load_csv('three.csv').column('chsh_bound')
        self.assertLess(bounds[0], 0.75)
        self.assertGreater(bounds[1], 0.75)

    def test_tradeoff_with_seesaw(self):
        result = self.invoke(
            'tradeoff', '--delta-grid', '1', '--seesaw', '--restarts', '10', '-o', self.path('seesaw_tradeoff.csv')
        )
        self.assert_normal_execution(result)
        table = self.load_csv('seesaw_tradeoff.csv')
        row = dict(zip(table.columns, table.rows[0]))
        self.assertAlmostEqual(row['seesaw_value'], row['chsh_bound'], delta=1e-4)
        self.assertEqual(table.header['restarts'], 10)

    def test_region(self):
        result = self.invoke('region', '--delta', '0.8', '--po-grid', '0,0.8', '-o', self.path('region.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('region.csv')
        first, last = (dict(zip(table.columns, row)) for row in table.rows)
        self.assertAlmostEqual(first['local_bound'], 0.8, delta=2e-4)
        self.assertAlmostEqual(first['global_bound'], 0.8, delta=1e-6)
        self.assertAlmostEqual(last['local_bound'], 0.2, delta=2e-4)
        self.assertAlmostEqual(last['global_bound'], 0.2, delta=1e-4)
        self.assertEqual(first['solver_status'], 'optimal')
        self.assertAlmostEqual(first['inconclusive_local_ps'], 0.8, places=12)

    def test_fidelity(self):
        result = self.invoke('fidelity', '--n', '3', '--delta-grid', '0:0.25:1', '-o', self.path('fidelity.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('fidelity.csv')
        first = dict(zip(table.columns, table.rows[0]))
        self.assertAlmostEqual(first['ps_n'], 1.0, places=14)
        self.assertAlmostEqual(first['fidelity_from_ps'], 1 / 3, places=14)

    def test_energy(self):
        result = self.invoke('energy', '--delta-grid', '0.5', '-o', self.path('energy.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('energy.csv')
        row = dict(zip(table.columns, table.rows[0]))
        self.assertAlmostEqual(row['alpha'], 0.25, places=15)
        self.assertAlmostEqual(row['ensemble_energy'], 0.25, places=12)
        self.assertAlmostEqual(row['ps_from_energy'], row['ps_n'], places=12)

    def test_visibility(self):
        result = self.invoke('visibility', '--delta-grid', '0,1', '-o', self.path('visibility.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('visibility.csv')
        last = dict(zip(table.columns, table.rows[-1]))
        self.assertAlmostEqual(last['nu_c'], 0.707107, places=6)
        self.assertAlmostEqual(last['threshold'], 0.707107, places=6)
        self.assertEqual(dict(zip(table.columns, table.rows[0]))['nu_c'], 1.0)

    def test_seesaw(self):
        result = self.invoke('seesaw', '--delta', '0.5', '--restarts', '10', '-o', self.path('seesaw.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('seesaw.csv')
        self.assertAlmostEqual(table.header['best_value'], 0.779508, delta=1e-4)
        self.assertEqual(table.columns, ['restart', 'iteration', 'value', 'converged'])
        self.assertEqual(sorted(set(table.column('restart'))), list(range(10)))

    def test_identical_seeds_give_identical_files(self):
        for name in ('first.csv', 'second.csv'):
            result = self.invoke('seesaw', '--delta', '1', '--seed', '3', '--restarts', '3', '-o', self.path(name))
            self.assert_normal_execution(result)
        with open(self.path('first.csv'), 'rb') as first, open(self.path('second.csv'), 'rb') as second:
            self.assertEqual(first.read(), second.read())

    def test_config_file(self):
        result = self.invoke('tradeoff', '-c', 'tests.config_files.dummy', '--output-dir', str(self.tmpdir))
        self.assert_normal_execution(result)
        with open(self.path('tradeoff.json')) as fh:
            document = json.load(fh)
        self.assertEqual(document['header']['seed'], 7)
        self.assertEqual(document['header']['delta_grid'], '0:0.5:1')
        self.assertEqual(len(document['rows']), 3)

    def test_config_file_logging(self):
        result = self.invoke('fidelity', '-c', 'tests.config_files.dummy_logging', '-o', self.path('logging.csv'))
        self.assert_normal_execution(result)
        self.assertEqual(len(self.load_csv('logging.csv').rows), 2)

    def test_output_dir_from_environment(self):
        result = CliRunner(env={'LOCDISC_OUTPUT_DIR': str(self.tmpdir)}).invoke(
            main, ['visibility', '--delta-grid', '0.5', '--format', 'json']
        )
        self.assert_normal_execution(result)
        self.assertTrue(os.path.exists(self.path('visibility.json')))

    def test_config_errors_exit_with_2(self):
        for args in (
            ('region', '--po-grid', '', '-o', self.path('empty.csv')),
            ('fidelity', '--delta-grid', '0:0.5:2', '-o', self.path('range.csv')),
            ('seesaw', '--restarts', '0', '-o', self.path('restarts.csv')),
            ('region', '--delta', '1.5', '--po-grid', '0', '-o', self.path('delta.csv')),
            ('energy', '--verbose', '--quiet', '-o', self.path('flags.csv')),
        ):
            result = self.invoke(*args)
            self.assertEqual(result.exit_code, CONFIG_ERROR_EXIT, msg=f'{args}: {result.output}')
            self.assertFalse(os.path.exists(args[-1]))

    def test_solver_failure_exits_with_3(self):
        result = self.invoke(
            'region',
            '--po-grid',
            '0',
            '--solver-class',
            'tests.fixtures.InfeasibleSolver',
            '-o',
            self.path('failed.csv'),
        )
        self.assertEqual(result.exit_code, SOLVER_ERROR_EXIT)
        self.assertFalse(os.path.exists(self.path('failed.csv')))

    def test_seesaw_respects_the_bound_for_four_orthogonal_states(self):
        result = self.invoke(
            'tradeoff', '--n', '4', '--delta-grid', '0', '--seesaw', '--restarts', '5', '-o', self.path('four.csv')
        )
        self.assert_normal_execution(result)
        table = self.load_csv('four.csv')
        row = dict(zip(table.columns, table.rows[0]))
        self.assertEqual(row['chsh_bound'], 0.5)
        self.assertGreaterEqual(row['seesaw_gap'], -1e-8)

    def test_seesaw_above_the_bound_exits_with_3(self):
        above = SeesawResult(best_value=0.75, best_assignment=None, trace=[0.75], converged=True)
        with mock.patch('locdisc.cli.cli.seesaw_run', return_value=above):
            for command, args in (
                ('tradeoff', ('--n', '4', '--delta-grid', '0', '--seesaw')),
                ('seesaw', ('--n', '4', '--delta', '0')),
            ):
                output = self.path(f'{command}.csv')
                result = self.invoke(command, *args, '-o', output)
                self.assertEqual(result.exit_code, SOLVER_ERROR_EXIT, msg=result.output)
                self.assertFalse(os.path.exists(output))

    @slow
    def test_region_default_grid(self):
        result = self.invoke('region', '--n', '3', '--delta', '0.5', '--workers', '2', '-o', self.path('full.csv'))
        self.assert_normal_execution(result)
        table = self.load_csv('full.csv')
        self.assertEqual(len(table.rows), 10)
        for gap in table.column('gap'):
            self.assertLessEqual(abs(gap), 2e-4)
