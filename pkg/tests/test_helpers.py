import logging
import os
from unittest import mock

import click

from locdisc.cli.helpers import CliConfig, check_gap, check_identities, read_config_file, setup_loghandlers_from_args
from locdisc.exceptions import BoundViolationError, IdentityCheckError
from locdisc.sdp_core import InteriorPointSolver
from locdisc.serializers import Table
from tests import LocdiscTestCase
from tests.fixtures import InfeasibleSolver


class TestHelpers(LocdiscTestCase):
    def test_read_config_file(self):
        settings = read_config_file('tests.config_files.dummy')
        self.assertEqual(settings['SEED'], 7)
        self.assertEqual(settings['DELTA_GRID'], '0:0.5:1')
        self.assertNotIn('__name__', settings)

    def test_config_module_fills_unset_options(self):
        cli_config = CliConfig(config='tests.config_files.dummy')
        self.assertEqual(cli_config.seed, 7)
        self.assertEqual(cli_config.restarts, 3)
        self.assertEqual(cli_config.format, 'json')
        self.assertEqual(cli_config.grid(None, 'DELTA_GRID', '0:0.1:1'), '0:0.5:1')

    def test_command_line_wins_over_config_module(self):
        cli_config = CliConfig(config='tests.config_files.dummy', seed=11, format='csv')
        self.assertEqual(cli_config.seed, 11)
        self.assertEqual(cli_config.format, 'csv')
        self.assertEqual(cli_config.grid('0,1', 'DELTA_GRID', '0:0.1:1'), '0,1')

    def test_defaults(self):
        cli_config = CliConfig()
        self.assertEqual(cli_config.seed, 0)
        self.assertEqual(cli_config.restarts, 20)
        self.assertEqual(cli_config.tol, 1e-8)
        self.assertIsInstance(cli_config.solver, InteriorPointSolver)
        self.assertEqual(cli_config.output_path('region'), os.path.join('.', 'region.csv'))

    def test_output_path(self):
        self.assertEqual(CliConfig(out='x/y.csv').output_path('region'), 'x/y.csv')
        cli_config = CliConfig(output_dir='results', format='json')
        self.assertEqual(cli_config.output_path('energy'), os.path.join('results', 'energy.json'))

    def test_solver_class(self):
        cli_config = CliConfig(solver_class='tests.fixtures.InfeasibleSolver')
        self.assertIsInstance(cli_config.solver, InfeasibleSolver)
        cli_config = CliConfig(solver_class='tests.fixtures.InfeasibleSolver', workers=2)
        self.assertEqual(cli_config.solver, 'tests.fixtures.InfeasibleSolver')

    def test_invalid_options(self):
        for kwargs in (
            {'config': 'tests.config_files.no_such_module'},
            {'solver_class': 'locdisc.sdp_core.NoSuchSolver'},
            {'seed': -1},
            {'restarts': 0},
            {'tol': 0.0},
            {'tol': float('inf')},
            {'max_iterations': 0},
            {'format': 'xml'},
            {'workers': 0},
            {'verbose': True, 'quiet': True},
        ):
            with self.assertRaises(click.BadParameter, msg=str(kwargs)):
                CliConfig(**kwargs)

    def test_header(self):
        header = CliConfig(seed=5).header('fidelity', {'N': 3})
        self.assertEqual(header['command'], 'fidelity')
        self.assertEqual(header['N'], 3)
        self.assertEqual(header['seed'], 5)
        self.assertEqual(header['solver'], 'locdisc.sdp_core.InteriorPointSolver')
        self.assertIn('locdisc_version', header)

    def test_check_identities(self):
        table = Table({}, ['delta', 'identity_residual'], [[0.0, 1e-13], [0.5, -2e-11]])
        check_identities(table, ['identity_residual'])
        table.rows.append([1.0, 1e-6])
        with self.assertRaises(IdentityCheckError):
            check_identities(table, ['identity_residual'])
        table.rows[-1] = [1.0, float('nan')]
        with self.assertRaises(IdentityCheckError):
            check_identities(table, ['identity_residual'])

    def test_check_gap(self):
        check_gap(0.1, 'row')
        check_gap(-5e-9, 'row')
        with self.assertRaises(BoundViolationError) as raised:
            check_gap(0.5 - 0.75, 'N=4 delta=0')
        self.assertIn('N=4 delta=0', str(raised.exception))
        self.assertIsInstance(raised.exception, IdentityCheckError)

    @mock.patch('locdisc.cli.helpers.setup_loghandlers')
    def test_log_levels(self, setup_mock):
        setup_loghandlers_from_args(True, False, '%H', '%(message)s')
        self.assertEqual(setup_mock.call_args[0][0], 'DEBUG')
        setup_loghandlers_from_args(False, True, '%H', '%(message)s')
        self.assertEqual(setup_mock.call_args[0][0], 'WARNING')
        setup_loghandlers_from_args(False, False, '%H', '%(message)s')
        self.assertEqual(setup_mock.call_args[0][0], 'INFO')
        with self.assertRaises(RuntimeError):
            setup_loghandlers_from_args(True, True, '%H', '%(message)s')

    def test_dict_config(self):
        with mock.patch('logging.config.dictConfig') as dict_config:
            CliConfig(config='tests.config_files.dummy_logging')
        self.assertEqual(dict_config.call_args[0][0]['version'], 1)
        logging.getLogger('locdisc').handlers.clear()
