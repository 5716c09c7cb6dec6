"""Unit tests for CLI argument parsing and main function."""

import io
import json
import logging
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from shutil import rmtree
from unittest.mock import patch

from ptcfsk import analysis
from ptcfsk.errors import SinrGuardError
from ptcfsk.ptcfsk import EXIT_CONFIG, EXIT_FAILED, get_args, loggers, main
from ptcfsk.simulator import CurvePoint
from ptcfsk.validation import CheckResult

SMALL_RUN = """\
[experiment]
L = 16
packets = 20
chunk_packets = 10
grid = 4, 7
workers = 1
"""


class TestGetArgs(unittest.TestCase):
    """Test command-line argument parsing."""

    def test_ber_sim_defaults(self):
        with patch('sys.argv', ['ptcfsk', 'ber-sim']):
            args = get_args()
        self.assertEqual(args.command, 'ber-sim')
        self.assertIsNone(args.config)
        self.assertIsNone(args.seed)
        self.assertIsNone(args.workers)
        self.assertEqual(args.out, Path('results'))
        self.assertFalse(args.override_sinr_guard)
        self.assertFalse(args.verbose)
        self.assertFalse(args.quiet)

    def test_common_flags(self):
        with patch(
            'sys.argv',
            [
                'ptcfsk',
                'ber-sim',
                '-c',
                'run.ini',
                '-s',
                '7',
                '-n',
                '4',
                '-o',
                'out',
                '--override-sinr-guard',
                '-q',
            ],
        ):
            args = get_args()
        self.assertEqual(args.config, Path('run.ini'))
        self.assertEqual(args.seed, 7)
        self.assertEqual(args.workers, 4)
        self.assertEqual(args.out, Path('out'))
        self.assertTrue(args.override_sinr_guard)
        self.assertTrue(args.quiet)

    def test_long_flags(self):
        with patch(
            'sys.argv',
            ['ptcfsk', 'multi-pu', '--seed', '3', '--workers', '2', '-v'],
        ):
            args = get_args()
        self.assertEqual(args.seed, 3)
        self.assertEqual(args.workers, 2)
        self.assertTrue(args.verbose)

    def test_ber_approx_options(self):
        with patch(
            'sys.argv',
            ['ptcfsk', 'ber-approx', '--z-max', '2', '--metric', 'pairwise'],
        ):
            args = get_args()
        self.assertEqual(args.z_max, 2)
        self.assertEqual(args.metric, 'pairwise')

    def test_ber_approx_bad_metric(self):
        with (
            patch('sys.argv', ['ptcfsk', 'ber-approx', '--metric', 'soft']),
            patch('sys.stderr', new_callable=io.StringIO),
            self.assertRaises(SystemExit),
        ):
            get_args()

    def test_throughput_window(self):
        with patch(
            'sys.argv', ['ptcfsk', 'throughput', '--window-slots', '500']
        ):
            args = get_args()
        self.assertEqual(args.window_slots, 500)

    def test_enumerate_paths_depth(self):
        with patch('sys.argv', ['ptcfsk', 'enumerate-paths', '--z', '1']):
            args = get_args()
        self.assertEqual(args.z, 1)

    def test_validate_level(self):
        with patch('sys.argv', ['ptcfsk', 'validate']):
            self.assertEqual(get_args().level, 'quick')
        with patch('sys.argv', ['ptcfsk', 'validate', '--level', 'full']):
            self.assertEqual(get_args().level, 'full')

    def test_subcommand_required(self):
        with (
            patch('sys.argv', ['ptcfsk']),
            patch('sys.stderr', new_callable=io.StringIO),
            self.assertRaises(SystemExit),
        ):
            get_args()


class _OutDirTestCase(unittest.TestCase):
    def setUp(self):
        self.tmpdir = Path(tempfile.mkdtemp())
        self.out = self.tmpdir / 'out'
        self.levels = {lgr.name: lgr.level for lgr in loggers}

    def tearDown(self):
        rmtree(self.tmpdir)
        for name, level in self.levels.items():
            logging.getLogger(name).setLevel(level)

    def _config(self, text: str) -> Path:
        path = self.tmpdir / 'run.ini'
        path.write_text(text, encoding='utf-8')
        return path

    def _run(self, *argv: str) -> int:
        """Run main and return its exit code."""
        with patch('sys.argv', ['ptcfsk', *argv, '-o', str(self.out), '-q']):
            try:
                main()
            except SystemExit as e:
                return int(e.code or 0)
        return 0


class TestMain(_OutDirTestCase):
    """Test main() dispatch and exit codes."""

    def test_ber_sim_writes_artifacts(self):
        code = self._run('ber-sim', '-c', str(self._config(SMALL_RUN)))
        self.assertEqual(code, 0)
        self.assertTrue((self.out / 'ber-sim.csv').is_file())
        self.assertTrue((self.out / 'ber-sim-manifest.json').is_file())
        self.assertTrue((self.out / 'ber-sim-report.html').is_file())
        lines = (self.out / 'ber-sim.csv').read_text().splitlines()
        self.assertEqual(len(lines), 3)

    def test_same_seed_same_csv(self):
        config = str(self._config(SMALL_RUN))
        self._run('ber-sim', '-c', config, '-s', '11')
        self._run('ber-sim', '-c', config, '-s', '11')
        self.assertEqual(
            (self.out / 'ber-sim.csv').read_bytes(),
            (self.out / 'ber-sim_1.csv').read_bytes(),
        )

    def test_malformed_config(self):
        config = self._config('[experiment]\npackets = many\n')
        self.assertEqual(self._run('ber-sim', '-c', str(config)), EXIT_CONFIG)
        self.assertFalse(self.out.exists())

    def test_missing_config(self):
        missing = str(self.tmpdir / 'absent.ini')
        self.assertEqual(self._run('ber-sim', '-c', missing), EXIT_CONFIG)

    def test_bad_worker_count(self):
        self.assertEqual(self._run('ber-sim', '-n', '0'), EXIT_CONFIG)

    @patch('ptcfsk.ptcfsk.simulator.run_scheme')
    def test_sinr_guard_refusal(self, mock_run):
        mock_run.side_effect = SinrGuardError('PU on f2: SINR too low.')
        self.assertEqual(self._run('ber-sim', '-n', '1'), EXIT_FAILED)

    def test_ber_approx_columns(self):
        code = self._run('ber-approx', '--z-max', '1', '-n', '1')
        self.assertEqual(code, 0)
        header = (self.out / 'ber-approx.csv').read_text().splitlines()[0]
        self.assertEqual(header, 'H,x_value,ber_z0,ber_z1')

    def test_enumerate_paths_prints_spectrum(self):
        stdout = io.StringIO()
        with redirect_stdout(stdout):
            code = self._run('enumerate-paths', '-n', '1')
        self.assertEqual(code, 0)
        self.assertIn(
            'T(D) = 1*D^16 + 2*D^20 + 4*D^24 + 8*D^28', stdout.getvalue()
        )
        rows = (self.out / 'enumerate-paths.csv').read_text().splitlines()
        self.assertEqual(rows[0], 'd,inputs,symbols,input_weight')
        self.assertEqual(rows[1], '16,1 0 0,3 2 3,1')
        self.assertEqual(len(rows), 1 + 15)

    @patch('ptcfsk.ptcfsk.simulator.run_throughput')
    def test_throughput_crossovers(self, mock_run):
        rates = {
            'hfsk': (20000.0, 20000.0),
            'opportunistic_mfsk': (25000.0, 15000.0),
            'coded_bpsk_ofdm': (10000.0, 10000.0),
        }

        def curve(experiment, window_slots):
            return [
                CurvePoint(
                    scheme=experiment.scheme,
                    H=4,
                    x=x,
                    ber=0.0,
                    ber_ci=(0.0, 0.0),
                    throughput=rate,
                    throughput_ci=(rate, rate),
                    packets=10,
                    bit_errors=0,
                    packet_errors=0,
                    analytical_throughput=(
                        rate if experiment.scheme == 'hfsk' else None
                    ),
                )
                for x, rate in zip(
                    (0.0, 1.0), rates[experiment.scheme], strict=True
                )
            ]

        mock_run.side_effect = curve
        self.assertEqual(self._run('throughput', '-n', '1'), 0)
        self.assertEqual(mock_run.call_count, 3)
        rows = (self.out / 'throughput.csv').read_text().splitlines()
        self.assertEqual(
            rows[0],
            'x_value,hfsk,opportunistic_mfsk,coded_bpsk_ofdm,'
            'hfsk_analytical',
        )
        self.assertEqual(rows[1], '0.0,20000.0,25000.0,10000.0,20000.0')
        manifest = json.loads(
            (self.out / 'throughput-manifest.json').read_text()
        )
        self.assertEqual(
            manifest['results']['crossover opportunistic_mfsk'], [0.5]
        )
        self.assertEqual(manifest['results']['crossover coded_bpsk_ofdm'], [])

    @patch('ptcfsk.ptcfsk.simulator.check_multi_pu_ordering')
    @patch('ptcfsk.ptcfsk.simulator.run_multi_pu_ber')
    def test_multi_pu_violation(self, mock_run, mock_check):
        mock_run.return_value = []
        mock_check.return_value = ['H=3 always_on x=7: 1 PUs worse than 2']
        self.assertEqual(self._run('multi-pu', '-n', '1'), EXIT_FAILED)

    @patch('ptcfsk.ptcfsk.validation.run_checks')
    def test_validate_exit_codes(self, mock_checks):
        mock_checks.return_value = [
            CheckResult('path-spectrum', True, 'ok', 0.1)
        ]
        with redirect_stdout(io.StringIO()):
            self.assertEqual(self._run('validate', '-n', '1'), 0)
        mock_checks.return_value.append(
            CheckResult('proposition-1', False, 'spread 1e-3', 0.2)
        )
        stdout = io.StringIO()
        with redirect_stdout(stdout):
            self.assertEqual(self._run('validate', '-n', '1'), EXIT_FAILED)
        self.assertIn('FAIL  proposition-1', stdout.getvalue())


class TestLogLevelPropagation(_OutDirTestCase):
    """Test that CLI log level settings propagate to the library."""

    def _run_levels(self, *flags: str) -> None:
        with (
            patch('ptcfsk.ptcfsk.cmd_enumerate_paths', return_value=0),
            patch(
                'sys.argv',
                ['ptcfsk', 'enumerate-paths', '-o', str(self.out), *flags],
            ),
        ):
            main()

    def test_verbose_sets_debug_level(self):
        self._run_levels('-v')
        self.assertEqual(analysis.logger.level, logging.DEBUG)

    def test_quiet_sets_error_level(self):
        self._run_levels('-q')
        self.assertEqual(analysis.logger.level, logging.ERROR)

    def test_default_sets_info_level(self):
        self._run_levels()
        self.assertEqual(analysis.logger.level, logging.INFO)

    def test_verbose_quiet_verbose_wins(self):
        """--verbose and --quiet together: --verbose wins with a warning."""
        with patch('logging.warning') as mock_warning:
            self._run_levels('-v', '-q')
        mock_warning.assert_called_once()
        self.assertEqual(analysis.logger.level, logging.DEBUG)

    @patch('ptcfsk.ptcfsk.cmd_ber_sim', return_value=0)
    def test_verbose_forces_one_worker(self, mock_cmd):
        with patch(
            'sys.argv',
            ['ptcfsk', 'ber-sim', '-n', '4', '-v', '-o', str(self.out)],
        ):
            main()
        settings = mock_cmd.call_args[0][0]
        self.assertEqual(settings.experiment.workers, 1)


if __name__ == '__main__':
    unittest.main()
