"""Unit tests for the self checks behind ``ptcfsk validate``."""

import dataclasses
import unittest
from unittest.mock import patch

import numpy as np

from ptcfsk import validation
from ptcfsk.analysis import BerEstimate, CellLikelihoods
from ptcfsk.config import Settings
from ptcfsk.errors import BudgetExceededError
from ptcfsk.simulator import CurvePoint


class TestChecks(unittest.TestCase):
    def setUp(self):
        self.settings = Settings()

    def test_exactness_checks_pass(self):
        for check in (
            validation.check_path_spectrum,
            validation.check_anchor_path,
            validation.check_marcum_identity,
            validation.check_proposition1,
        ):
            with self.subTest(check=check.__name__):
                passed, detail = check(self.settings, 'quick')
                self.assertTrue(passed, detail)

    def test_wrong_likelihoods_are_caught(self):
        """Likelihoods off by a fixed bias break the oracle comparison."""
        biased = CellLikelihoods(0.999, 0.3, 0.999)
        with patch.object(
            validation, 'link_likelihoods', return_value=biased
        ):
            passed, detail = validation.check_oracle_equivalence(
                self.settings, 'quick'
            )
        self.assertFalse(passed)
        self.assertIn('oracle', detail)

    def test_quick_levels(self):
        self.assertNotIn('timing-order', validation.QUICK_CHECKS)
        self.assertIn('timing-order', validation.FULL_CHECKS)


def _curve(config, ber=0.2, throughput=0.0) -> list[CurvePoint]:
    return [
        CurvePoint(
            scheme=config.scheme,
            H=config.H,
            x=x,
            ber=ber,
            ber_ci=(ber * 0.95, ber * 1.05),
            throughput=throughput,
            throughput_ci=(throughput, throughput),
            packets=config.packets,
            bit_errors=round(ber * config.packets * config.L),
            packet_errors=config.packets,
        )
        for x in config.grid
    ]


class TestAcceptanceVerdicts(unittest.TestCase):
    def setUp(self):
        self.settings = Settings()
        self.grid = [round(0.1 * i, 1) for i in range(11)]
        self.curves = {
            'hfsk': np.full(11, 10_000.0),
            'opportunistic_mfsk': np.linspace(25_600, 0, 11),
            'coded_bpsk_ofdm': np.linspace(21_000, 0, 11),
        }

    def test_single_crossovers_pass(self):
        passed, detail = validation.compare_throughput_curves(
            self.grid, self.curves
        )
        self.assertTrue(passed, detail)
        self.assertIn('p1* = 0.61', detail)
        self.assertIn('p2* = 0.52', detail)

    def test_silent_hfsk_fails(self):
        self.curves['hfsk'] = np.zeros(11)
        passed, detail = validation.compare_throughput_curves(
            self.grid, self.curves
        )
        self.assertFalse(passed)
        self.assertEqual(detail, 'H-FSK delivers nothing')

    def test_flat_baseline_fails(self):
        self.curves['coded_bpsk_ofdm'][5:] = 5_000.0
        passed, detail = validation.compare_throughput_curves(
            self.grid, self.curves
        )
        self.assertFalse(passed)
        self.assertIn('coded_bpsk_ofdm not strictly decreasing', detail)

    def test_crossover_check_on_silent_hfsk(self):
        def run(config):
            if config.scheme == 'hfsk':
                return _curve(config)
            start = 25_600 if config.scheme == 'coded_bpsk_ofdm' else 20_000
            return [
                dataclasses.replace(pt, throughput=start * (1 - pt.x) + 1)
                for pt in _curve(config)
            ]

        with patch.object(validation, 'run_scheme', side_effect=run):
            passed, detail = validation.check_throughput_crossovers(
                self.settings, 'full'
            )
        self.assertFalse(passed)
        self.assertIn('nothing', detail)

    def test_approximation_off_by_orders_fails(self):
        tiny = BerEstimate(1e-12, 3, [(16, 1e-12)])
        with (
            patch.object(validation, 'run_hfsk_ber', side_effect=_curve),
            patch.object(validation, 'approximate_ber', return_value=tiny),
        ):
            passed, detail = validation.check_approximation_quality(
                self.settings, 'full'
            )
        self.assertFalse(passed)
        self.assertIn('2.00e-01', detail)

    def test_matching_approximation_passes(self):
        close = BerEstimate(0.21, 3, [(16, 0.21)])
        with (
            patch.object(validation, 'run_hfsk_ber', side_effect=_curve),
            patch.object(validation, 'approximate_ber', return_value=close),
        ):
            passed, detail = validation.check_approximation_quality(
                self.settings, 'full'
            )
        self.assertTrue(passed, detail)


class TestRunChecks(unittest.TestCase):
    def _checks(self, **checks):
        return patch.dict(validation.QUICK_CHECKS, checks, clear=True)

    def test_results_in_order(self):
        with self._checks(
            first=lambda settings, level: (True, 'fine'),
            second=lambda settings, level: (False, 'off by 2'),
        ):
            results = validation.run_checks(Settings())
        self.assertEqual([r.name for r in results], ['first', 'second'])
        self.assertEqual([r.passed for r in results], [True, False])
        self.assertEqual(results[1].detail, 'off by 2')

    def test_package_errors_fail_the_check(self):
        def too_big(settings, level):
            raise BudgetExceededError('oracle search', 10, 1)

        with self._checks(budget=too_big):
            with self.assertLogs('ptcfsk.validation', level='ERROR') as logs:
                (result,) = validation.run_checks(Settings())
        self.assertFalse(result.passed)
        self.assertIn('BudgetExceededError', result.detail)
        self.assertIn('FAIL', logs.output[0])

    def test_other_errors_propagate(self):
        def broken(settings, level):
            raise KeyError('bug')

        with self._checks(broken=broken), self.assertRaises(KeyError):
            validation.run_checks(Settings())

    def test_full_adds_checks(self):
        with (
            self._checks(quick=lambda settings, level: (True, '')),
            patch.dict(
                validation.FULL_CHECKS,
                {'slow': lambda settings, level: (True, level)},
                clear=True,
            ),
        ):
            results = validation.run_checks(Settings(), 'full')
        self.assertEqual([r.name for r in results], ['quick', 'slow'])
        self.assertEqual(results[1].detail, 'full')


if __name__ == '__main__':
    unittest.main()
