"""Unit tests for Marcum Q, path enumeration and the BER bound."""

import itertools
import math
import unittest

import numpy as np

from ptcfsk.analysis import (
    CellLikelihoods,
    approximate_ber,
    cell_likelihoods,
    crossover,
    enumerate_paths,
    link_likelihoods,
    marcum_q1,
    marcum_q1_quadrature,
    pairwise_error_probability,
    path_pair_probability,
    proposition1_check,
    throughput,
    wilson_interval,
)
from ptcfsk.channel import LinkParams, OccupancyModel, p_on_per_band
from ptcfsk.codebook import default_mapping, matrix_hamming_distance
from ptcfsk.errors import DomainError
from ptcfsk.oracle import OracleConfig, exhaustive_ber

from .common import (
    H3_SPECTRUM,
    h2_hand_ber,
    h2_trellis,
    h3_trellis,
    symmetric_likelihoods,
)


class TestMarcumQ(unittest.TestCase):
    def test_zero_noncentrality(self):
        """Q1(0, w) is the Rayleigh tail exp(-w**2 / 2)."""
        w = np.linspace(0, 10, 101)
        np.testing.assert_allclose(
            marcum_q1(0.0, w), np.exp(-(w**2) / 2), rtol=0, atol=1e-10
        )

    def test_zero_threshold(self):
        self.assertEqual(marcum_q1(3.0, 0.0), 1.0)

    def test_series_matches_quadrature(self):
        for v in (0.0, 0.5, 2.0, 5.0, 8.0):
            for w in (0.0, 1.0, 3.0, 6.0, 8.0):
                self.assertAlmostEqual(
                    marcum_q1(v, w), marcum_q1_quadrature(v, w), delta=1e-9
                )

    def test_saturation(self):
        self.assertEqual(marcum_q1(100.0, 1.0), 1.0)
        self.assertEqual(marcum_q1(1.0, 100.0), 0.0)

    def test_vectorized(self):
        out = marcum_q1(np.array([0.0, 1.0]), 2.0)
        self.assertEqual(out.shape, (2,))
        self.assertIsInstance(marcum_q1(1.0, 2.0), float)
        self.assertGreater(out[1], out[0])

    def test_negative_arguments(self):
        with self.assertRaises(DomainError):
            marcum_q1(-1.0, 1.0)
        with self.assertRaises(DomainError):
            marcum_q1_quadrature(1.0, -1.0)


class TestCellLikelihoods(unittest.TestCase):
    def test_closed_forms(self):
        lk = cell_likelihoods(Es_r=2.0, I_PU=0.0, N0=1.0, H=3)
        self.assertAlmostEqual(lk.p_b1_q0_noPU, math.exp(-0.72))
        self.assertAlmostEqual(lk.p_b1_PU, lk.p_b1_q0_noPU)
        self.assertAlmostEqual(
            lk.p_b1_q1_noPU,
            marcum_q1(2.0, 0.6 * 2.0),
        )
        self.assertEqual(lk, cell_likelihoods(Es_r=2.0, I_PU=0.0, N0=1.0, H=5))

    def test_strong_link_detects(self):
        """At high SNR a sent tone is seen and a silent cell stays dark."""
        for H in (3, 4):
            lk = link_likelihoods(LinkParams(H=H).with_snr_db(20.0))
            self.assertGreater(lk.p_b1_q1_noPU, 0.999)
            self.assertLess(lk.p_b1_q0_noPU, 1e-9)

    def test_domain(self):
        with self.assertRaises(DomainError):
            cell_likelihoods(1.0, 0.0, 0.0, 3)
        with self.assertRaises(DomainError):
            cell_likelihoods(1.0, -1.0, 1.0, 3)
        with self.assertRaises(DomainError):
            CellLikelihoods(1.5, 0.1, 0.1)

    def test_mixture(self):
        lk = CellLikelihoods(0.9, 0.1, 0.8)
        self.assertAlmostEqual(lk.cell_probability(1, 1, 0.0), 0.9)
        self.assertAlmostEqual(lk.cell_probability(0, 1, 1.0), 0.8)
        self.assertAlmostEqual(lk.cell_probability(0, 0, 0.5), 0.55)

    def test_link_likelihoods(self):
        lk = link_likelihoods(LinkParams().with_snr_db(7.0))
        self.assertGreater(lk.p_b1_PU, 0.99)
        self.assertAlmostEqual(
            lk.p_b1_q0_noPU, math.exp(-0.36 * 10**0.7), places=9
        )


class TestEnumeratePaths(unittest.TestCase):
    def test_h3_spectrum(self):
        spectrum = enumerate_paths(h3_trellis(), 3)
        self.assertEqual(spectrum.coefficients, H3_SPECTRUM)
        self.assertEqual(spectrum.d_free_star, 16)

    def test_anchor_path(self):
        """The lightest event is input 100 sent as 123, 132, 123."""
        spectrum = enumerate_paths(h3_trellis(), 0)
        (d, paths), = spectrum.entries
        self.assertEqual(d, 16)
        path = paths[0]
        self.assertEqual(path.inputs, (1, 0, 0))
        self.assertEqual(path.symbols, (3, 2, 3))
        mapping = default_mapping(3)
        self.assertEqual(
            [mapping.table[s] for s in path.symbols],
            [(1, 2, 3), (1, 3, 2), (1, 2, 3)],
        )
        self.assertEqual(
            [
                matrix_hamming_distance(a, b)
                for a, b in zip(path.matrices, path.reference, strict=True)
            ],
            [6, 4, 6],
        )
        self.assertEqual(path.input_weight, 1)
        self.assertEqual(len(path.bits), 27)

    def test_pass_through_code(self):
        spectrum = enumerate_paths(h2_trellis(), 3)
        self.assertEqual(spectrum.coefficients, {4: 1})

    def test_negative_depth(self):
        with self.assertRaises(DomainError):
            enumerate_paths(h3_trellis(), -1)


class TestPathProbabilities(unittest.TestCase):
    def setUp(self):
        self.lk = CellLikelihoods(0.9, 0.05, 0.95)
        self.path = enumerate_paths(h3_trellis(), 0).entries[0][1][0]

    def test_identical_patterns(self):
        sent = self.path.reference_bits
        expected = 0.9**9 * 0.95**18
        self.assertAlmostEqual(
            path_pair_probability(sent, sent, self.lk, np.zeros(3)),
            expected,
        )

    def test_pairwise_dominates_pattern(self):
        args = (self.path.reference_bits, self.path.bits, self.lk)
        for p_on in (np.zeros(3), np.array([0.0, 0.35, 0.0])):
            self.assertGreaterEqual(
                pairwise_error_probability(*args, p_on),
                path_pair_probability(*args, p_on),
            )

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            path_pair_probability(
                np.zeros(9), np.zeros(18), self.lk, np.zeros(3)
            )

    def test_bad_p_on(self):
        sent = self.path.reference_bits
        with self.assertRaises(DomainError):
            path_pair_probability(sent, sent, self.lk, np.full(3, 1.5))
        with self.assertRaises(DomainError):
            path_pair_probability(sent, sent, self.lk, np.zeros((2, 3)))


def _enumerated_pairwise(sent, other, lk, model, H) -> float:
    """Average the vote count over every PU trajectory of the event."""
    differ = np.flatnonzero(sent != other)
    steps = int(differ.max()) // H + 1
    stay = {True: 1 - model.r, False: 1 - model.p}
    total = 0.0
    for states in itertools.product((False, True), repeat=steps):
        weight = model.p_on if states[0] else 1 - model.p_on
        for before, after in itertools.pairwise(states):
            weight *= stay[before] if before == after else 1 - stay[before]
        law = np.ones(1)
        for idx in differ:
            step, band = divmod(int(idx), H)
            if band == model.band and states[step]:
                p = lk.pu[other[idx]]
            else:
                p = lk.no_pu[sent[idx], other[idx]]
            law = np.convolve(law, [1 - p, p])
        half, odd = divmod(differ.size, 2)
        error = law[half + 1 :].sum() + (0.0 if odd else law[half] / 2)
        total += weight * error
    return total


class TestPairwiseErrorProbability(unittest.TestCase):
    def setUp(self):
        self.lk = CellLikelihoods(0.9, 0.05, 0.95)
        self.path = enumerate_paths(h3_trellis(), 0).entries[0][1][0]
        self.args = (self.path.reference_bits, self.path.bits, self.lk)

    def test_pass_through_code_is_exact(self):
        """Ties count half, matching a decoder that settles them blindly."""
        spectrum = enumerate_paths(h2_trellis(), 0)
        for eps in (0.01, 0.1, 0.3):
            estimate = approximate_ber(
                spectrum, symmetric_likelihoods(eps), np.zeros(2)
            )
            self.assertAlmostEqual(estimate.value, h2_hand_ber(eps))

    def test_markov_band_matches_enumeration(self):
        model = OccupancyModel.markov(1, r=0.13, p=0.07)
        expected = _enumerated_pairwise(*self.args, model, 3)
        self.assertAlmostEqual(
            pairwise_error_probability(
                *self.args, np.array([0.0, model.p_on, 0.0]), [model]
            ),
            expected,
            places=12,
        )

    def test_memoryless_chain_matches_mixing(self):
        p_on = np.array([0.0, 0.35, 0.0])
        memoryless = OccupancyModel.markov(1, r=0.65, p=0.35)
        self.assertAlmostEqual(
            pairwise_error_probability(*self.args, p_on, [memoryless]),
            pairwise_error_probability(*self.args, p_on),
            places=12,
        )

    def test_sticky_pu_changes_the_event(self):
        p_on = np.array([0.0, 0.35, 0.0])
        sticky = OccupancyModel.markov(1, r=0.013, p=0.007)
        self.assertGreater(
            abs(
                pairwise_error_probability(*self.args, p_on, [sticky])
                - pairwise_error_probability(*self.args, p_on)
            ),
            1e-6,
        )

    def test_shared_band(self):
        """Two PUs on one band act as one PU that is On when either is."""
        first = OccupancyModel.markov(1, r=0.3, p=0.1)
        second = OccupancyModel.markov(1, r=0.2, p=0.2)
        p_on = p_on_per_band([first, second], 3)
        memoryless_first = OccupancyModel.markov(1, r=0.75, p=0.25)
        memoryless_second = OccupancyModel.markov(1, r=0.5, p=0.5)
        self.assertAlmostEqual(p_on[1], 0.625)
        self.assertAlmostEqual(
            pairwise_error_probability(
                *self.args, p_on, [memoryless_first, memoryless_second]
            ),
            pairwise_error_probability(*self.args, p_on),
            places=12,
        )
        self.assertNotAlmostEqual(
            pairwise_error_probability(*self.args, p_on, [first, second]),
            pairwise_error_probability(*self.args, p_on),
            places=9,
        )

    def test_capped_at_half(self):
        hopeless = CellLikelihoods(0.1, 0.9, 0.5)
        self.assertEqual(
            pairwise_error_probability(
                self.path.reference_bits,
                self.path.bits,
                hopeless,
                np.zeros(3),
            ),
            0.5,
        )

    def test_pu_beyond_last_band(self):
        with self.assertRaises(DomainError):
            pairwise_error_probability(
                *self.args, np.zeros(3), [OccupancyModel.always_on(3)]
            )

    def test_markov_bound_matches_exhaustive(self):
        """The pass-through code has a single error event per symbol."""
        lk = CellLikelihoods(0.8, 0.15, 0.7)
        models = [OccupancyModel.markov(1, r=0.13, p=0.07)]
        exact = exhaustive_ber(
            OracleConfig(
                mapping=default_mapping(2),
                code=h2_trellis().code,
                L=2,
                likelihoods=lk,
                occupancy=models,
            )
        )
        estimate = approximate_ber(
            enumerate_paths(h2_trellis(), 0),
            lk,
            p_on_per_band(models, 2),
            occupancy=models,
        )
        self.assertAlmostEqual(estimate.value, exact, places=12)


class TestApproximateBer(unittest.TestCase):
    def setUp(self):
        self.spectrum = enumerate_paths(h3_trellis(), 3)
        self.lk = link_likelihoods(LinkParams().with_snr_db(7.0))
        self.p_on = np.array([0.0, 0.35, 0.0])

    def test_contributions(self):
        estimate = approximate_ber(self.spectrum, self.lk, self.p_on)
        self.assertEqual(estimate.z_used, 3)
        self.assertEqual(
            [d for d, _ in estimate.per_d_contributions], [16, 20, 24, 28]
        )
        total = sum(c for _, c in estimate.per_d_contributions)
        self.assertAlmostEqual(estimate.value, min(total, 0.5))
        self.assertGreaterEqual(estimate.value, 0.0)
        self.assertLessEqual(estimate.value, 0.5)

    def test_clamped_at_half(self):
        noisy = CellLikelihoods(0.5, 0.5, 0.5)
        for metric in ('pattern', 'pairwise'):
            estimate = approximate_ber(
                self.spectrum, noisy, self.p_on, metric  # type: ignore
            )
            self.assertLessEqual(estimate.value, 0.5)

    def test_depth_grows_bound(self):
        values = [
            approximate_ber(self.spectrum, self.lk, self.p_on, z=z).value
            for z in range(4)
        ]
        self.assertEqual(values, sorted(values))

    def test_unknown_metric(self):
        with self.assertRaises(DomainError):
            approximate_ber(
                self.spectrum, self.lk, self.p_on, 'nearest'  # type: ignore
            )


class TestCodewordIndependence(unittest.TestCase):
    def setUp(self):
        self.mapping = default_mapping(3)
        self.trellis = h3_trellis()
        self.spectrum = enumerate_paths(self.trellis, 3)
        self.lk = link_likelihoods(LinkParams().with_snr_db(7.0))

    def test_invariant_under_band_statistics(self):
        for metric in ('pattern', 'pairwise'):
            spread = proposition1_check(
                self.trellis,
                self.mapping,
                self.lk,
                np.array([0.0, 0.35, 0.0]),
                trials=10,
                metric=metric,  # type: ignore[arg-type]
                spectrum=self.spectrum,
            )
            self.assertLessEqual(spread, 1e-12)

    def test_step_dependent_statistics_break_it(self):
        p_on = np.zeros((3, 3))
        p_on[1] = [0.9, 0.1, 0.5]
        spread = proposition1_check(
            self.trellis,
            self.mapping,
            self.lk,
            p_on,
            trials=10,
            metric='pairwise',
            spectrum=self.spectrum,
        )
        self.assertGreater(spread, 1e-6)

    def test_no_trials(self):
        self.assertEqual(
            proposition1_check(
                self.trellis, self.mapping, self.lk, np.zeros(3), 0
            ),
            0.0,
        )


class TestThroughputAndIntervals(unittest.TestCase):
    def test_throughput(self):
        self.assertAlmostEqual(
            throughput(1e-3, 256, 100), 25600 * 0.999**256, places=9
        )
        self.assertAlmostEqual(throughput(1e-3, 256, 100), 19810, delta=10)
        self.assertEqual(throughput(0.0, 256, 100), 25600)
        with self.assertRaises(DomainError):
            throughput(1.5, 256, 100)

    def test_wilson(self):
        lo, hi = wilson_interval(0, 100)
        self.assertAlmostEqual(lo, 0.0, places=12)
        self.assertGreater(hi, 0.0)
        lo, hi = wilson_interval(30, 100, 0.99)
        self.assertLess(lo, 0.3)
        self.assertGreater(hi, 0.3)
        self.assertEqual(wilson_interval(0, 0), (0.0, 1.0))
        with self.assertRaises(DomainError):
            wilson_interval(5, 3)

    def test_crossover(self):
        self.assertEqual(crossover([0, 1, 2], [3, 2, 1], [1, 2, 3]), [1.0])
        self.assertEqual(crossover([0, 1], [1, 0], [0, 1]), [0.5])
        self.assertEqual(crossover([0, 1], [2, 3], [0, 1]), [])


if __name__ == '__main__':
    unittest.main()
