"""Unit tests for the hard decision Viterbi decoder."""

import unittest

import numpy as np

from ptcfsk.channel import ReceivedMatrix
from ptcfsk.codebook import default_mapping
from ptcfsk.convolutional import ConvCode, build_trellis, encode, encode_batch
from ptcfsk.decoder import viterbi_decode, viterbi_decode_batch
from ptcfsk.errors import DomainError

from .common import h2_trellis, h3_trellis, noiseless_received


class TestViterbiDecode(unittest.TestCase):
    def setUp(self):
        self.trellis = h3_trellis()
        self.mapping = default_mapping(3)

    def test_anchor_packet(self):
        sent = noiseless_received(self.mapping, encode(ConvCode(), [1, 0, 0]))
        result = viterbi_decode(self.trellis, sent, 1)
        np.testing.assert_array_equal(result.bits, [1])
        self.assertEqual(result.path_metric, 0)

    def test_received_matrix_objects(self):
        symbols = encode(ConvCode(), [0, 1, 1], terminate=True)
        received = [
            ReceivedMatrix(m)
            for m in noiseless_received(self.mapping, symbols)
        ]
        result = viterbi_decode(self.trellis, received, 3)
        np.testing.assert_array_equal(result.bits, [0, 1, 1])

    def test_noiseless_batch(self):
        rng = np.random.default_rng(1)
        bits = rng.integers(0, 2, (8, 40))
        received = noiseless_received(
            self.mapping, encode_batch(ConvCode(), bits)
        )
        result = viterbi_decode_batch(self.trellis, received, 40)
        np.testing.assert_array_equal(result.bits, bits)
        np.testing.assert_array_equal(result.path_metric, 0)
        self.assertEqual(result[3].bits.tolist(), bits[3].tolist())

    def test_corrects_cell_errors(self):
        bits = [1, 1, 0, 1, 0, 0, 1, 0]
        received = noiseless_received(
            self.mapping, encode(ConvCode(), bits, terminate=True)
        ).copy()
        received[2, 0, 0] ^= 1
        received[5, 1, 2] ^= 1
        result = viterbi_decode(self.trellis, received, len(bits))
        np.testing.assert_array_equal(result.bits, bits)
        self.assertEqual(result.path_metric, 2)

    def test_tie_goes_to_smaller_state(self):
        """An all-zero matrix is equally far from both H = 2 symbols."""
        received = np.zeros((1, 2, 2), dtype=np.uint8)
        result = viterbi_decode(h2_trellis(), received, 1)
        np.testing.assert_array_equal(result.bits, [0])
        self.assertEqual(result.tie_count, 1)
        self.assertEqual(result.path_metric, 2)

    def test_binary_trellis(self):
        trellis = build_trellis(ConvCode())
        bits = [1, 0, 1, 1, 0]
        symbols = encode(ConvCode(), bits, terminate=True)
        coded = np.array([[(s >> 1) & 1, s & 1] for s in symbols])
        coded[1, 0] ^= 1
        result = viterbi_decode(trellis, coded, len(bits))
        np.testing.assert_array_equal(result.bits, bits)
        self.assertEqual(result.path_metric, 1)

    def test_shape_errors(self):
        with self.assertRaises(DomainError):
            viterbi_decode(self.trellis, np.zeros((2, 3, 3)), 1)
        with self.assertRaises(DomainError):
            viterbi_decode(self.trellis, np.zeros((3, 2, 2)), 1)
        with self.assertRaises(DomainError):
            viterbi_decode_batch(self.trellis, np.zeros((1, 3, 3, 3)), -1)


if __name__ == '__main__':
    unittest.main()
