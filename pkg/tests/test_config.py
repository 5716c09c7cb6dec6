"""Unit tests for configuration parsing and validation."""

import tempfile
import unittest
from pathlib import Path
from shutil import rmtree
from unittest.mock import patch

from ptcfsk.codebook import TABLE_H3
from ptcfsk.config import (
    WORKERS_ENV,
    Settings,
    default_workers,
    load_config,
    parse_config,
    parse_grid,
)
from ptcfsk.errors import ConfigurationError

CONFIG_DIR = Path(__file__).parent.parent / 'configs'


class TestDefaults(unittest.TestCase):
    def test_high_interference_scenario(self):
        settings = Settings()
        params = settings.link_params()
        self.assertEqual(params.H, 3)
        self.assertEqual(params.P_T_SU, 4e-3)
        self.assertEqual(params.P_T_PU, 1e6)
        (model,) = settings.occupancy_models()
        self.assertEqual((model.kind, model.band), ('always_on', 1))
        self.assertIsNone(settings.permutation_mapping())

    def test_experiment_config(self):
        config = Settings().experiment_config(workers=1, seed=9)
        self.assertEqual(config.L, 256)
        self.assertEqual(config.workers, 1)
        self.assertEqual(config.seed, 9)
        self.assertEqual(config.scheme, 'hfsk')

    def test_none_overrides_are_ignored(self):
        config = Settings().experiment_config(workers=2, seed=None)
        self.assertEqual(config.seed, 0)


class TestGrid(unittest.TestCase):
    def test_list(self):
        self.assertEqual(parse_grid('0, 2.5,5'), [0.0, 2.5, 5.0])

    def test_inclusive_range(self):
        self.assertEqual(parse_grid('0:10:2'), [0, 2, 4, 6, 8, 10])
        self.assertEqual(len(parse_grid('0:1:0.1')), 11)

    def test_bad_range(self):
        with self.assertRaises(ValueError):
            parse_grid('0:10')
        with self.assertRaises(ValueError):
            parse_grid('0:10:0')


class TestParseConfig(unittest.TestCase):
    def test_sections(self):
        settings = parse_config(
            '[link]\nH = 4\n\n'
            '[occupancy]\nkind = markov\nbands = 2, 3\nr = 0.13\np = 0.07\n'
            '\n[experiment]\ngrid = 0:4:2\npu_kinds = markov\n'
        )
        self.assertEqual(settings.link.H, 4)
        models = settings.occupancy_models()
        self.assertEqual([m.band for m in models], [1, 2])
        self.assertAlmostEqual(models[0].p_on, 0.35)
        self.assertEqual(settings.experiment.grid, [0.0, 2.0, 4.0])
        self.assertEqual(settings.experiment.pu_kinds, ['markov'])

    def test_unknown_key_line(self):
        text = '[link]\nH = 3\n\n[experiment]\nL = 64\npackts = 10\n'
        with self.assertRaises(ConfigurationError) as cm:
            parse_config(text, 'bad.ini')
        self.assertEqual(cm.exception.line, 6)
        self.assertIn('experiment.packts', str(cm.exception))
        self.assertIn('bad.ini', str(cm.exception))

    def test_invalid_value_line(self):
        with self.assertRaises(ConfigurationError) as cm:
            parse_config('[link]\n\nH = 1\n')
        self.assertEqual(cm.exception.line, 3)

    def test_unknown_section(self):
        with self.assertRaises(ConfigurationError) as cm:
            parse_config('[link]\nH = 3\n[radar]\nrange = 4\n')
        self.assertEqual(cm.exception.line, 3)

    def test_syntax_error(self):
        with self.assertRaises(ConfigurationError) as cm:
            parse_config('[link]\nH = 3\nthis is not ini\n')
        self.assertEqual(cm.exception.line, 3)

    def test_missing_section_header(self):
        with self.assertRaises(ConfigurationError):
            parse_config('H = 3\n')

    def test_band_beyond_h(self):
        settings = parse_config('[occupancy]\nbands = 3\n[link]\nH = 2\n')
        with self.assertRaises(ConfigurationError):
            settings.occupancy_models()

    def test_duplicate_bands(self):
        with self.assertRaises(ConfigurationError):
            parse_config('[occupancy]\nbands = 2, 2\n')

    def test_custom_code(self):
        settings = parse_config(
            '[code]\ngenerators = 17, 15\nmemory = 3\n'
        )
        code = settings.conv_code()
        self.assertEqual(code.generators, ('17', '15'))
        self.assertEqual(code.n_states, 8)


class TestConfigFiles(unittest.TestCase):
    def setUp(self):
        self.tmpdir = Path(tempfile.mkdtemp())

    def tearDown(self):
        rmtree(self.tmpdir)

    def test_shipped_configs(self):
        for path in sorted(CONFIG_DIR.glob('*.ini')):
            with self.subTest(path=path.name):
                load_config(path).experiment_config(workers=1)

    def test_mapping_relative_to_file(self):
        settings = load_config(CONFIG_DIR / 'high-interference.ini')
        self.assertEqual(settings.permutation_mapping().table, TABLE_H3)

    def test_mapping_arity(self):
        (self.tmpdir / 'h2.map').write_text('0 12\n1 21\n', encoding='utf-8')
        path = self.tmpdir / 'run.ini'
        path.write_text('[code]\nmapping = h2.map\n', encoding='utf-8')
        with self.assertRaises(ConfigurationError):
            load_config(path).permutation_mapping()

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            load_config(self.tmpdir / 'absent.ini')

    def test_none_gives_defaults(self):
        self.assertEqual(load_config(None), Settings())


class TestWorkers(unittest.TestCase):
    def test_environment(self):
        with patch.dict('os.environ', {WORKERS_ENV: '3'}):
            self.assertEqual(default_workers(), 3)

    def test_bad_environment(self):
        for value in ('many', '0'):
            with patch.dict('os.environ', {WORKERS_ENV: value}):
                with self.assertRaises(ConfigurationError):
                    default_workers()

    def test_fallback(self):
        with patch.dict('os.environ', {WORKERS_ENV: ''}):
            self.assertGreaterEqual(default_workers(), 1)


if __name__ == '__main__':
    unittest.main()
