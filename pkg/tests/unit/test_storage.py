import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from src.errors import ValidationError
from src.noise_sim import SimConfig, synthesize_noise
from src.storage import dump_field, dumps, load_field, load_json, save_json


class TestJsonFiles(unittest.TestCase):
    """Test suite for JSON file access."""

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_save_and_load(self):
        """Test writing and reading a document.

        Verifies that:
        - Missing directories are created
        - Output uses sorted keys and ends with a newline
        """
        path = os.path.join(self.tmp, "out", "report.json")
        self.assertTrue(save_json({'b': 1, 'a': [1, "1/2"]}, path))
        with open(path, encoding='utf-8') as f:
            text = f.read()
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(load_json(path), {'a': [1, "1/2"], 'b': 1})
        self.assertEqual(dumps({'z': 0, 'y': 1}), json.dumps({'y': 1, 'z': 0}, indent=2) + "\n")

    def test_load_failures(self):
        """Test that read failures become validation errors.

        Verifies that:
        - A missing file raises ValidationError
        - Invalid JSON raises ValidationError naming the file
        """
        with self.assertRaises(ValidationError):
            load_json(os.path.join(self.tmp, "missing.json"))
        path = os.path.join(self.tmp, "broken.json")
        with open(path, 'w', encoding='utf-8') as f:
            f.write("{not json")
        with self.assertRaises(ValidationError) as ctx:
            load_json(path)
        self.assertIn("broken.json", str(ctx.exception))


class TestFieldDumps(unittest.TestCase):
    """Test suite for raw field dumps."""

    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_dump_layout(self):
        """Test the binary dump and its sidecar.

        Verifies that:
        - The .f64 file holds little-endian float64 values in C order
        - The sidecar records shape, tag and seed
        - load_field restores values and config
        """
        cfg = SimConfig(grid_t=16, grid_x=8, seed=5)
        field = synthesize_noise(cfg)
        path = os.path.join(self.tmp, "zeta_5")
        dump_field(field, path)
        raw = np.fromfile(f"{path}.f64", dtype='<f8')
        np.testing.assert_array_equal(raw, field.values.ravel(order='C'))
        meta = load_json(f"{path}.json")
        self.assertEqual(meta['shape'], [16, 8])
        self.assertEqual(meta['tag'], "zeta")
        self.assertEqual(meta['seed'], 5)
        restored = load_field(path)
        np.testing.assert_array_equal(restored.values, field.values)
        self.assertEqual(restored.config.grid_t, 16)

    def test_size_mismatch(self):
        """Test a dump whose sidecar disagrees with the data.

        Verifies that:
        - load_field raises ValidationError
        """
        field = synthesize_noise(SimConfig(grid_t=8, grid_x=8, seed=1))
        path = os.path.join(self.tmp, "bad")
        dump_field(field, path)
        meta = load_json(f"{path}.json")
        meta['shape'] = [8, 4]
        save_json(meta, f"{path}.json")
        with self.assertRaises(ValidationError):
            load_field(path)


if __name__ == '__main__':
    unittest.main()
