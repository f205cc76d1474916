import logging
import os
import unittest
from fractions import Fraction
from unittest.mock import patch

from src.config import SEED_ENV
from src.errors import ValidationError
from src.utils import (format_rational, handle_error, multinomial, parallel_map, parse_rational,
                       require_payload, seed_override, validate_payload)


def _square(x):
    return x * x


class TestValidatePayload(unittest.TestCase):
    """Test suite for JSON object validation."""

    def test_valid_payload(self):
        """Test that a well-formed object passes.

        Verifies that:
        - The flag is True with no error
        - The returned payload is a copy of the input
        """
        payload = {'alpha': "-11/20", 'd': 3}
        ok, error, validated = validate_payload(payload, required_fields=['d'],
                                                field_types={'d': int, 'alpha': (str, int)})
        self.assertTrue(ok)
        self.assertIsNone(error)
        self.assertEqual(validated, payload)
        self.assertIsNot(validated, payload)

    def test_failures_name_the_field(self):
        """Test the failure messages.

        Verifies that:
        - Missing, unknown and badly typed fields are reported with their location
        - Booleans never pass as integers
        - Non-objects are refused
        """
        ok, error, _ = validate_payload({}, required_fields=['d'], where="params")
        self.assertFalse(ok)
        self.assertIn("params", error)
        self.assertIn("'d'", error)
        ok, error, _ = validate_payload({'x': 1}, allowed_fields=['d'], where="params")
        self.assertFalse(ok)
        self.assertIn("unknown field 'x'", error)
        ok, error, _ = validate_payload({'d': True}, field_types={'d': int})
        self.assertFalse(ok)
        self.assertIn("must be int", error)
        ok, _, _ = validate_payload([1, 2])
        self.assertFalse(ok)

    def test_require_payload_raises(self):
        """Test the raising variant.

        Verifies that:
        - An invalid object raises ValidationError
        """
        with self.assertRaises(ValidationError):
            require_payload({'d': "3"}, "params", field_types={'d': int})


class TestRationals(unittest.TestCase):
    """Test suite for exact rational parsing and formatting."""

    def test_parse(self):
        """Test parsing of ints and 'p/q' strings.

        Verifies that:
        - Strings with whitespace are accepted
        - Floats, booleans and garbage are refused
        """
        self.assertEqual(parse_rational(" -11/20 "), Fraction(-11, 20))
        self.assertEqual(parse_rational(3), Fraction(3))
        for bad in (0.5, True, "1/0", "half", None):
            with self.subTest(value=bad):
                with self.assertRaises(ValidationError):
                    parse_rational(bad)

    def test_format(self):
        """Test canonical formatting.

        Verifies that:
        - Integers print without a denominator
        """
        self.assertEqual(format_rational(Fraction(-11, 20)), "-11/20")
        self.assertEqual(format_rational(Fraction(4, 2)), "2")


class TestHelpers(unittest.TestCase):
    """Test suite for the remaining helpers."""

    def test_multinomial(self):
        """Test multinomial coefficients.

        Verifies that:
        - (1, 2) gives 3, (2, 2) gives 6, () gives 1
        """
        self.assertEqual(multinomial((1, 2)), 3)
        self.assertEqual(multinomial((2, 2)), 6)
        self.assertEqual(multinomial(()), 1)

    def test_parallel_map_keeps_order(self):
        """Test that worker processes preserve item order.

        Verifies that:
        - jobs = 1 and jobs = 2 give identical lists
        """
        items = list(range(10))
        self.assertEqual(parallel_map(_square, items, 1), [x * x for x in items])
        self.assertEqual(parallel_map(_square, items, 2), [x * x for x in items])

    def test_handle_error(self):
        """Test the standardized error message.

        Verifies that:
        - A custom prefix is used
        - The error is logged
        """
        logger = logging.getLogger("tests.handle_error")
        with self.assertLogs(logger, level='ERROR'):
            message = handle_error(ValueError("boom"), logger, "Failed", log_traceback=False)
        self.assertEqual(message, "Failed: boom")

    def test_seed_override(self):
        """Test the MIRS_SEED override.

        Verifies that:
        - An unset or empty variable keeps the given seed
        - An integer value replaces it
        - Anything else raises ValidationError
        """
        with patch.dict(os.environ, {}, clear=False):
            os.environ.pop(SEED_ENV, None)
            self.assertEqual(seed_override(7), 7)
        with patch.dict(os.environ, {SEED_ENV: ""}):
            self.assertEqual(seed_override(7), 7)
        with patch.dict(os.environ, {SEED_ENV: "42"}):
            self.assertEqual(seed_override(7), 42)
        with patch.dict(os.environ, {SEED_ENV: "4.2"}):
            with self.assertRaises(ValidationError):
                seed_override(7)


if __name__ == '__main__':
    unittest.main()
