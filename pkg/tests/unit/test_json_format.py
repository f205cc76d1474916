import unittest
from fractions import Fraction

import sympy as sp

from src.errors import ValidationError
from src.hierarchy import dependency_graph, expand_pi_minus, induction_order
from src.json_format import (decode_coefficient, decode_gamma_query, decode_linear_form,
                             decode_moments, decode_multiindex, decode_params, decode_pispec,
                             decode_series, encode_coefficient, encode_graph, encode_multiindex,
                             encode_pi_minus, encode_pispec)
from src.multiindex import LinearForm
from tests.helpers import E0, default_params, e, f


class TestParamsCodec(unittest.TestCase):
    """Test suite for parameter decoding."""

    def test_defaults_and_overrides(self):
        """Test merging over the default parameters.

        Verifies that:
        - None gives the default parameters
        - Fields override one at a time
        """
        self.assertEqual(decode_params(None), default_params())
        params = decode_params({'alpha': "-2/5"})
        self.assertEqual(params.alpha, Fraction(-2, 5))
        self.assertEqual(params.kappa, Fraction(1, 100))

    def test_rejections(self):
        """Test malformed parameter objects.

        Verifies that:
        - Unknown keys, float rationals and wrong types are refused
        """
        for payload in ({'beta': 1}, {'alpha': -0.55}, {'d': "3"}):
            with self.subTest(payload=payload):
                with self.assertRaises(ValidationError):
                    decode_params(payload)


class TestMultiindexCodec(unittest.TestCase):
    """Test suite for multiindex encoding."""

    def setUp(self):
        self.params = default_params()

    def test_wire_format(self):
        """Test the wire format.

        Verifies that:
        - k-slots are keyed by string, n-slots listed with multiplicities
        - mult defaults to 1
        """
        beta = f(3, 2) + e(mult=3)
        self.assertEqual(encode_multiindex(beta),
                         {'k': {'3': 2}, 'n': [{'idx': [0, 0, 0, 0], 'mult': 3}]})
        decoded = decode_multiindex({'k': {'3': 1}, 'n': [{'idx': [0, 1, 0, 0]}]}, self.params)
        self.assertEqual(decoded, f(3) + e(0, 1, 0, 0))

    def test_rejections(self):
        """Test malformed multiindices.

        Verifies that:
        - Non-integer slots, negative multiplicities and wrong arity are refused
        - Error messages carry the path
        """
        bad = [
            {'k': {'three': 1}},
            {'k': {'3': -1}},
            {'n': [{'idx': [0, 0, 0]}]},
            {'n': [{'mult': 1}]},
            {'k': {'4': 1}},
        ]
        for payload in bad:
            with self.subTest(payload=payload):
                with self.assertRaises(ValidationError):
                    decode_multiindex(payload, self.params)
        with self.assertRaises(ValidationError) as ctx:
            decode_multiindex({'n': [{'idx': [0, 0, 0]}]}, self.params, where="query.beta")
        self.assertIn("query.beta", str(ctx.exception))


class TestCoefficientCodec(unittest.TestCase):
    """Test suite for polynomial coefficients."""

    def test_monomials(self):
        """Test coefficient encoding.

        Verifies that:
        - Each monomial carries its symbols with powers and a rational
        - Zero encodes as the empty list
        - A bare rational decodes as a constant
        """
        a, b = sp.symbols("a b")
        encoded = encode_coefficient(sp.Rational(1, 2) * a ** 2 * b - 3)
        self.assertIn({'symbols': [['a', 2], ['b', 1]], 'rational': "1/2"}, encoded)
        self.assertIn({'symbols': [], 'rational': "-3"}, encoded)
        self.assertEqual(encode_coefficient(0), [])
        self.assertEqual(decode_coefficient(encoded), sp.Rational(1, 2) * a ** 2 * b - 3)
        self.assertEqual(decode_coefficient("7/3"), sp.Rational(7, 3))

    def test_rejections(self):
        """Test malformed coefficients.

        Verifies that:
        - Floats and bad symbol pairs are refused
        """
        for payload in (0.5, [{'rational': "1", 'symbols': [["a", -1]]}], [{'symbols': []}]):
            with self.subTest(payload=payload):
                with self.assertRaises(ValidationError):
                    decode_coefficient(payload)


class TestCompositeCodecs(unittest.TestCase):
    """Test suite for series, specs, queries and expansions."""

    def setUp(self):
        self.params = default_params()

    def test_series_and_spec(self):
        """Test decoding of series and pi data.

        Verifies that:
        - Repeated terms add up
        - Duplicate spec entries are refused
        - Encoding a decoded spec gives back its entries
        """
        beta = {'k': {'3': 1}, 'n': [{'idx': [0, 0, 0, 0]}]}
        series = decode_series({'terms': [{'beta': beta, 'coeff': "1"}, {'beta': beta, 'coeff': "1/2"}]},
                               self.params)
        self.assertEqual(series.coefficient(f(3) + e()), sp.Rational(3, 2))
        entry = {'n': [0, 0, 0, 0], 'beta': beta, 'coeff': "2"}
        spec = decode_pispec({'entries': [entry], 'strict_population': True}, self.params)
        self.assertEqual(spec.entries, {(E0, f(3) + e()): 2})
        self.assertEqual(encode_pispec(spec)['entries'][0]['coeff'], [{'symbols': [], 'rational': "2"}])
        with self.assertRaises(ValidationError):
            decode_pispec({'entries': [entry, entry]}, self.params)

    def test_query_and_forms(self):
        """Test queries, linear forms and moments.

        Verifies that:
        - A query cutoff becomes an exact rational
        - Missing linear form parts default to zero
        - Moments must start at 1
        """
        beta = {'k': {'3': 1}, 'n': [{'idx': [0, 0, 0, 0]}]}
        query = decode_gamma_query({'beta': beta, 'gamma': {'n': [{'idx': [0, 0, 0, 0]}]}, 'cutoff': "6"},
                                   self.params)
        self.assertEqual(query.cutoff, Fraction(6))
        self.assertEqual(decode_linear_form({'alpha': "5"}), LinearForm(0, 5, 0))
        self.assertEqual(decode_moments({'m': [1, 0, "1"]}).m, (1, 0, 1))
        with self.assertRaises(ValidationError):
            decode_moments({'m': ["2"]})

    def test_pi_minus_and_graph(self):
        """Test the encodings of expansions and graphs.

        Verifies that:
        - Terms carry coefficients as strings and counterterms as objects
        - Graph nodes are numbered in induction order
        """
        encoded = encode_pi_minus(expand_pi_minus(f(3, 2), self.params))
        self.assertEqual(encoded['beta'], {'k': {'3': 2}, 'n': []})
        counterterms = [t['counterterm'] for t in encoded['terms'] if t['counterterm']]
        self.assertEqual(counterterms, [{'k': 1, 'beta': {'k': {'3': 2}, 'n': []}}])
        graph = dependency_graph(f(3, 2) + e(), self.params)
        payload = encode_graph(graph, induction_order(graph))
        self.assertEqual(payload['nodes'][0]['kind'], 'noise')
        self.assertEqual([n['id'] for n in payload['nodes']], list(range(graph.number_of_nodes())))
        self.assertIn('fixes', {edge['relation'] for edge in payload['edges']})


if __name__ == '__main__':
    unittest.main()
