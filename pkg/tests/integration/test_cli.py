import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stdout
from unittest.mock import patch

from src import cli
from src.cli import run_cli


def beta_json(k=None, n=None):
    payload = {'k': {str(key): m for key, m in (k or {}).items()}}
    payload['n'] = [{'idx': list(idx), 'mult': m} for idx, m in (n or [])]
    return json.dumps(payload)


E0 = (0, 0, 0, 0)


class CliTestCase(unittest.TestCase):
    """Runs the command line in-process with logs in a scratch directory."""

    @classmethod
    def setUpClass(cls):
        cls.log_dir = tempfile.mkdtemp()
        cls.env = patch.dict(os.environ, {'MIRS_LOG_DIR': cls.log_dir})
        cls.env.start()

    @classmethod
    def tearDownClass(cls):
        cls.env.stop()
        shutil.rmtree(cls.log_dir, ignore_errors=True)

    def run_cli(self, *argv):
        out = io.StringIO()
        with redirect_stdout(out):
            code = run_cli(list(argv))
        return code, out.getvalue()

    def run_json(self, *argv):
        code, out = self.run_cli(*argv, '--format', 'json')
        self.assertEqual(code, 0, out)
        return json.loads(out)


class TestIndexCommands(CliTestCase):
    """Test suite for the index, enumerate and classify-two commands."""

    def test_homogeneity_text(self):
        """Test the text output of `index homog`.

        Verifies that:
        - |2 f_3| prints as its form and value
        """
        code, out = self.run_cli('index', 'homog', '--beta', beta_json(k={3: 2}))
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), "4 + 5*alpha = 5/4")

    def test_quantities_json(self):
        """Test each quantity as JSON.

        Verifies that:
        - |e_0|_< = 0 and |0|_< = 39/20
        - <f_5> = 2 + 3 alpha - kappa
        - f_3 + 4 e_0 is not populated and [f_5 + 3 e_0] = 1
        """
        self.assertEqual(self.run_json('index', 'order', '--beta', beta_json(n=[(E0, 1)]))['value'], "0")
        self.assertEqual(self.run_json('index', 'order', '--beta', '{}')['value'], "39/20")
        disc = self.run_json('index', 'discounted', '--beta', beta_json(k={5: 1}))
        self.assertEqual(disc['form'], {'const': "2", 'alpha': "3", 'kappa': "-1"})
        self.assertEqual(disc['value'], "17/50")
        self.assertFalse(self.run_json('index', 'populated', '--beta', beta_json(k={3: 1}, n=[(E0, 4)]))['value'])
        self.assertEqual(self.run_json('index', 'bracket', '--beta', beta_json(k={5: 1}, n=[(E0, 3)]))['value'], 1)

    def test_enumerate_and_classify(self):
        """Test enumeration counts.

        Verifies that:
        - 13 populated indices up to order 2
        - 8 of homogeneity two up to order 2, none up to order 1
        """
        self.assertEqual(self.run_json('enumerate', '--max-order', '2')['count'], 13)
        self.assertEqual(self.run_json('classify-two', '--max-order', '2')['count'], 8)
        self.assertEqual(self.run_json('classify-two', '--max-order', '1')['count'], 0)
        code, out = self.run_cli('enumerate', '--max-order', '0')
        self.assertEqual(code, 0)
        self.assertEqual(out.split("\t")[0], "0")


class TestAlgebraCommands(CliTestCase):
    """Test suite for gamma, pi-minus, counterterms and deps."""

    def test_gamma_entry(self):
        """Test one Gamma entry from an inline spec.

        Verifies that:
        - pi^{(e_0)}_{f_3 + e_0} = 2 gives Gamma_{f_3 + 2 e_0}^{2 e_0} = 4
        - The recursive path agrees
        - --deps lists the pi entry used
        """
        spec = json.dumps({'entries': [{'n': list(E0), 'beta': json.loads(beta_json(k={3: 1}, n=[(E0, 1)])),
                                        'coeff': "2"}]})
        args = ('gamma', '--pi-spec', spec, '--beta', beta_json(k={3: 1}, n=[(E0, 2)]),
                '--gamma', beta_json(n=[(E0, 2)]))
        payload = self.run_json(*args, '--deps')
        self.assertEqual(payload['text'], "4")
        self.assertEqual(payload['gamma_entry'], [{'symbols': [], 'rational': "4"}])
        self.assertEqual(len(payload['dependencies']), 1)
        self.assertEqual(self.run_json(*args, '--recursive')['text'], "4")

    def test_pi_minus(self):
        """Test the expansion command.

        Verifies that:
        - Text output names the counterterm
        - JSON output gives the text and sympy forms
        - json-ast output lists the terms
        """
        code, out = self.run_cli('pi-minus', '--beta', beta_json(k={3: 2}))
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("Pi^-[2f3] = "))
        self.assertIn("c1[2f3]", out)
        flat = self.run_json('pi-minus', '--beta', beta_json(k={3: 2}))
        self.assertIn("c1[2f3]", flat['text'])
        self.assertNotIn('terms', flat)
        code, out = self.run_cli('pi-minus', '--beta', beta_json(k={3: 2}), '--format', 'json-ast')
        self.assertEqual(code, 0)
        tree = json.loads(out)
        self.assertEqual(len(tree['terms']), 2)
        self.assertEqual(tree['text'], flat['text'])

    def test_counterterms(self):
        """Test the counterterm listing.

        Verifies that:
        - Up to order 12 only c1[2f3] is supported
        """
        payload = self.run_json('counterterms', '--max-order', '12')
        self.assertEqual([c['label'] for c in payload['counterterms']], ["c1[2f3]"])

    def test_deps(self):
        """Test the dependency graph outputs.

        Verifies that:
        - --dot prints a digraph
        - --html writes a file
        - JSON nodes start with the noise
        """
        beta = beta_json(k={3: 2}, n=[(E0, 1)])
        code, out = self.run_cli('deps', '--beta', beta, '--dot')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("digraph"))
        html = os.path.join(self.log_dir, "deps.html")
        code, _ = self.run_cli('deps', '--beta', beta, '--html', html)
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(html))
        self.assertEqual(self.run_json('deps', '--beta', beta)['nodes'][0]['kind'], 'noise')


class TestAppellCommand(CliTestCase):
    """Test suite for the appell command."""

    MOMENTS = json.dumps({'m': ["1", "0", "1", "0", "3"]})

    def test_hermite_match(self):
        """Test the Hermite comparison.

        Verifies that:
        - Standard Gaussian moments match H_4 with sigma^2 = 1
        - A wrong variance exits with 1
        """
        payload = self.run_json('appell', '--moments', self.MOMENTS, '--k', '4', '--sigma2', '1', '--check-hermite')
        self.assertTrue(payload['hermite_match'])
        self.assertEqual(payload['polynomial']['coefficients'], ["3", "0", "-6", "0", "1"])
        code, _ = self.run_cli('appell', '--moments', self.MOMENTS, '--k', '4', '--sigma2', '2', '--check-hermite')
        self.assertEqual(code, 1)

    def test_rescaled(self):
        """Test the rescaled polynomial.

        Verifies that:
        - --alpha and --eps give a rescaled polynomial
        - --alpha alone is a usage error
        """
        payload = self.run_json('appell', '--moments', self.MOMENTS, '--k', '2', '--alpha', '-1/2', '--eps', '1/4')
        self.assertEqual(payload['rescaled']['coefficients'], ["-4", "0", "1"])
        code, _ = self.run_cli('appell', '--moments', self.MOMENTS, '--k', '2', '--alpha', '-1/2')
        self.assertEqual(code, 2)


class TestExitCodes(CliTestCase):
    """Test suite for error handling at the command line."""

    def test_validation_errors(self):
        """Test inputs that exit with 2.

        Verifies that:
        - A negative multiplicity, a float alpha and a missing file exit with 2
        - argparse usage errors exit with 2
        - json-ast is refused outside pi-minus
        """
        self.assertEqual(self.run_cli('index', 'homog', '--beta', '{"k": {"3": -1}}')[0], 2)
        self.assertEqual(self.run_cli('index', 'homog', '--beta', '{}', '--params', '{"alpha": -0.55}')[0], 2)
        self.assertEqual(self.run_cli('pi-minus', '--beta', os.path.join(self.log_dir, "nope.json"))[0], 2)
        self.assertEqual(self.run_cli('index', 'homog')[0], 2)
        self.assertEqual(self.run_cli('frobnicate')[0], 2)
        self.assertEqual(self.run_cli('enumerate', '--max-order', '2', '--format', 'json-ast')[0], 2)

    def test_non_generic(self):
        """Test that colliding orders exit with 3.

        Verifies that:
        - alpha = -1/2 is rejected before any output
        """
        code, out = self.run_cli('index', 'order', '--beta', '{}', '--params', '{"alpha": "-1/2"}')
        self.assertEqual(code, 3)
        self.assertEqual(out, "")

    def test_unexpected_error(self):
        """Test that an error outside the known types is logged and mapped.

        Verifies that:
        - A KeyError raised by a handler exits with 1 instead of escaping
        - Nothing is printed on stdout
        """
        def broken(args):
            raise KeyError("missing")

        with patch.dict(cli._command_handlers, {'index': broken}):
            with self.assertLogs('src.cli', level='ERROR'):
                code, out = self.run_cli('index', 'homog', '--beta', '{}')
        self.assertEqual(code, 1)
        self.assertEqual(out, "")

    def test_help(self):
        """Test that --help exits cleanly.

        Verifies that:
        - The exit code is 0
        """
        self.assertEqual(self.run_cli('--help')[0], 0)


if __name__ == '__main__':
    unittest.main()
