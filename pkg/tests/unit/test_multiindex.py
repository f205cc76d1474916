import unittest
from fractions import Fraction

from src.errors import NonGenericParameters, ValidationError
from src.multiindex import (EQUAL, LESS, LinearForm, Multiindex, StructureParams, bracket,
                            classify_degree_two, compare_forms, compare_order, discounted_homogeneity,
                            enumerate_populated, homogeneity, is_populated, is_special_form,
                            n_vectors_up_to, order, order_value, ordered_decompositions,
                            parabolic_degree, pi_may_be_nonzero, sub_multiindices, validate_genericity,
                            validate_multiindex)
from tests.helpers import E0, EMPTY, default_params, e, f


class TestLinearForm(unittest.TestCase):
    """Test suite for exact linear forms c0 + calpha*alpha + ckappa*kappa."""

    def test_arithmetic(self):
        """Test addition, subtraction and scaling.

        Verifies that:
        - Forms add componentwise
        - Rationals are coerced to constant forms
        - Scaling multiplies every coefficient
        """
        a = LinearForm(1, 2, 0)
        b = LinearForm(Fraction(1, 2), -1, 1)
        self.assertEqual(a + b, LinearForm(Fraction(3, 2), 1, 1))
        self.assertEqual(a - 1, LinearForm(0, 2, 0))
        self.assertEqual(2 - a, LinearForm(1, -2, 0))
        self.assertEqual(a * 3, LinearForm(3, 6, 0))

    def test_text(self):
        """Test the canonical text form.

        Verifies that:
        - alpha and kappa terms are written with signs
        - A zero form prints as 0
        """
        self.assertEqual(str(LinearForm(4, 5, 0)), "4 + 5*alpha")
        self.assertEqual(str(LinearForm(0, 1, 0)), "alpha")
        self.assertEqual(str(LinearForm(2, 3, -1)), "2 + 3*alpha - kappa")
        self.assertEqual(str(LinearForm()), "0")

    def test_compare_forms_detects_collisions(self):
        """Test that equal values with different coefficients are refused.

        Verifies that:
        - Distinct values compare by value
        - Identical forms compare equal
        - A coincidence of distinct forms raises NonGenericParameters
        """
        params = default_params(alpha=Fraction(-1, 2))
        self.assertEqual(compare_forms(LinearForm(0), LinearForm(1), params), LESS)
        self.assertEqual(compare_forms(LinearForm(1, 1, 0), LinearForm(1, 1, 0), params), EQUAL)
        with self.assertRaises(NonGenericParameters):
            compare_forms(LinearForm(2), LinearForm(Fraction(5, 2), 1, 0), params)


class TestStructureParams(unittest.TestCase):
    """Test suite for parameter validation."""

    def test_defaults(self):
        """Test the canonical parameter set.

        Verifies that:
        - D = d + 2
        - pbar is chosen as 201/100
        - The restricted copy collapses kmax to kmin
        """
        params = default_params()
        self.assertEqual(params.D, 5)
        self.assertEqual(params.pbar, Fraction(201, 100))
        self.assertEqual(params.restricted().kmax, 3)
        self.assertEqual(params.zero_n(), E0)

    def test_rejects_invalid(self):
        """Test rejection of parameters outside the admissible ranges.

        Verifies that:
        - d < 3, even kmin, alpha outside the subcritical window are refused
        - kappa above min(a, -2 alpha) is refused
        - pbar <= 2 is refused
        """
        with self.assertRaises(ValidationError):
            default_params(d=2)
        with self.assertRaises(ValidationError):
            default_params(kmin=4)
        with self.assertRaises(ValidationError):
            default_params(alpha=Fraction(0))
        with self.assertRaises(ValidationError):
            default_params(alpha=Fraction(-1))
        with self.assertRaises(ValidationError):
            default_params(kappa=Fraction(1))
        with self.assertRaises(ValidationError):
            default_params(pbar=Fraction(2))


class TestMultiindex(unittest.TestCase):
    """Test suite for the sparse multiindex type."""

    def test_canonical_form(self):
        """Test that equal multiindices compare equal regardless of construction.

        Verifies that:
        - Zero multiplicities are dropped
        - Repeated slots merge
        - Addition and subtraction are inverse
        """
        a = Multiindex({3: 1}, {E0: 2})
        self.assertEqual(a, f(3) + e(mult=2))
        self.assertEqual(Multiindex(((3, 1), (5, 0))), f(3))
        self.assertEqual((a + f(5)) - f(5), a)
        self.assertIsNone(a.subtract(f(5)))
        with self.assertRaises(ValueError):
            a - f(5)

    def test_predicates(self):
        """Test the structural predicates.

        Verifies that:
        - A single polynomial unit is purely polynomial
        - Counting helpers see multiplicities
        """
        self.assertTrue(e(0, 1, 0, 0).is_purely_polynomial)
        self.assertFalse(e(mult=2).is_purely_polynomial)
        beta = f(3) + f(5, 2) + e(mult=3)
        self.assertEqual(beta.k_count, 3)
        self.assertEqual(beta.n_count, 3)
        self.assertEqual(beta.k_count_above(3), 2)
        self.assertEqual(str(f(3) + e(mult=2)), "f3+2e(0,0,0,0)")

    def test_validate_multiindex(self):
        """Test validation against params.

        Verifies that:
        - Even or too small k-slots are refused
        - n-slots of the wrong arity are refused
        """
        params = default_params()
        validate_multiindex(f(5) + e(), params)
        with self.assertRaises(ValidationError):
            validate_multiindex(f(4), params)
        with self.assertRaises(ValidationError):
            validate_multiindex(f(1), params)
        with self.assertRaises(ValidationError):
            validate_multiindex(Multiindex.unit_n((0, 0, 0)), params)
        with self.assertRaises(ValidationError):
            validate_multiindex(f(7), default_params(kmax=5))


class TestScalars(unittest.TestCase):
    """Test suite for homogeneity, bracket, order and their variants."""

    def setUp(self):
        self.params = default_params()

    def test_parabolic_degree(self):
        """Test |n| = 2 n_0 + n_1 + ... + n_d.

        Verifies that:
        - Time counts twice
        - Wrong arity raises ValidationError
        """
        self.assertEqual(parabolic_degree((0, 0, 0, 0)), 0)
        self.assertEqual(parabolic_degree((1, 0, 0, 0)), 2)
        self.assertEqual(parabolic_degree((0, 1, 1, 0)), 2)
        with self.assertRaises(ValidationError):
            parabolic_degree((1, 0, 0), d=3)

    def test_homogeneity(self):
        """Test the homogeneity as an exact linear form.

        Verifies that:
        - |0| = alpha
        - |f_3 + 3 e_0| = 2
        - |2 f_3| = 4 + 5 alpha
        - |e_n| = |n|
        """
        self.assertEqual(homogeneity(EMPTY, self.params), LinearForm(0, 1, 0))
        self.assertEqual(homogeneity(f(3) + e(mult=3), self.params), LinearForm(2, 0, 0))
        self.assertEqual(homogeneity(f(3, 2), self.params), LinearForm(4, 5, 0))
        self.assertEqual(homogeneity(e(0, 1, 0, 0), self.params), LinearForm(1, 0, 0))

    def test_bracket(self):
        """Test [beta] = sum (k-1) beta(k) - sum beta(n).

        Verifies that:
        - [0] = 0, [e_n] = -1, [f_5 + 3 e_0] = 1
        """
        self.assertEqual(bracket(EMPTY), 0)
        self.assertEqual(bracket(e(1, 0, 0, 0)), -1)
        self.assertEqual(bracket(f(5) + e(mult=3)), 1)

    def test_order(self):
        """Test the order |beta|_< = |beta| + D/2 (1 + [beta]).

        Verifies that:
        - |e_0|_< = 0
        - |0|_< = alpha + D/2 = 39/20
        - |f_3 + 3 e_0|_< = 2
        """
        self.assertEqual(order_value(e(), self.params), 0)
        self.assertEqual(order_value(EMPTY, self.params), Fraction(39, 20))
        self.assertEqual(order(f(3) + e(mult=3), self.params), LinearForm(2, 0, 0))

    def test_discounted_homogeneity(self):
        """Test <beta> = |beta| - kappa * #(k > kmin).

        Verifies that:
        - No discount without k > kmin
        - One kappa per slot above kmin
        """
        self.assertEqual(discounted_homogeneity(f(3, 2), self.params), LinearForm(4, 5, 0))
        self.assertEqual(discounted_homogeneity(f(5), self.params), LinearForm(2, 3, -1))
        self.assertEqual(discounted_homogeneity(e(0, 2, 0, 0), self.params), LinearForm(2, 0, 0))

    def test_population(self):
        """Test the population predicate.

        Verifies that:
        - Single polynomial units are populated
        - f_3 + 4 e_0 is not, f_3 + 2 e_0 is
        - The special form f_kmin + kmin units is populated but cannot carry pi
        """
        self.assertTrue(is_populated(e(0, 1, 0, 0), self.params))
        self.assertFalse(is_populated(f(3) + e(mult=4), self.params))
        self.assertTrue(is_populated(f(3) + e(mult=2), self.params))
        special = f(3) + e(mult=2) + e(0, 1, 0, 0)
        self.assertTrue(is_special_form(special, self.params))
        self.assertTrue(is_populated(special, self.params))
        self.assertFalse(pi_may_be_nonzero(special))

    def test_compare_order(self):
        """Test comparisons of orders.

        Verifies that:
        - e_0 precedes 0
        - Every multiindex equals itself
        """
        self.assertEqual(compare_order(e(), EMPTY, self.params), LESS)
        beta = f(3, 2) + e()
        self.assertEqual(compare_order(beta, beta, self.params), EQUAL)


class TestCombinatorics(unittest.TestCase):
    """Test suite for the combinatorial helpers."""

    def test_n_vectors(self):
        """Test the enumeration of n with |n| <= degree.

        Verifies that:
        - There are 1 + 3 + 7 vectors of degree at most 2 when d = 3
        - Vectors are sorted by degree
        """
        vectors = n_vectors_up_to(3, 2)
        self.assertEqual(len(vectors), 11)
        self.assertEqual(vectors[0], E0)
        degrees = [parabolic_degree(n) for n in vectors]
        self.assertEqual(degrees, sorted(degrees))

    def test_sub_multiindices(self):
        """Test componentwise sub-multiindices.

        Verifies that:
        - f_3 + 2 e_0 has 2 * 3 sub-multiindices, including 0 and itself
        """
        subs = list(sub_multiindices(f(3) + e(mult=2)))
        self.assertEqual(len(subs), 6)
        self.assertIn(EMPTY, subs)
        self.assertIn(f(3) + e(mult=2), subs)

    def test_ordered_decompositions(self):
        """Test ordered decompositions into nonzero parts.

        Verifies that:
        - f_3 + e_0 splits into two parts in both orders
        - The accept filter drops parts
        - Zero parts of zero yield the empty tuple
        """
        parts = list(ordered_decompositions(f(3) + e(), 2))
        self.assertEqual(sorted(parts, key=lambda p: p[0].sort_key()),
                         sorted([(f(3), e()), (e(), f(3))], key=lambda p: p[0].sort_key()))
        only_k = list(ordered_decompositions(f(3) + e(), 2, accept=lambda b: not b.npart))
        self.assertEqual(only_k, [])
        self.assertEqual(list(ordered_decompositions(EMPTY, 0)), [()])


class TestEnumeration(unittest.TestCase):
    """Test suite for the enumeration of populated multiindices."""

    def setUp(self):
        self.params = default_params()

    def test_small_cutoffs(self):
        """Test enumeration at small order cutoffs.

        Verifies that:
        - Cutoff 2 gives 13 indices: 0, f_3 + 3 e_0 and the 11 e_n with |n| <= 2
        - Cutoff 0 gives exactly e_0
        - A negative cutoff gives nothing
        """
        found = enumerate_populated(2, self.params)
        self.assertEqual(len(found), 13)
        self.assertIn(EMPTY, found)
        self.assertIn(f(3) + e(mult=3), found)
        self.assertEqual(sum(1 for b in found if b.is_purely_polynomial), 11)
        self.assertEqual(enumerate_populated(0, self.params), [e()])
        self.assertEqual(enumerate_populated(-1, self.params), [])

    def test_sorted_and_stable(self):
        """Test the canonical ordering of the enumeration.

        Verifies that:
        - Results are sorted by (order, canonical key)
        - Inflating the search bounds changes nothing
        - Worker processes give the same list
        """
        found = enumerate_populated(4, self.params)
        keys = [(order_value(b, self.params), b.sort_key()) for b in found]
        self.assertEqual(keys, sorted(keys))
        self.assertEqual(enumerate_populated(4, self.params, bound_factor=2), found)
        self.assertEqual(enumerate_populated(4, self.params, jobs=2), found)

    def test_max_homogeneity(self):
        """Test the optional homogeneity ceiling.

        Verifies that:
        - Every result respects the ceiling
        - The ceiling only removes indices
        """
        full = enumerate_populated(4, self.params)
        capped = enumerate_populated(4, self.params, max_homogeneity=1)
        self.assertTrue(set(capped) <= set(full))
        for b in capped:
            self.assertLessEqual(homogeneity(b, self.params).evaluate(self.params), 1)

    def test_genericity(self):
        """Test the genericity validators.

        Verifies that:
        - The default parameters are generic up to order 6
        - alpha = -1/2 is rejected
        """
        validate_genericity(self.params, 6)
        with self.assertRaises(NonGenericParameters):
            validate_genericity(default_params(alpha=Fraction(-1, 2)), 6)


class TestClassifyDegreeTwo(unittest.TestCase):
    """Test suite for the classification of homogeneity-two indices."""

    def setUp(self):
        self.params = default_params()

    def test_families(self):
        """Test the two families of homogeneity two.

        Verifies that:
        - Cutoff 20 gives the 7 e_n with |n| = 2 and f_k + 3 e_0 for k = 3, 5, 7, 9
        - Cutoff 2 keeps only f_3 + 3 e_0 from the second family
        - Cutoff 1 gives nothing
        """
        found = classify_degree_two(20, self.params)
        poly = [b for b in found if b.is_purely_polynomial]
        special = {b for b in found if not b.is_purely_polynomial}
        self.assertEqual(len(poly), 7)
        self.assertEqual(set(poly), {e(*n) for n in [(1, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2),
                                                     (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1)]})
        self.assertEqual(special, {f(k) + e(mult=3) for k in (3, 5, 7, 9)})
        self.assertEqual(len(classify_degree_two(2, self.params)), 8)
        self.assertEqual(classify_degree_two(1, self.params), [])


if __name__ == '__main__':
    unittest.main()
