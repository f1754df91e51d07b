''' panel rules and refinement '''
import math

from django.test import TestCase
import numpy as np

from hypergreen.linking import QuadratureError, QuadratureSpec
from hypergreen.linking.quadrature import refine


class Rule(TestCase):
    ''' gauss-legendre nodes on [0, 1] '''
    def test_weights(self):
        ''' weights add up to the length of the interval '''
        spec = QuadratureSpec(nodes=5)
        for panels in [1, 3, 8]:
            tau, weights = spec.rule(panels)
            self.assertEqual(len(tau), 5 * panels)
            self.assertAlmostEqual(np.sum(weights), 1.0)
            self.assertTrue(np.all((tau > 0) & (tau < 1)))

    def test_exact_polynomials(self):
        ''' n nodes integrate degree 2n - 1 exactly '''
        tau, weights = QuadratureSpec(nodes=4).rule(2)
        self.assertAlmostEqual(weights @ tau ** 7, 1 / 8)

    def test_bad_spec(self):
        ''' nodes, panels and tolerance are checked '''
        with self.assertRaises(ValueError):
            QuadratureSpec(nodes=0)
        with self.assertRaises(ValueError):
            QuadratureSpec(tolerance=2.0)
        with self.assertRaises(ValueError):
            QuadratureSpec(max_depth=-1)


class Refine(TestCase):
    ''' doubling until two levels agree '''
    def test_converges(self):
        ''' a smooth integrand converges at the first doubling '''
        spec = QuadratureSpec(nodes=6, tolerance=1e-10)

        def integral(panels):
            tau, weights = spec.rule(panels)
            return weights @ np.exp(tau)

        result = refine(integral, spec)
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.value, math.e - 1, places=12)
        self.assertEqual(result.panels, 2 ** result.depth)
        self.assertEqual(len(result.history), result.depth + 1)
        self.assertLess(result.error_estimate, 1e-10)

    def test_vector_values(self):
        ''' the change is measured as a vector norm '''
        spec = QuadratureSpec(nodes=6, tolerance=1e-10)

        def integral(panels):
            tau, weights = spec.rule(panels)
            return [weights @ np.sin(tau), weights @ np.cos(tau)]

        result = refine(integral, spec)
        np.testing.assert_allclose(result.value,
                                   [1 - math.cos(1), math.sin(1)])

    def test_no_convergence(self):
        ''' the error keeps the whole history '''
        spec = QuadratureSpec(max_depth=2)
        with self.assertRaises(QuadratureError) as error:
            refine(float, spec)
        history = error.exception.history
        self.assertEqual([h['panels'] for h in history], [1, 2, 4])
        self.assertEqual(history[-1]['change'], 2.0)
