''' biot-savart fields of loops '''
import math

from django.test import TestCase
import numpy as np
import pytest

from hypergreen import linking, spaceform
from hypergreen.kernel_eval import KernelError
from hypergreen.linking import CurveError, FieldEvaluator
from hypergreen.linking.fields import pair_factors, twoform_profile
from hypergreen.tests.profiles import data_file, integrated, solved


def segment_field(start, end, x):
    ''' the classical field of a unit current from start to end '''
    r1, r2 = start - x, end - x
    n1, n2 = np.linalg.norm(r1), np.linalg.norm(r2)
    return np.cross(r1, r2) * (n1 + n2) / \
            (4 * math.pi * n1 * n2 * (n1 * n2 + r1 @ r2))


def polygon_field(points, x):
    return sum(segment_field(a, b, x)
               for a, b in zip(points, np.roll(points, -1, axis=0)))


class EuclideanField(TestCase):
    ''' against the exact field of straight wires '''
    def setUp(self):
        self.loop = linking.load_curve_file(data_file('hopf.json')).get('K')
        self.profile = integrated('euclidean3', 2, t_max=8.0)

    def test_pair_factors(self):
        ''' 1/(4 pi t^3) in R^3 '''
        t = np.array([[0.5, 1.0], [2.0, 4.0]])
        np.testing.assert_allclose(pair_factors(self.profile, t),
                                   1 / (4 * math.pi * t ** 3), rtol=1e-7)

    def test_axis(self):
        ''' on the axis the field points along it '''
        evaluator = FieldEvaluator(self.profile, self.loop)
        for height in [0.5, 1.0, -2.0]:
            x = np.array([0.0, 0.0, height])
            sample = evaluator.sample(x)
            expected = polygon_field(self.loop.points, x)
            np.testing.assert_allclose(sample.field, expected, rtol=1e-7,
                                       atol=1e-9)
            self.assertGreater(sample.field[2], 0)
            self.assertLess(np.linalg.norm(sample.field[:2]),
                            1e-10 * sample.field[2])

    def test_off_axis(self):
        ''' a generic point next to the wire '''
        x = np.array([0.9, 0.3, 0.2])
        field = linking.biot_savart_field(self.profile, self.loop, x)
        np.testing.assert_allclose(field, polygon_field(self.loop.points, x),
                                   rtol=1e-7, atol=1e-7)

    def test_divergence(self):
        ''' the field is divergence free '''
        evaluator = FieldEvaluator(self.profile, self.loop)
        self.assertLess(evaluator.divergence([0.2, -0.1, 0.4]), 1e-4)

    def test_too_close(self):
        ''' points on the loop have no field '''
        evaluator = FieldEvaluator(self.profile, self.loop)
        with self.assertRaises(CurveError):
            evaluator.sample([1.0, 0.0, 0.0])
        self.assertEqual(evaluator.distance(np.array([1.0, 0.0, 0.0])), 0.0)

    def test_wrong_profile(self):
        ''' dimension, degree and space have to fit '''
        with self.assertRaises(KernelError):
            twoform_profile(integrated('euclidean4', 1))
        with self.assertRaises(KernelError):
            twoform_profile(integrated('euclidean3', 0))
        with self.assertRaises(KernelError):
            FieldEvaluator(integrated('h3', 2), self.loop)


class HyperbolicField(TestCase):
    ''' fields in H^3 are tangent to the hyperboloid '''
    def setUp(self):
        self.space = spaceform.ModelSpace.hyperbolic(3)
        self.loop = linking.load_curve_file(
            data_file('h3_ball_hopf.json')).get('K')

    def test_tangent(self):
        ''' the field at x is a tangent vector at x '''
        evaluator = FieldEvaluator(integrated('h3', 2), self.loop)
        x = spaceform.from_poincare_ball(np.array([0.0, 0.0, 0.1]))
        sample = evaluator.sample(x)
        self.assertAlmostEqual(
            spaceform.minkowski_dot(sample.point, sample.field), 0.0,
            places=12)
        self.assertGreater(sample.distance, 0.0)

    @pytest.mark.slow
    def test_divergence(self):
        ''' divergence free up to the finite differences '''
        evaluator = FieldEvaluator(solved('h3', 1), self.loop)
        for ball in ([0.0, 0.0, 0.1], [0.1, 0.05, 0.0]):
            x = spaceform.from_poincare_ball(np.array(ball))
            self.assertLess(evaluator.divergence(x), 1e-3)

    @pytest.mark.slow
    def test_divergence_away_from_loop(self):
        ''' fifty random points at least 0.5 from the loop '''
        evaluator = FieldEvaluator(solved('h3', 1), self.loop)
        samples = self.loop.samples()
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 50:
            x = spaceform.from_poincare_ball(rng.uniform(-0.55, 0.55, 3))
            if np.min(spaceform.distance(self.space, samples, x)) < 0.5:
                continue
            self.assertLess(evaluator.divergence(x), 1e-3)
            checked += 1
