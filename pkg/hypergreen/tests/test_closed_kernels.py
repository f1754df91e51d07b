''' explicit green's functions '''
import math

from django.test import TestCase
import numpy as np

from hypergreen import closed_kernels, radial
from hypergreen.closed_kernels import ClosedFormError
from hypergreen.spaceform import ModelSpace

# alpha and beta of the one-form green's function on H^3
H3_ONEFORM = {
    0.5: (0.1104936735, 0.1095031573),
    1.0: (0.02154543836, 0.01723378222),
    2.0: (-0.007404065405, -0.01898394661),
    4.0: (-0.001176814525, -0.008717660206),
    8.0: (-1.97015925e-06, -0.0003737330272),
}


def second_difference(function, t, step=1e-4):
    ''' value, first and second derivative by central differences '''
    lower, value, upper = function(t - step), function(t), function(t + step)
    return value, (upper - lower) / (2 * step), \
            (upper - 2 * value + lower) / step ** 2


class ClosedKernels(TestCase):
    ''' closed forms and the equations they satisfy '''
    def setUp(self):
        self.h3 = ModelSpace.hyperbolic(3)
        self.r3 = ModelSpace.euclidean(3)

    def test_newton_potential(self):
        ''' 1/(4 pi r) in R^3 and -log(r)/(2 pi) in the plane '''
        self.assertAlmostEqual(closed_kernels.newton_potential(3, 2.0),
                               1 / (8 * math.pi))
        self.assertAlmostEqual(closed_kernels.newton_potential(2, math.e),
                               -1 / (2 * math.pi))
        # R^5: 1 / (3 r^3 vol(S^4)), vol(S^4) = 8 pi^2 / 3
        self.assertAlmostEqual(closed_kernels.newton_potential(5, 1.0),
                               1 / (8 * math.pi ** 2))
        with self.assertRaises(ClosedFormError):
            closed_kernels.newton_potential(3, 0.0)
        with self.assertRaises(ClosedFormError):
            closed_kernels.newton_potential(1, 1.0)

    def test_h3_oneform_values(self):
        ''' known values of the one-form profile '''
        for t, (alpha, beta) in H3_ONEFORM.items():
            got_alpha, got_beta = closed_kernels.h3_oneform_profile(t)
            self.assertAlmostEqual(got_alpha / alpha, 1.0, places=8)
            self.assertAlmostEqual(got_beta / beta, 1.0, places=8)

    def test_h3_oneform_crossover(self):
        ''' the series and the exact formula meet at the crossover '''
        for t in [0.009, 0.0099999, 0.0100001, 0.011]:
            series = closed_kernels.h3_oneform_profile(t, crossover=1.0)
            exact = closed_kernels.h3_oneform_profile(t, crossover=1e-3)
            np.testing.assert_allclose(series, exact, rtol=1e-9)

    def test_h3_oneform_near_zero(self):
        ''' both components behave like 1/(4 pi t) '''
        t = np.array([1e-8, 1e-6, 1e-4])
        alpha, beta = closed_kernels.h3_oneform_profile(t)
        np.testing.assert_allclose(alpha * 4 * math.pi * t, 1.0, rtol=1e-3)
        np.testing.assert_allclose(beta * 4 * math.pi * t, 1.0, rtol=1e-3)
        self.assertTrue(np.all(np.isfinite(alpha)))

    def test_h3_oneform_equation(self):
        ''' the pair solves the degree one radial equation '''
        system = radial.assemble_system(self.h3, 1)
        for t in [0.5, 1.0, 2.0, 4.0]:
            alpha = second_difference(
                lambda s: closed_kernels.h3_oneform_profile(s)[0], t)
            beta = second_difference(
                lambda s: closed_kernels.h3_oneform_profile(s)[1], t)
            values = np.array([[alpha[0], beta[0]]])
            derivs = np.array([[alpha[1], beta[1]]])
            second = np.array([[alpha[2], beta[2]]])
            residual = system.residual([t], values, derivs, second)
            self.assertLess(residual[0], 1e-6)

    def test_scalar_green(self):
        ''' closed form on H^3 and quadrature elsewhere '''
        for t in [0.1, 1.0, 5.0]:
            self.assertAlmostEqual(
                closed_kernels.scalar_green(self.h3, t) * 4 * math.pi,
                1 / math.tanh(t) - 1)
            self.assertAlmostEqual(closed_kernels.scalar_green(self.r3, t),
                                   1 / (4 * math.pi * t))
        # the quadrature path agrees with the closed form
        np.testing.assert_allclose(
            closed_kernels._scalar_green_one(self.h3, 0.3),
            closed_kernels.scalar_green(self.h3, 0.3), rtol=1e-9)
        with self.assertRaises(ClosedFormError):
            closed_kernels.scalar_green(ModelSpace.hyperbolic(2), 1.0)

    def test_scalar_green_h5(self):
        ''' derivative of the quadrature is -1/sigma '''
        space = ModelSpace.hyperbolic(5)
        t = 0.7
        step = 1e-4
        slope = (closed_kernels.scalar_green(space, t + step) -
                 closed_kernels.scalar_green(space, t - step)) / (2 * step)
        self.assertAlmostEqual(
            slope / closed_kernels.scalar_green_derivative(space, t), 1.0,
            places=5)

    def test_biot_savart_scalar(self):
        ''' phi = -cosh / (4 pi sinh^2) '''
        self.assertAlmostEqual(
            closed_kernels.h3_biot_savart_scalar(1.0),
            -math.cosh(1.0) / (4 * math.pi * math.sinh(1.0) ** 2))

    def test_closed_form_for(self):
        ''' the registry '''
        self.assertEqual(closed_kernels.closed_form_for(self.h3, 1).name,
                         'h3-oneform')
        alpha, beta = closed_kernels.closed_form_for(self.h3, 2).pair(1.0)
        self.assertAlmostEqual(alpha, H3_ONEFORM[1.0][1])
        self.assertAlmostEqual(beta, H3_ONEFORM[1.0][0])
        alpha, beta = closed_kernels.closed_form_for(self.r3, 2).pair(0.5)
        self.assertEqual(alpha, beta)
        self.assertEqual(
            closed_kernels.closed_form_for(ModelSpace.hyperbolic(4), 4).name,
            'scalar')
        with self.assertRaises(ClosedFormError):
            closed_kernels.closed_form_for(ModelSpace.hyperbolic(4), 2)
        with self.assertRaises(ClosedFormError):
            closed_kernels.closed_form_for(self.h3, 5)
