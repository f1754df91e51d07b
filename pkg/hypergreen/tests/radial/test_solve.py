''' integration and the decaying green's profiles '''
import math

from django.test import TestCase
import numpy as np
import pytest

from hypergreen import closed_kernels, profile_manager, radial
from hypergreen.radial import RadialSolveError
from hypergreen.radial import solve
from hypergreen.spaceform import ModelSpace
from hypergreen.tests.profiles import solved
from hypergreen.tests.test_closed_kernels import H3_ONEFORM


class Integrate(TestCase):
    ''' plain integration from given start data '''
    def test_wrong_start(self):
        ''' start data has to fit the system '''
        system = radial.assemble_system(ModelSpace.euclidean(3), 1)
        with self.assertRaises(RadialSolveError):
            radial.integrate(system, ([1.0], [0.0]),
                             radial.GridSpec(1e-3, 1.0))

    def test_not_a_space_form(self):
        ''' decaying solutions need the shooting data of a space form '''
        space = ModelSpace.rank_one(4, [1.0, 1.0, 2.0])
        system = radial.assemble_system(space, 1, generic=True,
                                        curvature=-1.0)
        with self.assertRaises(RadialSolveError):
            radial.decaying_solution(system)

    def test_mode_conditions(self):
        ''' H^3 one-forms have one non-decaying direction at infinity '''
        system = radial.assemble_system(ModelSpace.hyperbolic(3), 1)
        conditions = solve._mode_conditions(system)
        self.assertEqual(len(conditions), 1)
        direction, decay, growth = conditions[0]
        np.testing.assert_allclose(direction, [1.0, 0.0])
        self.assertEqual(growth, 0.0)
        self.assertEqual(decay, -2.0)

    def test_decaying_seeds(self):
        ''' far point data: one seed per condition, two per doubly decaying
        direction '''
        space = ModelSpace.hyperbolic(3)
        seeds = solve._decaying_seeds(radial.assemble_system(space, 1))
        self.assertEqual(len(seeds), 3)
        np.testing.assert_allclose(seeds[0][0], [1.0, 0.0])
        np.testing.assert_allclose(seeds[0][1], [-2.0, 0.0])
        for degree in (0, 3):
            seeds = solve._decaying_seeds(radial.assemble_system(space, degree))
            self.assertEqual(len(seeds), 1)
            np.testing.assert_allclose(seeds[0][1], -2.0 * seeds[0][0])

    def test_short_grid(self):
        ''' no room between the ends to join the solutions '''
        system = radial.assemble_system(ModelSpace.hyperbolic(3), 1)
        with self.assertRaises(RadialSolveError):
            radial.decaying_solution(
                system, radial.GridSpec(t_min=1e-3, t_max=1.001e-3))


@pytest.mark.slow
class DecayingSolution(TestCase):
    ''' solved profiles against the closed forms '''
    def test_euclidean(self):
        ''' R^3 in degree 0: the newton potential '''
        profile = solved('euclidean3', 0)
        t = np.array([0.01, 0.3, 3.0, 11.0])
        np.testing.assert_allclose(profile.evaluate(t)[:, 1],
                                   1 / (4 * math.pi * t), rtol=1e-8)

    def test_h3_oneforms(self):
        ''' the shooting and the gauge reproduce the closed form '''
        profile = solved('h3', 1)
        self.assertEqual(profile.info['kernel_dim'], 1)
        self.assertLess(profile.info['max_residual'], 1e-6)
        times = np.array(sorted(H3_ONEFORM))
        alpha, beta = profile.pair(times)
        expected = np.array([H3_ONEFORM[t] for t in times])
        scale = np.sum(np.abs(expected), axis=1)
        np.testing.assert_array_less(
            np.abs(alpha - expected[:, 0]) / scale, 1e-6)
        np.testing.assert_array_less(
            np.abs(beta - expected[:, 1]) / scale, 1e-6)
        error, _ = profile_manager.compare_closed_form(
            profile, np.geomspace(0.05, 8.0, 60))
        self.assertLess(error, 1e-6)

    def test_h3_scalar(self):
        ''' degree 0 gives (coth t - 1)/(4 pi) '''
        profile = solved('h3', 0)
        t = np.geomspace(0.05, 10.0, 40)
        np.testing.assert_allclose(
            profile.evaluate(t)[:, 1],
            closed_kernels.scalar_green(ModelSpace.hyperbolic(3), t),
            rtol=1e-7)
        self.assertEqual(profile.info['kernel_dim'], 0)

    def test_matching(self):
        ''' outward branches meet the decaying ones at t = 1 '''
        for degree, tails in ((0, 1), (1, 3), (3, 1)):
            profile = solved('h3', degree)
            self.assertAlmostEqual(profile.info['t_match'], 1.0, delta=0.01)
            self.assertEqual(profile.info['t_far'], 2 * profile.t_max)
            self.assertEqual(len(profile.info['decaying_coefficients']),
                             tails)
            self.assertLess(profile.info['max_residual'], 1e-6)

    def test_h3_twoforms(self):
        ''' an independent degree two solve is the swapped degree one
        profile '''
        direct = solved('h3', 2)
        self.assertEqual(direct.info['kernel_dim'], 1)
        swapped = radial.hodge_swap(solved('h3', 1))
        t = np.geomspace(0.1, 8.0, 60)
        alpha, beta = direct.pair(t)
        alpha_swap, beta_swap = swapped.pair(t)
        scale = np.abs(alpha_swap) + np.abs(beta_swap)
        np.testing.assert_array_less(
            (np.abs(alpha - alpha_swap) + np.abs(beta - beta_swap)) / scale,
            1e-6)

    def test_top_degree_swap(self):
        ''' degree 3 is the swapped degree 0 profile '''
        top = solved('h3', 3)
        swapped = radial.hodge_swap(solved('h3', 0))
        t = np.array([0.2, 1.0, 5.0])
        np.testing.assert_allclose(top.evaluate(t), swapped.evaluate(t),
                                   rtol=1e-8)

    def test_decay(self):
        ''' the tail fit sees exponential decay in H^3 '''
        profile = solved('h3', 1)
        self.assertGreater(profile.tail_rate(), 0.5)
        self.assertAlmostEqual(profile.asymptotic_ratio(), 1.0, places=2)

    def test_generic_path(self):
        ''' the full matrix profile is the block profile, diagonal '''
        space = ModelSpace.hyperbolic(3)
        system = radial.assemble_system(space, 1, generic=True)
        generic = radial.decaying_solution(system, radial.GridSpec(t_max=6.0))
        block = solved('h3', 1)
        t = np.array([0.3, 2.0])
        np.testing.assert_allclose(generic.matrix(t), block.matrix(t),
                                   rtol=1e-6, atol=1e-14)
