''' geometry of the model spaces '''
import math

from django.test import TestCase
import numpy as np

from hypergreen import spaceform
from hypergreen.spaceform import ModelSpace, SpaceFormError


class SpaceForm(TestCase):
    ''' points, distances and transport on R^3 and H^3 '''
    def setUp(self):
        self.h3 = ModelSpace.hyperbolic(3)
        self.r3 = ModelSpace.euclidean(3)
        self.rng = np.random.default_rng(7)

    def random_point(self, space, size=1.0):
        ''' a point some distance from the origin '''
        if space.is_euclidean:
            return self.rng.normal(size=3) * size
        return spaceform.exp_map(
            space, spaceform.origin(space),
            np.concatenate([[0.0], self.rng.normal(size=3) * size]))


    def test_parse_space(self):
        ''' tags from the command line '''
        self.assertEqual(spaceform.parse_space('h3'), self.h3)
        self.assertEqual(spaceform.parse_space('euclidean4').dim, 4)
        scaled = spaceform.parse_space('h5:0.5')
        self.assertEqual(scaled.scale, 0.5)
        self.assertEqual(scaled.tag, 'h5:0.5')
        for bad in ['h', 'hyperbolic3', 'euclidean0', '', None]:
            with self.assertRaises(SpaceFormError):
                spaceform.parse_space(bad)

    def test_model_space_checks(self):
        ''' eigenvalue lists have to match the kind of space '''
        with self.assertRaises(SpaceFormError):
            ModelSpace.euclidean(1)
        with self.assertRaises(SpaceFormError):
            ModelSpace.hyperbolic(3, scale=0)
        with self.assertRaises(SpaceFormError):
            ModelSpace(spaceform.SpaceKind.REAL_HYPERBOLIC, 3, (1.0, 2.0))
        rank_one = ModelSpace.rank_one(4, [1.0, 1.0, 2.0])
        self.assertFalse(rank_one.is_space_form)
        with self.assertRaises(SpaceFormError):
            rank_one.scale
        with self.assertRaises(SpaceFormError):
            spaceform.origin(rank_one)

    def test_point(self):
        ''' points are validated and snapped onto the hyperboloid '''
        x = spaceform.point(self.h3, [math.cosh(1.0), math.sinh(1.0), 0, 0])
        self.assertAlmostEqual(spaceform.minkowski_dot(x, x), -1.0, places=14)
        with self.assertRaises(SpaceFormError):
            spaceform.point(self.h3, [1.0, 1.0, 0, 0])
        with self.assertRaises(SpaceFormError):
            spaceform.point(self.h3, [-1.0, 0, 0, 0])
        with self.assertRaises(SpaceFormError):
            spaceform.point(self.h3, [1.0, 0, 0])
        with self.assertRaises(SpaceFormError):
            spaceform.point(self.r3, [0, np.nan, 0])

    def test_geodesic_distance(self):
        ''' unit speed geodesics travel their parameter in distance '''
        for space in (self.h3, self.r3):
            x = self.random_point(space)
            frame = spaceform.standard_frame(space, x)
            for t in [1e-6, 1e-4, 0.3, 2.0, 15.0]:
                y = spaceform.geodesic(space, x, frame[1], t)
                self.assertAlmostEqual(
                    spaceform.distance(space, x, y) / t, 1.0, places=7)
                self.assertAlmostEqual(spaceform.distance(space, x, y),
                                       spaceform.distance(space, y, x))
        with self.assertRaises(SpaceFormError):
            spaceform.geodesic(self.r3, np.zeros(3), [2.0, 0, 0], 1.0)

    def test_distance_vectorized(self):
        ''' leading axes broadcast '''
        xs = np.array([self.random_point(self.h3) for _ in range(4)])
        y = self.random_point(self.h3)
        distances = spaceform.distance(self.h3, xs, y)
        self.assertEqual(distances.shape, (4,))
        self.assertAlmostEqual(distances[2],
                               spaceform.distance(self.h3, xs[2], y))

    def test_exp_log(self):
        ''' the log map inverts the exponential map '''
        for space in (self.h3, self.r3):
            x = self.random_point(space)
            y = self.random_point(space, 2.0)
            w = spaceform.log_map(space, x, y)
            self.assertAlmostEqual(spaceform.norm(space, w),
                                   spaceform.distance(space, x, y))
            np.testing.assert_allclose(
                spaceform.exp_map(space, x, w), y, atol=1e-10)

    def test_parallel_transport(self):
        ''' transport is an isometry onto the tangent space at x and
        turns the direction to x into the direction away from y '''
        x = self.random_point(self.h3)
        y = self.random_point(self.h3, 1.5)
        frame = spaceform.standard_frame(self.h3, y)
        moved = spaceform.parallel_transport(self.h3, x, y, frame)
        gram = spaceform.inner(self.h3, moved[:, None, :], moved[None, :, :])
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(
            spaceform.minkowski_dot(moved, x), 0.0, atol=1e-12)

        towards = spaceform.log_map(self.h3, y, x)
        np.testing.assert_allclose(
            spaceform.parallel_transport(self.h3, x, y, towards),
            -spaceform.log_map(self.h3, x, y), atol=1e-10)

    def test_standard_frame(self):
        ''' orthonormal and positively oriented '''
        x = self.random_point(self.h3)
        frame = spaceform.standard_frame(self.h3, x)
        gram = spaceform.inner(self.h3, frame[:, None, :], frame[None, :, :])
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)
        self.assertAlmostEqual(spaceform.volume_form(self.h3, x, frame), 1.0)
        self.assertAlmostEqual(
            spaceform.volume_form(self.r3, np.zeros(3), np.eye(3)), 1.0)

    def test_sphere_volume(self):
        ''' sigma and h for both model spaces '''
        for t in [0.1, 1.0, 3.0]:
            self.assertAlmostEqual(spaceform.sphere_volume(self.r3, t),
                                   4 * math.pi * t ** 2)
            self.assertAlmostEqual(spaceform.sphere_volume(self.h3, t),
                                   4 * math.pi * math.sinh(t) ** 2)
            self.assertAlmostEqual(spaceform.mean_curvature(self.h3, t),
                                   2 / math.tanh(t))
            self.assertAlmostEqual(spaceform.mean_curvature(self.r3, t), 2 / t)
        with self.assertRaises(SpaceFormError):
            spaceform.sphere_volume(self.h3, 0.0)

    def test_list_arguments(self):
        ''' plain lists work wherever arrays do '''
        base = [1.0, 0.0, 0.0, 0.0]
        np.testing.assert_allclose(
            spaceform.exp_map(self.h3, base, [0.0, 0.5, 0.0, 0.0]),
            [math.cosh(0.5), math.sinh(0.5), 0.0, 0.0])
        np.testing.assert_allclose(
            spaceform.geodesic(self.h3, base, [0.0, 0.0, 1.0, 0.0], 0.5),
            [math.cosh(0.5), 0.0, math.sinh(0.5), 0.0])
        np.testing.assert_allclose(
            spaceform.exp_map(self.r3, [1.0, 2.0, 3.0], [1.0, 0.0, 0.0]),
            [2.0, 2.0, 3.0])
        np.testing.assert_allclose(
            spaceform.geodesic(self.r3, [1.0, 2.0, 3.0], [0.0, 1.0, 0.0], 2.0),
            [1.0, 4.0, 3.0])
        np.testing.assert_allclose(
            spaceform.midpoint(self.r3, [0.0, 0.0, 0.0], [2.0, 0.0, 0.0]),
            [1.0, 0.0, 0.0])

    def test_midpoint(self):
        ''' halfway in distance from both ends '''
        for space in (self.h3, self.r3):
            x = self.random_point(space)
            y = self.random_point(space, 2.0)
            middle = spaceform.midpoint(space, x, y)
            half = spaceform.distance(space, x, y) / 2
            self.assertAlmostEqual(spaceform.distance(space, x, middle), half)
            self.assertAlmostEqual(spaceform.distance(space, y, middle), half)

    def test_triangle_inequality(self):
        ''' random triangles in both model spaces '''
        for space in (self.h3, self.r3):
            for _ in range(100):
                x, y, z = [self.random_point(space, 1.5) for _ in range(3)]
                self.assertLessEqual(
                    spaceform.distance(space, x, z),
                    spaceform.distance(space, x, y) + \
                            spaceform.distance(space, y, z) + 1e-12)

    def test_jacobi_fields(self):
        ''' geodesics leaving y at a small angle separate like the jacobi
        field, which is sqrt(sigma / vol S^2) in dimension 3 '''
        theta = 1e-6
        for space in (self.h3, self.r3):
            y = self.random_point(space)
            frame = spaceform.standard_frame(space, y)
            turned = math.cos(theta) * frame[0] + math.sin(theta) * frame[1]
            for t in [0.5, 2.0, 4.0]:
                gap = spaceform.distance(
                    space, spaceform.geodesic(space, y, frame[0], t),
                    spaceform.geodesic(space, y, turned, t))
                jacobi = math.sqrt(spaceform.sphere_volume(space, t) / \
                        spaceform.unit_sphere_volume(2))
                self.assertAlmostEqual(gap / theta / jacobi, 1.0, places=6)

    def test_mean_curvature_is_log_derivative(self):
        ''' h = sigma' / sigma by central differences '''
        spaces = (self.h3, self.r3, ModelSpace.hyperbolic(5, 2.0))
        for space in spaces:
            for t in [0.1, 1.0, 5.0]:
                step = 1e-5 * t
                slope = (spaceform.sphere_volume(space, t + step) - \
                        spaceform.sphere_volume(space, t - step)) / (2 * step)
                np.testing.assert_allclose(
                    slope / spaceform.sphere_volume(space, t),
                    spaceform.mean_curvature(space, t), rtol=1e-6)

    def test_small_radius(self):
        ''' sigma ~ vol S^n t^n (1 + n lam^2 t^2 / 6) and
        h ~ n / t + n lam^2 t / 3 '''
        for space in (self.h3, ModelSpace.hyperbolic(5, 2.0)):
            n, lam = space.n, space.scale
            for t in [1e-3, 1e-2]:
                np.testing.assert_allclose(
                    spaceform.sphere_volume(space, t),
                    spaceform.unit_sphere_volume(n) * t ** n * \
                            (1 + n * lam ** 2 * t ** 2 / 6), rtol=1e-6)
                np.testing.assert_allclose(
                    spaceform.mean_curvature(space, t),
                    n / t + n * lam ** 2 * t / 3, rtol=1e-6)

    def test_euclidean_limit(self):
        ''' a barely curved hyperbolic space looks euclidean '''
        flat = ModelSpace.hyperbolic(3, scale=1e-4)
        for t in [0.1, 1.0, 5.0]:
            np.testing.assert_allclose(spaceform.sphere_volume(flat, t),
                                       spaceform.sphere_volume(self.r3, t),
                                       rtol=1e-6)
            np.testing.assert_allclose(spaceform.mean_curvature(flat, t),
                                       spaceform.mean_curvature(self.r3, t),
                                       rtol=1e-6)
        for degree in range(4):
            self.assertAlmostEqual(spaceform.curvature_operator(flat, degree),
                                   0.0, places=7)

    def test_curvature_operator(self):
        ''' -(m - l) l on H^m, zero on R^m '''
        self.assertEqual(spaceform.curvature_operator(self.h3, 1), -2.0)
        self.assertEqual(spaceform.curvature_operator(self.h3, 0), 0.0)
        self.assertEqual(spaceform.curvature_operator(
            ModelSpace.hyperbolic(5, 2.0), 2), -24.0)
        self.assertEqual(spaceform.curvature_operator(self.r3, 2), 0.0)
        with self.assertRaises(SpaceFormError):
            spaceform.curvature_operator(self.h3, 4)


class ExteriorAlgebra(TestCase):
    ''' wedge bases, derivations and induced maps '''
    def test_wedge_basis(self):
        ''' lexicographic monomials '''
        self.assertEqual(spaceform.wedge_basis(3, 2),
                         [(0, 1), (0, 2), (1, 2)])
        self.assertEqual(spaceform.wedge_basis(3, 0), [()])
        with self.assertRaises(SpaceFormError):
            spaceform.wedge_basis(3, 4)

    def test_wedge_power(self):
        ''' functorial: products go to products, top degree is det '''
        rng = np.random.default_rng(3)
        a = rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4))
        np.testing.assert_allclose(
            spaceform.wedge_power(a @ b, 2),
            spaceform.wedge_power(a, 2) @ spaceform.wedge_power(b, 2),
            atol=1e-10)
        self.assertAlmostEqual(spaceform.wedge_power(a, 4)[0, 0],
                               np.linalg.det(a))
        np.testing.assert_allclose(spaceform.wedge_power(np.eye(4), 2),
                                   np.eye(6))

    def test_ad_action(self):
        ''' skew, and the derivation of a commutator is the commutator '''
        space = ModelSpace.hyperbolic(4)
        for degree in range(5):
            for axis in (1, 2, 3):
                ad = spaceform.ad_action(space, axis, degree)
                np.testing.assert_allclose(ad, -ad.T, atol=1e-14)
        first = spaceform.ad_action(space, 1, 2)
        second = spaceform.ad_action(space, 2, 2)
        generator = np.zeros((4, 4))
        generator[2, 1], generator[1, 2] = 1.0, -1.0
        np.testing.assert_allclose(
            first @ second - second @ first,
            spaceform.extend_derivation(generator, 2), atol=1e-14)
        with self.assertRaises(SpaceFormError):
            spaceform.ad_action(space, 0, 1)

    def test_wedge_and_contraction(self):
        ''' contraction is the transpose of wedging with the same vector '''
        v = np.array([0.3, -1.0, 2.0])
        wedge = spaceform.wedge_matrix(v, 2)
        self.assertEqual(wedge.shape, (3, 3))
        np.testing.assert_allclose(spaceform.contraction_matrix(v, 1),
                                   wedge.T)
        # v ^ v = 0
        np.testing.assert_allclose(
            spaceform.wedge_matrix(v, 2) @ spaceform.wedge_matrix(v, 1),
            np.zeros((3, 1)), atol=1e-14)


class BallModel(TestCase):
    ''' poincare ball coordinates '''
    def test_round_trip(self):
        ''' ball to hyperboloid and back '''
        p = np.array([[0.1, -0.2, 0.3], [0.0, 0.0, 0.0], [0.6, 0.1, 0.0]])
        x = spaceform.from_poincare_ball(p)
        np.testing.assert_allclose(spaceform.minkowski_dot(x, x), -1.0)
        np.testing.assert_allclose(spaceform.to_poincare_ball(x), p,
                                   atol=1e-14)
        with self.assertRaises(SpaceFormError):
            spaceform.from_poincare_ball([1.0, 0.0, 0.0])

    def test_push_forward(self):
        ''' the differential agrees with a difference quotient '''
        space = ModelSpace.hyperbolic(3)
        x = spaceform.from_poincare_ball([0.2, 0.1, -0.3])
        v = spaceform.standard_frame(space, x)[2]
        step = 1e-6
        quotient = (spaceform.to_poincare_ball(
            spaceform.exp_map(space, x, step * v)) - \
                spaceform.to_poincare_ball(
                    spaceform.exp_map(space, x, -step * v))) / (2 * step)
        np.testing.assert_allclose(spaceform.push_forward_to_ball(x, v),
                                   quotient, atol=1e-8)


class Frames(TestCase):
    ''' the frame adapted to a pair of points '''
    def test_adapted_frame(self):
        ''' first vector points along the geodesic to x '''
        space = ModelSpace.hyperbolic(3)
        y = spaceform.from_poincare_ball([0.1, 0.2, 0.0])
        x = spaceform.from_poincare_ball([-0.3, 0.1, 0.4])
        frame = spaceform.adapted_frame(space, y, x)
        gram = spaceform.inner(space, frame.vectors[:, None, :],
                               frame.vectors[None, :, :])
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(
            spaceform.geodesic(space, y, frame.T, frame.t), x, atol=1e-10)
        # at x the transported first vector points away from y
        at_x = frame.at_source()
        np.testing.assert_allclose(
            at_x[0], -spaceform.log_map(space, x, y) / frame.t, atol=1e-10)

    def test_coincident(self):
        ''' no frame for a single point '''
        space = ModelSpace.euclidean(3)
        with self.assertRaises(SpaceFormError):
            spaceform.adapted_frame(space, np.zeros(3), np.zeros(3))
