''' biot-savart fields of closed current loops '''
from dataclasses import dataclass
import logging

from django.conf import settings
import numpy as np

from hypergreen import spaceform
from hypergreen.kernel_eval import KernelError, codifferential_scalar
from hypergreen.linking import pairs
from hypergreen.linking.curves import CurveError
from hypergreen.linking.quadrature import QuadratureSpec, refine
from hypergreen.radial.profile import hodge_swap

logger = logging.getLogger(__name__)

# minkowski metric, turns euclidean covectors into lorentz vectors
LORENTZ = np.diag([-1.0, 1.0, 1.0, 1.0])
DIVERGENCE_STEP = 1e-3


def twoform_profile(profile):
    ''' the degree two profile used by the biot-savart kernel in dimension 3 '''
    if profile.space.dim != 3:
        raise KernelError('biot-savart fields need a 3 dimensional space')
    if profile.degree == 1:
        logger.info('swapping %r to degree 2', profile)
        return hodge_swap(profile)
    if profile.degree != 2:
        raise KernelError('biot-savart fields need a profile of degree 1 or 2')
    return profile


def pair_factors(profile, t):
    ''' -phi(t)/sinh(t) in H^3, -phi(t)/t in R^3, for any array of t '''
    t = np.asarray(t, dtype=float)
    phi = codifferential_scalar(profile, t.reshape(-1)).reshape(t.shape)
    if profile.space.is_euclidean:
        return -phi / t
    return -phi / np.sinh(t)


def loop_nodes(loop, spec, panels):
    ''' quadrature points, unit tangents and full weights along a loop '''
    tau, weights = spec.rule(panels)
    points, tangents, lengths = loop.locate(tau)
    count = len(loop.points)
    return (np.ascontiguousarray(points), np.ascontiguousarray(tangents),
            lengths * np.tile(weights, count))


@dataclass
class FieldSample:
    ''' the field at one point with its quadrature record '''
    point: np.ndarray
    field: np.ndarray
    error_estimate: float
    panels: int
    distance: float


class FieldEvaluator:
    ''' biot-savart field of one loop for a given profile '''
    def __init__(self, profile, loop, spec=None, epsilon=None):
        self.profile = twoform_profile(profile)
        if loop.space != self.profile.space:
            raise KernelError('loop lives in %s, profile in %s' % \
                    (loop.space.tag, self.profile.space.tag))
        self.loop = loop
        self.space = loop.space
        self.spec = spec or QuadratureSpec()
        self.epsilon = settings.CURVE_EPSILON if epsilon is None else epsilon
        self._hyperbolic = self.space.is_hyperbolic
        self._samples = loop.samples()

    def distance(self, x):
        ''' sampled distance from x to the loop '''
        return float(np.min(spaceform.distance(self.space, self._samples, x)))

    def at_panels(self, x, panels):
        ''' the field at x with a fixed panel count '''
        ys, tangents, weights = loop_nodes(self.loop, self.spec, panels)
        t = np.asarray(spaceform.distance(self.space, ys, x))
        factors = pair_factors(self.profile, t)
        vector = pairs.field_sum(x, ys, tangents, weights, factors,
                                 self._hyperbolic)
        if self._hyperbolic:
            vector = spaceform.project_tangent(self.space, x, LORENTZ @ vector)
        return vector

    def sample(self, x):
        ''' the converged field at x '''
        x = spaceform.point(self.space, x)
        gap = self.distance(x)
        if gap < self.epsilon:
            raise CurveError('point is %.3g from the loop, closer than %g' % \
                    (gap, self.epsilon))
        result = refine(lambda panels: self.at_panels(x, panels), self.spec)
        return FieldSample(x, result.value, result.error_estimate,
                           result.panels, gap)

    def divergence(self, x, step=DIVERGENCE_STEP):
        ''' relative divergence |tr G| / |G| of the covariant derivative G,
        from central differences with a fixed panel count '''
        sample = self.sample(x)
        x = sample.point
        frame = spaceform.standard_frame(self.space, x)
        gradient = np.empty((len(frame), len(frame)))
        for k, direction in enumerate(frame):
            values = []
            for sign in (1.0, -1.0):
                moved = spaceform.exp_map(self.space, x, sign * step * direction)
                vector = self.at_panels(moved, sample.panels)
                values.append(
                    spaceform.parallel_transport(self.space, x, moved, vector))
            change = (values[0] - values[1]) / (2 * step)
            gradient[:, k] = [spaceform.inner(self.space, change, e) \
                    for e in frame]
        size = np.linalg.norm(gradient)
        return float(abs(np.trace(gradient)) / size) if size else 0.0


def biot_savart_field(profile, loop, x, spec=None, epsilon=None):
    ''' the field B at x of a unit current along the loop '''
    return FieldEvaluator(profile, loop, spec, epsilon).sample(x).field
