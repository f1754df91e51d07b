''' closed curves made of geodesic segments, and the curve file format '''
from dataclasses import dataclass, field
import json
import logging

import numpy as np

from hypergreen import spaceform
from hypergreen.spaceform import SpaceFormError

logger = logging.getLogger(__name__)

MODELS = {
    'euclidean': ('cartesian',),
    'hyperbolic': ('hyperboloid', 'ball'),
}
# points per segment when measuring distances between curves
DISTANCE_SAMPLES = 16
SELF_INTERSECTION_TOLERANCE = 1e-6
# adaptive sampling of analytic curves
SAMPLE_TOLERANCE = 1e-3
SAMPLE_START = 8
SAMPLE_LIMIT = 1 << 14


class CurveError(ValueError):
    ''' invalid loop or curve file, or curves closer than allowed '''


@dataclass
class ParamLoop:
    ''' a closed polyline whose segments are geodesics; closure is implied '''
    space: spaceform.ModelSpace
    points: np.ndarray
    name: str = ''
    orientation: int = 1
    _segments: tuple = field(default=None, init=False, repr=False,
                             compare=False)

    def __post_init__(self):
        if self.space.dim != 3:
            raise CurveError('curves are only supported in dimension 3')
        if self.orientation not in (1, -1):
            raise CurveError('orientation must be +1 or -1')
        try:
            points = spaceform.point(self.space, self.points)
        except SpaceFormError as e:
            raise CurveError('curve %s: %s' % (self.name, e)) from e
        if len(points) > 1 and np.allclose(points[0], points[-1]):
            points = points[:-1]
        if len(points) < 3:
            raise CurveError('curve %s needs at least 3 points' % self.name)
        if self.orientation == -1:
            points = points[::-1].copy()
        self.points = points
        self.orientation = 1
        lengths = self.segments()[2]
        if np.any(lengths <= 0):
            raise CurveError('curve %s repeats a point' % self.name)

    @classmethod
    def sample(cls, space, function, name='', tolerance=SAMPLE_TOLERANCE,
               start=SAMPLE_START, limit=SAMPLE_LIMIT):
        ''' a polyline through the closed curve function(s), s in [0, 1)

        Parameter intervals are halved until the geodesic midpoint of every
        chord is within tolerance of the curve at the middle parameter. '''
        def evaluate(params):
            try:
                return spaceform.point(
                    space, np.array([function(s) for s in params]))
            except SpaceFormError as e:
                raise CurveError('curve %s: %s' % (name, e)) from e

        params = np.arange(start) / start
        points = evaluate(params)
        while True:
            following = np.append(params[1:], 1.0)
            middles = (params + following) / 2
            on_curve = evaluate(middles)
            chords = spaceform.midpoint(
                space, points, np.roll(points, -1, axis=0))
            gaps = np.asarray(spaceform.distance(space, on_curve, chords))
            coarse = gaps > tolerance
            if not np.any(coarse):
                break
            if len(params) + np.count_nonzero(coarse) > limit:
                raise CurveError(
                    'curve %s needs more than %d points for tolerance %g' % \
                            (name, limit, tolerance))
            order = np.argsort(np.concatenate([params, middles[coarse]]))
            params = np.concatenate([params, middles[coarse]])[order]
            points = np.concatenate([points, on_curve[coarse]])[order]
        logger.debug('sampled curve %s with %d points', name, len(params))
        return cls(space, points, name)

    def segments(self):
        ''' start points, unit directions and lengths of the segments '''
        if self._segments is None:
            starts = self.points
            ends = np.roll(self.points, -1, axis=0)
            lengths = np.asarray(spaceform.distance(self.space, starts, ends))
            directions = np.asarray(spaceform.log_map(self.space, starts, ends))
            safe = np.where(lengths > 0, lengths, 1.0)
            self._segments = (starts, directions / safe[:, None], lengths)
        return self._segments

    @property
    def length(self):
        return float(np.sum(self.segments()[2]))

    def locate(self, tau):
        ''' points, unit tangents and arclength weights at segment
        parameters tau in [0, 1], one row per (segment, tau) '''
        starts, directions, lengths = self.segments()
        tau = np.asarray(tau, dtype=float)
        run = lengths[:, None] * tau[None, :]
        if self.space.is_euclidean:
            points = starts[:, None, :] + run[..., None] * directions[:, None, :]
            tangents = np.broadcast_to(directions[:, None, :], points.shape)
        else:
            ch, sh = np.cosh(run)[..., None], np.sinh(run)[..., None]
            points = ch * starts[:, None, :] + sh * directions[:, None, :]
            tangents = sh * starts[:, None, :] + ch * directions[:, None, :]
        dim = starts.shape[1]
        weights = np.broadcast_to(lengths[:, None], run.shape)
        return (points.reshape(-1, dim), np.array(tangents).reshape(-1, dim),
                np.array(weights).reshape(-1))

    def reversed(self):
        return ParamLoop(self.space, self.points[::-1].copy(), self.name)

    def perturbed(self, delta, rng):
        ''' move the control points by a smooth random field of size delta '''
        count = len(self.points)
        phase = 2 * np.pi * np.arange(count) / count
        shift = np.zeros((count, self.space.ambient_dim))
        for mode in range(1, 4):
            a, b = rng.normal(size=(2, self.space.ambient_dim))
            shift += (np.outer(np.cos(mode * phase), a) +
                      np.outer(np.sin(mode * phase), b)) / mode
        size = np.max(np.linalg.norm(shift, axis=1))
        shift *= delta / size if size else 0.0
        if self.space.is_euclidean:
            return ParamLoop(self.space, self.points + shift, self.name)
        moved = [spaceform.exp_map(self.space, p,
                                   spaceform.project_tangent(self.space, p, v))
                 for p, v in zip(self.points, shift)]
        return ParamLoop(self.space, np.array(moved), self.name)

    def samples(self, count=DISTANCE_SAMPLES):
        ''' points spread along every segment, end points included '''
        return self.locate(np.arange(count) / count)[0]

    def straight_points(self):
        ''' corners in coordinates where the segments are straight: the
        klein model for hyperbolic loops '''
        if self.space.is_euclidean:
            return np.array(self.points)
        return self.points[:, 1:] / self.points[:, :1]

    def check_simple(self, tolerance=SELF_INTERSECTION_TOLERANCE):
        ''' reject loops whose non-adjacent segments come within tolerance '''
        count = len(self.points)
        if count < 4:
            return
        corners = self.straight_points()
        ends = np.roll(corners, -1, axis=0)
        for i in range(count):
            for j in range(i + 2, count):
                if i == 0 and j == count - 1:
                    continue
                if segment_gap(corners[i], ends[i], corners[j], ends[j]) < \
                        tolerance:
                    raise CurveError('curve %s intersects itself' % self.name)


def segment_gap(p, q, r, s):
    ''' smallest euclidean distance between the segments pq and rs '''
    d1, d2, w = q - p, s - r, p - r
    a, e = d1 @ d1, d2 @ d2
    b, c, f = d1 @ d2, d1 @ w, d2 @ w
    denom = a * e - b * b
    u = np.clip((b * f - c * e) / denom, 0.0, 1.0) if denom > 1e-14 * a * e \
            else 0.0
    v = (b * u + f) / e
    if v < 0:
        v, u = 0.0, np.clip(-c / a, 0.0, 1.0)
    elif v > 1:
        v, u = 1.0, np.clip((b - c) / a, 0.0, 1.0)
    return float(np.linalg.norm(p + u * d1 - r - v * d2))


def min_distance(first, second, samples=DISTANCE_SAMPLES):
    ''' smallest sampled distance between two loops '''
    a = first.samples(samples)
    b = second.samples(samples)
    gaps = spaceform.distance(first.space, a[:, None, :], b[None, :, :])
    return float(np.min(gaps))


def require_apart(first, second, epsilon):
    distance = min_distance(first, second)
    if distance < epsilon:
        raise CurveError('curves %s and %s are %.3g apart, closer than %g' % \
                (first.name, second.name, distance, epsilon))
    return distance


@dataclass
class CurveFile:
    ''' named loops from a curve document '''
    space: spaceform.ModelSpace
    model: str
    curves: dict

    def get(self, name=None):
        if name is None:
            return next(iter(self.curves.values()))
        if name not in self.curves:
            raise CurveError('no curve named %s' % name)
        return self.curves[name]

    def pair(self):
        if len(self.curves) != 2:
            raise CurveError('expected exactly two curves, found %d' % \
                    len(self.curves))
        return tuple(self.curves.values())


def _model_points(space, model, points):
    try:
        points = np.asarray(points, dtype=float)
    except (TypeError, ValueError) as e:
        raise CurveError('points must be numbers: %s' % e) from e
    if points.ndim != 2:
        raise CurveError('points must be a list of coordinate lists')
    if model == 'ball':
        try:
            return spaceform.from_poincare_ball(points)
        except SpaceFormError as e:
            raise CurveError(str(e)) from e
    return points


def parse_curve_document(doc):
    ''' {"space", "model", "curves": [{"name", "orientation", "points"}]} '''
    if not isinstance(doc, dict) or not isinstance(doc.get('curves'), list):
        raise CurveError('curve file needs a "curves" list')
    try:
        space = spaceform.parse_space(doc.get('space'))
    except SpaceFormError as e:
        raise CurveError(str(e)) from e
    family = 'euclidean' if space.is_euclidean else 'hyperbolic'
    model = doc.get('model', MODELS[family][0])
    if model not in MODELS[family]:
        raise CurveError('model %s does not fit space %s' % (model, space.tag))

    curves = {}
    for index, entry in enumerate(doc['curves']):
        if not isinstance(entry, dict):
            raise CurveError('curve %d is not an object' % index)
        name = entry.get('name', 'curve%d' % index)
        if name in curves:
            raise CurveError('curve name %s is used twice' % name)
        if not isinstance(entry.get('points'), list) or \
                len(entry['points']) < 3:
            raise CurveError('curve %s needs at least 3 points' % name)
        points = _model_points(space, model, entry['points'])
        orientation = entry.get('orientation', 1)
        if orientation not in (1, -1):
            raise CurveError('curve %s has orientation %r, not +1 or -1' % \
                    (name, orientation))
        loop = ParamLoop(space, points, name, orientation)
        loop.check_simple()
        curves[name] = loop
    if not curves:
        raise CurveError('curve file has no curves')
    return CurveFile(space, model, curves)


def load_curve_file(path):
    try:
        with open(path, 'r') as curve_file:
            doc = json.load(curve_file)
    except (OSError, json.JSONDecodeError) as e:
        raise CurveError('cannot read curve file %s: %s' % (path, e)) from e
    return parse_curve_document(doc)
