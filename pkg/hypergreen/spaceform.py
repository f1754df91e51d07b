''' geometry of the euclidean and real hyperbolic space forms '''
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
import math
import re

import numpy as np
from scipy.special import gamma

from hypergreen.utils import regex

# hyperboloid membership and tangency, relative to the coordinate size
MODEL_TOLERANCE = 1e-9
UNIT_TOLERANCE = 1e-10
# below this value of -<x,y> the chordal distance formula is used
CHORDAL_CROSSOVER = 1.5


class SpaceFormError(ValueError):
    ''' bad input for a geometric operation '''


class SpaceKind(Enum):
    ''' which model a space lives in '''
    EUCLIDEAN = 'euclidean'
    REAL_HYPERBOLIC = 'hyperbolic'
    # only an eigenvalue list, for the generic ode assembler
    RANK_ONE = 'rank_one'


@dataclass(frozen=True)
class ModelSpace:
    ''' a space form of dimension m with its jacobi eigenvalues '''
    kind: SpaceKind
    dim: int
    jacobi_eigenvalues: tuple

    def __post_init__(self):
        if self.dim < 2:
            raise SpaceFormError('dimension must be at least 2, got %r' % \
                    self.dim)
        if len(self.jacobi_eigenvalues) != self.dim - 1:
            raise SpaceFormError(
                'expected %d jacobi eigenvalues, got %d' % \
                        (self.dim - 1, len(self.jacobi_eigenvalues)))
        flat = all(lam == 0 for lam in self.jacobi_eigenvalues)
        if (self.kind == SpaceKind.EUCLIDEAN) != flat:
            raise SpaceFormError(
                'euclidean spaces are exactly the ones with zero eigenvalues')
        if any(lam < 0 for lam in self.jacobi_eigenvalues):
            raise SpaceFormError('jacobi eigenvalues must be nonnegative')
        if self.kind == SpaceKind.REAL_HYPERBOLIC and \
                len(set(self.jacobi_eigenvalues)) != 1:
            raise SpaceFormError(
                'real hyperbolic space has one common eigenvalue')

    @classmethod
    def euclidean(cls, dim):
        ''' flat space R^m '''
        return cls(SpaceKind.EUCLIDEAN, dim, (0.0,) * (dim - 1))

    @classmethod
    def hyperbolic(cls, dim, scale=1.0):
        ''' H^m with sectional curvature -scale^2 '''
        if scale <= 0:
            raise SpaceFormError('curvature scale must be positive')
        return cls(SpaceKind.REAL_HYPERBOLIC, dim, (float(scale),) * (dim - 1))

    @classmethod
    def rank_one(cls, dim, eigenvalues):
        ''' an arbitrary eigenvalue list, only usable by the generic ode '''
        return cls(SpaceKind.RANK_ONE, dim, tuple(float(e) for e in eigenvalues))

    @property
    def n(self):
        ''' dimension of the distance spheres '''
        return self.dim - 1

    @property
    def is_euclidean(self):
        return self.kind == SpaceKind.EUCLIDEAN

    @property
    def is_hyperbolic(self):
        return self.kind == SpaceKind.REAL_HYPERBOLIC

    @property
    def is_space_form(self):
        return self.kind != SpaceKind.RANK_ONE

    @property
    def scale(self):
        ''' the common jacobi eigenvalue of a space form '''
        if not self.is_space_form:
            raise SpaceFormError('only space forms have a single scale')
        return self.jacobi_eigenvalues[0]

    @property
    def ambient_dim(self):
        ''' length of a coordinate vector '''
        return self.dim + 1 if self.is_hyperbolic else self.dim

    @property
    def tag(self):
        ''' short name used in files and on the command line '''
        if self.is_euclidean:
            return 'euclidean%d' % self.dim
        if self.is_hyperbolic:
            if self.scale == 1.0:
                return 'h%d' % self.dim
            return 'h%d:%r' % (self.dim, self.scale)
        return 'rank_one%d:%s' % (
            self.dim, ','.join(repr(e) for e in self.jacobi_eigenvalues))


def require_geometry(space):
    ''' point geometry is implemented for R^m and unit-curvature H^m '''
    if space.is_euclidean:
        return
    if space.is_hyperbolic and space.scale == 1.0:
        return
    raise SpaceFormError(
        'point geometry needs euclidean or unit curvature hyperbolic space, '
        'got %s' % space.tag)


def _col(values):
    ''' append an axis so per-point scalars broadcast against coordinates '''
    return np.asarray(values, dtype=float)[..., None]


def _plain(values):
    ''' python float for a single result, the array otherwise '''
    return float(values) if np.ndim(values) == 0 else values


def minkowski_dot(u, v):
    ''' <u,v>_L = -u0 v0 + sum ui vi, along the last axis '''
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return _plain(
        np.sum(u[..., 1:] * v[..., 1:], axis=-1) - u[..., 0] * v[..., 0])


def inner(space, u, v):
    ''' metric inner product of tangent vectors (in ambient coordinates) '''
    if space.is_hyperbolic:
        return minkowski_dot(u, v)
    return _plain(np.sum(
        np.asarray(u, dtype=float) * np.asarray(v, dtype=float), axis=-1))


def norm(space, v):
    ''' metric length of a tangent vector '''
    return _plain(np.sqrt(np.maximum(inner(space, v, v), 0.0)))


def origin(space):
    ''' the base point (0,...,0) or (1,0,...,0) '''
    require_geometry(space)
    point = np.zeros(space.ambient_dim)
    if space.is_hyperbolic:
        point[0] = 1.0
    return point


def point(space, coords):
    ''' validate coordinates and put them exactly on the model '''
    require_geometry(space)
    coords = np.array(coords, dtype=float)
    if coords.shape[-1] != space.ambient_dim:
        raise SpaceFormError('expected %d coordinates, got %d' % \
                (space.ambient_dim, coords.shape[-1]))
    if not np.all(np.isfinite(coords)):
        raise SpaceFormError('point coordinates must be finite')
    if space.is_euclidean:
        return coords
    scale = 1.0 + np.sum(coords ** 2, axis=-1)
    if np.any(np.abs(minkowski_dot(coords, coords) + 1.0) > \
            MODEL_TOLERANCE * scale) or np.any(coords[..., 0] <= 0):
        raise SpaceFormError('point is not on the upper hyperboloid')
    coords[..., 0] = np.sqrt(1.0 + np.sum(coords[..., 1:] ** 2, axis=-1))
    return coords


def tangent(space, x, v):
    ''' validate a tangent vector at x and remove rounding off the fiber '''
    x = np.asarray(x, dtype=float)
    v = np.array(v, dtype=float)
    if v.shape != np.shape(x):
        raise SpaceFormError('tangent vector has the wrong shape')
    if space.is_euclidean:
        return v
    scale = 1.0 + np.linalg.norm(x) * np.linalg.norm(v)
    if abs(minkowski_dot(x, v)) > MODEL_TOLERANCE * scale:
        raise SpaceFormError('vector is not tangent to the hyperboloid')
    return v + minkowski_dot(x, v) * x


def project_tangent(space, x, v):
    ''' orthogonal projection of an ambient vector onto T_x '''
    v = np.asarray(v, dtype=float)
    if space.is_euclidean:
        return v
    return v + _col(minkowski_dot(x, v)) * x


def geodesic(space, x, v, t):
    ''' the unit speed geodesic from x with initial direction v, at time t '''
    require_geometry(space)
    x = np.asarray(x, dtype=float)
    v = tangent(space, x, v)
    if abs(float(norm(space, v)) - 1.0) > UNIT_TOLERANCE:
        raise SpaceFormError('geodesic direction must be a unit vector')
    if space.is_euclidean:
        return x + t * v
    return np.cosh(t) * x + np.sinh(t) * v


def exp_map(space, x, w):
    ''' exponential map for a tangent vector of any length '''
    require_geometry(space)
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if space.is_euclidean:
        return x + w
    length = float(norm(space, w))
    if length == 0:
        return np.array(x, dtype=float)
    return np.cosh(length) * x + np.sinh(length) / length * w


def distance(space, x, y):
    ''' geodesic distance; vectorized over leading axes '''
    require_geometry(space)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if space.is_euclidean:
        return _plain(np.linalg.norm(x - y, axis=-1))
    diff = x - y
    # <x-y,x-y> = 4 sinh^2(d/2) on the hyperboloid
    chord = np.sqrt(np.maximum(minkowski_dot(diff, diff), 0.0))
    arg = -np.asarray(minkowski_dot(x, y))
    far = np.arccosh(np.maximum(arg, 1.0))
    near = 2.0 * np.arcsinh(chord / 2.0)
    return _plain(np.where(arg < CHORDAL_CROSSOVER, near, far))


def midpoint(space, x, y):
    ''' the point halfway along the geodesic from x to y; vectorized '''
    require_geometry(space)
    total = np.asarray(x, dtype=float) + np.asarray(y, dtype=float)
    if space.is_euclidean:
        return total / 2.0
    return total / _col(np.sqrt(-np.asarray(minkowski_dot(total, total))))


def log_map(space, x, y):
    ''' tangent vector at x pointing to y, with length distance(x, y) '''
    require_geometry(space)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if space.is_euclidean:
        return y - x
    diff = y - x
    # component of y orthogonal to x: y + <x,y> x, with <x,y> + 1 = -q/2
    u = diff - 0.5 * _col(minkowski_dot(diff, diff)) * x
    length = np.asarray(distance(space, x, y))
    size = np.sqrt(np.maximum(np.asarray(minkowski_dot(u, u)), 0.0))
    safe = np.where(size > 0, size, 1.0)
    return u * _col(np.where(size > 0, length / safe, 0.0))


def parallel_transport(space, x, y, v):
    ''' move the tangent vector v at y to x along the connecting geodesic '''
    require_geometry(space)
    v = np.asarray(v, dtype=float)
    if space.is_euclidean:
        return np.array(v)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    coeff = np.asarray(minkowski_dot(x, v)) / \
            (1.0 - np.asarray(minkowski_dot(x, y)))
    return v + _col(coeff) * (x + y)


def standard_frame(space, x):
    ''' orthonormal frame at x: the coordinate frame moved from the origin '''
    require_geometry(space)
    if space.is_euclidean:
        return np.eye(space.dim)
    base = origin(space)
    axes = np.eye(space.ambient_dim)[1:]
    return np.array([parallel_transport(space, x, base, e) for e in axes])


def volume_form(space, y, vectors):
    ''' oriented volume of m tangent vectors at y '''
    vectors = np.asarray(vectors, dtype=float)
    if space.is_euclidean:
        return np.linalg.det(vectors.T)
    return np.linalg.det(np.column_stack([y] + list(vectors)))


def unit_sphere_volume(n):
    ''' vol(S^n) = 2 pi^((n+1)/2) / Gamma((n+1)/2) '''
    return 2.0 * math.pi ** ((n + 1) / 2.0) / gamma((n + 1) / 2.0)


def _check_radius(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise SpaceFormError('radius must be positive')
    return t


def sphere_volume(space, t):
    ''' sigma(t), the volume of the distance sphere of radius t '''
    t = _check_radius(t)
    result = unit_sphere_volume(space.n) * np.ones_like(t)
    for lam in space.jacobi_eigenvalues:
        result = result * (np.sinh(lam * t) / lam if lam else t)
    return _plain(result)


def mean_curvature(space, t):
    ''' h(t) = sigma'(t) / sigma(t) '''
    t = _check_radius(t)
    result = np.zeros_like(t)
    for lam in space.jacobi_eigenvalues:
        result = result + (lam / np.tanh(lam * t) if lam else 1.0 / t)
    return _plain(result)


def curvature_operator(space, degree):
    ''' the scalar by which the weitzenbock term acts on l-forms '''
    if not 0 <= degree <= space.dim:
        raise SpaceFormError('degree %r outside 0..%d' % (degree, space.dim))
    if space.is_euclidean:
        return 0.0
    if not space.is_space_form:
        raise SpaceFormError(
            'curvature operator is only known for space forms')
    return -space.scale ** 2 * (space.dim - degree) * degree


def wedge_basis(dim, degree):
    ''' wedge monomials over (T, m1..mn), as sorted index tuples '''
    if not 0 <= degree <= dim:
        raise SpaceFormError('degree %r outside 0..%d' % (degree, dim))
    return list(combinations(range(dim), degree))


def _sort_sign(indices):
    ''' sign of the permutation sorting distinct indices, or 0 '''
    if len(set(indices)) < len(indices):
        return 0, None
    sign = 1
    items = list(indices)
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


def extend_derivation(matrix, degree):
    ''' the action on degree-l monomials of a vector map, as a derivation '''
    dim = matrix.shape[0]
    basis = wedge_basis(dim, degree)
    lookup = {mono: i for i, mono in enumerate(basis)}
    result = np.zeros((len(basis), len(basis)))
    for col, mono in enumerate(basis):
        for pos, index in enumerate(mono):
            for image in np.nonzero(matrix[:, index])[0]:
                replaced = mono[:pos] + (int(image),) + mono[pos + 1:]
                sign, key = _sort_sign(replaced)
                if sign:
                    result[lookup[key], col] += sign * matrix[image, index]
    return result


def ad_action(space, axis, degree):
    ''' matrix of ad(k_i) on the lexicographic basis of the l-vectors '''
    if not 1 <= axis <= space.n:
        raise SpaceFormError('axis %r outside 1..%d' % (axis, space.n))
    generator = np.zeros((space.dim, space.dim))
    # k_i rotates the (T, m_i) plane: T -> m_i, m_i -> -T
    generator[axis, 0] = 1.0
    generator[0, axis] = -1.0
    return extend_derivation(generator, degree)


def wedge_power(matrix, degree):
    ''' induced matrix on l-vectors, entries are l x l minors '''
    matrix = np.asarray(matrix, dtype=float)
    rows = wedge_basis(matrix.shape[0], degree)
    cols = wedge_basis(matrix.shape[1], degree)
    if degree == 0:
        return np.ones((1, 1))
    result = np.empty((len(rows), len(cols)))
    for i, row in enumerate(rows):
        for j, col in enumerate(cols):
            result[i, j] = np.linalg.det(matrix[np.ix_(row, col)])
    return result


def wedge_matrix(coeffs, degree):
    ''' v ^ (.) from (l-1)-vectors to l-vectors; v given in frame coords '''
    dim = len(coeffs)
    source = wedge_basis(dim, degree - 1)
    target = {mono: i for i, mono in enumerate(wedge_basis(dim, degree))}
    result = np.zeros((len(target), len(source)))
    for col, mono in enumerate(source):
        for index, value in enumerate(coeffs):
            if not value:
                continue
            sign, key = _sort_sign((index,) + mono)
            if sign:
                result[target[key], col] += sign * value
    return result


def contraction_matrix(coeffs, degree):
    ''' v -| (.) from (l+1)-vectors to l-vectors; the transpose of wedging '''
    return wedge_matrix(coeffs, degree + 1).T


def to_poincare_ball(x):
    ''' hyperboloid to ball: x -> x[1:] / (1 + x0) '''
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / (1.0 + x[..., :1])


def from_poincare_ball(p):
    ''' ball to hyperboloid: p -> (1 + |p|^2, 2p) / (1 - |p|^2) '''
    p = np.asarray(p, dtype=float)
    sq = np.sum(p ** 2, axis=-1, keepdims=True)
    if np.any(sq >= 1.0):
        raise SpaceFormError('points must lie inside the unit ball')
    return np.concatenate([1.0 + sq, 2.0 * p], axis=-1) / (1.0 - sq)


def push_forward_to_ball(x, v):
    ''' differential of the hyperboloid to ball map applied to v at x '''
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    denom = 1.0 + x[..., :1]
    return v[..., 1:] / denom - x[..., 1:] * v[..., :1] / denom ** 2


@dataclass(frozen=True)
class AdaptedFrame:
    ''' orthonormal (T, m1..mn) at y, with T pointing along the geodesic to x '''
    space: ModelSpace
    y: np.ndarray
    x: np.ndarray
    t: float
    vectors: np.ndarray

    @property
    def T(self):
        return self.vectors[0]

    @property
    def normals(self):
        return self.vectors[1:]

    def at_source(self):
        ''' the same frame moved to x by parallel transport '''
        return parallel_transport(self.space, self.x, self.y, self.vectors)


def adapted_frame(space, y, x):
    ''' frame at y whose first vector is the unit tangent toward x

    The completion runs gram-schmidt over the standard frame at y, leaving
    out the standard vector with the largest overlap with T (the pivot), so
    the result is reproducible and well conditioned. '''
    require_geometry(space)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    t = distance(space, y, x)
    if t == 0:
        raise SpaceFormError('adapted frame needs two distinct points')
    direction = log_map(space, y, x) / t
    reference = standard_frame(space, y)
    overlaps = np.abs([inner(space, direction, e) for e in reference])
    pivot = int(np.argmax(overlaps))
    vectors = [direction / norm(space, direction)]
    for index, candidate in enumerate(reference):
        if index == pivot:
            continue
        for done in vectors:
            candidate = candidate - inner(space, candidate, done) * done
        vectors.append(candidate / norm(space, candidate))
    return AdaptedFrame(space, y, x, t, np.array(vectors))


def parse_space(tag):
    ''' euclideanM or hM[:scale] into a ModelSpace '''
    if not isinstance(tag, str):
        raise SpaceFormError('space must be a string like h3, got %r' % (tag,))
    match = re.match(regex.euclidean, tag)
    if match:
        return ModelSpace.euclidean(int(match.group('dim')))
    match = re.match(regex.hyperbolic, tag)
    if match:
        scale = float(match.group('scale')) if match.group('scale') else 1.0
        return ModelSpace.hyperbolic(int(match.group('dim')), scale)
    raise SpaceFormError('unknown space "%s"' % tag)
