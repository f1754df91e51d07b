''' sampled solutions of the radial equation and their json form '''
from dataclasses import dataclass, field
from json import JSONEncoder
import json
import logging

from django.conf import settings
import numpy as np
from scipy.interpolate import BPoly

from hypergreen import spaceform
from hypergreen.radial import frobenius
from hypergreen.radial.system import assemble_system

logger = logging.getLogger(__name__)

PROFILE_KEYS = ['space', 'degree', 'path', 'grid', 'leading_coeff',
                't_min', 't_max', 'frobenius_order']
BLOCK_KEYS = ['alpha', 'beta', 'alpha_prime', 'beta_prime']
MATRIX_KEYS = ['values', 'derivs']


class ProfileFormatError(ValueError):
    ''' a profile document is malformed or truncated '''


@dataclass
class GridSpec:
    ''' geometric spacing near zero, capped at a fixed step further out '''
    t_min: float = field(default_factory=lambda: settings.PROFILE_T_MIN)
    t_max: float = field(default_factory=lambda: settings.PROFILE_T_MAX)
    ratio: float = field(default_factory=lambda: settings.GRID_RATIO)
    step: float = field(default_factory=lambda: settings.GRID_STEP)

    def nodes(self):
        if not 0 < self.t_min < self.t_max:
            raise ValueError('grid needs 0 < t_min < t_max')
        nodes = [self.t_min]
        while nodes[-1] < self.t_max:
            t = nodes[-1]
            nodes.append(t + min(t * (self.ratio - 1), self.step))
        nodes[-1] = self.t_max
        if nodes[-1] - nodes[-2] < 1e-3 * self.step:
            del nodes[-2]
        return np.array(nodes)


def _hermite_poly(grid, values, derivs, second):
    ''' piecewise quintic matching value, first and second derivative '''
    width = np.diff(grid)[:, None]
    lo, hi = slice(None, -1), slice(1, None)
    coeffs = np.empty((6, len(grid) - 1, values.shape[1]))
    coeffs[0] = values[lo]
    coeffs[1] = values[lo] + width * derivs[lo] / 5
    coeffs[2] = values[lo] + 2 * width * derivs[lo] / 5 + \
            width ** 2 * second[lo] / 20
    coeffs[3] = values[hi] - 2 * width * derivs[hi] / 5 + \
            width ** 2 * second[hi] / 20
    coeffs[4] = values[hi] - width * derivs[hi] / 5
    coeffs[5] = values[hi]
    return BPoly(coeffs, grid, extrapolate=False)


class RadialProfile:
    ''' A(t) on a grid, with the singular series below it and a fitted tail
    above it. Immutable once built. '''
    def __init__(self, system, grid, values, derivs, singular, info=None):
        grid = np.asarray(grid, dtype=float)
        values = np.array(values, dtype=float)
        derivs = np.array(derivs, dtype=float)
        if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
            raise ProfileFormatError('grid must be strictly increasing')
        if values.shape != (len(grid), system.components) or \
                derivs.shape != values.shape:
            raise ProfileFormatError(
                'expected %d samples of %d components' % \
                        (len(grid), system.components))
        for array in (grid, values, derivs):
            array.setflags(write=False)
        self.system = system
        self.grid = grid
        self.values = values
        self.derivs = derivs
        self.singular = singular
        self.info = dict(info or {})
        self.second = system.second_derivative(grid, values, derivs)
        poly = _hermite_poly(grid, values, derivs, self.second)
        self._polys = (poly, poly.derivative(), poly.derivative(2))

        start = np.array([grid[0]])
        self._offset = values[0] - singular.value(start)[0]
        self._slope = derivs[0] - singular.derivative(start)[0]
        with np.errstate(divide='ignore', invalid='ignore'):
            rate = np.where(values[-1] != 0, derivs[-1] / values[-1], 0.0)
        if system.space.is_euclidean:
            self._tail = rate * grid[-1]
        else:
            self._tail = np.minimum(rate, 0.0)

    def __repr__(self):
        return '<RadialProfile %s degree=%d on [%g, %g]>' % (
            self.space.tag, self.degree, self.t_min, self.t_max)

    @property
    def space(self):
        return self.system.space

    @property
    def degree(self):
        return self.system.degree

    @property
    def t_min(self):
        return float(self.grid[0])

    @property
    def t_max(self):
        return float(self.grid[-1])

    @property
    def leading_coeff(self):
        return self.singular.leading_coeff

    @property
    def is_block(self):
        return not self.system.generic

    def evaluate(self, t, nu=0):
        ''' A (nu=0) or A' (nu=1) at each t, in stored components '''
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t <= 0):
            raise ValueError('profile is only defined for t > 0')
        if nu not in (0, 1, 2):
            raise ValueError('derivative order %r not supported' % nu)
        result = np.empty((len(t), self.system.components))
        inside = (t >= self.t_min) & (t <= self.t_max)
        below = t < self.t_min
        above = t > self.t_max
        if np.any(inside):
            result[inside] = self._polys[nu](t[inside])
        if np.any(below) or np.any(above):
            if nu == 2:
                raise ValueError('second derivative only inside the grid')
        if np.any(below):
            tb = t[below]
            if nu == 0:
                result[below] = self.singular.value(tb) + self._offset + \
                        self._slope * (tb - self.t_min)[:, None]
            else:
                result[below] = self.singular.derivative(tb) + self._slope
        if np.any(above):
            result[above] = self._evaluate_tail(t[above], nu)
        return result

    def _evaluate_tail(self, t, nu):
        base = self.values[-1]
        if self.space.is_euclidean:
            ratio = (t / self.t_max)[:, None]
            value = base * ratio ** self._tail
            return value if nu == 0 else value * self._tail / t[:, None]
        value = base * np.exp(self._tail * (t - self.t_max)[:, None])
        return value if nu == 0 else value * self._tail

    def pair(self, t, nu=0):
        ''' (alpha, beta) arrays for the block path '''
        if not self.is_block:
            raise ValueError('generic profiles have no scalar pair')
        values = self.evaluate(t, nu)
        return values[:, 0], values[:, 1]

    def matrix(self, t, nu=0):
        ''' A(t) as a matrix on the l-vectors in the adapted basis '''
        values = self.evaluate(t, nu)
        size = self.system.size
        if not self.is_block:
            return values.reshape((-1, size, size))
        basis = spaceform.wedge_basis(self.space.dim, self.degree)
        has_t = np.array([0 in monomial for monomial in basis])
        diagonal = np.where(has_t[None, :], values[:, :1], values[:, 1:2])
        return np.einsum('ij,jk->ijk', diagonal, np.eye(size))

    def residual(self, probes=None, seed=None):
        ''' relative ode residual at random points strictly between nodes '''
        probes = probes or settings.RESIDUAL_PROBES
        seed = settings.RANDOM_SEED if seed is None else seed
        rng = np.random.default_rng(seed)
        cells = rng.integers(0, len(self.grid) - 1, size=probes)
        fraction = rng.uniform(0.1, 0.9, size=probes)
        t = np.sort(self.grid[cells] + fraction * np.diff(self.grid)[cells])
        values = self._polys[0](t)
        derivs = self._polys[1](t)
        second = self._polys[2](t)
        return t, self.system.residual(t, values, derivs, second)

    def asymptotic_ratio(self):
        ''' trace-normalized A(t_min) t^(n-1) / lead, close to one '''
        weights = self.system.identity_weights()
        t = self.t_min
        trace = weights @ self.values[0]
        return float(trace * t ** (self.system.n - 1) / self.leading_coeff)

    def tail_rate(self, window=2.0):
        ''' fitted c in |A(t)| ~ C exp(-c t) over the last stretch of grid '''
        mask = self.grid >= self.t_max - window
        sizes = np.linalg.norm(self.values[mask], axis=1)
        if np.any(sizes <= 0) or mask.sum() < 2:
            return float('nan')
        slope = np.polyfit(self.grid[mask], np.log(sizes), 1)[0]
        return float(-slope)

    def diagnostics(self):
        ''' the numbers the solve and validate commands report '''
        _, residual = self.residual()
        report = {
            'max_residual': float(np.max(residual)),
            'asymptotic_ratio': self.asymptotic_ratio(),
            'tail_rate': self.tail_rate(),
        }
        report.update(self.info)
        return report

    def to_document(self):
        doc = {
            'space': self.space.tag,
            'degree': self.degree,
            'path': 'generic' if self.system.generic else 'block',
            'grid': self.grid,
            'leading_coeff': self.leading_coeff,
            't_min': self.t_min,
            't_max': self.t_max,
            'frobenius_order': self.singular.order,
            'curvature': self.system.curvature,
            'jacobi_eigenvalues': list(self.space.jacobi_eigenvalues),
        }
        if self.is_block:
            doc['alpha'] = self.values[:, 0]
            doc['beta'] = self.values[:, 1]
            doc['alpha_prime'] = self.derivs[:, 0]
            doc['beta_prime'] = self.derivs[:, 1]
        else:
            doc['values'] = self.values
            doc['derivs'] = self.derivs
        return doc


class ProfileEncoder(JSONEncoder):
    ''' numpy arrays and scalars as plain json '''
    # pylint: disable=E0202
    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        return JSONEncoder.default(self, o)


def dumps(profile):
    ''' shortest round-trip decimals, sorted keys '''
    return json.dumps(profile.to_document(), cls=ProfileEncoder,
                      sort_keys=True, indent=1)


def _space_from_document(doc):
    tag = doc['space']
    if str(tag).startswith('rank_one'):
        eigenvalues = doc.get('jacobi_eigenvalues')
        if not eigenvalues:
            raise ProfileFormatError('rank one profile without eigenvalues')
        return spaceform.ModelSpace.rank_one(len(eigenvalues) + 1, eigenvalues)
    return spaceform.parse_space(tag)


def from_document(doc):
    ''' rebuild a profile, recomputing the series data from its order '''
    if not isinstance(doc, dict):
        raise ProfileFormatError('profile must be a json object')
    missing = [k for k in PROFILE_KEYS if k not in doc]
    generic = doc.get('path') == 'generic'
    missing += [k for k in (MATRIX_KEYS if generic else BLOCK_KEYS) \
            if k not in doc]
    if missing:
        raise ProfileFormatError('profile is missing %s' % ', '.join(missing))
    try:
        space = _space_from_document(doc)
        system = assemble_system(space, int(doc['degree']), generic=generic,
                                 curvature=doc.get('curvature'))
        grid = np.array(doc['grid'], dtype=float)
        if generic:
            values = np.array(doc['values'], dtype=float)
            derivs = np.array(doc['derivs'], dtype=float)
        else:
            columns = [np.array(doc[k], dtype=float) for k in BLOCK_KEYS]
            if any(c.shape != grid.shape for c in columns):
                raise ProfileFormatError('columns and grid differ in length')
            values = np.column_stack(columns[:2])
            derivs = np.column_stack(columns[2:])
        singular = frobenius.singular_series(system, int(doc['frobenius_order']))
    except (TypeError, ValueError) as e:
        if isinstance(e, ProfileFormatError):
            raise
        raise ProfileFormatError('bad profile: %s' % e) from e
    if not np.isclose(singular.leading_coeff, float(doc['leading_coeff']),
                      rtol=1e-12):
        raise ProfileFormatError('leading coefficient does not match the space')
    return RadialProfile(system, grid, values, derivs, singular)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProfileFormatError('profile is not valid json: %s' % e) from e
    return from_document(doc)


def load(path):
    try:
        with open(path, 'r') as profile_file:
            text = profile_file.read()
    except OSError as e:
        raise ProfileFormatError('cannot read profile %s: %s' % (path, e)) \
                from e
    return loads(text)


def save(profile, path):
    with open(path, 'w') as profile_file:
        profile_file.write(dumps(profile))
    logger.info('wrote %r to %s', profile, path)


def hodge_swap(profile):
    ''' the degree m-l profile with alpha and beta exchanged '''
    if not profile.is_block:
        raise ValueError('the swap needs a block profile')
    system = assemble_system(profile.space, profile.space.dim - profile.degree)
    singular = frobenius.singular_series(system, profile.singular.order)
    info = dict(profile.info, swapped_from=profile.degree)
    return RadialProfile(system, profile.grid, profile.values[:, ::-1],
                         profile.derivs[:, ::-1], singular, info)
