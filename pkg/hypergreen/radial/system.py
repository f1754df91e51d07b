''' the radial equation for the green's function of the form laplacian '''
from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.integrate import quad
from scipy.special import comb

from hypergreen import spaceform
from hypergreen.spaceform import SpaceFormError
from hypergreen.utils import series

logger = logging.getLogger(__name__)

# below this t the levinson residual is summed from the coefficient series
LEVINSON_CROSSOVER = 1e-3
LEVINSON_TERMS = 4


class RadialSolveError(ValueError):
    ''' the radial equation could not be set up or solved '''


class RadialSystem:
    ''' A'' + h A' = L(t) A for one space and form degree

    The block path stores the pair (alpha, beta): alpha is the coefficient on
    wedge monomials containing T, beta on the ones that don't. In degrees 0
    and m only one of them exists and the other mirrors it. The generic path
    stores the full matrix A on the l-vectors, flattened row-major. '''
    def __init__(self, space, degree, generic=False, curvature=None):
        if not 0 <= degree <= space.dim:
            raise RadialSolveError('degree %r outside 0..%d' % \
                    (degree, space.dim))
        if not generic and not space.is_space_form:
            raise RadialSolveError(
                'the two component reduction needs a space form')
        self.space = space
        self.degree = degree
        self.generic = generic
        self.n = space.n
        self.k = space.dim - degree
        if curvature is None:
            try:
                curvature = spaceform.curvature_operator(space, degree)
            except SpaceFormError as e:
                raise RadialSolveError(
                    'pass the curvature scalar explicitly for %s' % \
                            space.tag) from e
        self.curvature = float(curvature)
        self.size = int(comb(space.dim, degree, exact=True))
        self.ad = [spaceform.ad_action(space, i, degree) \
                for i in range(1, space.dim)]
        self._ad_sq = [a @ a for a in self.ad]

        if generic:
            self.components = self.size ** 2
            self.active = list(range(self.components))
        else:
            self.components = 2
            if degree == 0:
                self.active = [1]
            elif degree == space.dim:
                self.active = [0]
            else:
                self.active = [0, 1]

    def __repr__(self):
        return '<RadialSystem %s degree=%d %s>' % (
            self.space.tag, self.degree, 'generic' if self.generic else 'block')

    @property
    def block_dims(self):
        ''' numbers of monomials with and without T '''
        dim = self.space.dim
        with_t = int(comb(dim - 1, self.degree - 1, exact=True)) \
                if self.degree else 0
        return (with_t, int(comb(dim - 1, self.degree, exact=True)))

    def expand(self, active_values):
        ''' stored components from the active ones, filling the mirror '''
        active_values = np.asarray(active_values, dtype=float)
        if self.generic or len(self.active) == 2:
            return active_values
        return np.repeat(active_values, 2, axis=-1)

    def reduce(self, values):
        ''' the active part of stored components '''
        return np.asarray(values, dtype=float)[..., self.active]

    def identity(self):
        ''' the identity map in stored components '''
        if self.generic:
            return np.eye(self.size).reshape(-1)
        return np.ones(2)

    def identity_weights(self):
        ''' weights w with w . A = trace(A) / dim, in stored components '''
        if self.generic:
            return np.eye(self.size).reshape(-1) / self.size
        with_t, without_t = self.block_dims
        weights = np.array([with_t, without_t], dtype=float) / self.size
        if len(self.active) == 1:
            return np.where(np.arange(2) == self.active[0], 1.0, 0.0)
        return weights

    def _axis_factors(self, t):
        ''' per axis cosh(lam t) and sinh(lam t)/lam '''
        factors = []
        for lam in self.space.jacobi_eigenvalues:
            if lam:
                factors.append((np.cosh(lam * t), np.sinh(lam * t) / lam))
            else:
                factors.append((np.ones_like(t), t))
        return factors

    def mean_curvature(self, t):
        return spaceform.mean_curvature(self.space, t)

    def operator(self, t):
        ''' L(t) on stored components '''
        t = float(t)
        if self.generic:
            ident = np.eye(self.size)
            result = self.curvature * np.eye(self.components)
            for ad, ad_sq, (c, s) in zip(
                    self.ad, self._ad_sq, self._axis_factors(t)):
                result = result - (
                    np.kron(ad_sq, ident)
                    - 2 * c * np.kron(ad, ad.T)
                    + c ** 2 * np.kron(ident, ad_sq.T)) / s ** 2
            return result
        if len(self.active) == 1:
            # the scalar equation A'' + h A' = 0 in both components
            return np.zeros((2, 2))
        c, s = self._axis_factors(t)[0]
        k, l, curv = self.k, self.degree, self.curvature
        return np.array([
            [curv + k * (1 + c ** 2) / s ** 2, -2 * k * c / s ** 2],
            [-2 * l * c / s ** 2, curv + l * (1 + c ** 2) / s ** 2],
        ])

    def apply(self, t, values):
        ''' L(t) A for one sample of stored components '''
        if self.generic:
            return self.operator(t) @ values
        if len(self.active) == 1:
            return np.zeros_like(values)
        # written out so that equal components stay exactly equal in R^m
        c, s = self._axis_factors(float(t))[0]
        k, l, curv = self.k, self.degree, self.curvature
        alpha, beta = values[0], values[1]
        return np.array([
            curv * alpha + k * ((1 + c ** 2) * alpha - 2 * c * beta) / s ** 2,
            curv * beta + l * ((1 + c ** 2) * beta - 2 * c * alpha) / s ** 2,
        ])

    def rhs(self, t, state):
        ''' first order form for the integrator, state = (A, A') '''
        values = state[:self.components]
        derivs = state[self.components:]
        second = self.apply(t, values) - self.mean_curvature(t) * derivs
        return np.concatenate([derivs, second])

    def second_derivative(self, times, values, derivs):
        ''' A'' from the equation at each time '''
        times = np.asarray(times, dtype=float)
        curvature = np.asarray(self.mean_curvature(times))
        second = np.empty_like(values)
        for i, t in enumerate(times):
            second[i] = self.apply(t, values[i]) - curvature[i] * derivs[i]
        return second

    def residual(self, times, values, derivs, second):
        ''' relative residual |A'' + hA' - LA| / (|A''| + |hA'| + |LA|) '''
        times = np.asarray(times, dtype=float)
        curvature = np.asarray(self.mean_curvature(times))
        result = np.empty(len(times))
        for i, t in enumerate(times):
            applied = self.apply(t, values[i])
            damping = curvature[i] * derivs[i]
            scale = np.linalg.norm(second[i]) + np.linalg.norm(damping) + \
                    np.linalg.norm(applied)
            miss = np.linalg.norm(second[i] + damping - applied)
            result[i] = miss / scale if scale else miss
        return result

    def coefficient_series(self, terms):
        ''' t h(t) and t^2 L(t) as series in x = t^2, on active components '''
        axes = []
        for lam in self.space.jacobi_eigenvalues:
            sinhc = series.sinhc_even(terms, lam ** 2)
            cosh = series.cosh_even(terms, lam ** 2)
            inv = series.reciprocal(sinhc, terms)
            inv_sq = series.mul(inv, inv, terms)
            axes.append((cosh, inv, inv_sq))

        t_h = np.zeros(terms + 1)
        for cosh, inv, _ in axes:
            t_h = t_h + series.mul(cosh, inv, terms)

        x_term = np.zeros(terms + 1)
        if terms:
            x_term[1] = self.curvature

        if self.generic:
            ident = np.eye(self.size)
            op = np.zeros((terms + 1, self.components, self.components))
            op = op + x_term[:, None, None] * np.eye(self.components)
            for ad, ad_sq, (cosh, _, inv_sq) in zip(self.ad, self._ad_sq, axes):
                p = inv_sq
                q = series.mul(cosh, inv_sq, terms)
                r = series.mul(series.mul(cosh, cosh, terms), inv_sq, terms)
                op = op - (p[:, None, None] * np.kron(ad_sq, ident)
                           - 2 * q[:, None, None] * np.kron(ad, ad.T)
                           + r[:, None, None] * np.kron(ident, ad_sq.T))
            return t_h, op

        if len(self.active) == 1:
            return t_h, np.zeros((terms + 1, 1, 1))
        cosh, _, inv_sq = axes[0]
        p = inv_sq
        q = series.mul(cosh, inv_sq, terms)
        r = series.mul(series.mul(cosh, cosh, terms), inv_sq, terms)
        k, l = self.k, self.degree
        op = np.empty((terms + 1, 2, 2))
        op[:, 0, 0] = x_term + k * (p + r)
        op[:, 0, 1] = -2 * k * q
        op[:, 1, 0] = -2 * l * q
        op[:, 1, 1] = x_term + l * (p + r)
        return t_h, op

    def leading_operator(self):
        ''' L0 = lim t^2 L(t) as t -> 0, on active components '''
        return self.coefficient_series(0)[1][0]

    def operator_at_infinity(self):
        ''' lim L(t) and lim h(t) for the block path of hyperbolic space '''
        if self.generic or not self.space.is_hyperbolic:
            raise RadialSolveError(
                'asymptotics at infinity need the hyperbolic block path')
        lam = self.space.scale
        if len(self.active) == 1:
            limit = np.zeros((1, 1))
        else:
            limit = np.diag([self.curvature + self.k * lam ** 2,
                             self.curvature + self.degree * lam ** 2])
        return limit, self.n * lam


def assemble_system(space, degree, generic=False, curvature=None):
    ''' the radial equation for a space and form degree '''
    system = RadialSystem(space, degree, generic=generic, curvature=curvature)
    logger.info('assembled %r', system)
    return system


def indicial_roots(n, eigenvalue):
    ''' roots of r(r-1) + n r - w, larger first '''
    disc = np.sqrt((n - 1) ** 2 + 4 * eigenvalue)
    return (-(n - 1) + disc) / 2, (-(n - 1) - disc) / 2


@dataclass
class LevinsonData:
    ''' constant part and perturbation of the first order system in s = -log t

    The unknown is Y = (z, y) with z = sigma A / t and y = sigma A'. '''
    system: RadialSystem
    constant: np.ndarray
    spectrum: np.ndarray
    block_spectra: list
    null_vector: np.ndarray
    _series: tuple = field(default=None, init=False, repr=False,
                           compare=False)

    def _small_t(self, t):
        ''' t h - n and t^2 L - L0 summed from the coefficient series '''
        if self._series is None:
            self._series = self.system.coefficient_series(LEVINSON_TERMS)
        t_h, op = self._series
        powers = t ** (2 * np.arange(1, LEVINSON_TERMS + 1))
        return powers @ t_h[1:], np.tensordot(powers, op[1:], axes=1)

    def residual(self, s):
        ''' R(s), the part of the matrix that vanishes as s -> infinity '''
        t = np.exp(-s)
        size = len(self.system.active)
        if t < LEVINSON_CROSSOVER:
            damping, applied = self._small_t(t)
        else:
            lead = self.system.leading_operator()
            damping = t * self.system.mean_curvature(t) - self.system.n
            full = self.system.operator(t)
            active = full[np.ix_(self.system.active, self.system.active)]
            applied = t ** 2 * active - lead
        result = np.zeros((2 * size, 2 * size))
        result[:size, :size] = -damping * np.eye(size)
        result[size:, :size] = -applied
        return result

    def residual_integral(self, start):
        ''' integral of |R(s)| from start to infinity '''
        value, _ = quad(lambda s: np.linalg.norm(self.residual(s), 2),
                        start, np.inf, limit=200)
        return value


def levinson_form(system):
    ''' the regular singular first order system behind the radial equation '''
    n = system.n
    lead = system.leading_operator()
    size = len(system.active)
    ident = np.eye(size)
    constant = -np.block([[(n - 1) * ident, ident],
                          [lead, np.zeros((size, size))]])

    eigenvalues = np.linalg.eigvals(lead)
    block_spectra = []
    for w in np.sort(eigenvalues.real):
        # each 2x2 block (n-1, 1; w, 0) enters with a minus sign
        upper = ((n - 1) + np.sqrt((n - 1) ** 2 + 4 * w)) / 2
        lower = ((n - 1) - np.sqrt((n - 1) ** 2 + 4 * w)) / 2
        block_spectra.append((w, (-upper, -lower)))
    spectrum = np.sort(np.linalg.eigvals(constant).real)

    identity = system.reduce(system.identity())
    null_vector = np.concatenate([-identity / (n - 1), identity]) \
            if n > 1 else np.concatenate([identity, np.zeros(size)])
    return LevinsonData(system, constant, spectrum, block_spectra,
                        null_vector)
