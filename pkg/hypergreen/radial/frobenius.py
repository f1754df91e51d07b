''' frobenius series solutions of the radial equation near t = 0 '''
from dataclasses import dataclass
import logging

from django.conf import settings
import numpy as np

from hypergreen import spaceform
from hypergreen.radial.system import RadialSolveError, indicial_roots

logger = logging.getLogger(__name__)

# series are only trusted this close to the singular point
MAX_START = 1e-2


class FrobeniusError(RadialSolveError):
    ''' the series start could not be computed to tolerance '''
    def __init__(self, message, required_order=None):
        super().__init__(message)
        self.required_order = required_order


@dataclass
class FrobeniusSeries:
    ''' sum_i t^(r + 2i) (a_i + log(t) b_i) on active components '''
    exponent: float
    coeffs: np.ndarray
    log_coeffs: np.ndarray

    @property
    def order(self):
        ''' highest power of t beyond the leading one '''
        return 2 * (len(self.coeffs) - 1)

    @property
    def has_log(self):
        return bool(np.any(self.log_coeffs))

    def _powers(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        exps = self.exponent + 2 * np.arange(len(self.coeffs))
        return t, exps

    def value(self, t):
        t, exps = self._powers(t)
        pw = t[:, None] ** exps[None, :]
        log_t = np.log(t)[:, None]
        return pw @ self.coeffs + (pw * log_t) @ self.log_coeffs

    def derivative(self, t):
        t, exps = self._powers(t)
        pw = t[:, None] ** (exps[None, :] - 1)
        log_t = np.log(t)[:, None]
        plain = (pw * exps) @ self.coeffs + pw @ self.log_coeffs
        return plain + (pw * exps * log_t) @ self.log_coeffs

    def truncation_estimate(self, t):
        ''' size of the last kept terms relative to the leading one at t '''
        lead = np.linalg.norm(self.coeffs[0])
        if len(self.coeffs) < 2:
            return 0.0
        terms = len(self.coeffs) - 1
        tail = max(np.linalg.norm(self.coeffs[-1]),
                   np.linalg.norm(self.coeffs[-2]) * t ** 2)
        tail += abs(np.log(t)) * np.linalg.norm(self.log_coeffs[-1])
        return tail * t ** (2 * terms) / lead

    def required_order(self, t, tolerance, limit=1000):
        ''' extrapolate the coefficient decay to the order meeting tolerance '''
        norms = np.linalg.norm(self.coeffs, axis=1)
        nonzero = np.nonzero(norms)[0]
        if len(nonzero) < 2:
            return self.order
        i, j = nonzero[-2], nonzero[-1]
        ratio = (norms[j] / norms[i]) ** (1.0 / (j - i)) * t ** 2
        if ratio >= 1:
            return None
        estimate = norms[j] * t ** (2 * j) / norms[0]
        terms = j
        while estimate >= tolerance and terms < limit:
            estimate *= ratio
            terms += 1
        return 2 * terms


def _solve_step(matrix, rhs_log, rhs, growth):
    ''' solve M b = rhs_log and M a = rhs - growth b at one index

    At a resonance M is singular: b picks up a null component that makes the
    a equation solvable and a takes the minimum norm solution. '''
    u, sv, vt = np.linalg.svd(matrix)
    tol = 1e-9 * max(1.0, sv[0])
    null = sv < tol
    if not np.any(null):
        b = np.linalg.solve(matrix, rhs_log)
        return np.linalg.solve(matrix, rhs - growth * b), b

    left = u[:, null]
    right = vt[null].T
    if np.linalg.norm(left.T @ rhs_log) > 1e-8 * max(1.0, np.linalg.norm(rhs_log)):
        raise FrobeniusError('resonance needs log squared terms')
    b = np.linalg.lstsq(matrix, rhs_log, rcond=None)[0]
    coupling = growth * (left.T @ right)
    target = left.T @ (rhs - growth * b)
    z = np.linalg.lstsq(coupling, target, rcond=None)[0]
    b = b + right @ z
    a = np.linalg.lstsq(matrix, rhs - growth * b, rcond=None)[0]
    return a, b


def series_solution(system, exponent, leading, order):
    ''' the frobenius series with given leading exponent and coefficient '''
    terms = order // 2
    size = len(system.active)
    n = system.n
    t_h, op = system.coefficient_series(terms)
    lead_op = op[0]

    coeffs = np.zeros((terms + 1, size))
    log_coeffs = np.zeros((terms + 1, size))
    coeffs[0] = leading
    rho = exponent + 2 * np.arange(terms + 1)
    for i in range(1, terms + 1):
        matrix = (rho[i] * (rho[i] - 1) + n * rho[i]) * np.eye(size) - lead_op
        rhs = np.zeros(size)
        rhs_log = np.zeros(size)
        for p in range(1, i + 1):
            shift = op[p] - t_h[p] * rho[i - p] * np.eye(size)
            rhs = rhs + shift @ coeffs[i - p] - t_h[p] * log_coeffs[i - p]
            rhs_log = rhs_log + shift @ log_coeffs[i - p]
        growth = 2 * rho[i] - 1 + n
        coeffs[i], log_coeffs[i] = _solve_step(matrix, rhs_log, rhs, growth)
    return FrobeniusSeries(float(exponent), coeffs, log_coeffs)


@dataclass
class SingularData:
    ''' the singular series S(t) ~ lead t^(1-n) I '''
    leading_coeff: float
    series: FrobeniusSeries
    system: object

    @property
    def order(self):
        return self.series.order

    def value(self, t):
        return self.system.expand(self.series.value(t))

    def derivative(self, t):
        return self.system.expand(self.series.derivative(t))


def leading_coefficient(n):
    ''' 1 / ((n-1) vol(S^n)) '''
    return 1.0 / ((n - 1) * spaceform.unit_sphere_volume(n))


def singular_series(system, order):
    ''' the series with exponent 1-n and identity leading term '''
    if system.n < 2:
        raise RadialSolveError('the singular branch needs dimension at least 3')
    lead = leading_coefficient(system.n)
    leading = lead * system.reduce(system.identity())
    data = series_solution(system, 1 - system.n, leading, order)
    return SingularData(lead, data, system)


def regular_series(system, order):
    ''' one series per eigenvector of L0 with the nonnegative root '''
    lead_op = system.leading_operator()
    if np.allclose(lead_op, lead_op.T):
        eigenvalues, vectors = np.linalg.eigh(lead_op)
    else:
        eigenvalues, vectors = np.linalg.eig(lead_op)
        eigenvalues, vectors = eigenvalues.real, vectors.real
    result = []
    for w, v in zip(eigenvalues, vectors.T):
        w = max(w, 0.0)
        exponent = indicial_roots(system.n, w)[0]
        if abs(exponent) < 1e-12:
            exponent = 0.0
        v = v / v[np.argmax(np.abs(v))]
        result.append(series_solution(system, exponent, v, order))
    return result


def singular_start(system, t0, order=None, tolerance=None, max_order=None):
    ''' the singular series at t0 with the order grown by two until the
    truncation estimate meets the tolerance '''
    if t0 <= 0 or t0 > MAX_START:
        raise FrobeniusError('series start t0=%g is outside (0, %g]' % \
                (t0, MAX_START))
    order = order or settings.FROBENIUS_ORDER
    tolerance = tolerance or settings.FROBENIUS_TOLERANCE
    max_order = max_order or settings.FROBENIUS_MAX_ORDER

    while True:
        data = singular_series(system, order)
        estimate = data.series.truncation_estimate(t0)
        if estimate < tolerance:
            break
        if order >= max_order:
            required = data.series.required_order(t0, tolerance)
            raise FrobeniusError(
                'series at t0=%g misses tolerance %g at order %d '
                '(needs about %s)' % (t0, tolerance, order, required),
                required_order=required)
        order += 2
    logger.debug('frobenius start at t0=%g order %d estimate %.2e',
                 t0, order, estimate)
    return data.value(t0)[0], data.derivative(t0)[0], data


def frobenius_init(system, t0, **kwargs):
    ''' A(t0) and A'(t0) of the singular branch in stored components '''
    values, derivs, _ = singular_start(system, t0, **kwargs)
    return values, derivs
