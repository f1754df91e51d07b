''' integration of the radial equation and the decaying green's profile '''
import logging

from django.conf import settings
import numpy as np
from scipy.integrate import solve_ivp

from hypergreen.radial import frobenius
from hypergreen.radial.profile import GridSpec, RadialProfile
from hypergreen.radial.system import RadialSolveError, assemble_system

logger = logging.getLogger(__name__)

# interior point where outward and inward solutions are joined
MATCH_POINT = 1.0
RANK_TOLERANCE = 1e-8


class ShootingError(RadialSolveError):
    ''' the outward solution could not be joined to the decaying ones '''
    def __init__(self, message, modes=None):
        super().__init__(message)
        self.modes = modes or []


def _propagate(system, state, times, rtol=None, atol=None):
    ''' values and derivatives at `times`, starting from state at times[0] '''
    rtol = rtol or settings.ODE_RTOL
    atol = atol or settings.ODE_ATOL
    solution = solve_ivp(
        system.rhs, (times[0], times[-1]), state, method='DOP853',
        t_eval=times, rtol=rtol, atol=atol)
    if solution.status != 0 or solution.y.shape[1] != len(times):
        reached = solution.t[-1] if len(solution.t) else times[0]
        raise RadialSolveError('integration of %r stopped at t=%g: %s' % \
                (system, reached, solution.message))
    logger.info('integrated %r to t=%g with %d evaluations',
                system, times[-1], solution.nfev)
    size = system.components
    return solution.y[:size].T, solution.y[size:].T


def check_residual(profile, tolerance=None):
    ''' reject a profile whose off-grid residual is over tolerance '''
    tolerance = tolerance or settings.RESIDUAL_TOLERANCE
    probes, residual = profile.residual()
    worst = int(np.argmax(residual))
    if residual[worst] > tolerance:
        raise RadialSolveError(
            'ode residual %.3e at t=%g exceeds %g' % \
                    (residual[worst], probes[worst], tolerance))
    return float(residual[worst])


def integrate(system, init, grid=None, rtol=None, atol=None, singular=None,
              check=True):
    ''' integrate from (A, A') at grid.t_min over the whole grid '''
    grid = grid or GridSpec()
    nodes = grid.nodes()
    values, derivs = init
    state = np.concatenate([np.asarray(values, dtype=float).reshape(-1),
                            np.asarray(derivs, dtype=float).reshape(-1)])
    if len(state) != 2 * system.components:
        raise RadialSolveError('initial data has %d entries, expected %d' % \
                (len(state), 2 * system.components))
    values, derivs = _propagate(system, state, nodes, rtol, atol)
    if singular is None:
        singular = frobenius.singular_series(system, settings.FROBENIUS_ORDER)
    profile = RadialProfile(system, nodes, values, derivs, singular)
    if check:
        profile.info['max_residual'] = check_residual(profile)
    return profile


def _mode_rates(damping, w):
    ''' decay and growth rates of u'' + damping u' = w u '''
    disc = np.sqrt(max(damping ** 2 + 4 * w, 0.0))
    return (-damping - disc) / 2, (-damping + disc) / 2


def _mode_conditions(system):
    ''' one row per non-decaying mode at infinity: (unit vector, decay rate) '''
    limit, damping = system.operator_at_infinity()
    threshold = settings.GROWING_MODE_THRESHOLD
    conditions = []
    for index, w in enumerate(np.diag(limit)):
        mu_minus, mu_plus = _mode_rates(damping, w)
        if mu_plus >= -threshold:
            direction = np.zeros(len(limit))
            direction[index] = 1.0
            conditions.append((direction, mu_minus, mu_plus))
    return conditions


def _decaying_seeds(system):
    ''' states at the far point whose solutions span the decaying ones '''
    limit, damping = system.operator_at_infinity()
    threshold = settings.GROWING_MODE_THRESHOLD
    size = len(limit)
    seeds = []
    for index, w in enumerate(np.diag(limit)):
        unit = np.zeros(size)
        unit[index] = 1.0
        mu_minus, mu_plus = _mode_rates(damping, w)
        if mu_plus >= -threshold:
            seeds.append((unit, mu_minus * unit))
        else:
            # both modes of this direction decay
            seeds.append((unit, np.zeros(size)))
            seeds.append((np.zeros(size), unit))
    return seeds


def _gauge(system, singular, regular, particular, null_basis):
    ''' fix the kernel so the trace-normalized regular part at 0 is -lead/m

    The first len(regular) entries of the coefficient vectors belong to the
    regular branches. '''
    count = len(regular)
    weights = system.reduce(system.identity_weights())
    constant = np.zeros(len(weights))
    exponents = singular.series.exponent + \
            2 * np.arange(len(singular.series.coeffs))
    zero = np.nonzero(np.isclose(exponents, 0.0))[0]
    if len(zero):
        constant = singular.series.coeffs[zero[0]]
    at_zero = np.array([
        weights @ branch.coeffs[0] if branch.exponent == 0 else 0.0
        for branch in regular])
    target = -singular.leading_coeff / system.space.dim - weights @ constant
    slope = at_zero @ null_basis[:count]
    if np.allclose(slope, 0.0):
        logger.warning('kernel of %r is invisible at t=0, gauge left free',
                       system)
        return particular
    shift = np.linalg.lstsq(slope[None, :],
                            np.array([target - at_zero @ particular[:count]]),
                            rcond=None)[0]
    return particular + null_basis @ shift


def _block_decaying(system, grid, rtol, atol, far_factor):
    ''' singular and regular branches run outward to the matching point,
    decaying ones inward from the far point, joined by least squares '''
    nodes = grid.nodes()
    if len(nodes) < 3:
        raise RadialSolveError('grid too short to shoot on')
    far = (far_factor or settings.SHOOTING_FAR_FACTOR) * nodes[-1]
    split = int(np.argmin(np.abs(nodes - MATCH_POINT)))
    split = min(max(split, 1), len(nodes) - 2)
    outward = nodes[:split + 1]
    inward = np.concatenate([[far], nodes[split:][::-1]])

    values, derivs, singular = frobenius.singular_start(system, nodes[0])
    base = _propagate(system, np.concatenate([values, derivs]), outward,
                      rtol, atol)
    regular = frobenius.regular_series(system, singular.order)
    branches = []
    for branch in regular:
        start = np.concatenate([
            system.expand(branch.value(nodes[0])[0]),
            system.expand(branch.derivative(nodes[0])[0])])
        branches.append(_propagate(system, start, outward, rtol, atol))

    tails = []
    for seed_values, seed_derivs in _decaying_seeds(system):
        start = np.concatenate([system.expand(seed_values),
                                system.expand(seed_derivs)])
        vals, ders = _propagate(system, start, inward, rtol, atol)
        vals, ders = vals[:0:-1], ders[:0:-1]
        size = np.linalg.norm(np.concatenate([vals[0], ders[0]]))
        tails.append((vals / size, ders / size))

    def state(pair, index):
        vals, ders = pair
        return np.concatenate([system.reduce(vals[index]),
                               system.reduce(ders[index])])

    matrix = np.array([state(b, -1) for b in branches] +
                      [-state(d, 0) for d in tails]).T
    rhs = -state(base, -1)
    norms = np.linalg.norm(matrix, axis=0)
    scaled = matrix / norms
    solution, _, _, sv = np.linalg.lstsq(scaled, rhs, rcond=None)
    misfit = np.max(np.abs(scaled @ solution - rhs))
    if misfit > 1e-6 * max(1.0, np.max(np.abs(rhs))):
        modes = [{'direction': d.tolist(), 'decay': m, 'growth': p} \
                for d, m, p in _mode_conditions(system)]
        raise ShootingError(
            'cannot join %r to its decaying solutions at t=%g, misfit %.3g' % \
                    (system, nodes[split], misfit), modes=modes)
    rank = int(np.sum(sv > RANK_TOLERANCE * sv[0]))
    kernel_dim = scaled.shape[1] - rank
    solution = solution / norms
    logger.info('shooting %r: %d branches, %d decaying at t=%g, matched at '
                't=%g', system, len(branches), len(tails), far, nodes[split])
    if kernel_dim:
        logger.warning('decaying solution of %r is unique only up to a '
                       '%d dimensional kernel', system, kernel_dim)
        _, _, vt = np.linalg.svd(scaled)
        null_basis = vt[rank:].T / norms[:, None]
        solution = _gauge(system, singular, regular, solution, null_basis)

    coeffs, weights = solution[:len(branches)], solution[len(branches):]
    values = np.empty((len(nodes), system.components))
    derivs = np.empty_like(values)
    values[:split] = base[0][:-1]
    derivs[:split] = base[1][:-1]
    for c, (vals, ders) in zip(coeffs, branches):
        values[:split] += c * vals[:-1]
        derivs[:split] += c * ders[:-1]
    values[split:] = 0.0
    derivs[split:] = 0.0
    for c, (vals, ders) in zip(weights, tails):
        values[split:] += c * vals
        derivs[split:] += c * ders
    info = {
        'kernel_dim': int(kernel_dim),
        'shooting_coefficients': [float(c) for c in coeffs],
        'decaying_coefficients': [float(c) for c in weights],
        't_far': float(far),
        't_match': float(nodes[split]),
    }
    return RadialProfile(system, nodes, values, derivs, singular, info)


def decaying_solution(system, grid=None, rtol=None, atol=None,
                      far_factor=None):
    ''' the green's profile: singular like lead t^(1-n) I at 0, decaying at
    infinity '''
    grid = grid or GridSpec()
    space = system.space
    if not space.is_space_form:
        raise RadialSolveError(
            'decaying solutions are only built for space forms, got %s' % \
                    space.tag)

    if space.is_euclidean:
        values, derivs, singular = frobenius.singular_start(system, grid.t_min)
        profile = integrate(system, (values, derivs), grid, rtol, atol,
                            singular=singular, check=False)
    elif system.generic:
        block = decaying_solution(assemble_system(space, system.degree),
                                  grid, rtol, atol, far_factor)
        nodes = block.grid
        values = block.matrix(nodes).reshape((len(nodes), -1))
        derivs = block.matrix(nodes, nu=1).reshape((len(nodes), -1))
        singular = frobenius.singular_series(system, block.singular.order)
        profile = RadialProfile(system, nodes, values, derivs, singular,
                                block.info)
    else:
        profile = _block_decaying(system, grid, rtol, atol, far_factor)

    profile.info['max_residual'] = check_residual(profile)
    logger.info('decaying profile %r, residual %.2e', profile,
                profile.info['max_residual'])
    return profile
