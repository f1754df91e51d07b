''' gauss linking integrals of two disjoint loops '''
from dataclasses import dataclass, field
import logging
import math

from django.conf import settings
import numpy as np

from hypergreen.kernel_eval import KernelError
from hypergreen.linking import pairs
from hypergreen.linking.curves import require_apart
from hypergreen.linking.fields import loop_nodes, pair_factors, \
        twoform_profile
from hypergreen.linking.quadrature import QuadratureSpec, refine

logger = logging.getLogger(__name__)

# rows of the pair matrix handled at once
ROW_CHUNK = 512


@dataclass
class LinkResult:
    ''' a linking integral with its error estimate and nearest integer '''
    value: float
    error_estimate: float
    rounded: int
    converged: bool
    panels: int = 0
    depth: int = 0
    history: list = field(default_factory=list)
    oracle: int = None

    @property
    def agreement(self):
        ''' the rounded value matches the crossing count, if one was made '''
        return None if self.oracle is None else self.rounded == self.oracle

    def as_dict(self):
        result = {
            'value': self.value,
            'error_estimate': self.error_estimate,
            'rounded': self.rounded,
            'converged': self.converged,
            'panels': self.panels,
            'depth': self.depth,
        }
        if self.oracle is not None:
            result['oracle'] = self.oracle
            result['agreement'] = self.agreement
        return result


def _result(quadrature):
    value = float(quadrature.value)
    return LinkResult(
        value=value,
        error_estimate=quadrature.error_estimate,
        rounded=int(round(value)),
        converged=quadrature.converged,
        panels=quadrature.panels,
        depth=quadrature.depth,
        history=[dict(h, value=float(h['value'])) for h in quadrature.history],
    )


def _check_pair(first, second, epsilon):
    if first.space != second.space:
        raise KernelError('curves live in different spaces')
    epsilon = settings.CURVE_EPSILON if epsilon is None else epsilon
    require_apart(first, second, epsilon)


def gauss_linking(first, second, profile, spec=None, epsilon=None,
                  threads=None):
    ''' double integral of the biot-savart kernel over the two loops '''
    profile = twoform_profile(profile)
    _check_pair(first, second, epsilon)
    if first.space != profile.space:
        raise KernelError('curves live in %s, profile in %s' % \
                (first.space.tag, profile.space.tag))
    spec = spec or QuadratureSpec()
    pairs.set_threads(threads or settings.THREADS)
    hyperbolic = first.space.is_hyperbolic

    def evaluate(panels):
        xs, tks, wks = loop_nodes(first, spec, panels)
        ys, tls, wls = loop_nodes(second, spec, panels)
        rows = []
        for start in range(0, len(xs), ROW_CHUNK):
            chunk = slice(start, start + ROW_CHUNK)
            t = pairs.pair_distances(xs[chunk], ys, hyperbolic)
            factors = pair_factors(profile, t)
            rows.append(pairs.linking_row_sums(
                xs[chunk], tks[chunk], wks[chunk], ys, tls, wls,
                factors, hyperbolic))
        return np.sum(np.concatenate(rows))

    result = _result(refine(evaluate, spec))
    logger.info('linking %s with %s: %.10f (+- %.1e)', first.name,
                second.name, result.value, result.error_estimate)
    return result


def classical_gauss_linking(first, second, spec=None, epsilon=None):
    ''' (x - y) . (tk x tl) / (4 pi |x - y|^3) integrated directly in R^3 '''
    if not first.space.is_euclidean:
        raise KernelError('the classical formula is for euclidean curves')
    _check_pair(first, second, epsilon)
    spec = spec or QuadratureSpec()

    def evaluate(panels):
        xs, tks, wks = loop_nodes(first, spec, panels)
        ys, tls, wls = loop_nodes(second, spec, panels)
        diff = xs[:, None, :] - ys[None, :, :]
        cross = np.cross(tks[:, None, :], tls[None, :, :])
        dist = np.linalg.norm(diff, axis=-1)
        terms = np.sum(diff * cross, axis=-1) / (4 * math.pi * dist ** 3)
        return np.sum(wks[:, None] * terms * wls[None, :])

    return _result(refine(evaluate, spec))


def isotopy_stability_check(first, second, profile, delta, trials=1,
                            seed=None, spec=None, epsilon=None):
    ''' the rounded linking number before and after small perturbations '''
    seed = settings.RANDOM_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    base = gauss_linking(first, second, profile, spec, epsilon)
    perturbed = []
    for _ in range(trials):
        moved_first = first.perturbed(delta, rng)
        moved_second = second.perturbed(delta, rng)
        perturbed.append(gauss_linking(
            moved_first, moved_second, profile, spec, epsilon))
    report = {
        'delta': delta,
        'value': base.value,
        'rounded': base.rounded,
        'perturbed': [r.value for r in perturbed],
        'perturbed_rounded': [r.rounded for r in perturbed],
    }
    report['stable'] = all(r == base.rounded \
            for r in report['perturbed_rounded'])
    return report
