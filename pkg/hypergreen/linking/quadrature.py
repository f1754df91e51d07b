''' gauss-legendre panels on the segments of a loop, refined by doubling '''
from dataclasses import dataclass, field
import logging

from django.conf import settings
import numpy as np
from numpy.polynomial.legendre import leggauss

logger = logging.getLogger(__name__)


class QuadratureError(ValueError):
    ''' panel refinement stopped before reaching the tolerance '''
    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


@dataclass
class QuadratureSpec:
    ''' nodes per panel, starting panels per segment, tolerance, depth '''
    nodes: int = field(default_factory=lambda: settings.QUADRATURE_NODES)
    panels: int = 1
    tolerance: float = field(
        default_factory=lambda: settings.QUADRATURE_TOLERANCE)
    max_depth: int = field(
        default_factory=lambda: settings.QUADRATURE_MAX_DEPTH)

    def __post_init__(self):
        if self.nodes < 1 or self.panels < 1 or self.max_depth < 0:
            raise ValueError('quadrature needs positive nodes and panels')
        if not 0 < self.tolerance < 1:
            raise ValueError('quadrature tolerance must be in (0, 1)')

    def rule(self, panels):
        ''' nodes and weights on [0, 1] split into equal panels '''
        base, weights = leggauss(self.nodes)
        left = np.arange(panels) / panels
        tau = left[:, None] + (base[None, :] + 1) / (2 * panels)
        weights = np.broadcast_to(weights / (2 * panels), tau.shape)
        return tau.reshape(-1), np.array(weights).reshape(-1)


@dataclass
class QuadratureResult:
    value: object
    error_estimate: float
    panels: int
    depth: int
    converged: bool
    history: list


def refine(evaluate, spec):
    ''' evaluate(panels) at doubling panel counts until two agree

    The error estimate is the change between the last two levels. '''
    panels = spec.panels
    previous = np.asarray(evaluate(panels), dtype=float)
    history = [{'depth': 0, 'panels': panels, 'value': previous,
                'change': float('nan')}]
    for depth in range(1, spec.max_depth + 1):
        panels *= 2
        current = np.asarray(evaluate(panels), dtype=float)
        change = float(np.linalg.norm(current - previous))
        history.append({'depth': depth, 'panels': panels, 'value': current,
                        'change': change})
        scale = max(1.0, float(np.linalg.norm(current)))
        logger.info('quadrature depth %d with %d panels: change %.3e',
                    depth, panels, change)
        if change <= spec.tolerance * scale:
            return QuadratureResult(current, change, panels, depth, True,
                                    history)
        previous = current
    raise QuadratureError(
        'no convergence after %d refinements, last change %.3e' % \
                (spec.max_depth, history[-1]['change']), history=history)
