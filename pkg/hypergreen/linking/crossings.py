''' linking numbers by counting signed crossings of a planar projection '''
import logging

from django.conf import settings
import numpy as np

logger = logging.getLogger(__name__)

ATTEMPTS = 20
# crossings this close to a segment end or in height count as degenerate
GENERIC_MARGIN = 1e-9


class CrossingOracleError(ValueError):
    ''' no generic projection direction was found '''


class DegenerateProjection(Exception):
    ''' the projection has a crossing at a vertex or a true intersection '''


def _plane_basis(direction):
    direction = direction / np.linalg.norm(direction)
    helper = np.eye(3)[np.argmin(np.abs(direction))]
    first = np.cross(direction, helper)
    first /= np.linalg.norm(first)
    return direction, first, np.cross(direction, first)


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _count(first, second, direction):
    ''' signed count of crossings where the first curve is on top '''
    direction, u, v = _plane_basis(np.asarray(direction, dtype=float))
    a = first
    b = np.roll(first, -1, axis=0)
    c = second
    e = np.roll(second, -1, axis=0)

    def flat(p):
        return np.stack([p @ u, p @ v], axis=-1)

    a2, b2 = flat(a)[:, None, :], flat(b)[:, None, :]
    c2, e2 = flat(c)[None, :, :], flat(e)[None, :, :]
    run_k = b2 - a2
    run_l = e2 - c2
    denom = _cross2(run_k, run_l)
    gap = c2 - a2
    scale = np.linalg.norm(run_k, axis=-1) * np.linalg.norm(run_l, axis=-1)
    parallel = np.abs(denom) <= GENERIC_MARGIN * scale
    safe = np.where(parallel, 1.0, denom)
    s = _cross2(gap, run_l) / safe
    r = _cross2(gap, run_k) / safe

    # parallel segments only matter when they overlap on a common line
    if np.any(parallel & (np.abs(_cross2(gap, run_k)) <= \
            GENERIC_MARGIN * np.maximum(scale, 1.0))):
        raise DegenerateProjection('collinear segments in projection')
    hit = ~parallel & (s > -GENERIC_MARGIN) & (s < 1 + GENERIC_MARGIN) & \
            (r > -GENERIC_MARGIN) & (r < 1 + GENERIC_MARGIN)
    near_end = (np.minimum(np.abs(s), np.abs(1 - s)) < GENERIC_MARGIN) | \
            (np.minimum(np.abs(r), np.abs(1 - r)) < GENERIC_MARGIN)
    if np.any(hit & near_end):
        raise DegenerateProjection('crossing at a vertex')

    rows, cols = np.nonzero(hit)
    total = 0
    for i, j in zip(rows, cols):
        height_k = (a[i] + s[i, j] * (b[i] - a[i])) @ direction
        height_l = (c[j] + r[i, j] * (e[j] - c[j])) @ direction
        if abs(height_k - height_l) < GENERIC_MARGIN:
            raise DegenerateProjection('curves meet')
        if height_k < height_l:
            continue
        orientation = direction @ np.cross(b[i] - a[i], e[j] - c[j])
        total += int(np.sign(orientation))
    return total


def crossing_oracle(first, second, direction=None, seed=None,
                    attempts=ATTEMPTS):
    ''' linking number of two loops from one generic projection

    Hyperbolic loops are drawn in the klein model, where their segments are
    straight lines. '''
    points_k = first.straight_points()
    points_l = second.straight_points()
    seed = settings.RANDOM_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    if direction is None:
        direction = rng.normal(size=3)
    for attempt in range(attempts):
        try:
            return _count(points_k, points_l, direction)
        except DegenerateProjection as e:
            logger.warning('projection %d along %s not generic (%s), retrying',
                           attempt, np.round(direction, 6).tolist(), e)
            direction = rng.normal(size=3)
    raise CrossingOracleError(
        'no generic projection direction after %d attempts' % attempts)
