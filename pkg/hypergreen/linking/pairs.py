''' compiled pair sums for the linking and biot-savart integrals

Rows are summed in order inside each thread and the row totals are
reduced afterwards, so results do not depend on the thread count. '''
import math

import numba
from numba import njit, prange
import numpy as np

# below this value of -<x,y> the chordal distance formula is used
CHORDAL_CROSSOVER = 1.5


@njit(cache=True)
def _distance(x, y, hyperbolic):
    if not hyperbolic:
        total = 0.0
        for i in range(x.shape[0]):
            total += (x[i] - y[i]) ** 2
        return math.sqrt(total)
    chord = -(x[0] - y[0]) ** 2
    arg = x[0] * y[0]
    for i in range(1, x.shape[0]):
        chord += (x[i] - y[i]) ** 2
        arg -= x[i] * y[i]
    if arg < CHORDAL_CROSSOVER:
        return 2.0 * math.asinh(math.sqrt(max(chord, 0.0)) / 2.0)
    return math.acosh(arg)


@njit(parallel=True, cache=True)
def pair_distances(xs, ys, hyperbolic):
    ''' distance matrix between two point sets '''
    result = np.empty((xs.shape[0], ys.shape[0]))
    for i in prange(xs.shape[0]):
        for j in range(ys.shape[0]):
            result[i, j] = _distance(xs[i], ys[j], hyperbolic)
    return result


@njit(cache=True)
def _det3(m, skip):
    ''' determinant of the 3x3 matrix m without row skip '''
    rows = np.empty(3, dtype=np.int64)
    k = 0
    for i in range(4):
        if i != skip:
            rows[k] = i
            k += 1
    a, b, c = rows[0], rows[1], rows[2]
    return (m[a, 0] * (m[b, 1] * m[c, 2] - m[b, 2] * m[c, 1])
            - m[a, 1] * (m[b, 0] * m[c, 2] - m[b, 2] * m[c, 0])
            + m[a, 2] * (m[b, 0] * m[c, 1] - m[b, 1] * m[c, 0]))


@njit(cache=True)
def cofactor(a, b, c):
    ''' the vector v with v . d = det[a, b, c, d] for columns in R^4 '''
    m = np.empty((4, 3))
    for i in range(4):
        m[i, 0] = a[i]
        m[i, 1] = b[i]
        m[i, 2] = c[i]
    result = np.empty(4)
    for i in range(4):
        sign = 1.0 if (i + 3) % 2 == 0 else -1.0
        result[i] = sign * _det3(m, i)
    return result


@njit(cache=True)
def _cross(a, b):
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


@njit(cache=True)
def linking_term(x, tk, y, tl, hyperbolic):
    ''' det[y, tl, x, tk] in H^3, det[tl, x - y, tk] in R^3 '''
    if hyperbolic:
        v = cofactor(y, tl, x)
    else:
        v = _cross(tl, x - y)
    total = 0.0
    for i in range(v.shape[0]):
        total += v[i] * tk[i]
    return total


@njit(parallel=True, cache=True)
def linking_row_sums(xs, tks, wks, ys, tls, wls, factors, hyperbolic):
    ''' sum_j factor[i, j] term(i, j) wl[j] wk[i] for each row i '''
    rows = np.empty(xs.shape[0])
    for i in prange(xs.shape[0]):
        total = 0.0
        for j in range(ys.shape[0]):
            total += factors[i, j] * wls[j] * \
                    linking_term(xs[i], tks[i], ys[j], tls[j], hyperbolic)
        rows[i] = total * wks[i]
    return rows


@njit(cache=True)
def field_sum(x, ys, tls, wls, factors, hyperbolic):
    ''' sum_j factor[j] c_j wl[j], with c_j . w = the linking term at x '''
    result = np.zeros(x.shape[0])
    for j in range(ys.shape[0]):
        if hyperbolic:
            v = cofactor(ys[j], tls[j], x)
        else:
            v = _cross(tls[j], x - ys[j])
        for i in range(x.shape[0]):
            result[i] += factors[j] * wls[j] * v[i]
    return result


def set_threads(threads):
    ''' bound the compiled loops to `threads`, within what numba allows '''
    threads = max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(threads)
    return threads
