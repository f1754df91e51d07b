''' truncated power series with scalar or matrix coefficients '''
import numpy as np
from numpy.polynomial.polynomial import polyval
from scipy.special import factorial


def mul(a, b, order=None):
    ''' product of two series, truncated to `order` + 1 terms '''
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    size = min(len(a), len(b)) if order is None else order + 1
    result = np.zeros((size,) + np.broadcast(a[0], b[0]).shape)
    for i in range(size):
        for j in range(i + 1):
            if j < len(a) and i - j < len(b):
                result[i] = result[i] + a[j] * b[i - j]
    return result


def reciprocal(a, order=None):
    ''' 1/a for a scalar series with a[0] != 0 '''
    a = np.asarray(a, dtype=float)
    size = len(a) if order is None else order + 1
    if a[0] == 0:
        raise ZeroDivisionError('series has no constant term to invert')
    result = np.zeros(size)
    result[0] = 1.0 / a[0]
    for i in range(1, size):
        total = sum(a[j] * result[i - j] for j in range(1, min(i, len(a) - 1) + 1))
        result[i] = -total / a[0]
    return result


def divide(a, b, order=None):
    ''' a/b for scalar series '''
    return mul(a, reciprocal(b, order), order)


def sinh_taylor(order, scale=1.0):
    ''' sinh(scale t) in powers of t '''
    powers = np.arange(order + 1)
    coeffs = np.where(powers % 2 == 1, scale ** powers / factorial(powers), 0.0)
    return coeffs


def cosh_taylor(order, scale=1.0):
    ''' cosh(scale t) in powers of t '''
    powers = np.arange(order + 1)
    return np.where(powers % 2 == 0, scale ** powers / factorial(powers), 0.0)


def sinhc_even(order, scale_sq):
    ''' sinh(lam t)/(lam t) in powers of x = t^2, with scale_sq = lam^2 '''
    k = np.arange(order + 1)
    return scale_sq ** k / factorial(2 * k + 1)


def cosh_even(order, scale_sq):
    ''' cosh(lam t) in powers of x = t^2 '''
    k = np.arange(order + 1)
    return scale_sq ** k / factorial(2 * k)


def evaluate(coeffs, x):
    ''' sum coeffs[k] x^k; array coefficients give shape coeffs[0].shape + x.shape '''
    return polyval(x, np.asarray(coeffs, dtype=float))
