''' explicit green's functions used as references for the radial solver '''
from dataclasses import dataclass
import math

from django.conf import settings
import numpy as np
from scipy.integrate import quad

from hypergreen import spaceform
from hypergreen.utils import series

# taylor terms kept below the crossover
SERIES_TERMS = 8


class ClosedFormError(ValueError):
    ''' argument outside the domain of a closed form '''


def _radius(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ClosedFormError('distance must be positive')
    return t


def _plain(values):
    return float(values) if np.ndim(values) == 0 else values


def newton_potential(m, r):
    ''' the fundamental solution of the laplacian on R^m '''
    r = _radius(r)
    if m < 2:
        raise ClosedFormError('dimension must be at least 2')
    if m == 2:
        return _plain(-np.log(r) / (2 * math.pi))
    area = spaceform.unit_sphere_volume(m - 1)
    return _plain(1.0 / ((m - 2) * r ** (m - 2) * area))


def _near_zero_coeffs():
    ''' taylor coefficients of 4 pi t alpha and the first term of 4 pi t beta '''
    order = SERIES_TERMS + 6
    sinh = series.sinh_taylor(order)
    cosh = series.cosh_taylor(order)
    # (2t + 1) sinh t - (t^2 + t) cosh t
    alpha_num = series.mul([1, 2], sinh, order) - \
            series.mul([0, 1, 1], cosh, order)
    # 3 sinh^2 - (cosh + 2t) sinh + t^2 + t
    beta_num = 3 * series.mul(sinh, sinh, order) - \
            series.mul(cosh + np.eye(1, order + 1, 1)[0] * 2, sinh, order)
    beta_num[1] += 1
    beta_num[2] += 1
    # both numerators start at t^2, sinh^3 at t^3
    sinhc_cubed = series.mul(series.mul(sinh[1:], sinh[1:], order - 1),
                             sinh[1:], order - 1)
    alpha = series.divide(alpha_num[2:], sinhc_cubed, SERIES_TERMS - 1)
    beta = series.divide(beta_num[2:], sinhc_cubed, SERIES_TERMS - 1) / 2
    return alpha, beta


NEAR_ZERO_ALPHA, NEAR_ZERO_BETA = _near_zero_coeffs()


def _alpha_exact(t):
    sinh, cosh = np.sinh(t), np.cosh(t)
    return ((2 * t + 1) * sinh - (t ** 2 + t) * cosh) / \
            (4 * math.pi * sinh ** 3)


def _beta_first_exact(t):
    sinh, cosh = np.sinh(t), np.cosh(t)
    return (3 * sinh ** 2 - (cosh + 2 * t) * sinh + t ** 2 + t) / \
            (8 * math.pi * sinh ** 3)


def _beta_second(t):
    return -t / (4 * math.pi * (np.cosh(t) + 1))


def h3_oneform_profile(t, crossover=None):
    ''' (alpha, beta) of the green's function for one-forms on H^3 '''
    t = _radius(t)
    crossover = crossover or settings.CLOSED_FORM_CROSSOVER
    small = t < crossover
    safe = np.where(small, crossover, t)
    alpha = np.where(
        small,
        series.evaluate(NEAR_ZERO_ALPHA, t) / (4 * math.pi * t),
        _alpha_exact(safe))
    beta_first = np.where(
        small,
        series.evaluate(NEAR_ZERO_BETA, t) / (4 * math.pi * t),
        _beta_first_exact(safe))
    return _plain(alpha), _plain(beta_first + _beta_second(t))


def h3_biot_savart_scalar(t):
    ''' the radial factor of the biot-savart kernel on H^3 '''
    t = _radius(t)
    return _plain(-np.cosh(t) / (4 * math.pi * np.sinh(t) ** 2))


def _check_scalar_space(space):
    if space.dim <= 2:
        raise ClosedFormError(
            'the scalar green function needs dimension at least 3, got %d' % \
                    space.dim)


def _reciprocal_volume(space, s):
    return 1.0 / spaceform.sphere_volume(space, s)


def _scalar_green_one(space, t):
    # integrate in log s up to 1 where the integrand is steep
    total = 0.0
    if t < 1:
        value, _ = quad(
            lambda u: math.exp(u) * _reciprocal_volume(space, math.exp(u)),
            math.log(t), 0.0, epsrel=1e-10, limit=200)
        total += value
    value, _ = quad(lambda s: _reciprocal_volume(space, s),
                    max(t, 1.0), np.inf, epsrel=1e-10, limit=200)
    return total + value


def scalar_green(space, t):
    ''' A(t) = integral of 1/sigma from t to infinity '''
    _check_scalar_space(space)
    t = _radius(t)
    if space.is_euclidean:
        return newton_potential(space.dim, t)
    if space.is_hyperbolic and space.dim == 3:
        lam = space.scale
        # coth(x) - 1 = 2 / (exp(2x) - 1)
        return _plain(lam * 2 / np.expm1(2 * lam * t) / (4 * math.pi))
    values = np.vectorize(lambda s: _scalar_green_one(space, s))(t)
    return _plain(values)


def scalar_green_derivative(space, t):
    ''' A'(t) = -1/sigma(t) '''
    _check_scalar_space(space)
    t = _radius(t)
    return _plain(-1.0 / np.asarray(spaceform.sphere_volume(space, t)))


@dataclass(frozen=True)
class ClosedForm:
    ''' a known (alpha, beta) pair for one space and degree '''
    space: spaceform.ModelSpace
    degree: int
    name: str
    function: object

    def pair(self, t):
        return self.function(t)


def _swap(function):
    def swapped(t):
        alpha, beta = function(t)
        return beta, alpha
    return swapped


def _both(function):
    def duplicated(t):
        value = function(t)
        return value, value
    return duplicated


def closed_form_for(space, degree):
    ''' the reference pair for (space, degree), if one is known '''
    if not 0 <= degree <= space.dim:
        raise ClosedFormError('degree %r outside 0..%d' % (degree, space.dim))
    if space.is_euclidean and space.dim >= 3:
        return ClosedForm(space, degree, 'newton',
                          _both(lambda t: newton_potential(space.dim, t)))
    if space.is_hyperbolic:
        if degree in (0, space.dim) and space.dim >= 3:
            return ClosedForm(space, degree, 'scalar',
                              _both(lambda t: scalar_green(space, t)))
        if space.dim == 3 and space.scale == 1.0:
            if degree == 1:
                return ClosedForm(space, 1, 'h3-oneform', h3_oneform_profile)
            return ClosedForm(space, 2, 'h3-twoform',
                              _swap(h3_oneform_profile))
    raise ClosedFormError('no closed form known for %s in degree %d' % \
            (space.tag, degree))
