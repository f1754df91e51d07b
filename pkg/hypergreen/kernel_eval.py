''' two-point kernels built from a radial profile

Every kernel maps multivectors at the source point x to multivectors at the
target point y. A form w at y is paired through it as w o q, which is what
`KernelMap.pull` computes. Matrices are written in the wedge bases of
orthonormal frames at x and y; the standard frames are used unless others
are passed in. '''
from dataclasses import dataclass

import numpy as np

from hypergreen import spaceform
from hypergreen.spaceform import SpaceFormError
# bring frames and the degree swap into the kernel namespace
from hypergreen.radial.profile import hodge_swap
from hypergreen.spaceform import adapted_frame


class KernelError(ValueError):
    ''' kernel requested at coincident points or with the wrong degree '''


@dataclass(frozen=True)
class KernelMap:
    ''' a linear map from degree_in vectors at x to degree_out vectors at y '''
    y: np.ndarray
    x: np.ndarray
    t: float
    degree_in: int
    degree_out: int
    matrix: np.ndarray

    def apply(self, vector):
        ''' the image at y of coefficients at x '''
        return self.matrix @ np.asarray(vector, dtype=float)

    def pull(self, form):
        ''' form o q: a form at y becomes a form at x '''
        return self.matrix.T @ np.asarray(form, dtype=float)

    def transpose(self):
        ''' the map read in the opposite direction, from y to x '''
        return KernelMap(self.x, self.y, self.t, self.degree_out,
                         self.degree_in, self.matrix.T)


def _frames(space, y, x, frame_y, frame_x):
    ''' adapted frame plus the change of basis matrices on both sides '''
    try:
        frame = adapted_frame(space, y, x)
    except SpaceFormError as e:
        raise KernelError(str(e)) from e
    at_x = frame.at_source()
    frame_x = spaceform.standard_frame(space, x) if frame_x is None \
            else np.asarray(frame_x, dtype=float)
    frame_y = spaceform.standard_frame(space, y) if frame_y is None \
            else np.asarray(frame_y, dtype=float)
    # rows: adapted vectors, columns: user vectors
    source = np.asarray(spaceform.inner(
        space, at_x[:, None, :], frame_x[None, :, :]))
    target = np.asarray(spaceform.inner(
        space, frame_y[:, None, :], frame.vectors[None, :, :]))
    return frame, source, target


def _axis_factors(space, t):
    ''' cosh(lam t) and sinh(lam t)/lam per normal direction '''
    factors = []
    for lam in space.jacobi_eigenvalues:
        if lam:
            factors.append((np.cosh(lam * t), np.sinh(lam * t) / lam))
        else:
            factors.append((1.0, t))
    return factors


def _check_degree(profile, degree, low, high):
    if not low <= degree <= high:
        raise KernelError('degree %d has no such kernel in dimension %d' % \
                (degree, profile.space.dim))


def green_kernel(profile, y, x, frame_y=None, frame_x=None):
    ''' q^A: alpha on monomials containing T, beta on the rest '''
    space = profile.space
    frame, source, target = _frames(space, y, x, frame_y, frame_x)
    degree = profile.degree
    local = profile.matrix(frame.t)[0]
    matrix = spaceform.wedge_power(target, degree) @ local @ \
            spaceform.wedge_power(source, degree)
    return KernelMap(frame.y, frame.x, frame.t, degree, degree, matrix)


def _derived_kernel(profile, t, coupling):
    ''' A' o c(T) + sum (ad_i A - cosh A ad_i) o c(m_i) / s_i in the
    adapted frame, with c the wedge or contraction operator '''
    space = profile.space
    degree = profile.degree
    a = profile.matrix(t)[0]
    a_prime = profile.matrix(t, nu=1)[0]
    unit = np.eye(space.dim)
    result = a_prime @ coupling(unit[0])
    for axis, (c, s) in enumerate(_axis_factors(space, t), start=1):
        ad = spaceform.ad_action(space, axis, degree)
        result = result + (ad @ a - c * a @ ad) @ coupling(unit[axis]) / s
    return result


def codifferential_kernel(profile, y, x, frame_y=None, frame_x=None):
    ''' q^{d*A}, from (l-1)-vectors at x to l-vectors at y '''
    degree = profile.degree
    _check_degree(profile, degree, 1, profile.space.dim)
    frame, source, target = _frames(profile.space, y, x, frame_y, frame_x)
    local = -_derived_kernel(
        profile, frame.t, lambda v: spaceform.wedge_matrix(v, degree))
    matrix = spaceform.wedge_power(target, degree) @ local @ \
            spaceform.wedge_power(source, degree - 1)
    return KernelMap(frame.y, frame.x, frame.t, degree - 1, degree, matrix)


def differential_kernel(profile, y, x, frame_y=None, frame_x=None):
    ''' q^{dA}, from (l+1)-vectors at x to l-vectors at y '''
    degree = profile.degree
    _check_degree(profile, degree, 0, profile.space.dim - 1)
    frame, source, target = _frames(profile.space, y, x, frame_y, frame_x)
    local = _derived_kernel(
        profile, frame.t,
        lambda v: spaceform.contraction_matrix(v, degree))
    matrix = spaceform.wedge_power(target, degree) @ local @ \
            spaceform.wedge_power(source, degree + 1)
    return KernelMap(frame.y, frame.x, frame.t, degree + 1, degree, matrix)


def codifferential_scalar(profile, t):
    ''' phi with q^{d*A}(w) = -phi T ^ w for the top minus one degree

    phi = alpha' + (n - l + 1)(cosh alpha - beta)/s '''
    space = profile.space
    if profile.degree != space.dim - 1 or not profile.is_block:
        raise KernelError('the scalar form needs a block profile of degree %d' \
                % (space.dim - 1))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    alpha, beta = profile.pair(t)
    alpha_prime, _ = profile.pair(t, nu=1)
    c, s = _axis_factors(space, t)[0]
    weight = space.n - profile.degree + 1
    return alpha_prime + weight * (c * alpha - beta) / s


def apply_pairing(form, kernel):
    ''' w o q for a form w at the target point '''
    return kernel.pull(form)
