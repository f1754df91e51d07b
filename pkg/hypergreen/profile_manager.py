''' solve, cache and load radial profiles for the commands '''
import hashlib
import logging
import os
import re

from django.conf import settings

from hypergreen import closed_kernels, radial
from hypergreen.radial import profile as profile_io
from hypergreen.run_config import RunConfig

logger = logging.getLogger(__name__)


def checksum(text):
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


class ProfileCache:
    ''' profiles on disk keyed by (space, degree, t_max, tolerance), each with
    a sha-256 file next to it '''
    def __init__(self, directory=None):
        self.directory = directory or settings.HYPERGREEN_CACHE

    @staticmethod
    def key(space, degree, t_max, tolerance):
        raw = '%s_l%d_t%r_r%r' % (space.tag, degree, float(t_max),
                                  float(tolerance))
        return re.sub(r'[^A-Za-z0-9_.+-]', '-', raw)

    def _paths(self, key):
        base = os.path.join(self.directory, key)
        return base + '.json', base + '.sha256'

    def get(self, space, degree, t_max, tolerance):
        ''' the cached profile, or None when missing or corrupted '''
        path, sum_path = self._paths(self.key(space, degree, t_max, tolerance))
        if not os.path.exists(path):
            return None
        try:
            with open(path, 'r') as profile_file:
                text = profile_file.read()
            with open(sum_path, 'r') as sum_file:
                expected = sum_file.read().strip()
        except OSError:
            expected, text = None, ''
        if expected != checksum(text):
            logger.warning('checksum mismatch for %s, evicting', path)
            self.evict(space, degree, t_max, tolerance)
            return None
        logger.info('profile cache hit: %s', path)
        return profile_io.loads(text)

    def put(self, profile, tolerance):
        os.makedirs(self.directory, exist_ok=True)
        key = self.key(profile.space, profile.degree, profile.t_max, tolerance)
        path, sum_path = self._paths(key)
        text = profile_io.dumps(profile)
        with open(path, 'w') as profile_file:
            profile_file.write(text)
        with open(sum_path, 'w') as sum_file:
            sum_file.write(checksum(text))
        logger.info('cached %r as %s', profile, path)
        return path

    def evict(self, space, degree, t_max, tolerance):
        for path in self._paths(self.key(space, degree, t_max, tolerance)):
            if os.path.exists(path):
                os.remove(path)


def solve_profile(space, degree, config=None):
    ''' the decaying green's profile for a space and degree '''
    config = config or RunConfig()
    system = radial.assemble_system(space, degree)
    return radial.decaying_solution(
        system, config.grid(), config.ode_rtol, config.ode_atol,
        config.far_factor)


def get_profile(space, degree, config=None, use_cache=True):
    ''' solve through the cache '''
    config = config or RunConfig()
    if not use_cache:
        return solve_profile(space, degree, config)
    cache = ProfileCache(config.cache_dir)
    cached = cache.get(space, degree, config.t_max, config.ode_rtol)
    if cached is not None:
        return cached
    profile = solve_profile(space, degree, config)
    cache.put(profile, config.ode_rtol)
    return profile


def compare_closed_form(profile, times):
    ''' max over times of |A - A_ref| / (|alpha_ref| + |beta_ref|) '''
    reference = closed_kernels.closed_form_for(profile.space, profile.degree)
    alpha_ref, beta_ref = reference.pair(times)
    values = profile.evaluate(times)
    alpha, beta = values[:, 0], values[:, 1]
    scale = abs(alpha_ref) + abs(beta_ref)
    errors = (abs(alpha - alpha_ref) + abs(beta - beta_ref)) / scale
    rows = list(zip(times, alpha, beta, alpha_ref, beta_ref, errors))
    return float(max(errors)), rows
