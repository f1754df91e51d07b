''' per-run overrides of the numerical settings '''
from dataclasses import dataclass, field, fields

from django.conf import settings

from hypergreen.linking.quadrature import QuadratureSpec
from hypergreen.radial.profile import GridSpec


class RunConfigError(ValueError):
    ''' a run option is out of range '''


def _setting(name):
    return field(default_factory=lambda: getattr(settings, name))


@dataclass
class RunConfig:
    ''' numerical options for one command run, defaulting to settings '''
    ode_rtol: float = _setting('ODE_RTOL')
    ode_atol: float = _setting('ODE_ATOL')
    t_min: float = _setting('PROFILE_T_MIN')
    t_max: float = _setting('PROFILE_T_MAX')
    grid_ratio: float = _setting('GRID_RATIO')
    grid_step: float = _setting('GRID_STEP')
    far_factor: float = _setting('SHOOTING_FAR_FACTOR')
    quadrature_nodes: int = _setting('QUADRATURE_NODES')
    quadrature_panels: int = 1
    quadrature_tolerance: float = _setting('QUADRATURE_TOLERANCE')
    quadrature_max_depth: int = _setting('QUADRATURE_MAX_DEPTH')
    epsilon: float = _setting('CURVE_EPSILON')
    threads: int = _setting('THREADS')
    seed: int = _setting('RANDOM_SEED')
    output: str = None
    cache_dir: str = _setting('HYPERGREEN_CACHE')

    def __post_init__(self):
        for name in ('ode_rtol', 'ode_atol', 'quadrature_tolerance'):
            value = getattr(self, name)
            if value is None or not 0 < value < 1:
                raise RunConfigError('%s must be in (0, 1), got %r' % \
                        (name, value))
        if not 0 < self.t_min < self.t_max:
            raise RunConfigError('need 0 < t_min < t_max, got %r and %r' % \
                    (self.t_min, self.t_max))
        if self.t_min > 1e-2:
            raise RunConfigError('t_min must be at most 1e-2')
        if self.grid_ratio <= 1 or self.grid_step <= 0:
            raise RunConfigError('grid ratio must exceed 1 and step be positive')
        if self.far_factor <= 1:
            raise RunConfigError('the far point must lie beyond t_max')
        if self.threads < 1:
            raise RunConfigError('threads must be at least 1')
        if self.quadrature_nodes < 1 or self.quadrature_panels < 1 or \
                self.quadrature_max_depth < 0:
            raise RunConfigError('quadrature sizes must be positive')
        if self.epsilon <= 0:
            raise RunConfigError('epsilon must be positive')

    @classmethod
    def from_options(cls, options):
        ''' build from command options, skipping the ones left unset '''
        names = {f.name for f in fields(cls)}
        given = {k: v for k, v in options.items() \
                if k in names and v is not None}
        return cls(**given)

    def grid(self):
        return GridSpec(self.t_min, self.t_max, self.grid_ratio, self.grid_step)

    def quadrature(self):
        return QuadratureSpec(self.quadrature_nodes, self.quadrature_panels,
                              self.quadrature_tolerance,
                              self.quadrature_max_depth)
