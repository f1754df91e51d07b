''' hypergreen settings and configuration '''
import os

from environs import Env

env = Env()
VERSION = '0.1.0'

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SECRET_KEY = env('SECRET_KEY', 'hypergreen-local')
DEBUG = env.bool('DEBUG', False)
ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', [])

INSTALLED_APPS = [
    'hypergreen',
]

# the test runner wants a database even though nothing is stored in it
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': env('HYPERGREEN_DATABASE', ':memory:'),
    }
}
DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

USE_TZ = True
TIME_ZONE = 'UTC'

# profile cache for --auto-solve
HYPERGREEN_CACHE = env(
    'HYPERGREEN_CACHE', os.path.join(BASE_DIR, '.hypergreen-cache'))

# radial ode
ODE_RTOL = env.float('HYPERGREEN_ODE_RTOL', 1e-12)
ODE_ATOL = env.float('HYPERGREEN_ODE_ATOL', 1e-14)
PROFILE_T_MIN = env.float('HYPERGREEN_T_MIN', 1e-3)
PROFILE_T_MAX = env.float('HYPERGREEN_T_MAX', 12.0)
GRID_RATIO = env.float('HYPERGREEN_GRID_RATIO', 1.005)
GRID_STEP = env.float('HYPERGREEN_GRID_STEP', 0.005)
FROBENIUS_ORDER = env.int('HYPERGREEN_FROBENIUS_ORDER', 6)
FROBENIUS_TOLERANCE = env.float('HYPERGREEN_FROBENIUS_TOLERANCE', 1e-10)
FROBENIUS_MAX_ORDER = env.int('HYPERGREEN_FROBENIUS_MAX_ORDER', 40)
SHOOTING_FAR_FACTOR = env.float('HYPERGREEN_FAR_FACTOR', 2.0)
GROWING_MODE_THRESHOLD = env.float(
    'HYPERGREEN_GROWING_MODE_THRESHOLD', 1e-8)
RESIDUAL_TOLERANCE = env.float('HYPERGREEN_RESIDUAL_TOLERANCE', 1e-6)
RESIDUAL_PROBES = env.int('HYPERGREEN_RESIDUAL_PROBES', 100)

# closed forms
CLOSED_FORM_CROSSOVER = env.float('HYPERGREEN_CLOSED_FORM_CROSSOVER', 1e-2)

# line integrals
QUADRATURE_NODES = env.int('HYPERGREEN_QUADRATURE_NODES', 8)
QUADRATURE_TOLERANCE = env.float('HYPERGREEN_QUADRATURE_TOLERANCE', 1e-8)
QUADRATURE_MAX_DEPTH = env.int('HYPERGREEN_QUADRATURE_MAX_DEPTH', 6)
CURVE_EPSILON = env.float('HYPERGREEN_CURVE_EPSILON', 1e-3)
THREADS = env.int('HYPERGREEN_THREADS', 1)
RANDOM_SEED = env.int('HYPERGREEN_RANDOM_SEED', 0)

LOG_LEVEL = env('HYPERGREEN_LOG_LEVEL', 'INFO')
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'hypergreen': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
        },
    },
}
