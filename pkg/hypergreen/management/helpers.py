''' shared plumbing for the management commands '''
from contextlib import contextmanager
import csv
import json
import sys

from django.core.management.base import CommandError

from hypergreen import profile_manager
from hypergreen.closed_kernels import ClosedFormError
from hypergreen.kernel_eval import KernelError
from hypergreen.linking import CrossingOracleError, CurveError, \
        QuadratureError
from hypergreen.radial import ProfileFormatError, RadialSolveError
from hypergreen.radial import profile as profile_io
from hypergreen.run_config import RunConfigError
from hypergreen.spaceform import SpaceFormError

BAD_INPUT = 1
NOT_CONVERGED = 2
FLAGGED = 3

INPUT_ERRORS = (SpaceFormError, ProfileFormatError, CurveError,
                RunConfigError, KernelError, ClosedFormError, OSError)
NUMERIC_ERRORS = (RadialSolveError, QuadratureError, CrossingOracleError)


@contextmanager
def command_errors():
    ''' turn library errors into command errors with the right exit code '''
    try:
        yield
    except INPUT_ERRORS as e:
        raise CommandError(str(e), returncode=BAD_INPUT) from e
    except NUMERIC_ERRORS as e:
        raise CommandError(str(e), returncode=NOT_CONVERGED) from e


def to_json(document):
    return json.dumps(document, cls=profile_io.ProfileEncoder,
                      sort_keys=True, indent=1)


def write_text(text, path=None, stream=None):
    ''' to a file when a path is given, otherwise to the stream '''
    if path:
        with open(path, 'w') as output:
            output.write(text + '\n')
    else:
        (stream or sys.stdout).write(text + '\n')


def write_csv(path, header, rows):
    with open(path, 'w', newline='') as output:
        writer = csv.writer(output)
        writer.writerow(header)
        writer.writerows(rows)


def add_profile_arguments(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--profile', help='profile json from the solve command')
    group.add_argument('--auto-solve', action='store_true', dest='auto_solve',
                       help='solve the degree one profile through the cache')


def profile_for(options, space, config):
    ''' the profile named by --profile, or a cached solve '''
    if options.get('profile'):
        profile = profile_io.load(options['profile'])
        if profile.space != space:
            raise CommandError(
                'profile is for %s, curves are in %s' % \
                        (profile.space.tag, space.tag), returncode=BAD_INPUT)
        return profile
    if not options.get('auto_solve'):
        raise CommandError('pass --profile FILE or --auto-solve',
                           returncode=BAD_INPUT)
    return profile_manager.get_profile(space, 1, config)
