''' compare a solved profile with the known explicit green's function '''
from django.core.management.base import BaseCommand, CommandError
import numpy as np

from hypergreen import profile_manager, spaceform
from hypergreen.management import helpers
from hypergreen.radial import profile as profile_io
from hypergreen.run_config import RunConfig

THRESHOLD = 1e-6
T_LOW = 0.05
T_HIGH = 8.0


class Command(BaseCommand):
    help = 'max relative error of a profile against its closed form'

    def add_arguments(self, parser):
        parser.add_argument('--space', required=True)
        parser.add_argument('--degree', type=int, required=True)
        parser.add_argument('--tmax', type=float, dest='t_max')
        parser.add_argument('--profile')
        parser.add_argument('--points', type=int, default=100)
        parser.add_argument('--csv')

    def handle(self, *args, **options):
        with helpers.command_errors():
            config = RunConfig.from_options(options)
            space = spaceform.parse_space(options['space'])
            degree = options['degree']
            if options['points'] < 2:
                raise CommandError('need at least 2 points',
                                   returncode=helpers.BAD_INPUT)
            if options['profile']:
                profile = profile_io.load(options['profile'])
                if profile.space != space or profile.degree != degree:
                    raise CommandError(
                        'profile is degree %d on %s' % \
                                (profile.degree, profile.space.tag),
                        returncode=helpers.BAD_INPUT)
            else:
                profile = profile_manager.get_profile(space, degree, config)
            times = np.geomspace(T_LOW, min(T_HIGH, profile.t_max),
                                 options['points'])
            error, rows = profile_manager.compare_closed_form(profile, times)

        if options['csv']:
            helpers.write_csv(
                options['csv'],
                ['t', 'alpha', 'beta', 'alpha_ref', 'beta_ref', 'error'],
                [[float(v) for v in row] for row in rows])
        helpers.write_text(helpers.to_json({
            'space': space.tag,
            'degree': degree,
            'max_error': error,
            'points': len(times),
        }), stream=self.stdout)
        if error > THRESHOLD:
            raise CommandError('max error %.3g exceeds %g' % \
                    (error, THRESHOLD), returncode=helpers.NOT_CONVERGED)
