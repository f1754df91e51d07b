''' solve the radial equation and store the profile '''

from django.core.management.base import BaseCommand, CommandError
import numpy as np

from hypergreen import profile_manager, radial, spaceform
from hypergreen.closed_kernels import ClosedFormError
from hypergreen.management import helpers
from hypergreen.radial import profile as profile_io
from hypergreen.run_config import RunConfig

SWAP_POINTS = 50


def swap_error(profile, config, use_cache):
    ''' distance between the profile and the swapped complementary one '''
    partner = profile_manager.get_profile(
        profile.space, profile.space.dim - profile.degree, config, use_cache)
    swapped = radial.hodge_swap(partner)
    times = np.geomspace(0.1, min(8.0, profile.t_max), SWAP_POINTS)
    ours = profile.evaluate(times)
    theirs = swapped.evaluate(times)
    scale = np.sum(np.abs(theirs), axis=1)
    return float(np.max(np.sum(np.abs(ours - theirs), axis=1) / scale))


class Command(BaseCommand):
    help = 'solve for the green\'s profile of a space form and degree'

    def add_arguments(self, parser):
        parser.add_argument('--space', required=True,
                            help='euclideanM or hM')
        parser.add_argument('--degree', type=int, required=True)
        parser.add_argument('--tmax', type=float, dest='t_max')
        parser.add_argument('--tmin', type=float, dest='t_min')
        parser.add_argument('--rtol', type=float, dest='ode_rtol')
        parser.add_argument('--output')
        parser.add_argument('--plot-csv', dest='plot_csv')
        parser.add_argument('--no-cache', action='store_true',
                            dest='no_cache')

    def handle(self, *args, **options):
        with helpers.command_errors():
            config = RunConfig.from_options(options)
            space = spaceform.parse_space(options['space'])
            degree = options['degree']
            if space.dim < 3 or not 0 <= degree <= space.dim:
                raise CommandError(
                    'no radial profile for degree %d on %s' % \
                            (degree, space.tag),
                    returncode=helpers.BAD_INPUT)
            use_cache = not options['no_cache']
            profile = profile_manager.get_profile(
                space, degree, config, use_cache)
            report = profile.diagnostics()
            try:
                times = np.geomspace(0.1, min(8.0, profile.t_max), 100)
                report['closed_form_error'] = \
                        profile_manager.compare_closed_form(profile, times)[0]
            except ClosedFormError:
                pass
            if 2 * degree > space.dim:
                report['swap_error'] = swap_error(profile, config, use_cache)

            output = options['output'] or \
                    '%s-degree%d.json' % (space.tag.replace(':', '-'), degree)
            profile_io.save(profile, output)
            report['output'] = output
            if options['plot_csv']:
                helpers.write_csv(
                    options['plot_csv'],
                    ['t', 'alpha', 'beta', 'alpha_prime', 'beta_prime'],
                    np.column_stack([profile.grid, profile.values,
                                     profile.derivs]).tolist())
            helpers.write_text(helpers.to_json(report), stream=self.stdout)
