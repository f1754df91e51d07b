''' check a stored profile against the radial equation '''
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from hypergreen.management import helpers
from hypergreen.radial import profile as profile_io

ASYMPTOTIC_TOLERANCE = 5e-3


class Command(BaseCommand):
    help = 'report residual, small-t asymptotics and tail decay of a profile'

    def add_arguments(self, parser):
        parser.add_argument('profile')

    def handle(self, *args, **options):
        with helpers.command_errors():
            profile = profile_io.load(options['profile'])
            report = profile.diagnostics()

        failures = []
        if report['max_residual'] > settings.RESIDUAL_TOLERANCE:
            failures.append('residual')
        if abs(report['asymptotic_ratio'] - 1) > ASYMPTOTIC_TOLERANCE:
            failures.append('asymptotics')
        if not profile.space.is_euclidean and \
                not report['tail_rate'] > 0:
            failures.append('tail')
        report['failures'] = failures
        helpers.write_text(helpers.to_json(report), stream=self.stdout)
        if failures:
            raise CommandError('profile fails: %s' % ', '.join(failures),
                               returncode=helpers.NOT_CONVERGED)
