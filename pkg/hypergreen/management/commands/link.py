''' linking number of the two curves in a curve file '''
from django.core.management.base import BaseCommand, CommandError

from hypergreen.linking import crossing_oracle, gauss_linking, load_curve_file
from hypergreen.management import helpers
from hypergreen.run_config import RunConfig


class Command(BaseCommand):
    help = 'gauss linking integral of two curves, optionally checked by ' \
            'counting crossings'

    def add_arguments(self, parser):
        parser.add_argument('curvefile')
        helpers.add_profile_arguments(parser)
        parser.add_argument('--nodes', type=int, dest='quadrature_nodes')
        parser.add_argument('--panels', type=int, dest='quadrature_panels')
        parser.add_argument('--tol', type=float, dest='quadrature_tolerance')
        parser.add_argument('--max-depth', type=int,
                            dest='quadrature_max_depth')
        parser.add_argument('--threads', type=int)
        parser.add_argument('--oracle', action='store_true')
        parser.add_argument('--output')
        parser.add_argument('--history-csv', dest='history_csv')

    def handle(self, *args, **options):
        with helpers.command_errors():
            config = RunConfig.from_options(options)
            curves = load_curve_file(options['curvefile'])
            first, second = curves.pair()
            profile = helpers.profile_for(options, curves.space, config)
            result = gauss_linking(first, second, profile,
                                   config.quadrature(), config.epsilon,
                                   config.threads)
            if options['oracle']:
                result.oracle = crossing_oracle(first, second,
                                                seed=config.seed)

        helpers.write_text(helpers.to_json(result.as_dict()),
                           options['output'], self.stdout)
        if options['history_csv']:
            helpers.write_csv(
                options['history_csv'],
                ['depth', 'panels', 'value', 'change'],
                [[h['depth'], h['panels'], h['value'], h['change']] \
                        for h in result.history])
        if result.agreement is False:
            raise CommandError(
                'integral rounds to %d, crossings give %d' % \
                        (result.rounded, result.oracle),
                returncode=helpers.NOT_CONVERGED)
