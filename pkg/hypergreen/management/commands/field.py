''' biot-savart field of a loop at probe points '''
import csv
import io
import logging

from django.core.management.base import BaseCommand, CommandError
import numpy as np

from hypergreen import spaceform
from hypergreen.linking import CurveError, FieldEvaluator, load_curve_file
from hypergreen.management import helpers
from hypergreen.run_config import RunConfig
from hypergreen.spaceform import SpaceFormError

logger = logging.getLogger(__name__)


def read_points(path):
    ''' coordinate rows, skipping a header line '''
    rows = []
    with open(path, 'r', newline='') as points_file:
        for index, row in enumerate(csv.reader(points_file)):
            if not row or not ''.join(row).strip():
                continue
            try:
                rows.append([float(value) for value in row])
            except ValueError as e:
                if index == 0:
                    continue
                raise CurveError('bad probe row %d: %s' % (index, e)) from e
    return rows


class Command(BaseCommand):
    help = 'evaluate the biot-savart field of a current loop'

    def add_arguments(self, parser):
        parser.add_argument('loopfile')
        parser.add_argument('points_csv')
        parser.add_argument('--curve', help='loop name, default the first')
        helpers.add_profile_arguments(parser)
        parser.add_argument('--check-divergence', action='store_true',
                            dest='check_divergence')
        parser.add_argument('--strict', action='store_true')
        parser.add_argument('--output')

    def handle(self, *args, **options):
        with helpers.command_errors():
            config = RunConfig.from_options(options)
            curves = load_curve_file(options['loopfile'])
            loop = curves.get(options['curve'])
            probes = read_points(options['points_csv'])
            space = curves.space
            width = space.dim if curves.model == 'ball' else space.ambient_dim
            header = ['x%d' % i for i in range(width)] + \
                    ['b%d' % i for i in range(width)] + ['distance', 'flagged']
            if options['check_divergence']:
                header.append('divergence')
            rows = []
            if probes:
                profile = helpers.profile_for(options, space, config)
                evaluator = FieldEvaluator(profile, loop, config.quadrature(),
                                           config.epsilon)
                rows = [self.probe(evaluator, curves.model, p, width,
                                   options['check_divergence']) \
                        for p in probes]

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
        helpers.write_text(buffer.getvalue().rstrip('\n'), options['output'],
                           self.stdout)
        flagged = sum(1 for row in rows if row[2 * width + 1])
        if flagged and options['strict']:
            raise CommandError('%d probes are too close to the loop' % \
                    flagged, returncode=helpers.FLAGGED)

    @staticmethod
    def probe(evaluator, model, coords, width, divergence):
        ''' one output row: coordinates, field, distance, flag '''
        if len(coords) != width:
            raise CurveError('probe has %d coordinates, expected %d' % \
                    (len(coords), width))
        try:
            x = spaceform.from_poincare_ball(np.array(coords)) \
                    if model == 'ball' else np.array(coords)
            x = spaceform.point(evaluator.space, x)
        except SpaceFormError as e:
            raise CurveError(str(e)) from e
        gap = evaluator.distance(x)
        if gap < evaluator.epsilon:
            logger.warning('probe %s is %.3g from the loop', coords, gap)
            blank = [''] * width + [gap, 1]
            return list(coords) + blank + ([''] if divergence else [])
        field = evaluator.sample(x).field
        if model == 'ball':
            field = spaceform.push_forward_to_ball(x, field)
        row = list(coords) + list(field) + [gap, 0]
        if divergence:
            row.append(evaluator.divergence(x))
        return row
