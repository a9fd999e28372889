import logging

from django.core.management.base import BaseCommand, CommandError

from catalog.registry import resolve
from cli.options import USAGE_ERROR, add_run_arguments, emit, run_config, to_csv
from cli.runner import GEODESIC_HEADER, apply_steps, geodesic_rows
from curves.frenet import CSV_HEADER as FRENET_HEADER, frenet_csv_rows
from utils.exceptions import GeometryError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Samples intrinsic geodesics of a catalog case and writes their biharmonic residuals as CSV'

    def add_arguments(self, parser):
        parser.add_argument('selector', help='Catalog case, e.g. tb-cylinder:rho=4')
        add_run_arguments(parser, formats=("csv",), default_format="csv")

    def handle(self, *args, **options):
        config = run_config(options)
        try:
            case = resolve(options['selector'])
        except GeometryError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)

        if case.is_curve_case:
            # curve-level cases have no immersion; dump their Frenet data instead
            apply_steps(case, config)
            rows = frenet_csv_rows(case.ambient, case.curve, case.curve.grid(config.samples))
            emit(self, to_csv(FRENET_HEADER, rows), config, options.get('out'))
            return

        rows = geodesic_rows(case, config)
        emit(self, to_csv(GEODESIC_HEADER, rows), config, options.get('out'))
        counts = {}
        for row in rows:
            counts[row[-1]] = counts.get(row[-1], 0) + 1
        summary = ", ".join(f"{verdict}: {n}" for verdict, n in sorted(counts.items()))
        self.stderr.write(self.style.SUCCESS(f"{case.name}: {summary}"))
