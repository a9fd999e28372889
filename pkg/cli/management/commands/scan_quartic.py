import json
import logging

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from cli.options import USAGE_ERROR, emit, run_config, to_csv
from helices.quartic import scan_quartic
from utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

CSV_HEADER = ["mu", "r2_minus", "r2_plus", "admissible", "rejected", "degenerate"]


def _fmt(value):
    return "" if value is None else f"{value:.12g}"


class Command(BaseCommand):
    help = 'Scans the Hopf-cylinder helix radius quartic over a grid of mu and reports mu-independence'

    def add_arguments(self, parser):
        parser.add_argument('--a', type=float, required=True, help='BCV parameter a')
        parser.add_argument('--b', type=float, required=True, help='BCV parameter b')
        parser.add_argument('--mu', type=float, nargs='+', help='Values of mu (default: 0, 0.25, ..., 1)')
        parser.add_argument('--out', help='Write the table to this path instead of stdout')
        parser.add_argument('--format', choices=('csv', 'json'), default='csv', help='Output format')

    def handle(self, *args, **options):
        config = run_config({})
        mus = options['mu'] if options['mu'] is not None else list(np.linspace(0.0, 1.0, 5))
        try:
            scan = scan_quartic(options['a'], options['b'], mus)
        except ParameterError as e:
            logger.warning(f"Quartic scan refused: {e}")
            self.stderr.write(self.style.WARNING(f"Scan refused: {e}"))
            raise CommandError(str(e), returncode=USAGE_ERROR)

        verdict = "mu-independent" if scan.mu_independent else "mu-dependent"
        if options['format'] == 'json':
            text = json.dumps({
                "a": scan.a, "b": scan.b, "verdict": verdict,
                "rows": [{"mu": row.mu, "roots": list(row.roots),
                          "rejected": [{"value": v, "reason": reason} for v, reason in row.rejected],
                          "degenerate": row.degenerate} for row in scan.rows],
            }, indent=2, sort_keys=True)
        else:
            rows = [[_fmt(row.mu), _fmt(row.r2_minus), _fmt(row.r2_plus), str(len(row.roots)),
                     " ".join(f"{v:.6g}({reason})" for v, reason in row.rejected), str(row.degenerate).lower()]
                    for row in scan.rows]
            text = to_csv(CSV_HEADER, rows)
        emit(self, text, config, options.get('out'))
        self.stderr.write(self.style.SUCCESS(f"Verdict: {verdict}"))
