import json
import logging

from django.core.management.base import BaseCommand, CommandError
from django.tasks import TaskResultStatus

from catalog.registry import resolve_many
from cli.options import MISMATCH, USAGE_ERROR, add_run_arguments, emit, run_config, to_csv
from cli.tasks import run_case_task
from utils.exceptions import GeometryError

logger = logging.getLogger(__name__)

CSV_HEADER = ["case", "check", "max_residual", "tolerance", "expect", "pass"]


class Command(BaseCommand):
    help = 'Verifies catalog cases against their expected verdicts (a case selector or "all")'

    def add_arguments(self, parser):
        parser.add_argument('selector', help='Catalog case, e.g. clifford-torus:1,1, or "all"')
        add_run_arguments(parser)

    def handle(self, *args, **options):
        config = run_config(options)
        try:
            cases = resolve_many(options['selector'])
        except GeometryError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)

        reports = []
        for case in cases:
            result = run_case_task.enqueue(case.selector or case.name, config.model_dump())
            if result.status == TaskResultStatus.SUCCESSFUL:
                reports.append(result.return_value)
                continue
            logger.error(f"Verification task for {case.name} failed")
            reports.append({"case": case.name, "checks": [], "meta": {"error": "task failed"}, "pass": False})
        reports.sort(key=lambda report: report["case"])

        for report in reports:
            style = self.style.SUCCESS if report["pass"] else self.style.ERROR
            self.stderr.write(style(f"{'PASS' if report['pass'] else 'FAIL'} {report['case']}"))

        passed = all(report["pass"] for report in reports)
        if options['format'] == 'csv':
            rows = [[report["case"], check["name"], f"{check['max_residual']:.6e}", f"{check['tolerance']:.1e}",
                     check["expect"], str(check["pass"]).lower()]
                    for report in reports for check in report["checks"]]
            text = to_csv(CSV_HEADER, rows)
        else:
            text = json.dumps({"cases": reports, "pass": passed, "seed": config.seed}, indent=2, sort_keys=True)
        emit(self, text, config, options.get('out'))

        if not passed:
            failing = [f"{report['case']}: {', '.join(c['name'] for c in report['checks'] if not c['pass']) or 'error'}"
                       for report in reports if not report["pass"]]
            raise CommandError("Expectations not met: " + "; ".join(failing), returncode=MISMATCH)
