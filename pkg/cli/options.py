"""
Flags shared by the verification commands and their translation into a RunConfig.
"""
import csv
import io
import logging
from typing import List, Optional

from django.core.management.base import CommandError

from utils.config import RunConfig, get_run_config, parse_tolerance_flags

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
MISMATCH = 1


def add_run_arguments(parser, formats=("json", "csv"), default_format="json"):
    parser.add_argument('--seed', type=int, help='Random seed for samples and geodesic starts')
    parser.add_argument('--step', type=float, help='Finite-difference step for metrics and Christoffel symbols')
    parser.add_argument('--tol', action='append', metavar='CHECK=VALUE',
                        help='Override the tolerance of one check (repeatable)')
    parser.add_argument('--count', type=int, help='Number of sampled geodesics')
    parser.add_argument('--length', type=float, help='Arc length of each sampled geodesic')
    parser.add_argument('--out', help='Write the output to this path instead of stdout')
    parser.add_argument('--format', choices=formats, default=default_format, help='Output format')


def run_config(options) -> RunConfig:
    try:
        return get_run_config(
            seed=options.get('seed'),
            fd_step=options.get('step'),
            geodesic_count=options.get('count'),
            geodesic_length=options.get('length'),
            tolerances=parse_tolerance_flags(options.get('tol')),
        )
    except ValueError as e:
        raise CommandError(f"Invalid options: {e}", returncode=USAGE_ERROR)


def to_csv(header: List[str], rows: List[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit(command, text: str, config: RunConfig, out: Optional[str]) -> None:
    """Write text to --out (relative paths go under the configured output directory) or to stdout."""
    target = config.resolve_output(out)
    if target is None:
        command.stdout.write(text, ending="" if text.endswith("\n") else "\n")
        return
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text if text.endswith("\n") else text + "\n")
    logger.info(f"Wrote {target}")
    command.stderr.write(f"Wrote {target}")
