import logging

from pydantic import BaseModel

from commands import VERIFICATION_FAILED, CommandError, CommandRouter, arg, check_digits, check_weight, render
from tasks import MISMATCH, build_tables, record_reports

logger = logging.getLogger(__name__)

router = CommandRouter()


class TableOutcomeModel(BaseModel):
    weight: int
    epsilon: str
    path: str
    status: str
    detail: str = ""
    failed_reports: int = 0


@router.command(
    "table",
    arg("--max-k", type=int, required=True, help="largest weight to tabulate (starting at 8)"),
    arg("-o", "--out", default=".", help="output directory"),
    arg("--force", action="store_true", help="regenerate files instead of validating them"),
    arg("--verify", type=int, default=None, metavar="DIGITS", help="certify every stored reduction"),
    arg("--record", action="store_true", help="store verification reports in the ledger"),
    arg("--format", choices=("text", "json"), default="text"),
    help="write or validate dzv_k{k}_e{bits}.json reduction tables",
)
def cmd_table(args) -> str:
    max_k = check_weight(args.max_k, even=False, minimum=8)
    verify_digits = None if args.verify is None else check_digits(args.verify)
    outcomes = build_tables(args.out, max_k, force=args.force, verify_digits=verify_digits)

    reports = [r for o in outcomes for r in o.reports]
    if args.record and reports:
        record_reports(reports)

    models = [
        TableOutcomeModel(weight=o.weight, epsilon=o.epsilon, path=o.path, status=o.status, detail=o.detail,
                          failed_reports=sum(not r.passed for r in o.reports))
        for o in outcomes
    ]
    text = [f"{m.status:9}  {m.path}" + (f"  ({m.detail})" if m.detail else "")
            + (f"  {m.failed_reports} verification failures" if m.failed_reports else "")
            for m in models]
    payload = render(args.format, models, text)

    bad = [m for m in models if m.status == MISMATCH or m.failed_reports]
    logger.info("%d tables processed, %d with problems", len(models), len(bad))
    if bad:
        raise CommandError(VERIFICATION_FAILED, f"{len(bad)} of {len(models)} tables failed validation", payload)
    return payload
