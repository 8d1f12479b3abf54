import logging

from commands import (
    DIGITS,
    FORMAT,
    VERIFICATION_FAILED,
    WEIGHT,
    CommandError,
    CommandRouter,
    arg,
    check_digits,
    check_weight,
    render,
)
from numeric import VerifyReport, verify_relation
from reduction import as_relation, engine_for, slot_count
from relations import exact_suite, mod_suite
from schemas import latex_relation, report_model
from symbols import Relation
from tasks import record_reports

logger = logging.getLogger(__name__)

router = CommandRouter()


def relation_suite(k: int) -> list[Relation]:
    """Exact and quotient relations of weight k, plus every reduction for both epsilon extremes."""
    rels = exact_suite(k) + mod_suite(k)
    if k % 2 == 0 and k >= 4:
        n = slot_count(k)
        for eps in dict.fromkeys([(0,) * n, (1,) * n]):
            rels += [as_relation(res) for res in engine_for(k, eps).reduce_all()]
    return rels


def report_line(report: VerifyReport) -> str:
    status = "pass" if report.passed else "FAIL"
    line = f"{status}  {report.label}  [{report.mode.value}]  residual {report.residual:.3g} at {report.digits} digits"
    if report.detail:
        line += f"  ({report.detail})"
    return line


@router.command(
    "verify",
    WEIGHT,
    DIGITS,
    arg("--record", action="store_true", help="store every report in the verification ledger"),
    FORMAT,
    help="numerically certify every relation and reduction of weight k",
)
def cmd_verify(args) -> str:
    k = check_weight(args.weight, even=False, minimum=3)
    digits = check_digits(args.digits)
    rels = relation_suite(k)
    reports = [verify_relation(rel, digits) for rel in rels]
    for report in reports:
        # relations that cancel to 0 carry no weight of their own
        if report.weight is None:
            report.weight = k
    failed = [r for r in reports if not r.passed]
    logger.info("weight %d: %d relations checked, %d failed", k, len(reports), len(failed))

    if args.record:
        record_reports(reports)

    payload = render(args.format, [report_model(r) for r in reports], [report_line(r) for r in reports],
                     [latex_relation(rel, k) for rel in rels])
    if failed:
        raise CommandError(VERIFICATION_FAILED, f"{len(failed)} of {len(reports)} relations failed at weight {k}",
                           payload)
    return payload
