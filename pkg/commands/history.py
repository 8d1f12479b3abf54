from commands import CommandRouter, arg, render
from database import session_factory
from models import VerificationRecord
from schemas import HistoryRecordModel

router = CommandRouter()


@router.command(
    "history",
    arg("-k", "--weight", type=int, default=None, help="only this weight"),
    arg("--limit", type=int, default=20),
    arg("--failed", action="store_true", help="only failed verifications"),
    arg("--format", choices=("text", "json"), default="text"),
    help="list stored verification reports, newest first",
)
def cmd_history(args) -> str:
    with session_factory()() as db:
        query = db.query(VerificationRecord)
        if args.weight is not None:
            query = query.filter(VerificationRecord.weight == args.weight)
        if args.failed:
            query = query.filter(VerificationRecord.passed.is_(False))
        records = query.order_by(VerificationRecord.timestamp.desc(), VerificationRecord.id.desc()) \
            .limit(args.limit).all()
        rows = [HistoryRecordModel.model_validate(r) for r in records]

    text = [
        f"{r.timestamp:%Y-%m-%d %H:%M:%S}  {'pass' if r.passed else 'FAIL'}  k={r.weight}  {r.label}"
        f"  residual {r.residual:.3g} at {r.digits} digits"
        for r in rows
    ]
    return render(args.format, rows, text)
