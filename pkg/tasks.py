import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import psutil
from pydantic import ValidationError

import config
from database import session_factory
from models import VerificationRecord
from numeric import VerifyReport, verify_relation
from reduction import as_relation, engine_for, epsilon_bits, slot_count
from schemas import dump_table, load_table, results_from_table, table_model, terms_model
from symbols import DZVError, FormalSum

logger = logging.getLogger(__name__)

WRITTEN = "written"
VALIDATED = "validated"
MISMATCH = "mismatch"


@dataclass
class TableOutcome:
    weight: int
    epsilon: str
    path: str
    status: str
    detail: str = ""
    reports: list[VerifyReport] = field(default_factory=list)


def table_path(out_dir, k: int, epsilon: tuple[int, ...]) -> Path:
    return Path(out_dir) / f"dzv_k{k}_e{epsilon_bits(epsilon)}.json"


def extreme_epsilons(k: int) -> list[tuple[int, ...]]:
    n = slot_count(k)
    return [(0,) * n, (1,) * n]


def write_atomic(path: Path, text: str) -> None:
    # temp file in the target directory so os.replace stays on one filesystem
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _compare(path: Path, fresh) -> Optional[str]:
    try:
        stored = load_table(path.read_text(encoding="utf-8"))
        old = {r.input: r.coefficients for r in results_from_table(stored)}
    except ValidationError as e:
        return f"malformed table: {e.error_count()} validation errors"
    except DZVError as e:
        return f"malformed table: {e}"
    if stored.schema_version != config.TABLE_SCHEMA_VERSION:
        return f"schema {stored.schema_version}, expected {config.TABLE_SCHEMA_VERSION}"
    if stored.generators != fresh.generators:
        return "generator ordering differs"
    for res in results_from_table(fresh):
        if old.get(res.input) != res.coefficients:
            return f"{res.input}: stored {old.get(res.input)}, computed {res.coefficients}"
    if len(old) != len(fresh.entries):
        return f"{len(old)} stored entries, {len(fresh.entries)} computed"
    return None


def process_table(out_dir: str, k: int, epsilon: tuple[int, ...], force: bool = False,
                  verify_digits: Optional[int] = None) -> TableOutcome:
    """Build the table for (k, epsilon); validate an existing file unless force is set."""
    results = engine_for(k, epsilon).reduce_all()
    table = table_model(k, epsilon, results)
    path = table_path(out_dir, k, epsilon)
    outcome = TableOutcome(k, epsilon_bits(epsilon), str(path), WRITTEN)

    if path.exists() and not force:
        problem = _compare(path, table)
        if problem is None:
            outcome.status = VALIDATED
        else:
            outcome.status, outcome.detail = MISMATCH, problem
            logger.warning("%s: %s", path, problem)
    else:
        write_atomic(path, dump_table(table))
        logger.info("wrote %s (%d entries)", path, len(table.entries))

    if verify_digits is not None:
        outcome.reports = [verify_relation(as_relation(r), verify_digits) for r in results]
    return outcome


def worker_count() -> int:
    if config.TABLE_WORKERS > 0:
        return config.TABLE_WORKERS
    return psutil.cpu_count(logical=False) or 1


def build_tables(out_dir: str, max_k: int, force: bool = False,
                 verify_digits: Optional[int] = None, min_k: int = 8) -> list[TableOutcome]:
    os.makedirs(out_dir, exist_ok=True)
    jobs = [(k, eps) for k in range(min_k, max_k + 1, 2) for eps in extreme_epsilons(k)]
    workers = min(worker_count(), max(1, len(jobs)))
    logger.info("building %d tables with %d workers", len(jobs), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(process_table, out_dir, k, eps, force, verify_digits) for k, eps in jobs]
        return [f.result() for f in futures]


def record_reports(reports: Iterable[VerifyReport], url: Optional[str] = None) -> int:
    """Append reports to the verification ledger; returns the number stored."""
    stored = 0
    # Use context manager to ensure DB session is closed
    with session_factory(url)() as db:
        try:
            for report in reports:
                db.add(VerificationRecord(
                    weight=report.weight,
                    label=report.label,
                    mode=report.mode.value,
                    digits=report.digits,
                    residual=report.residual,
                    passed=report.passed,
                    coefficients=json.dumps(
                        [t.model_dump() for t in terms_model(FormalSum(report.coefficients))]),
                    detail=report.detail,
                ))
                stored += 1
            db.commit()
        except Exception as e:
            logger.error("Error recording verification reports: %s", e)
            db.rollback()
            raise
    return stored
