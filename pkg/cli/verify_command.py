"""The verify command: run a suite of residual checks and report."""
import logging
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from errors import PainleveError
from utils import dump_json, write_output

from .options import run_settings
from .suites import suite_checks

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    anchor: str
    residual: float
    threshold: float
    comparison: str
    passed: bool
    error: str = None


@dataclass
class VerificationReport:
    """Records of one suite run; passes when every record passes."""

    suite: str
    records: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def errored(self):
        return any(r.error for r in self.records)

    def to_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "records": [asdict(r) for r in self.records],
        }


def run_check(check, seed=0, quick=False):
    """
    Run one check with a generator seeded from (seed, check name).

    Returns:
        CheckRecord; toolkit errors are recorded, not raised
    """
    rng = np.random.default_rng([seed, zlib.crc32(check.name.encode())])
    try:
        residual = float(check.func(rng, quick))
    except (PainleveError, ArithmeticError) as e:
        logger.error("%s failed: %s", check.name, e)
        return CheckRecord(check.name, check.anchor, None, check.threshold, check.comparison, False,
                           f"{type(e).__name__}: {str(e)}")
    if check.comparison == ">=":
        passed = residual >= check.threshold
    else:
        passed = residual <= check.threshold
    logger.info("%s: residual %.3g (%s %.3g) %s", check.name, residual, check.comparison, check.threshold,
                "pass" if passed else "FAIL")
    return CheckRecord(check.name, check.anchor, residual if math.isfinite(residual) else None,
                       check.threshold, check.comparison, passed)


def run_suite(name, quick=False, seed=0, jobs=1):
    """
    Run every check of a suite, concurrently when jobs > 1.

    Returns:
        VerificationReport with records sorted by name
    """
    checks = suite_checks(name)
    with ThreadPoolExecutor(max_workers=max(1, jobs or 1)) as pool:
        records = list(pool.map(lambda c: run_check(c, seed, quick), checks))
    return VerificationReport(name, sorted(records, key=lambda r: r.name))


def run_verify(args):
    """
    Returns:
        0 when every check passes, 1 on a failed check, 2 when a check could
        not be evaluated
    """
    seed, jobs = run_settings(args)
    report = run_suite(args.suite, bool(args.quick), seed, jobs)
    write_output(dump_json(report.to_dict()), args.out)
    if report.errored:
        return 2
    return 0 if report.passed else 1
