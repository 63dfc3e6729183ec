"""
Logging utilities for the meanscale command line.
"""
import logging
import sys
from typing import Optional

from models import DualMeanRecord, SolveReport

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def verbosity_level(verbose: int) -> int:
    """Map the count of -v flags to a logging level."""
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return logging.WARNING


def configure_logging(level: int = logging.WARNING) -> None:
    """
    Send log records to stderr; standard output is reserved for results.

    Args:
        level (int): Root logging level
    """
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def log_solve_details(report: SolveReport, target_family: Optional[str] = None):
    """
    Log details about a solved scale parameter.

    Args:
        report (SolveReport): Result object
        target_family (str, optional): Family name as typed by the user
    """
    logger.info("Solved %s: alpha=%r -> mean %r", target_family or report.family, report.alpha, report.achieved_mean)
    logger.info("Residual %.3g after %d iterations", report.residual, report.iterations)
    logger.debug("Final bracket: [%r, %r]", *report.bracket)


def log_dual_details(record: DualMeanRecord, tol: float):
    """
    Log details about a dual-mean consistency check.

    Args:
        record (DualMeanRecord): Result object
        tol (float): Relative tolerance the residuals are held to
    """
    logger.info("theta mean %r, eta mean %r", record.theta_mean, record.eta_mean)
    if record.consistent(tol):
        logger.info("Residuals within %g: eta %.3g, arc %.3g", tol, record.eta_residual, record.arc_residual)
    else:
        logger.error("Dual residuals above %g: eta %.3g, arc %.3g", tol, record.eta_residual, record.arc_residual)
