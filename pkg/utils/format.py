from typing import Iterable, List, TextIO

from config import SIGNIFICANT_DIGITS
from models import DualMeanRecord, LimitProbe, ScaleReport, ScanRow, SolveReport

NUMBER_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


def format_number(value: float) -> str:
    """Shortest-safe text for a double: 17 significant digits, so it round-trips."""
    return NUMBER_FORMAT % value


def format_solve_report(report: SolveReport) -> str:
    """Format a solved parameter for display."""
    lines = [
        f"family: {report.family}",
        f"alpha: {format_number(report.alpha)}",
        f"mean: {format_number(report.achieved_mean)}",
        f"target: {format_number(report.target)}",
        f"residual: {report.residual:.3g}",
        f"iterations: {report.iterations}",
    ]
    return "\n".join(lines) + "\n"


def format_scale_report(report: ScaleReport) -> str:
    """Format a monotonicity check for display."""
    observed = report.observed.value if report.observed else "NotMonotone"
    output = f"{observed}\n"
    output += f"family: {report.family} (declared {report.declared.value}, {report.samples} samples)\n"
    output += f"mean range: [{format_number(report.mean_range[0])}, {format_number(report.mean_range[1])}]\n"

    if report.violations:
        output += "violations:\n"
        for i, v in enumerate(report.violations):
            output += (
                f"{i+1}. alpha {format_number(v.alpha_lo)} -> {format_number(v.alpha_hi)}: "
                f"mean {format_number(v.mean_lo)} -> {format_number(v.mean_hi)}\n"
            )
    return output


def format_dual_record(record: DualMeanRecord) -> str:
    """Format a dual-mean consistency record for display."""
    lines = [
        f"theta_mean: {format_number(record.theta_mean)}",
        f"eta_mean: {format_number(record.eta_mean)}",
        f"transported_eta: {format_number(record.transported_eta)}",
        f"arc_primal: {format_number(record.arc_primal)}",
        f"arc_dual: {format_number(record.arc_dual)}",
        f"eta_residual: {record.eta_residual:.3g}",
        f"arc_residual: {record.arc_residual:.3g}",
    ]
    return "\n".join(lines) + "\n"


def format_limit_probe(probe: LimitProbe) -> str:
    """Means at both extreme parameters, with their gaps to min{a, b} and max{a, b}."""
    output = f"family: {probe.family} (alpha_big {format_number(probe.alpha_big)})\n"
    for label, mean in (("-alpha_big", probe.at_negative), ("+alpha_big", probe.at_positive)):
        output += (
            f"{label}: {format_number(mean)} "
            f"(gap to min {mean - probe.low:.3g}, gap to max {probe.high - mean:.3g})\n"
        )
    return output


def scan_lines(rows: Iterable[ScanRow]) -> List[str]:
    """CSV lines for a scan: header `alpha,mean`, then one row per parameter."""
    return ["alpha,mean"] + [f"{format_number(row.alpha)},{format_number(row.mean)}" for row in rows]


def write_scan_csv(rows: Iterable[ScanRow], stream: TextIO) -> None:
    """Newline-terminated CSV, no trailing blank line."""
    for line in scan_lines(rows):
        stream.write(line + "\n")
