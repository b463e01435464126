"""Instance verification report for `rematch verify`."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from rich.console import Console
from rich.table import Table

from rematch.errors import ContractError, DomainError, InfeasibleError
from rematch.events import arrival_events, validate_stream
from rematch.harness.instance import read_instance
from rematch.metrics import aspect_ratio, validate_metric

logger = logging.getLogger(__name__)


@dataclass
class VerifyReport:
    path: str
    metric_kind: str
    n_points: int
    aspect: float | None
    problems: list[tuple[str, str]] = field(default_factory=list)  # (check, detail)
    passed: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def verify_instance(path: str | Path, events: str | Path | None = None) -> VerifyReport:
    instance = read_instance(path, events)
    metric = instance.metric
    try:
        aspect: float | None = aspect_ratio(metric)
    except DomainError:
        aspect = None
    report = VerifyReport(str(path), metric.METRIC_KIND, metric.n_points, aspect)

    violation = validate_metric(metric)
    if violation is None:
        report.passed.append("metric")
    else:
        report.problems.append(("metric", f"{violation.kind} at {violation.points}: "
                                          f"{violation.detail}"))

    stream = instance.events if instance.events is not None else arrival_events(
        [], instance.clients, start_seq=len(instance.servers)
    )
    try:
        validate_stream(stream, metric.n_points, instance.servers)
        report.passed.append("feasibility")
    except (ContractError, InfeasibleError) as e:
        report.problems.append(("feasibility", str(e)))
    return report


def print_report(report: VerifyReport, console: Console | None = None) -> None:
    console = console or Console()
    console.print(f"\n🔍 [bold cyan]Verifying instance: {report.path}[/bold cyan]\n")

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_row("metric kind", report.metric_kind)
    table.add_row("points", str(report.n_points))
    table.add_row("aspect ratio", "n/a" if report.aspect is None else f"{report.aspect:.6g}")
    for name in report.passed:
        table.add_row(name, "[green]✓[/green] valid")
    for name, detail in report.problems:
        table.add_row(name, f"[bold red]✗[/bold red] {detail}")
    console.print(table)

    if report.ok:
        console.print("\n[bold green]✓ Instance is valid[/bold green]")
    else:
        console.print(f"\n[bold red]✗ {len(report.problems)} check(s) failed[/bold red]")
