"""Rich terminal output for command reports."""

from typing import Dict, List, Optional

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from ..models import CommandReport, Issue, Severity, ValidationReport
from .report_renderer import inline_value

_STATUS_STYLE = {
    "ok": "bold green",
    "pass": "bold green",
    "fail": "bold red",
    "error": "bold red",
    "timeout": "bold yellow",
}

_SEVERITY_STYLE = {
    Severity.ERROR: "red",
    Severity.WARNING: "yellow",
    Severity.INFO: "cyan",
}


class RichFormatter:
    """Colorized terminal output with instance context for issues."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def print_report(self, report: CommandReport, source: Optional[str] = None, verbose: bool = False):
        style = _STATUS_STYLE.get(report.status, "bold")
        self.console.print(f"\n[{style}]ficoder {report.command}: {report.status}[/]")

        if report.validation is not None:
            self.print_validation(report.validation, source, verbose)
            return

        for title, body in report.sections.items():
            self._print_section(title, body)

    def print_validation(self, report: ValidationReport, source: Optional[str] = None, verbose: bool = False):
        self.console.print(f"   [dim]{report.error_count} error(s), {report.warning_count} warning(s)[/]\n")
        for issue in report.errors + report.warnings:
            self._print_issue(issue, source)
        if verbose:
            for note in report.notes:
                self._print_issue(note, source)
        if report.summary:
            self._print_section("summary", report.summary)

    def _print_section(self, title: str, body: Dict):
        table = Table(show_header=False, box=None, padding=(0, 2))
        table.add_column(style="dim")
        table.add_column(style="cyan")
        for key, value in (body.items() if isinstance(body, dict) else [("", body)]):
            table.add_row(str(key), inline_value(value))
        self.console.print(Panel(table, title=f"[bold]{title}[/]", border_style="dim", box=box.ROUNDED))

    def _print_issue(self, issue: Issue, source: Optional[str]):
        color = _SEVERITY_STYLE[issue.severity]
        self.console.print(f"[{color} bold]{issue.code}[/]", end=" ")
        self.console.print(f"[dim]{issue.format_path()}[/]")
        self.console.print(f"   {issue.message}")

        if issue.line and source:
            context = self._get_context(source, issue.line)
            if context:
                self.console.print(Panel(context, border_style=color, box=box.ROUNDED, padding=(0, 1)))

        if issue.suggestion:
            self.console.print(f"   [dim]{issue.suggestion}[/]")
        self.console.print()

    def _get_context(self, source: str, line: int, context_lines: int = 2) -> Text:
        lines = source.splitlines()
        start = max(0, line - context_lines - 1)
        end = min(len(lines), line + context_lines)

        text = Text()
        for i in range(start, end):
            line_num = i + 1
            is_error_line = line_num == line
            prefix = "→ " if is_error_line else "  "
            text.append(f"{prefix}{line_num:3d} │ ", style="dim")
            text.append(f"{lines[i]}\n", style="bold red" if is_error_line else None)
        return text

    def print_rules(self, rules: List[dict]):
        table = Table(title="Instance Checks", box=box.ROUNDED)
        table.add_column("Code", style="cyan", width=8)
        table.add_column("Severity", width=8)
        table.add_column("Description")

        for rule in rules:
            severity = rule["severity"]
            style = {"error": "red", "warning": "yellow"}.get(severity, "cyan")
            table.add_row(rule["code"], f"[{style}]{severity}[/]", rule["description"])

        self.console.print(table)

    def print_profiles(self, profiles: List[dict]):
        table = Table(title="Settings Profiles", box=box.ROUNDED)
        table.add_column("Name", style="cyan")
        table.add_column("Description")
        for profile in profiles:
            table.add_row(profile["name"], profile["description"])
        self.console.print(table)
