"""
Output formatters for command reports.

- report_renderer.py: deterministic text and JSON serialisation
- terminal_output.py: Rich colored terminal output
"""

from ficoder.formatters.report_renderer import FORMATS, render_report
from ficoder.formatters.terminal_output import RichFormatter

__all__ = ["FORMATS", "render_report", "RichFormatter"]
