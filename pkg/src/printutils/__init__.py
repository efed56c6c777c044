"""Module for printing consistently."""
from .printutils import DIGITS, ReportPrinter, format_number, report_str
