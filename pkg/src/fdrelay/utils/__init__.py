"""Console helpers for the fdrelay command line."""

from .formatting import format_block, format_summary, print_error, print_summary

__all__ = ['format_block', 'format_summary', 'print_error', 'print_summary']
