from .classify import classify_thread
from .main import build_parser, main, run_cli
from .report import PALETTE, gold_labels, render_html, render_report

__all__ = [
    "PALETTE",
    "build_parser",
    "classify_thread",
    "gold_labels",
    "main",
    "render_html",
    "render_report",
    "run_cli",
]
