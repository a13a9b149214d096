from __future__ import annotations

from pathlib import Path

from core.files import atomic_write_bytes
from core.formatting import fixed9
from core.pdf import summary_pdf

from .recall import EvalReport, Task


def report_rows(report: EvalReport) -> list[tuple[str, str]]:
	return [
		("Task", Task(report.task).label),
		("Gold pairs", str(report.gold_size)),
		("Predicted pairs", str(report.predicted_size)),
		("Hits", str(report.hits)),
		("Recall", fixed9(report.recall)),
	]


BREAKDOWN_HEADER = ["Outcome", "Pairs"]


def breakdown_rows(report: EvalReport) -> list[list[str]]:
	"""Gold pairs split into found and missed, plus predictions outside the gold set."""
	return [
		["Found", str(report.hits)],
		["Missed", str(report.gold_size - report.hits)],
		["Predicted, not in gold", str(report.predicted_size - report.hits)],
	]


def format_table(report: EvalReport) -> str:
	rows = report_rows(report)
	width = max(len(label) for label, _ in rows)
	return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows)


def render_report_pdf(report: EvalReport, path: str | Path, *, predicted_path: str = "", gold_path: str = "") -> Path:
	footer = f"predicted: {predicted_path}  gold: {gold_path}" if predicted_path or gold_path else ""
	payload = summary_pdf(
		f"{Task(report.task).label} recall",
		report_rows(report),
		header=BREAKDOWN_HEADER,
		rows=breakdown_rows(report),
		footer=footer,
	)
	return atomic_write_bytes(path, payload)
