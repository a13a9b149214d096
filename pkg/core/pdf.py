from __future__ import annotations

from io import BytesIO

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

BASE_FONT = "Helvetica"
BASE_FONT_BOLD = "Helvetica-Bold"
ACCENT = colors.HexColor("#0d6efd")
MUTED = colors.HexColor("#475569")

_HEADER_CENTER = "BITEXTMINE"


def draw_header_footer(canvas, doc, *, title: str, footer: str = "") -> None:
	"""Header bar with the run title and a footer line with the page number."""
	page_width, page_height = doc.pagesize
	left = doc.leftMargin
	right = page_width - doc.rightMargin
	bar_h = 48
	text_y = page_height - bar_h / 2.0 - 4

	canvas.saveState()
	canvas.setFillColor(ACCENT)
	canvas.rect(0, page_height - bar_h, page_width, bar_h, fill=1, stroke=0)
	canvas.setFillColor(colors.white)
	canvas.setFont(BASE_FONT_BOLD, 12)
	canvas.drawString(left, text_y, _HEADER_CENTER)
	canvas.drawRightString(right, text_y, title)

	canvas.setFillColor(MUTED)
	canvas.setFont(BASE_FONT, 8)
	if footer:
		canvas.drawString(left, 24, footer)
	canvas.drawRightString(right, 24, f"Page {doc.page}")
	canvas.restoreState()


def kv_table(rows: list[tuple[str, str]], *, width: float):
	"""Label/value table; labels bold in the left column."""
	styles = getSampleStyleSheet()
	value_style = ParagraphStyle("pdf_kv_value", parent=styles["Normal"], fontName=BASE_FONT, fontSize=10, leading=12)
	data = [[Paragraph(f"<b>{label}</b>", value_style), Paragraph(str(value), value_style)] for label, value in rows]
	table = Table(data, colWidths=[width * 0.4, width * 0.6])
	table.setStyle(
		TableStyle(
			[
				("VALIGN", (0, 0), (-1, -1), "TOP"),
				("LEFTPADDING", (0, 0), (-1, -1), 8),
				("RIGHTPADDING", (0, 0), (-1, -1), 8),
				("TOPPADDING", (0, 0), (-1, -1), 5),
				("BOTTOMPADDING", (0, 0), (-1, -1), 5),
				("GRID", (0, 0), (-1, -1), 0.6, colors.black),
			]
		)
	)
	return table


def summary_pdf(
	title: str,
	summary: list[tuple[str, str]],
	*,
	header: list[str] | None = None,
	rows: list[list[str]] | None = None,
	footer: str = "",
) -> bytes:
	"""Render a one-section PDF: key/value summary, then an optional data table."""
	buffer = BytesIO()
	doc = SimpleDocTemplate(
		buffer,
		pagesize=A4,
		title=title,
		topMargin=72,
		bottomMargin=54,
		leftMargin=36,
		rightMargin=36,
		# Fixed metadata keeps the output byte-stable across runs.
		invariant=1,
	)
	styles = getSampleStyleSheet()
	styles["Title"].fontName = BASE_FONT_BOLD
	elements = [Paragraph(title, styles["Title"]), Spacer(1, 8), kv_table(summary, width=doc.width)]

	if header and rows:
		table = Table([header] + rows, repeatRows=1)
		table.setStyle(
			TableStyle(
				[
					("BACKGROUND", (0, 0), (-1, 0), ACCENT),
					("TEXTCOLOR", (0, 0), (-1, 0), colors.white),
					("FONTNAME", (0, 0), (-1, 0), BASE_FONT_BOLD),
					("FONTNAME", (0, 1), (-1, -1), BASE_FONT),
					("FONTSIZE", (0, 0), (-1, -1), 9),
					("ALIGN", (1, 1), (-1, -1), "RIGHT"),
					("GRID", (0, 0), (-1, -1), 0.6, colors.black),
					("VALIGN", (0, 0), (-1, -1), "MIDDLE"),
				]
			)
		)
		elements += [Spacer(1, 14), table]

	decorate = lambda c, d: draw_header_footer(c, d, title=title, footer=footer)  # noqa: E731
	doc.build(elements, onFirstPage=decorate, onLaterPages=decorate)
	return buffer.getvalue()
