from __future__ import annotations

from pathlib import Path
from typing import Iterable

from core.exceptions import DataFormatError
from core.files import atomic_write_lines, iter_tsv
from core.formatting import fixed9
from corpus.records import Corpus

from .strategies import ScoredPair


def _clean(text: str) -> str:
	return " ".join(text.split())


def write_scored_pairs(
	path: str | Path,
	pairs: Iterable[ScoredPair],
	src: Corpus | None = None,
	tgt: Corpus | None = None,
	emit_text: bool = False,
) -> Path:
	"""`src_sid<TAB>tgt_sid<TAB>score`, plus both sentence texts with `emit_text`."""
	if emit_text and (src is None or tgt is None):
		raise ValueError("emit_text needs both corpora")

	def rows():
		for p in pairs:
			row = f"{p.src_sid}\t{p.tgt_sid}\t{fixed9(p.score)}"
			if emit_text:
				row += f"\t{_clean(src.sentences[p.src_sid].text)}\t{_clean(tgt.sentences[p.tgt_sid].text)}"
			yield row

	return atomic_write_lines(path, rows())


def read_scored_pairs(path: str | Path) -> list[ScoredPair]:
	pairs = []
	for line_no, fields in iter_tsv(path, min_columns=3):
		try:
			pairs.append(ScoredPair(int(fields[0]), int(fields[1]), float(fields[2])))
		except ValueError as exc:
			raise DataFormatError("expected integer sentence ids and a numeric score", path=path, line=line_no) from exc
	return pairs
